"""
HTTP transports: live, recorded-fixture replay, and recording
"""
from .base import Transport, TransportError, TransportResponse
from .fixtures import FixtureStore, FixtureTransport, RecordingTransport
from .http import RequestsTransport

__all__ = [
    'FixtureStore',
    'FixtureTransport',
    'RecordingTransport',
    'RequestsTransport',
    'Transport',
    'TransportError',
    'TransportResponse',
]
