"""
tweetshot: check tweet screenshots against web archives

Extracts the handle, timestamp and text a screenshot claims, looks the
claim up in the Wayback Machine CDX index and scores extraction quality
against a labelled corpus.
"""

__version__ = "0.1.0"

from .archive import ArchivedSnapshot, CdxQuery, build_query_url, parse_cdx_response, search_archives
from .client import ArchiveClient
from .config import RunConfig, Settings
from .errors import (
    ArchiveError,
    ConfigError,
    EvaluationError,
    ExtractionError,
    OcrError,
    TweetshotError,
)
from .evaluation import MetricsReport, evaluate, load_manifest
from .extraction import ExtractedClaim, Handle, Method, Timestamp, extract_claim
from .ocr import OcrText, load_ocr_text, run_ocr
from .verifier import Verdict, VerdictStatus, verify

__all__ = [
    'ArchiveClient',
    'ArchiveError',
    'ArchivedSnapshot',
    'CdxQuery',
    'ConfigError',
    'EvaluationError',
    'ExtractedClaim',
    'ExtractionError',
    'Handle',
    'MetricsReport',
    'Method',
    'OcrError',
    'OcrText',
    'RunConfig',
    'Settings',
    'Timestamp',
    'TweetshotError',
    'Verdict',
    'VerdictStatus',
    'build_query_url',
    'evaluate',
    'extract_claim',
    'load_manifest',
    'load_ocr_text',
    'parse_cdx_response',
    'run_ocr',
    'search_archives',
    'verify',
]
