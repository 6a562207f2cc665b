"""
Integration tests against the live Wayback Machine CDX server
"""
import os

import pytest

from tweetshot import ArchiveClient
from tweetshot.archive import search_archives
from tweetshot.endpoints import get_endpoint
from tweetshot.extraction import ClaimFlag, ExtractedClaim, Handle, Timestamp

# Skip these tests unless live network access is requested
requires_network = pytest.mark.skipif(
    not os.getenv("TWEETSHOT_LIVE_TESTS"),
    reason="TWEETSHOT_LIVE_TESTS not set in environment"
)


@pytest.fixture
def client():
    with ArchiveClient(endpoint=get_endpoint("wayback-https")) as archive_client:
        yield archive_client


def _claim(handle, timestamp):
    return ExtractedClaim(
        handle=Handle(handle, 0),
        timestamp=Timestamp.parse(timestamp),
        body=None,
        flags=frozenset({ClaimFlag.EMPTY_BODY})
    )


@requires_network
def test_search_known_account(client):
    """A heavily archived account has captures on any given day"""
    snapshots = search_archives(_claim("NASA", "2022-11-16 01:47:00"), client)
    assert snapshots
    for snapshot in snapshots:
        assert "/status/" in snapshot.original
        assert snapshot.replay_url.startswith("https://web.archive.org/web/")


@requires_network
def test_search_results_are_sorted_and_unique(client):
    snapshots = search_archives(_claim("NASA", "2022-11-16 01:47:00"), client)
    originals = [s.original for s in snapshots]
    assert originals == sorted(set(originals))
