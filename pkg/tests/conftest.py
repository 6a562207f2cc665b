"""
Shared fixtures for the tweetshot test suite
"""
import os

import pytest

from tweetshot.evaluation import BUNDLED_CORPUS_DIR
from tweetshot.extraction import Timestamp
from tweetshot.ocr import OcrSource, OcrText, load_ocr_text
from tweetshot.rate_limiting import PolitenessGate

FIXTURES_DIR = os.path.join(os.path.dirname(__file__), "fixtures")
ARCHIVE_FIXTURES = os.path.join(FIXTURES_DIR, "archive")

NICKHANAUER_CDX_URL = (
    "http://web.archive.org/cdx/search/cdx"
    "?url=https://twitter.com/NickHanauer/status&from=20220525&to=20220526&matchType=prefix"
)
NICKHANAUER_REPLAY_URL = (
    "https://web.archive.org/web/20220525164026/https://twitter.com/NickHanauer/status/1529220873697124353"
)


def make_text(*lines: str) -> OcrText:
    return OcrText(lines=tuple(lines), source=OcrSource.TEXT_FILE)


@pytest.fixture
def reference():
    return Timestamp.parse("2022-01-27 00:00:00")


@pytest.fixture
def corpus_text():
    """Load a bundled corpus item by name"""
    def load(name: str) -> OcrText:
        return load_ocr_text(os.path.join(BUNDLED_CORPUS_DIR, f"{name}.txt"))
    return load


@pytest.fixture
def fast_gate():
    return PolitenessGate(max_concurrent=2, min_interval=0.0)


@pytest.fixture
def archive_fixture():
    def path(name: str) -> str:
        return os.path.join(ARCHIVE_FIXTURES, name)
    return path
