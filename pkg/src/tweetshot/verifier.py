"""
Deterministic verification of a screenshot claim against archived captures
"""
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from bs4 import BeautifulSoup

from .archive import ArchivedSnapshot
from .client import ArchiveClient
from .errors import ArchiveError, MissingField
from .extraction.models import ExtractedClaim

logger = logging.getLogger(__name__)

SCORE_MODEL = "heuristic-v1"

_STRIP_CHARS = re.compile("[.,!?'\"’“”…]")
_WHITESPACE = re.compile(r"\s+")

HIDDEN_TAGS = ["script", "style", "noscript", "template"]
BLOCK_TAGS = [
    "address", "article", "aside", "blockquote", "br", "dd", "div", "dl", "dt", "figcaption", "figure",
    "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "header", "hr", "li", "main", "nav", "ol", "p",
    "pre", "section", "table", "td", "th", "title", "tr", "ul",
]


class VerdictStatus(str, Enum):
    CONFIRMED_REAL = "ConfirmedReal"
    CANDIDATE_FOUND = "CandidateFound"
    NO_ARCHIVE_EVIDENCE = "NoArchiveEvidence"
    INCONCLUSIVE = "Inconclusive"


# placeholder rubric, not a calibrated probability
SCORES = {
    VerdictStatus.CONFIRMED_REAL: 1.0,
    VerdictStatus.CANDIDATE_FOUND: 0.5,
    VerdictStatus.NO_ARCHIVE_EVIDENCE: 0.1,
    VerdictStatus.INCONCLUSIVE: 0.0,
}


@dataclass(frozen=True)
class Verdict:
    status: VerdictStatus
    matched_snapshot: Optional[ArchivedSnapshot] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if (self.status is VerdictStatus.CONFIRMED_REAL) != (self.matched_snapshot is not None):
            raise ValueError("a matched snapshot is required exactly for ConfirmedReal")

    @property
    def score(self) -> float:
        return SCORES[self.status]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "score": self.score,
            "score_model": SCORE_MODEL,
            "matched_snapshot": self.matched_snapshot.to_dict() if self.matched_snapshot else None,
            "notes": list(self.notes),
        }


def normalize_text(s: str) -> str:
    """Casefold, drop `.,!?'"’“”…`, collapse whitespace and trim"""
    s = _STRIP_CHARS.sub("", s.casefold())
    return _WHITESPACE.sub(" ", s).strip()


def visible_text(html: str) -> str:
    """
    Page text with tags stripped

    Inline markup joins without a separator, so `<s>#</s><b>tag</b>` reads
    `#tag`; block elements and `<br>` start a new line.
    """
    soup = BeautifulSoup(html, "html.parser")
    for element in soup(HIDDEN_TAGS):
        element.decompose()
    for element in soup(BLOCK_TAGS):
        element.insert_before("\n")
        element.insert_after("\n")
    return soup.get_text("")


def match_snapshot(claim: ExtractedClaim, snapshot: ArchivedSnapshot, client: ArchiveClient) -> bool:
    """
    Fetch a snapshot's replay page and test whether it contains the claimed text

    Raises:
        MissingField: If the claim has no body text
        HttpError, RateLimited, NetworkError: If the page cannot be fetched
    """
    needle = normalize_text(claim.body or "")
    if not needle:
        raise MissingField("body")
    page = client.get(snapshot.replay_url)
    found = needle in normalize_text(visible_text(page))
    logger.debug(f"Claim text {'found' if found else 'not found'} in {snapshot.replay_url}")
    return found


def _try_match(claim: ExtractedClaim, snapshot: ArchivedSnapshot, client: ArchiveClient) -> Tuple[Optional[bool], str]:
    try:
        return match_snapshot(claim, snapshot, client), ""
    except ArchiveError as e:
        return None, f"fetch failed for {snapshot.replay_url}: {e}"


def verify(
    claim: ExtractedClaim,
    snapshots: List[ArchivedSnapshot],
    client: Optional[ArchiveClient] = None,
    fetch_pages: bool = False,
    jobs: int = 1
) -> Verdict:
    """
    Fold archive evidence into a verdict

    Page fetches may run in parallel; outcomes are folded in snapshot
    order so the verdict and its notes do not depend on completion order.
    """
    if not snapshots:
        return Verdict(VerdictStatus.NO_ARCHIVE_EVIDENCE, notes=("no archived captures in the search window",))

    notes: List[str] = [f"{len(snapshots)} archived capture(s) in the search window"]
    if not fetch_pages:
        notes.append(f"first candidate: {snapshots[0].replay_url}")
        return Verdict(VerdictStatus.CANDIDATE_FOUND, notes=tuple(notes))

    if not normalize_text(claim.body or ""):
        notes.append("claim has no body text; page matching skipped")
        notes.append(f"first candidate: {snapshots[0].replay_url}")
        return Verdict(VerdictStatus.CANDIDATE_FOUND, notes=tuple(notes))

    if client is None:
        raise ValueError("a client is required when fetch_pages is set")

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        outcomes = list(executor.map(lambda s: _try_match(claim, s, client), snapshots))

    any_fetched = False
    for snapshot, (matched, failure) in zip(snapshots, outcomes):
        if matched is None:
            notes.append(failure)
            continue
        any_fetched = True
        if matched:
            notes.append(f"claim text found in {snapshot.replay_url}")
            return Verdict(VerdictStatus.CONFIRMED_REAL, matched_snapshot=snapshot, notes=tuple(notes))

    if any_fetched:
        notes.append("claim text not found in any fetched capture")
        return Verdict(VerdictStatus.CANDIDATE_FOUND, notes=tuple(notes))
    notes.append("every capture fetch failed")
    return Verdict(VerdictStatus.INCONCLUSIVE, notes=tuple(notes))
