"""
Wayback Machine CDX lookup of archived tweets

Automates `curl cdx?url=...&matchType=prefix | sort -u -k 3 | awk` into
query building, response parsing, deduplication and replay URL construction.
"""
import logging
import re
from dataclasses import dataclass
from datetime import date, datetime, timedelta
from typing import Any, Dict, List, Optional, Tuple

from .client import ArchiveClient
from .endpoints import WAYBACK_REPLAY_BASE, get_endpoint
from .errors import MissingField, TruncatedHandleRejected
from .extraction.models import ExtractedClaim, Handle, Timestamp

logger = logging.getLogger(__name__)

CDX_FIELDS = ("urlkey", "capture_ts", "original", "mimetype", "statuscode", "digest", "length")
MATCH_TYPE = "prefix"

_CAPTURE_TS = re.compile(r"^\d{14}$")
_TWEET_ID = re.compile(r"/status/(\d+)")
_REPLAY_URL = re.compile(r"^(?P<base>.*?/)(?P<ts>\d{14})/(?P<original>https?://.+)$")


def status_prefix(handle: Handle) -> str:
    return f"https://twitter.com/{handle.name}/status"


@dataclass(frozen=True)
class CdxQuery:
    """
    A prefix query for one account's status URLs in a day window

    Attributes:
        handle: Account to search; must not be truncated
        from_day: First day as a YYYYMMDD integer
        to_day: Last day as a YYYYMMDD integer
    """
    handle: Handle
    from_day: int
    to_day: int
    match_type: str = MATCH_TYPE

    def __post_init__(self):
        if self.handle.truncated:
            raise TruncatedHandleRejected(self.handle.name)
        if self.from_day > self.to_day:
            raise ValueError(f"from_day {self.from_day} is after to_day {self.to_day}")
        if self.match_type != MATCH_TYPE:
            raise ValueError(f"unsupported matchType {self.match_type!r}")

    @property
    def target_url(self) -> str:
        return status_prefix(self.handle)


@dataclass(frozen=True)
class CdxRecord:
    """One line of a CDX response in the default 7-field format"""
    urlkey: str
    capture_ts: str
    original: str
    mimetype: str
    statuscode: str
    digest: str
    length: int

    def __post_init__(self):
        if not _CAPTURE_TS.match(self.capture_ts):
            raise ValueError(f"capture timestamp is not 14 digits: {self.capture_ts!r}")
        datetime.strptime(self.capture_ts, "%Y%m%d%H%M%S")
        if not self.original.startswith(("http://", "https://")):
            raise ValueError(f"original is not an http(s) URL: {self.original!r}")


@dataclass(frozen=True)
class ArchivedSnapshot:
    """A deduplicated capture of one original URL"""
    original: str
    capture_ts: str
    replay_url: str
    tweet_id: Optional[str] = None

    @classmethod
    def from_record(cls, record: CdxRecord, replay_base: str = WAYBACK_REPLAY_BASE) -> 'ArchivedSnapshot':
        match = _TWEET_ID.search(record.original)
        return cls(
            original=record.original,
            capture_ts=record.capture_ts,
            replay_url=f"{replay_base}{record.capture_ts}/{record.original}",
            tweet_id=match.group(1) if match else None
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "original": self.original,
            "capture_ts": self.capture_ts,
            "replay_url": self.replay_url,
            "tweet_id": self.tweet_id,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ArchivedSnapshot':
        return cls(
            original=data["original"],
            capture_ts=data["capture_ts"],
            replay_url=data["replay_url"],
            tweet_id=data.get("tweet_id")
        )


def parse_replay_url(replay_url: str) -> Tuple[str, str]:
    """
    Split a replay URL into (capture_ts, original)

    Raises:
        ValueError: If the URL has no 14-digit timestamp segment
    """
    match = _REPLAY_URL.match(replay_url)
    if not match:
        raise ValueError(f"not a replay URL: {replay_url!r}")
    return match.group("ts"), match.group("original")


def _day_number(day: date) -> int:
    return int(day.strftime("%Y%m%d"))


def derive_time_range(ts: Timestamp, window_days: int = 1) -> Tuple[int, int]:
    """
    Day window around a timestamp as YYYYMMDD integers

    The default window is the posting day and the next day; wider windows
    extend symmetrically (`window_days - 1` extra days before).
    """
    if window_days < 1:
        raise ValueError(f"window_days must be >= 1, got {window_days}")
    day = date(ts.year, ts.month, ts.day)
    return (
        _day_number(day - timedelta(days=window_days - 1)),
        _day_number(day + timedelta(days=window_days))
    )


def build_query_url(q: CdxQuery, cdx_endpoint: Optional[str] = None) -> str:
    """
    Build the CDX query URL with a fixed parameter order

    Parameters are not percent-encoded so the URL matches recorded fixtures
    byte for byte.
    """
    if q.handle.truncated:
        raise TruncatedHandleRejected(q.handle.name)
    endpoint = cdx_endpoint or get_endpoint().cdx_url
    return f"{endpoint}?url={q.target_url}&from={q.from_day}&to={q.to_day}&matchType={q.match_type}"


def fetch_cdx(url: str, client: ArchiveClient) -> str:
    """Fetch a CDX response body with the client's retry and politeness rules"""
    return client.get(url)


def parse_cdx_response(body: str, warnings: Optional[List[str]] = None) -> List[CdxRecord]:
    """
    Parse a CDX response into records

    Malformed lines are skipped; a description of each is appended to
    `warnings` when given.
    """
    records = []
    for number, line in enumerate(body.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split(" ")
        problem = None
        if len(fields) != len(CDX_FIELDS):
            problem = f"expected {len(CDX_FIELDS)} fields, got {len(fields)}"
        else:
            try:
                values = dict(zip(CDX_FIELDS, fields))
                values["length"] = int(values["length"])
                records.append(CdxRecord(**values))
            except ValueError as e:
                problem = str(e)
        if problem:
            message = f"line {number}: {problem}"
            logger.warning(f"Skipping malformed CDX {message}")
            if warnings is not None:
                warnings.append(message)
    return records


def is_status_url(original: str, handle: Handle) -> bool:
    """True for `<handle>/status/<digits>` URLs, excluding subresources and other accounts"""
    pattern = rf"^https?://(?:www\.|mobile\.)?twitter\.com/{re.escape(handle.name)}/status/\d+/?(?:[?#].*)?$"
    return re.match(pattern, original, re.IGNORECASE) is not None


def dedupe_snapshots(records: List[CdxRecord], replay_base: str = WAYBACK_REPLAY_BASE) -> List[ArchivedSnapshot]:
    """
    One snapshot per distinct original URL

    The earliest capture of each original is kept; output is sorted by
    original URL.
    """
    earliest: Dict[str, CdxRecord] = {}
    for record in records:
        current = earliest.get(record.original)
        if current is None or record.capture_ts < current.capture_ts:
            earliest[record.original] = record
    return [ArchivedSnapshot.from_record(earliest[original], replay_base) for original in sorted(earliest)]


def search_archives(claim: ExtractedClaim, client: ArchiveClient, window_days: int = 1) -> List[ArchivedSnapshot]:
    """
    Find archived captures of the claimed account's tweets around the claimed date

    Raises:
        MissingField: If the claim has no handle or timestamp
        TruncatedHandleRejected: If the handle is truncated
        HttpError, RateLimited, NetworkError: From the CDX request
    """
    if claim.handle is None:
        raise MissingField("handle")
    if claim.handle.truncated:
        raise TruncatedHandleRejected(claim.handle.name)
    if claim.timestamp is None:
        raise MissingField("timestamp")

    from_day, to_day = derive_time_range(claim.timestamp, window_days)
    query = CdxQuery(handle=claim.handle, from_day=from_day, to_day=to_day)
    url = build_query_url(query, client.endpoint.cdx_url)
    logger.info(f"Querying CDX: {url}")

    records = parse_cdx_response(fetch_cdx(url, client))
    matching = [r for r in records if is_status_url(r.original, claim.handle)]
    if len(matching) < len(records):
        logger.info(f"Ignored {len(records) - len(matching)} capture(s) outside @{claim.handle.name}/status/<id>")
    snapshots = dedupe_snapshots(matching, client.endpoint.replay_base)
    logger.info(f"Found {len(snapshots)} archived tweet URL(s) for @{claim.handle.name}")
    return snapshots
