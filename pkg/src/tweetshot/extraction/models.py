"""
Value types produced by the extractors
"""
import calendar
import re
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, FrozenSet, Optional, Tuple

from ..ocr import OcrText

HANDLE_MAX_LENGTH = 15
HANDLE_PATTERN = re.compile(r"[A-Za-z0-9_]{1,15}")

DATE_FIELDS = ("year", "month", "day")
TIME_FIELDS = ("hour", "minute", "second")
ALL_FIELDS = frozenset(DATE_FIELDS + TIME_FIELDS + ("meridiem",))

_CANONICAL = re.compile(r"^(\d{4})-(\d{2})-(\d{2}) (\d{2}):(\d{2}):(\d{2})$")


class Method(str, Enum):
    """Timestamp extraction methods: plain date finding, or finding gated by the date filter"""
    M1 = "m1"
    M2 = "m2"


class ClaimFlag(str, Enum):
    RELATIVE_TIMESTAMP_ONLY = "RelativeTimestampOnly"
    TRUNCATED_HANDLE = "TruncatedHandle"
    NO_HANDLE_FOUND = "NoHandleFound"
    NO_TIMESTAMP_FOUND = "NoTimestampFound"
    EMPTY_BODY = "EmptyBody"


@dataclass(frozen=True)
class DateCandidate:
    """
    A date/time substring located in OCR text

    Attributes:
        raw: The matched substring
        line_index: 0-based line number
        char_span: (start, end) offsets of `raw` within the line
        explicit_fields: Fields stated in the text (year, month, day, hour,
            minute, second, meridiem)
        date_part_raw: The date-only portion of `raw`; empty for a bare time
    """
    raw: str
    line_index: int
    char_span: Tuple[int, int]
    explicit_fields: FrozenSet[str]
    date_part_raw: str

    def __post_init__(self):
        start, end = self.char_span
        if not 0 <= start < end:
            raise ValueError(f"invalid span {self.char_span}")
        if len(self.raw) != end - start:
            raise ValueError(f"span {self.char_span} does not match {self.raw!r}")
        if not self.explicit_fields or not self.explicit_fields <= ALL_FIELDS:
            raise ValueError(f"invalid explicit fields {sorted(self.explicit_fields)}")

    @property
    def has_full_date(self) -> bool:
        return set(DATE_FIELDS) <= self.explicit_fields

    @property
    def has_time(self) -> bool:
        return "hour" in self.explicit_fields

    @property
    def sort_key(self) -> Tuple[int, int]:
        return (self.line_index, self.char_span[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "raw": self.raw,
            "line_index": self.line_index,
            "char_span": list(self.char_span),
            "explicit_fields": sorted(self.explicit_fields),
            "date_part_raw": self.date_part_raw,
        }


@dataclass(frozen=True)
class Timestamp:
    """
    A calendar-valid date and time

    Rendered canonically as `YYYY-MM-DD HH:MM:SS`. `resolved_from` and
    `filled_fields` are provenance only and do not take part in equality.
    """
    year: int
    month: int
    day: int
    hour: int = 0
    minute: int = 0
    second: int = 0
    resolved_from: Optional[DateCandidate] = field(default=None, compare=False)
    filled_fields: FrozenSet[str] = field(default=frozenset(), compare=False)

    def __post_init__(self):
        if not 1 <= self.year <= 9999:
            raise ValueError(f"year out of range: {self.year}")
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")
        if not 1 <= self.day <= calendar.monthrange(self.year, self.month)[1]:
            raise ValueError(f"day out of range for {self.year:04d}-{self.month:02d}: {self.day}")
        if not 0 <= self.hour <= 23:
            raise ValueError(f"hour out of range: {self.hour}")
        if not 0 <= self.minute <= 59 or not 0 <= self.second <= 59:
            raise ValueError(f"minute/second out of range: {self.minute}:{self.second}")

    @classmethod
    def parse(cls, value: str) -> 'Timestamp':
        """Parse the canonical `YYYY-MM-DD HH:MM:SS` rendering"""
        match = _CANONICAL.match(value.strip())
        if not match:
            raise ValueError(f"expected 'YYYY-MM-DD HH:MM:SS', got {value!r}")
        return cls(*(int(g) for g in match.groups()))

    @classmethod
    def from_datetime(cls, dt: datetime) -> 'Timestamp':
        return cls(dt.year, dt.month, dt.day, dt.hour, dt.minute, dt.second)

    @classmethod
    def today(cls) -> 'Timestamp':
        """Current local date at midnight"""
        now = datetime.now()
        return cls(now.year, now.month, now.day)

    def to_datetime(self) -> datetime:
        return datetime(self.year, self.month, self.day, self.hour, self.minute, self.second)

    def canonical(self) -> str:
        return (
            f"{self.year:04d}-{self.month:02d}-{self.day:02d} "
            f"{self.hour:02d}:{self.minute:02d}:{self.second:02d}"
        )

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class Handle:
    """
    A Twitter handle as it appears in the screenshot

    Attributes:
        name: Account name without `@`
        line_index: Line the handle token was found on
        truncated: True when the token ends in `...` or `…`
    """
    name: str
    line_index: int
    truncated: bool = False

    def __post_init__(self):
        if not HANDLE_PATTERN.fullmatch(self.name):
            raise ValueError(f"invalid handle name: {self.name!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "line_index": self.line_index, "truncated": self.truncated}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Handle':
        return cls(
            name=data["name"],
            line_index=int(data.get("line_index", 0)),
            truncated=bool(data.get("truncated", False))
        )


@dataclass(frozen=True)
class ExtractedClaim:
    """
    The (handle, timestamp, body) triple a screenshot asserts, plus failure flags

    A field is None exactly when its failure flag is set; a truncated handle
    is kept alongside the TruncatedHandle flag.
    """
    handle: Optional[Handle]
    timestamp: Optional[Timestamp]
    body: Optional[str]
    flags: FrozenSet[ClaimFlag]
    source: Optional[OcrText] = field(default=None, compare=False)

    def __post_init__(self):
        flags = self.flags
        if (self.handle is None) != (ClaimFlag.NO_HANDLE_FOUND in flags):
            raise ValueError("handle presence disagrees with NoHandleFound flag")
        if self.handle is not None and self.handle.truncated != (ClaimFlag.TRUNCATED_HANDLE in flags):
            raise ValueError("truncated handle disagrees with TruncatedHandle flag")
        missing_ts = {ClaimFlag.NO_TIMESTAMP_FOUND, ClaimFlag.RELATIVE_TIMESTAMP_ONLY} & flags
        if (self.timestamp is None) != bool(missing_ts):
            raise ValueError("timestamp presence disagrees with timestamp flags")
        if (self.body is None) != (ClaimFlag.EMPTY_BODY in flags):
            raise ValueError("body presence disagrees with EmptyBody flag")

    @property
    def is_complete(self) -> bool:
        return not self.flags

    @property
    def searchable(self) -> bool:
        """Whether the claim carries what an archive search needs"""
        return self.handle is not None and not self.handle.truncated and self.timestamp is not None

    def to_dict(self) -> Dict[str, Any]:
        source = None
        if self.source is not None:
            source = {
                "kind": self.source.source.value,
                "image_ref": self.source.image_ref,
                "line_count": len(self.source.lines),
                "replacement_count": self.source.replacement_count,
            }
        return {
            "handle": self.handle.to_dict() if self.handle else None,
            "timestamp": self.timestamp.canonical() if self.timestamp else None,
            "body": self.body,
            "flags": sorted(flag.value for flag in self.flags),
            "source": source,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExtractedClaim':
        """Rebuild a claim from `to_dict` output (the OCR source is not restored)"""
        handle = data.get("handle")
        timestamp = data.get("timestamp")
        return cls(
            handle=Handle.from_dict(handle) if handle else None,
            timestamp=Timestamp.parse(timestamp) if timestamp else None,
            body=data.get("body"),
            flags=frozenset(ClaimFlag(f) for f in data.get("flags", []))
        )
