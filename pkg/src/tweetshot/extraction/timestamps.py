"""
Timestamp extraction from OCR text

Method 1 finds every date-like substring (dates, times, and bare 3-4 digit
numbers read as years); Method 2 keeps only candidates whose date part is at
least 6 characters long and has at least 4 digits.
"""
import calendar
import logging
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from ..errors import NoTimestampFound, RelativeTimestampOnly
from ..ocr import OcrText
from .models import DATE_FIELDS, DateCandidate, Method, Timestamp

logger = logging.getLogger(__name__)

MONTHS = {
    "jan": 1, "feb": 2, "mar": 3, "apr": 4, "may": 5, "jun": 6,
    "jul": 7, "aug": 8, "sep": 9, "oct": 10, "nov": 11, "dec": 12,
}

MIN_DATE_CHARS = 6
MIN_DATE_DIGITS = 4
MAX_MERGE_GAP_TOKENS = 3

_MONTH = (
    r"(?P<month>jan(?:uary)?|feb(?:ruary)?|mar(?:ch)?|apr(?:il)?|may|june?|july?"
    r"|aug(?:ust)?|sep(?:t(?:ember)?)?|oct(?:ober)?|nov(?:ember)?|dec(?:ember)?)\.?"
)
_ORDINAL = r"(?:st|nd|rd|th)?"

_DATE_PATTERNS = (
    ("month_day_year", re.compile(
        rf"\b{_MONTH}\s+(?P<day>\d{{1,2}}){_ORDINAL},?\s+(?P<year>\d{{4}})\b", re.IGNORECASE)),
    ("day_month_year", re.compile(
        rf"\b(?P<day>\d{{1,2}}){_ORDINAL}\s+{_MONTH},?\s+(?P<year>\d{{4}})\b", re.IGNORECASE)),
    ("year_month_day", re.compile(
        r"\b(?P<year>\d{4})(?P<sep>[-/.])(?P<month>\d{1,2})(?P=sep)(?P<day>\d{1,2})\b")),
    ("month_day_year_numeric", re.compile(
        r"\b(?P<month>\d{1,2})(?P<sep>[-/.])(?P<day>\d{1,2})(?P=sep)(?P<year>\d{4}|\d{2})\b")),
)

_TIME_PATTERN = re.compile(
    r"\b(?P<hour>\d{1,2}):(?P<minute>\d{2})(?!\d)(?::(?P<second>\d{2})(?!\d))?"
    r"(?:\s*(?P<meridiem>[ap])\.?\s?m\b\.?)?",
    re.IGNORECASE
)

# bare numbers such as `0453 Retweets`; digits glued to words, separators or
# thousands groups are not standalone tokens
_YEAR_ONLY_PATTERN = re.compile(r"(?<![\w.,:/\-])(?P<year>\d{3,4})(?![\w:/\-]|[.,]\d)")

_RELATIVE_AGE = re.compile(r"\d+[smhdw]")
_EDGE_PUNCT = re.compile(r"^\W+|\W+$")


@dataclass(frozen=True)
class _Match:
    """A single date or time match on one line, before merging"""
    start: int
    end: int
    values: Tuple[Tuple[str, int], ...]
    explicit: FrozenSet[str]
    is_time: bool

    @property
    def is_year_only(self) -> bool:
        return self.explicit == frozenset({"year"})

    def overlaps(self, start: int, end: int) -> bool:
        return self.start < end and start < self.end


def _month_number(token: str) -> int:
    return MONTHS[token[:3].lower()]


def _valid_day(year: int, month: int, day: int) -> bool:
    try:
        Timestamp(year, month, day)
    except ValueError:
        return False
    return True


def _date_values(kind: str, m: 're.Match') -> Optional[Dict[str, int]]:
    if kind in ("month_day_year", "day_month_year"):
        year, month, day = int(m.group("year")), _month_number(m.group("month")), int(m.group("day"))
    elif kind == "year_month_day":
        year, month, day = int(m.group("year")), int(m.group("month")), int(m.group("day"))
    else:
        raw_year = m.group("year")
        year = int(raw_year) + 2000 if len(raw_year) == 2 else int(raw_year)
        month, day = int(m.group("month")), int(m.group("day"))
        if month > 12 and day <= 12:
            month, day = day, month
    if not _valid_day(year, month, day):
        return None
    return {"year": year, "month": month, "day": day}


def _time_values(m: 're.Match') -> Optional[Tuple[Dict[str, int], FrozenSet[str]]]:
    hour, minute = int(m.group("hour")), int(m.group("minute"))
    second = m.group("second")
    meridiem = m.group("meridiem")
    explicit = {"hour", "minute"}
    if minute > 59 or (second is not None and int(second) > 59):
        return None
    if meridiem:
        if not 1 <= hour <= 12:
            return None
        explicit.add("meridiem")
        if meridiem.lower() == "a":
            hour = 0 if hour == 12 else hour
        else:
            hour = 12 if hour == 12 else hour + 12
    elif hour > 23:
        return None
    values = {"hour": hour, "minute": minute}
    if second is not None:
        values["second"] = int(second)
        explicit.add("second")
    return values, frozenset(explicit)


def _scan_line(line: str) -> Tuple[List[_Match], List[_Match]]:
    """Return (date matches, time matches) for one line, non-overlapping"""
    taken: List[Tuple[int, int]] = []

    def free(start: int, end: int) -> bool:
        return all(end <= s or e <= start for s, e in taken)

    dates: List[_Match] = []
    for kind, pattern in _DATE_PATTERNS:
        for m in pattern.finditer(line):
            if not free(m.start(), m.end()):
                continue
            # an invalid calendar date still consumes its span
            taken.append((m.start(), m.end()))
            values = _date_values(kind, m)
            if values is None:
                logger.debug(f"Discarding invalid date {m.group(0)!r}")
                continue
            dates.append(_Match(m.start(), m.end(), tuple(values.items()), frozenset(DATE_FIELDS), False))

    times: List[_Match] = []
    for m in _TIME_PATTERN.finditer(line):
        if not free(m.start(), m.end()):
            continue
        taken.append((m.start(), m.end()))
        parsed = _time_values(m)
        if parsed is None:
            logger.debug(f"Discarding invalid time {m.group(0)!r}")
            continue
        values, explicit = parsed
        times.append(_Match(m.start(), m.end(), tuple(values.items()), explicit, True))

    for m in _YEAR_ONLY_PATTERN.finditer(line):
        if not free(m.start(), m.end()):
            continue
        taken.append((m.start(), m.end()))
        dates.append(_Match(m.start(), m.end(), (("year", int(m.group("year"))),), frozenset({"year"}), False))

    return dates, times


def _gap_tokens(line: str, first: _Match, second: _Match) -> int:
    return len(line[first.end:second.start].split())


def _pair_times_with_dates(line: str, dates: List[_Match], times: List[_Match]) -> Dict[int, int]:
    """Map time index -> date index for times within a few tokens of a date"""
    pairs = []
    for ti, t in enumerate(times):
        for di, d in enumerate(dates):
            gap = _gap_tokens(line, d, t) if d.end <= t.start else _gap_tokens(line, t, d)
            if gap > MAX_MERGE_GAP_TOKENS:
                continue
            # full dates win over bare years, then proximity, then a following date
            pairs.append((d.is_year_only, gap, d.end <= t.start, t.start, ti, di))
    merged: Dict[int, int] = {}
    used_dates = set()
    for *_, ti, di in sorted(pairs):
        if ti in merged or di in used_dates:
            continue
        merged[ti] = di
        used_dates.add(di)
    return merged


def _resolve(
    line: str,
    line_index: int,
    parts: List[_Match],
    reference: Timestamp
) -> Optional[Tuple[DateCandidate, Timestamp]]:
    start = min(p.start for p in parts)
    end = max(p.end for p in parts)
    explicit = frozenset().union(*(p.explicit for p in parts))
    values: Dict[str, int] = {}
    for p in parts:
        values.update(p.values)
    date_parts = [p for p in parts if not p.is_time]
    date_part_raw = line[date_parts[0].start:date_parts[0].end] if date_parts else ""

    candidate = DateCandidate(
        raw=line[start:end],
        line_index=line_index,
        char_span=(start, end),
        explicit_fields=explicit,
        date_part_raw=date_part_raw
    )

    filled = set()
    for name in DATE_FIELDS:
        if name not in values:
            values[name] = getattr(reference, name)
            filled.add(name)
    if "day" in filled and 1 <= values["month"] <= 12 and values["year"] >= 1:
        # filled days are capped at the month length
        values["day"] = min(values["day"], calendar.monthrange(values["year"], values["month"])[1])
    if "hour" in values:
        values.setdefault("second", 0)
    else:
        for name in ("hour", "minute", "second"):
            values[name] = getattr(reference, name)
            filled.add(name)

    try:
        timestamp = Timestamp(
            year=values["year"],
            month=values["month"],
            day=values["day"],
            hour=values["hour"],
            minute=values["minute"],
            second=values["second"],
            resolved_from=candidate,
            filled_fields=frozenset(filled)
        )
    except ValueError as e:
        logger.debug(f"Candidate {candidate.raw!r} does not resolve against {reference}: {e}")
        return None
    return candidate, timestamp


def find_date_candidates_m1(text: OcrText, reference: Timestamp) -> List[Tuple[DateCandidate, Timestamp]]:
    """
    Find every date/time candidate in reading order (Method 1)

    Fields the text does not state are filled from `reference`.
    """
    found = []
    for line_index, line in enumerate(text.lines):
        dates, times = _scan_line(line)
        merged = _pair_times_with_dates(line, dates, times)
        groups = [[dates[di], times[ti]] for ti, di in merged.items()]
        groups += [[d] for di, d in enumerate(dates) if di not in merged.values()]
        groups += [[t] for ti, t in enumerate(times) if ti not in merged]
        for parts in groups:
            resolved = _resolve(line, line_index, parts, reference)
            if resolved is not None:
                found.append(resolved)
    found.sort(key=lambda pair: pair[0].sort_key)
    return found


def passes_date_filter(candidate: DateCandidate) -> bool:
    date_part = candidate.date_part_raw
    return len(date_part) >= MIN_DATE_CHARS and sum(c.isdigit() for c in date_part) >= MIN_DATE_DIGITS


def filter_dates_m2(candidates: List[Tuple[DateCandidate, Timestamp]]) -> List[Tuple[DateCandidate, Timestamp]]:
    """Keep candidates whose date part has >= 6 characters and >= 4 digits (Method 2)"""
    return [pair for pair in candidates if passes_date_filter(pair[0])]


def find_candidates(text: OcrText, method: Method, reference: Timestamp) -> List[Tuple[DateCandidate, Timestamp]]:
    candidates = find_date_candidates_m1(text, reference)
    if Method(method) is Method.M2:
        candidates = filter_dates_m2(candidates)
    return candidates


def _selection_rank(candidate: DateCandidate) -> Tuple[int, int, int]:
    if candidate.has_full_date and candidate.has_time:
        richness = 0
    elif candidate.has_full_date:
        richness = 1
    else:
        richness = 2
    return (richness,) + candidate.sort_key


def select_candidate(candidates: List[Tuple[DateCandidate, Timestamp]]) -> Optional[Tuple[DateCandidate, Timestamp]]:
    """Prefer full date + time, then full date, then earliest in reading order"""
    if not candidates:
        return None
    return min(candidates, key=lambda pair: _selection_rank(pair[0]))


def has_relative_age(text: OcrText) -> bool:
    """True if any whitespace token is an elapsed-time marker like `27m`"""
    for line in text.lines:
        for token in line.split():
            if _RELATIVE_AGE.fullmatch(_EDGE_PUNCT.sub("", token)):
                return True
    return False


def extract_timestamp(text: OcrText, method: Method, reference: Timestamp) -> Timestamp:
    """
    Extract the screenshot's posting timestamp

    Raises:
        RelativeTimestampOnly: No candidate, but a relative age marker is present
        NoTimestampFound: No candidate at all
    """
    candidates = find_candidates(text, method, reference)
    selected = select_candidate(candidates)
    if selected is None:
        if has_relative_age(text):
            raise RelativeTimestampOnly("only a relative age marker was found")
        raise NoTimestampFound(f"no timestamp candidate survived ({Method(method).value})")
    candidate, timestamp = selected
    logger.debug(
        f"Selected {candidate.raw!r} on line {candidate.line_index} "
        f"from {len(candidates)} candidate(s) -> {timestamp}"
    )
    return timestamp
