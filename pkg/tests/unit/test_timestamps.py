"""
Unit tests for timestamp extraction (Method 1 and Method 2)
"""
import random
from datetime import datetime

import pytest

from conftest import make_text
from tweetshot.errors import NoTimestampFound, RelativeTimestampOnly
from tweetshot.extraction import (
    DateCandidate,
    Method,
    Timestamp,
    extract_timestamp,
    filter_dates_m2,
    find_candidates,
    find_date_candidates_m1,
    select_candidate,
)
from tweetshot.extraction.timestamps import has_relative_age, passes_date_filter

CORPUS_ITEMS = [
    "philipaklein", "nickhanauer", "nasa", "drsjaish_truncated", "relative_27m", "no_handle",
    "checkmark", "glyph_noise", "mention_in_body", "day_month_year", "iso_date", "numeric_short_year",
    "misread_hour", "cropped_timestamp", "relative_5h", "relative_bare_time", "year_in_body",
    "spelled_month", "date_only", "relative_45m",
]


def test_merged_date_and_time(reference):
    """Time and date on one line merge into a single fully explicit candidate"""
    found = find_date_candidates_m1(make_text("3:17 PM Jun 24, 2022 - Twitter Web App"), reference)
    assert len(found) == 1
    candidate, timestamp = found[0]
    assert candidate.raw == "3:17 PM Jun 24, 2022"
    assert candidate.date_part_raw == "Jun 24, 2022"
    assert candidate.explicit_fields == {"year", "month", "day", "hour", "minute", "meridiem"}
    assert timestamp.canonical() == "2022-06-24 15:17:00"
    assert timestamp.filled_fields == frozenset()


def test_merged_candidate_ignores_reference():
    text = make_text("3:17 PM Jun 24, 2022 - Twitter Web App")
    for ref in ("2022-01-27 00:00:00", "1999-12-31 23:59:59"):
        [(_, timestamp)] = find_date_candidates_m1(text, Timestamp.parse(ref))
        assert timestamp.canonical() == "2022-06-24 15:17:00"


def test_year_only_candidate_filled_from_reference(reference):
    found = find_date_candidates_m1(make_text("©0453 Retweets"), reference)
    assert len(found) == 1
    candidate, timestamp = found[0]
    assert candidate.raw == "0453"
    assert candidate.explicit_fields == {"year"}
    assert timestamp.canonical() == "0453-01-27 00:00:00"
    assert timestamp.filled_fields == {"month", "day", "hour", "minute", "second"}


@pytest.mark.parametrize("ref,expected", [
    ("2024-02-28 00:00:00", "0453-02-28 00:00:00"),
    ("2024-02-29 00:00:00", "0453-02-28 00:00:00"),
    ("2023-03-31 08:15:00", "0453-03-31 08:15:00"),
])
def test_filled_day_capped_at_month_length(ref, expected):
    found = find_date_candidates_m1(make_text("©0453 Retweets"), Timestamp.parse(ref))
    assert [ts.canonical() for _, ts in found] == [expected]
    assert "day" in found[0][1].filled_fields


def test_filled_day_kept_in_leap_year():
    found = find_date_candidates_m1(make_text("©2024 Retweets"), Timestamp.parse("2024-02-29 00:00:00"))
    assert [ts.canonical() for _, ts in found] == ["2024-02-29 00:00:00"]


@pytest.mark.parametrize("lines", [
    (),
    ("27m",),
    ("Jane Doe @janedoe_writes · 27m",),
    ("1,024 Retweets 8.5K Likes",),
    ("v2.1 release notes",),
])
def test_no_candidates(lines, reference):
    assert find_date_candidates_m1(make_text(*lines), reference) == []


def test_decoy_screenshot_m1_candidates(corpus_text, reference):
    found = find_date_candidates_m1(corpus_text("philipaklein"), reference)
    rendered = [ts.canonical() for _, ts in found]
    assert "2022-06-24 15:17:00" in rendered
    assert "0453-01-27 00:00:00" in rendered


def test_decoy_screenshot_m2_only_full_timestamp(corpus_text, reference):
    found = find_candidates(corpus_text("philipaklein"), Method.M2, reference)
    assert [ts.canonical() for _, ts in found] == ["2022-06-24 15:17:00"]


@pytest.mark.parametrize("method", [Method.M1, Method.M2])
def test_decoy_screenshot_selection(method, corpus_text, reference):
    """Full date plus time wins over the 0453 decoy under both methods"""
    timestamp = extract_timestamp(corpus_text("philipaklein"), method, reference)
    assert timestamp.canonical() == "2022-06-24 15:17:00"


@pytest.mark.parametrize("line,expected", [
    ("6:00 AM · May 25, 2022 · Twitter for iPhone", "2022-05-25 06:00:00"),
    ("18:20 · 24 Jun 2022", "2022-06-24 18:20:00"),
    ("2022-03-14 08:05", "2022-03-14 08:05:00"),
    ("6/24/22, 9:30 PM", "2022-06-24 21:30:00"),
    ("24/06/2022", "2022-06-24 00:00:00"),
    ("2022.06.24", "2022-06-24 00:00:00"),
    ("January 5th, 2022 at 9:00 AM", "2022-01-05 09:00:00"),
    ("14:02:33 · 3 Mar 2022", "2022-03-03 14:02:33"),
    ("Sept. 9, 2021", "2021-09-09 00:00:00"),
    ("Jul 4, 2022", "2022-07-04 00:00:00"),
])
def test_date_formats(line, expected, reference):
    assert extract_timestamp(make_text(line), Method.M2, reference).canonical() == expected


@pytest.mark.parametrize("clock,expected", [
    ("12:05 AM", "00:05:00"),
    ("12:05 PM", "12:05:00"),
    ("1:05 PM", "13:05:00"),
    ("11:59 am", "11:59:00"),
    ("9:07 p.m.", "21:07:00"),
])
def test_meridiem_conversion(clock, expected, reference):
    timestamp = extract_timestamp(make_text(f"{clock} · Jun 24, 2022"), Method.M2, reference)
    assert timestamp.canonical() == f"2022-06-24 {expected}"


def test_invalid_calendar_date_is_dropped(reference):
    assert find_date_candidates_m1(make_text("Feb 30, 2022"), reference) == []


def test_distant_time_not_merged(reference):
    text = make_text("Jun 24, 2022 was a long day and 3:17 PM")
    found = find_date_candidates_m1(text, reference)
    assert [c.raw for c, _ in found] == ["Jun 24, 2022", "3:17 PM"]
    # full date beats a bare time; time of day comes from the reference
    assert extract_timestamp(text, Method.M2, reference).canonical() == "2022-06-24 00:00:00"


def test_selection_prefers_richest_candidate(reference):
    text = make_text("Jul 4, 2022", "posted", "3:17 PM Jun 24, 2022")
    assert extract_timestamp(text, Method.M2, reference).canonical() == "2022-06-24 15:17:00"


def test_selection_falls_back_to_reading_order(reference):
    text = make_text("Aug 5, 2022 and Jul 4, 2022")
    selected, _ = select_candidate(find_date_candidates_m1(text, reference))
    assert selected.raw == "Aug 5, 2022"


def test_select_candidate_empty():
    assert select_candidate([]) is None


def test_bare_time_only_in_m1(reference):
    text = make_text("Radio Listener @radiolistener · 3d", "Tune in at 10:30 for the interview.")
    assert extract_timestamp(text, Method.M1, reference).canonical() == "2022-01-27 10:30:00"
    with pytest.raises(RelativeTimestampOnly):
        extract_timestamp(text, Method.M2, reference)


def test_relative_marker_raises_specific_error(corpus_text, reference):
    with pytest.raises(RelativeTimestampOnly):
        extract_timestamp(corpus_text("relative_27m"), Method.M2, reference)


def test_no_timestamp_at_all(corpus_text, reference):
    with pytest.raises(NoTimestampFound) as exc:
        extract_timestamp(corpus_text("cropped_timestamp"), Method.M2, reference)
    assert not isinstance(exc.value, RelativeTimestampOnly)


@pytest.mark.parametrize("lines,expected", [
    (("· 27m",), True),
    (("posted 2h ago",), True),
    (("(45m)",), True),
    (("27min",), False),
    (("m27",), False),
    (("Jun 24, 2022",), False),
])
def test_relative_age_detection(lines, expected):
    assert has_relative_age(make_text(*lines)) is expected


def _candidate(date_part_raw: str) -> DateCandidate:
    raw = date_part_raw or "3:17 PM"
    explicit = {"year"} if date_part_raw else {"hour", "minute"}
    return DateCandidate(
        raw=raw,
        line_index=0,
        char_span=(0, len(raw)),
        explicit_fields=frozenset(explicit),
        date_part_raw=date_part_raw
    )


@pytest.mark.parametrize("date_part_raw,kept", [
    ("Jun 24, 2022", True),
    ("0453", False),
    ("6/24/22", True),
    ("2022", False),
    ("1/2/22", True),
    ("1/2/2", False),
    ("", False),
])
def test_filter_examples(date_part_raw, kept):
    assert passes_date_filter(_candidate(date_part_raw)) is kept


def test_filter_empty_list():
    assert filter_dates_m2([]) == []


def test_filter_property_over_generated_candidates():
    """Kept iff >= 6 characters and >= 4 digits; bare 3-4 digit tokens always rejected"""
    rng = random.Random(20220624)
    alphabet = "0123456789" * 3 + " ,-/.JunMayAPR"
    ts = Timestamp(2022, 1, 1)
    candidates = []
    for _ in range(1200):
        raw = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 14)))
        candidates.append((_candidate(raw), ts))
    for _ in range(300):
        token = str(rng.randint(0, 9999)).zfill(rng.choice([3, 4]))
        candidates.append((_candidate(token), ts))

    kept = filter_dates_m2(candidates)
    expected = [
        pair for pair in candidates
        if len(pair[0].date_part_raw) >= 6 and len([c for c in pair[0].date_part_raw if c in "0123456789"]) >= 4
    ]
    assert kept == expected
    assert not [c for c, _ in kept if c.date_part_raw.isdigit() and len(c.date_part_raw) <= 4]


def test_filter_preserves_order(reference):
    text = make_text("Jul 4, 2022 then 0453 then Aug 5, 2022")
    found = find_date_candidates_m1(text, reference)
    assert [c.raw for c, _ in filter_dates_m2(found)] == ["Jul 4, 2022", "Aug 5, 2022"]


@pytest.mark.parametrize("name", CORPUS_ITEMS)
def test_m2_is_subset_of_m1(name, corpus_text, reference):
    text = corpus_text(name)
    m1 = find_candidates(text, Method.M1, reference)
    m2 = find_candidates(text, Method.M2, reference)
    assert all(pair in m1 for pair in m2)


@pytest.mark.parametrize("name", CORPUS_ITEMS)
def test_explicit_fields_independent_of_reference(name, corpus_text):
    """Only filled fields may change when the reference changes"""
    text = corpus_text(name)
    first = find_date_candidates_m1(text, Timestamp.parse("2022-01-27 00:00:00"))
    second = find_date_candidates_m1(text, Timestamp.parse("2019-11-05 13:45:10"))
    assert [c for c, _ in first] == [c for c, _ in second]
    for (candidate, a), (_, b) in zip(first, second):
        assert a.filled_fields == b.filled_fields
        for field_name in ("year", "month", "day", "hour", "minute", "second"):
            if field_name not in a.filled_fields:
                assert getattr(a, field_name) == getattr(b, field_name), (candidate.raw, field_name)


@pytest.mark.parametrize("name", CORPUS_ITEMS)
def test_candidate_list_same_on_leap_day_reference(name, corpus_text, reference):
    text = corpus_text(name)
    leap_day = Timestamp.parse("2024-02-29 00:00:00")
    assert [c for c, _ in find_date_candidates_m1(text, leap_day)] == \
        [c for c, _ in find_date_candidates_m1(text, reference)]


def test_generated_dates_are_calendar_valid(reference):
    rng = random.Random(7)
    months = ["Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"]
    for _ in range(500):
        line = f"{rng.choice(months)} {rng.randint(1, 35)}, {rng.randint(1990, 2030)} {rng.randint(0, 25)}:{rng.randint(0, 61):02d}"
        for _, timestamp in find_date_candidates_m1(make_text(line), reference):
            datetime(timestamp.year, timestamp.month, timestamp.day,
                     timestamp.hour, timestamp.minute, timestamp.second)


def test_extraction_is_deterministic(corpus_text, reference):
    text = corpus_text("philipaklein")
    assert find_date_candidates_m1(text, reference) == find_date_candidates_m1(text, reference)


@pytest.mark.parametrize("value", ["2022-06-24", "2022-13-01 00:00:00", "2022-02-29 00:00:00", "24/06/2022 10:00:00"])
def test_timestamp_parse_rejects(value):
    with pytest.raises(ValueError):
        Timestamp.parse(value)


def test_timestamp_canonical_zero_padding():
    assert Timestamp(453, 1, 27).canonical() == "0453-01-27 00:00:00"
    assert str(Timestamp.parse("2022-06-24 15:17:00")) == "2022-06-24 15:17:00"
