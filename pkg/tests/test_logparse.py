from datetime import datetime, timedelta, timezone

import pytest
from hypothesis import given, strategies as st

from learnerclust.errors import IoFailure, MalformedLine
from learnerclust.logparse import (
    LogRecord, format_record, format_timestamp, parse_line, parse_stream, parse_timestamp, read_log,
)

TABLE_EXAMPLE = "24.138.46.172 -- [09/AUG/2001:20:52:07 -0300] GET /~CSC226/PROJECT1.HTM HTTP/1.1 200 4662"


def test_reference_example_line():
    rec = parse_line(TABLE_EXAMPLE)
    assert rec == LogRecord(
        host="24.138.46.172", user=None,
        timestamp=datetime(2001, 8, 9, 20, 52, 7, tzinfo=timezone(timedelta(hours=-3))),
        method="GET", path="/~CSC226/PROJECT1.HTM", protocol="HTTP/1.1", status=200, bytes=4662,
    )
    assert rec.timestamp.isoformat() == "2001-08-09T20:52:07-03:00"
    assert format_record(rec) == TABLE_EXAMPLE


@pytest.mark.parametrize("line", [
    "", "   ", "garbage", "1.2.3.4 - [09/AUG/2001:20:52:07 -0300] GET / HTTP/1.1 200",
    "1.2.3.4 - [09/XYZ/2001:20:52:07 -0300] GET / HTTP/1.1 200 5",
    "1.2.3.4 - [09/AUG/2001:20:52:07 -0300] GET / HTTP/1.1 abc 5",
    "1.2.3.4 - [09/AUG/2001:20:52:07 -0300] GET / HTTP/1.1 200 x5",
    "1.2.3.4 - [09/AUG/2001:20:52:07 -0300] GET / HTTP/1.1 700 5",
    "1.2.3.4 - [32/AUG/2001:20:52:07 -0300] GET / HTTP/1.1 200 5",
    '1.2.3.4 - [09/AUG/2001:20:52:07 -0300] "GET / HTTP/1.1 200 5',
    "1.2.3.4 a b c [09/AUG/2001:20:52:07 -0300] GET / HTTP/1.1 200 5",
])
def test_malformed_lines(line):
    with pytest.raises(MalformedLine):
        parse_line(line)


def test_common_log_format_variants():
    quoted = parse_line('10.0.0.1 - frank [10/Oct/2000:13:55:36 -0700] "GET /a.gif HTTP/1.0" 304 -')
    assert quoted.user == "frank" and quoted.status == 304 and quoted.bytes == 0
    assert quoted.timestamp.month == 10
    lower = parse_line("10.0.0.1 - [10/oct/2000:13:55:36 +0000] GET /a HTTP/1.0 200 1")
    assert lower.user is None and lower.timestamp.utcoffset() == timedelta(0)


def test_other_method_kept_verbatim():
    rec = parse_line("10.0.0.1 - [10/Oct/2000:13:55:36 +0000] PROPFIND /dav HTTP/1.1 207 10")
    assert rec.method == "PROPFIND" and not rec.is_standard_method
    assert parse_line(TABLE_EXAMPLE).is_standard_method


def test_timestamp_round_trip():
    text = "01/JAN/2002:00:00:59 +0530"
    assert format_timestamp(parse_timestamp(text)) == text


def test_parse_stream_counts():
    good = [TABLE_EXAMPLE] * 3
    assert parse_stream(good) == ([parse_line(TABLE_EXAMPLE)] * 3, 0)
    records, skipped = parse_stream([TABLE_EXAMPLE, "junk", TABLE_EXAMPLE])
    assert len(records) == 2 and skipped == 1


def test_parse_stream_wraps_read_errors():
    def broken():
        yield TABLE_EXAMPLE
        raise OSError("disk went away")
    with pytest.raises(IoFailure):
        parse_stream(broken())


def test_read_log_missing_file(tmp_path):
    with pytest.raises(IoFailure):
        read_log(tmp_path / "nope.log")


def test_generated_corpus_parses_and_round_trips(default_corpus):
    lines = default_corpus.lines[:10_000]
    records, skipped = parse_stream(lines)
    assert (len(records), skipped) == (10_000, 0)
    assert all(format_record(r) == line for r, line in zip(records, lines))


_token = st.text(st.characters(min_codepoint=33, max_codepoint=126, blacklist_characters='[]"'),
                 min_size=1, max_size=12)
_times = st.datetimes(min_value=datetime(1990, 1, 1), max_value=datetime(2030, 12, 31))
_offsets = st.integers(-12 * 60, 14 * 60).map(lambda mins: timezone(timedelta(minutes=mins)))


@st.composite
def records(draw):
    ts = draw(_times).replace(microsecond=0, tzinfo=draw(_offsets))
    user = draw(st.one_of(st.none(), _token.filter(lambda s: s not in ("-", "--"))))
    return LogRecord(
        host=draw(_token), user=user, timestamp=ts, method=draw(_token), path=draw(_token),
        protocol=draw(_token), status=draw(st.integers(100, 599)),
        bytes=draw(st.integers(0, 10**9)),
    )


@given(records())
def test_record_round_trip(rec):
    assert parse_line(format_record(rec)) == rec


@given(st.lists(st.one_of(records().map(format_record), st.text(max_size=30))))
def test_stream_totality_and_order(lines):
    recs, skipped = parse_stream(lines)
    assert len(recs) + skipped == len(lines)
    parsed = []
    for line in lines:
        try:
            parsed.append(parse_line(line))
        except MalformedLine:
            pass
    assert recs == parsed
