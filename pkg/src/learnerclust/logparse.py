"""Common Log Format parsing.

Lines look like the classic web-server access log::

    24.138.46.172 -- [09/AUG/2001:20:52:07 -0300] GET /~CSC226/PROJECT1.HTM HTTP/1.1 200 4662

The request part may also be quoted (``"GET /x HTTP/1.0"``) and the user
part may carry the RFC 1413 ident column in front of it (``- frank``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Iterable, Optional

from .errors import IoFailure, MalformedLine

KNOWN_METHODS = frozenset({"GET", "POST", "HEAD"})
ANONYMOUS = frozenset({"-", "--"})

MONTHS = ("JAN", "FEB", "MAR", "APR", "MAY", "JUN",
          "JUL", "AUG", "SEP", "OCT", "NOV", "DEC")
_MONTH_NUMBER = {name: i + 1 for i, name in enumerate(MONTHS)}

_TIMESTAMP = re.compile(
    r"^(\d{2})/([A-Za-z]{3})/(\d{4}):(\d{2}):(\d{2}):(\d{2})\s*([+-])(\d{2})(\d{2})$"
)


@dataclass(frozen=True)
class LogRecord:
    """One access-log line.

    ``method`` keeps the verbatim request token; anything outside
    :data:`KNOWN_METHODS` is an "other" method and is preserved as-is.
    """

    host: str
    user: Optional[str]
    timestamp: datetime
    method: str
    path: str
    protocol: str
    status: int
    bytes: int

    @property
    def is_standard_method(self) -> bool:
        return self.method in KNOWN_METHODS


def parse_timestamp(text: str) -> datetime:
    """Parse ``DD/MON/YYYY:HH:MM:SS +ZZZZ`` (month name in any case)."""
    match = _TIMESTAMP.match(text.strip())
    if match is None:
        raise MalformedLine(f"unparseable timestamp {text!r}")
    day, mon, year, hh, mm, ss, sign, zh, zm = match.groups()
    month = _MONTH_NUMBER.get(mon.upper())
    if month is None:
        raise MalformedLine(f"unknown month {mon!r}")
    offset = timedelta(hours=int(zh), minutes=int(zm))
    if sign == "-":
        offset = -offset
    try:
        return datetime(int(year), month, int(day), int(hh), int(mm), int(ss),
                        tzinfo=timezone(offset))
    except ValueError as exc:
        raise MalformedLine(f"unparseable timestamp {text!r}: {exc}") from None


def format_timestamp(ts: datetime) -> str:
    offset = ts.utcoffset()
    if offset is None:
        raise ValueError("timestamp must carry a UTC offset")
    minutes = int(offset.total_seconds()) // 60
    sign = "-" if minutes < 0 else "+"
    minutes = abs(minutes)
    return (f"{ts.day:02d}/{MONTHS[ts.month - 1]}/{ts.year:04d}:"
            f"{ts.hour:02d}:{ts.minute:02d}:{ts.second:02d} "
            f"{sign}{minutes // 60:02d}{minutes % 60:02d}")


def parse_line(line: str) -> LogRecord:
    """Parse one log line into a :class:`LogRecord`.

    Raises :class:`MalformedLine` when the line does not have the nine
    fields, the timestamp cannot be read, or status/bytes are not numeric.
    """
    text = line.rstrip("\r\n")
    open_br = text.find("[")
    close_br = text.find("]", open_br + 1)
    if open_br < 0 or close_br < 0:
        raise MalformedLine("missing [timestamp] field")

    head = text[:open_br].split()
    if len(head) == 2:
        host, user = head
    elif len(head) == 3:
        host, _ident, user = head
    else:
        raise MalformedLine(f"expected host and user before timestamp, got {len(head)} fields")

    timestamp = parse_timestamp(text[open_br + 1:close_br])

    tail = text[close_br + 1:].strip()
    if tail.startswith('"'):
        close_q = tail.find('"', 1)
        if close_q < 0:
            raise MalformedLine("unterminated quoted request")
        request = tail[1:close_q].split()
        rest = tail[close_q + 1:].split()
    else:
        parts = tail.split()
        request, rest = parts[:3], parts[3:]
    if len(request) != 3 or len(rest) != 2:
        raise MalformedLine(
            f"expected method, path, protocol, status, bytes; got {len(request) + len(rest)} fields"
        )
    method, path, protocol = request
    status_text, bytes_text = rest

    if not status_text.isdigit():
        raise MalformedLine(f"non-numeric status {status_text!r}")
    status = int(status_text)
    if not 100 <= status <= 599:
        raise MalformedLine(f"status {status} outside [100, 599]")
    if bytes_text == "-":
        nbytes = 0
    elif bytes_text.isdigit():
        nbytes = int(bytes_text)
    else:
        raise MalformedLine(f"non-numeric byte count {bytes_text!r}")

    return LogRecord(
        host=host,
        user=None if user in ANONYMOUS else user,
        timestamp=timestamp,
        method=method,
        path=path,
        protocol=protocol,
        status=status,
        bytes=nbytes,
    )


def format_record(record: LogRecord) -> str:
    """Render a record in the unquoted layout used by the example log."""
    user = "--" if record.user is None else record.user
    return (f"{record.host} {user} [{format_timestamp(record.timestamp)}] "
            f"{record.method} {record.path} {record.protocol} "
            f"{record.status} {record.bytes}")


def parse_stream(source: Iterable[str]) -> tuple[list[LogRecord], int]:
    """Parse every line of ``source``.

    Returns the parsed records in input order and the number of malformed
    lines that were skipped.
    """
    records = []
    skipped = 0
    try:
        for line in source:
            try:
                records.append(parse_line(line))
            except MalformedLine:
                skipped += 1
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return records, skipped


def read_log(path) -> tuple[list[LogRecord], int]:
    """Parse a log file on disk (UTF-8; undecodable bytes are replaced)."""
    try:
        with open(Path(path), encoding="utf-8", errors="replace", newline="") as fh:
            return parse_stream(fh)
    except IoFailure:
        raise
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
