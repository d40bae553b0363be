"""Hits cleaning, visit reconstruction and visits cleaning.

Visitors are identified by host (IP address). A visit is a maximal run
of requests from one host whose consecutive gaps do not exceed the
session timeout.
"""

from __future__ import annotations

import fnmatch
import ipaddress
from collections import defaultdict
from dataclasses import dataclass
from datetime import datetime, timedelta
from typing import Iterable, Sequence

from .logparse import LogRecord

DEFAULT_TIMEOUT = timedelta(minutes=30)

# Published crawler address blocks (Googlebot, Bingbot, Yandex).
DEFAULT_ROBOT_HOSTS = ("66.249.64.0/19", "157.55.39.0/24", "207.46.13.0/24", "5.255.253.0/24")
DEFAULT_ROBOT_PATHS = ("/robots.txt",)
DEFAULT_NOTES_PATTERNS = ("*/notes/*",)


def _parse_network(text):
    try:
        return ipaddress.ip_network(text, strict=False)
    except ValueError:
        return None


class HostMatcher:
    """Match hosts against exact names and CIDR prefixes."""

    def __init__(self, patterns: Iterable[str]):
        self.exact = set()
        self.networks = []
        for pat in patterns:
            net = _parse_network(pat) if "/" in pat else None
            if net is None:
                self.exact.add(pat.lower())
            else:
                self.networks.append(net)

    def __bool__(self):
        return bool(self.exact or self.networks)

    def __call__(self, host: str) -> bool:
        if host.lower() in self.exact:
            return True
        if not self.networks:
            return False
        try:
            addr = ipaddress.ip_address(host)
        except ValueError:
            return False
        return any(addr in net for net in self.networks)


def path_matches(path: str, patterns: Iterable[str]) -> bool:
    """Case-insensitive glob match of a request path (query string ignored)."""
    bare = path.split("?", 1)[0].lower()
    return any(fnmatch.fnmatchcase(bare, pat.lower()) for pat in patterns)


@dataclass(frozen=True)
class CleaningRules:
    """Robot and class-note identification policy.

    ``robot_hosts`` holds exact host names or CIDR prefixes; the path
    pattern sets are shell-style globs matched case-insensitively.
    """

    robot_hosts: frozenset = frozenset()
    robot_paths: frozenset = frozenset()
    notes_path_patterns: frozenset = frozenset()

    def __post_init__(self):
        for name in ("robot_hosts", "robot_paths", "notes_path_patterns"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))

    @classmethod
    def defaults(cls) -> "CleaningRules":
        return cls(DEFAULT_ROBOT_HOSTS, DEFAULT_ROBOT_PATHS, DEFAULT_NOTES_PATTERNS)

    def is_download(self, record: LogRecord) -> bool:
        return (record.status == 200 and record.bytes > 0
                and path_matches(record.path, self.notes_path_patterns))


@dataclass(frozen=True)
class Visit:
    host: str
    records: tuple
    downloads: int = 0

    @property
    def start(self) -> datetime:
        return self.records[0].timestamp

    @property
    def end(self) -> datetime:
        return self.records[-1].timestamp

    @property
    def hits(self) -> int:
        return len(self.records)


def clean_hits(records: Sequence[LogRecord], rules: CleaningRules) -> list[LogRecord]:
    """Drop robot traffic.

    A record is dropped when its host matches ``rules.robot_hosts`` or
    when its host requested any ``rules.robot_paths`` path at any time.
    """
    robot_host = HostMatcher(rules.robot_hosts)
    flagged = set()
    if rules.robot_paths:
        flagged = {r.host for r in records if path_matches(r.path, rules.robot_paths)}
    if not robot_host and not flagged:
        return list(records)
    return [r for r in records if r.host not in flagged and not robot_host(r.host)]


def count_downloads(records: Iterable[LogRecord], rules: CleaningRules) -> int:
    return sum(1 for r in records if rules.is_download(r))


def sessionize(records: Sequence[LogRecord], timeout: timedelta = DEFAULT_TIMEOUT,
               rules: CleaningRules | None = None) -> list[Visit]:
    """Split records into per-host visits.

    A new visit starts whenever the gap to the previous request from the
    same host exceeds ``timeout``. Visits are returned ordered by start
    time, then host. ``rules`` (optional) is used to count downloads.
    """
    if timeout <= timedelta(0):
        raise ValueError("timeout must be positive")
    rules = rules or CleaningRules()
    by_host = defaultdict(list)
    for rec in records:
        by_host[rec.host].append(rec)

    visits = []
    for host, recs in by_host.items():
        recs.sort(key=lambda r: r.timestamp)
        current = [recs[0]]
        for prev, rec in zip(recs, recs[1:]):
            if rec.timestamp - prev.timestamp > timeout:
                visits.append(Visit(host, tuple(current), count_downloads(current, rules)))
                current = []
            current.append(rec)
        visits.append(Visit(host, tuple(current), count_downloads(current, rules)))

    visits.sort(key=lambda v: (v.start, v.host))
    return visits


def clean_visits(visits: Sequence[Visit], rules: CleaningRules) -> list[Visit]:
    """Keep only visits with at least one class-note download.

    Downloads are recounted against ``rules.notes_path_patterns`` so the
    result does not depend on the rules used at sessionization time.
    """
    kept = []
    for visit in visits:
        n = count_downloads(visit.records, rules)
        if n >= 1:
            kept.append(visit if n == visit.downloads else
                         Visit(visit.host, visit.records, n))
    return kept


@dataclass
class CleaningSummary:
    """Record counts before and after each cleaning stage."""

    hits: int = 0
    hits_after_cleaning: int = 0
    visits: int = 0
    visits_after_cleaning: int = 0
    skipped_lines: int = 0
