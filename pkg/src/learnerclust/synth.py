"""Synthetic course-site traffic with planted learner archetypes.

Simulated students of each archetype (Regular, Worker, Bad, Casual,
Absent) visit a course web site over a term; crawlers add robot traffic.
The generator returns Common Log Format lines plus the ground truth
needed to check every pipeline stage: the archetype behind each host,
each planted visit, and the planted robot hits.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import ConfigError, InvalidSpec
from .logparse import LogRecord, format_record
from .sessions import DEFAULT_NOTES_PATTERNS, DEFAULT_ROBOT_HOSTS, DEFAULT_ROBOT_PATHS

REGULAR, WORKER, BAD, CASUAL, ABSENT = "Regular", "Worker", "Bad", "Casual", "Absent"
ARCHETYPES = (REGULAR, WORKER, BAD, CASUAL, ABSENT)
ROBOT = "Robot"

CAMPUS_NETWORK = "172.20.0.0/16"
TERM_START = datetime(2002, 1, 7, tzinfo=timezone(timedelta(hours=-4)))  # a Monday
COURSE = "/~CSC226"
LAB_DAYS = (1, 3)
MIN_VISIT_GAP = timedelta(minutes=60)

_DAY = 86400
_HOME_PREFIXES = ((24, 138), (24, 222), (142, 68), (142, 176), (47, 55))
_CRAWLER_PREFIXES = ((66, 249, 64, 32), (157, 55, 39, 1))  # (a, b, first c, number of c values)


@dataclass(frozen=True)
class ArchetypeSpec:
    """How the students of one archetype behave.

    ``hits_per_visit`` and ``downloads_per_visit`` are ``(mean, spread)``
    pairs for the per-visit request and class-note download counts.
    """

    name: str
    count: int = 0
    visit_rate: float = 0.0
    hits_per_visit: tuple = (1.0, 0.0)
    downloads_per_visit: tuple = (0.0, 0.0)
    campus_prob: float = 0.0
    daytime_prob: float = 0.5
    labday_prob: float = 2 / 7


@dataclass(frozen=True)
class RobotSpec:
    crawler_hosts: int = 3
    robots_txt_hosts: int = 2
    crawls_per_week: float = 1.0
    pages_per_crawl: tuple = (40.0, 15.0)


DEFAULT_SPECS = (
    ArchetypeSpec(REGULAR, 60, 1.0, (12.0, 8.0), (6.0, 1.0), 0.25, 0.6, 0.25),
    ArchetypeSpec(WORKER, 100, 1.0, (3.0, 3.0), (1.0, 1.5), 0.85, 0.85, 0.7),
    ArchetypeSpec(BAD, 15, 6.0, (40.0, 8.0), (14.0, 6.0), 0.5, 0.45, 0.3),
    ArchetypeSpec(CASUAL, 30, 0.5, (3.0, 1.5), (0.0, 0.0), 0.4, 0.6, 0.3),
    ArchetypeSpec(ABSENT, 10),
)


@dataclass(frozen=True)
class PlantedVisit:
    host: str
    archetype: str
    start: datetime
    end: datetime
    hits: int
    downloads: int
    campus: int
    daytime: int
    labday: int


@dataclass
class SynthResult:
    lines: list
    truth: list                 # (host, archetype) pairs, robots included
    visits: list                # PlantedVisit, students only, time-ordered
    robot_hits: int = 0
    robot_hosts: list = field(default_factory=list)

    def planted_counts(self) -> dict:
        by_arch = {}
        for v in self.visits:
            by_arch[v.archetype] = by_arch.get(v.archetype, 0) + 1
        casual = by_arch.get(CASUAL, 0)
        return {
            "lines": len(self.lines),
            "robot_hits": self.robot_hits,
            "hits_after_cleaning": len(self.lines) - self.robot_hits,
            "visits": len(self.visits),
            "casual_visits": casual,
            "visits_after_cleaning": len(self.visits) - casual,
            "visits_by_archetype": by_arch,
        }


def validate_specs(specs: Sequence[ArchetypeSpec], weeks: int) -> None:
    if weeks < 1:
        raise InvalidSpec("weeks must be at least 1")
    seen = set()
    for s in specs:
        if s.name not in ARCHETYPES:
            raise InvalidSpec(f"unknown archetype {s.name!r}; expected one of {ARCHETYPES}")
        if s.name in seen:
            raise InvalidSpec(f"archetype {s.name} listed twice")
        seen.add(s.name)
        if s.count < 0 or s.visit_rate < 0:
            raise InvalidSpec(f"{s.name}: count and visit_rate must be non-negative")
        for p in (s.campus_prob, s.daytime_prob, s.labday_prob):
            if not 0 <= p <= 1:
                raise InvalidSpec(f"{s.name}: probabilities must lie in [0, 1]")
        for pair in (s.hits_per_visit, s.downloads_per_visit):
            if len(pair) != 2 or pair[0] < 0 or pair[1] < 0:
                raise InvalidSpec(f"{s.name}: count distributions need non-negative (mean, spread)")
        if s.name == CASUAL and s.downloads_per_visit[0] != 0:
            raise InvalidSpec("Casual visits must not download notes")
        if s.name not in (CASUAL, ABSENT) and s.visit_rate > 0 and s.downloads_per_visit[0] <= 0:
            raise InvalidSpec(f"{s.name} visits must download at least one note on average")
    by_name = {s.name: s for s in specs if s.count > 0 and s.visit_rate > 0}
    if REGULAR in by_name and BAD in by_name:
        if not by_name[BAD].downloads_per_visit[0] > by_name[REGULAR].downloads_per_visit[0]:
            raise InvalidSpec("Bad students must download more notes per visit than Regular ones")


def draw_count(rng, mean: float, spread: float) -> int:
    """Integer draw with the given mean and (approximately) standard deviation.

    Over-dispersed pairs use a gamma-Poisson (negative binomial) mixture,
    under-dispersed ones a binomial, and ``spread**2 == mean`` a Poisson.
    """
    if mean <= 0:
        return 0
    var = spread * spread
    if var > mean:
        shape = mean * mean / (var - mean)
        return int(rng.poisson(rng.gamma(shape, mean / shape)))
    if var < mean:
        trials = max(math.ceil(mean), round(mean * mean / (mean - var)))
        return int(rng.binomial(trials, mean / trials))
    return int(rng.poisson(mean))


def _rate_count(rng, expected: float) -> int:
    base = math.floor(expected)
    return base + int(rng.random() < expected - base)


class _Site:
    """Static course site: notes documents and ordinary pages with fixed sizes."""

    def __init__(self, rng, weeks):
        self.n_notes = max(4, round(weeks * 1.5))
        self.notes = [f"{COURSE}/NOTES/CH{k + 1:02d}.PDF" for k in range(self.n_notes)]
        self.pages = ([f"{COURSE}/INDEX.HTM", f"{COURSE}/INFO.HTM", f"{COURSE}/SCHEDULE.HTM",
                       f"{COURSE}/PROJECT1.HTM", f"{COURSE}/LABMANUAL.HTM"]
                      + [f"{COURSE}/LABS/LAB{k + 1}.HTM" for k in range(10)]
                      + [f"{COURSE}/ASSIGN/A{k + 1}.HTM" for k in range(6)])
        self.casual_pages = self.pages[:3]
        self.work_pages = self.pages[3:]
        self.board = f"{COURSE}/BOARD/POST.CGI"
        self.size = {p: int(rng.integers(40_000, 400_000)) for p in self.notes}
        self.size.update({p: int(rng.integers(1_500, 12_000)) for p in self.pages})
        self.size[self.board] = 900
        self.size["/robots.txt"] = 120

    def current_chapter(self, day):
        return min(self.n_notes - 1, int(day / 7 * 1.5))


class _Hosts:
    def __init__(self, rng):
        self.rng = rng
        self.used = set()

    def _fresh(self, make):
        while True:
            ip = make()
            if ip not in self.used:
                self.used.add(ip)
                return ip

    def home(self):
        a, b = _HOME_PREFIXES[int(self.rng.integers(len(_HOME_PREFIXES)))]
        return self._fresh(lambda: f"{a}.{b}.{self.rng.integers(0, 256)}.{self.rng.integers(1, 255)}")

    def campus(self):
        return self._fresh(lambda: f"172.20.{self.rng.integers(0, 256)}.{self.rng.integers(1, 255)}")

    def crawler(self, k):
        a, b, c0, nc = _CRAWLER_PREFIXES[k % len(_CRAWLER_PREFIXES)]
        return self._fresh(lambda: f"{a}.{b}.{c0 + self.rng.integers(0, nc)}.{self.rng.integers(1, 255)}")

    def stray(self):
        return self._fresh(lambda: f"38.{self.rng.integers(96, 112)}.{self.rng.integers(0, 256)}.{self.rng.integers(1, 255)}")


def _visit_requests(rng, site, spec, day):
    """Paths/status/bytes for one visit, plus its planted hit and download counts."""
    if spec.name == CASUAL:
        n = max(1, draw_count(rng, *spec.hits_per_visit))
        reqs = [("GET", site.casual_pages[int(rng.integers(len(site.casual_pages)))], 200)
                for _ in range(n)]
        return reqs, 0

    downloads = max(1, draw_count(rng, *spec.downloads_per_visit))
    hits = max(downloads, draw_count(rng, *spec.hits_per_visit), 1)
    current = site.current_chapter(day)
    notes = []
    for _ in range(downloads):
        if spec.name == BAD:
            k = int(rng.integers(0, current + 1))
        else:
            k = max(0, min(site.n_notes - 1, current - int(rng.integers(0, 2))))
        notes.append(("GET", site.notes[k], 200))
    pages = []
    for _ in range(hits - downloads):
        u = rng.random()
        if u < 0.1:
            # revalidated notes: a hit on a notes path, not a download
            pages.append(("GET", site.notes[min(current, site.n_notes - 1)], 304))
        elif spec.name == WORKER and u < 0.35:
            pages.append(("POST", site.board, 200))
        else:
            pages.append(("GET", site.work_pages[int(rng.integers(len(site.work_pages)))], 200))
    if not pages:
        return [notes[i] for i in rng.permutation(len(notes))], downloads
    # visits with ordinary pages land on the index first
    rest = notes + pages[1:]
    return [("GET", site.pages[0], 200)] + [rest[i] for i in rng.permutation(len(rest))], downloads


def _pick_start(rng, spec, weeks):
    labday = rng.random() < spec.labday_prob
    daytime = rng.random() < spec.daytime_prob
    week = int(rng.integers(weeks))
    if labday:
        dow = LAB_DAYS[int(rng.integers(len(LAB_DAYS)))]
    else:
        others = [d for d in range(7) if d not in LAB_DAYS]
        dow = others[int(rng.integers(len(others)))]
    if daytime:
        secs = int(rng.integers(8 * 3600, 20 * 3600))
    else:
        secs = int(rng.integers(0, 12 * 3600))
        secs = secs + 20 * 3600 if secs < 4 * 3600 else secs - 4 * 3600
    return (week * 7 + dow) * _DAY + secs, int(daytime), int(labday)


def _free(intervals, start, end, gap):
    return all(end + gap < s or start > e + gap for s, e in intervals)


def generate(specs: Sequence[ArchetypeSpec] = DEFAULT_SPECS, weeks: int = 16, seed: int = 0,
             robots: RobotSpec | None = RobotSpec(),
             min_visit_gap: timedelta = MIN_VISIT_GAP) -> SynthResult:
    """Simulate ``weeks`` of course-site traffic.

    Every planted visit of a student is separated from that student's
    other visits by more than ``min_visit_gap``; requests inside a visit
    are at most four minutes apart.
    """
    validate_specs(specs, weeks)
    rng = np.random.default_rng(seed)
    site = _Site(rng, weeks)
    hosts = _Hosts(rng)
    gap = int(min_visit_gap.total_seconds())
    tz = TERM_START.tzinfo

    events = []   # (seconds, host, seq, method, path, status)
    truth = []
    planted = []
    seq = 0

    for spec in specs:
        for _ in range(spec.count):
            home = hosts.home()
            truth.append((home, spec.name))
            campus = None
            if spec.campus_prob > 0 and spec.name != ABSENT:
                campus = hosts.campus()
                truth.append((campus, spec.name))
            if spec.name == ABSENT:
                continue
            busy = []
            for _ in range(_rate_count(rng, spec.visit_rate * weeks)):
                for _attempt in range(500):
                    start, daytime, labday = _pick_start(rng, spec, weeks)
                    reqs, downloads = _visit_requests(rng, site, spec, start // _DAY)
                    offsets = np.concatenate(([0], np.cumsum(rng.integers(3, 241, len(reqs) - 1))))
                    end = start + int(offsets[-1])
                    if _free(busy, start, end, gap):
                        break
                else:
                    raise InvalidSpec(f"cannot fit {spec.name} visits into {weeks} weeks")
                busy.append((start, end))
                on_campus = campus is not None and rng.random() < spec.campus_prob
                host = campus if on_campus else home
                for off, (method, path, status) in zip(offsets, reqs):
                    events.append((start + int(off), host, seq, method, path, status))
                    seq += 1
                planted.append(PlantedVisit(
                    host, spec.name,
                    TERM_START + timedelta(seconds=start), TERM_START + timedelta(seconds=end),
                    len(reqs), downloads, int(on_campus), daytime, labday))

    robot_hits = 0
    robot_hosts = []
    if robots is not None:
        n_hosts = robots.crawler_hosts + robots.robots_txt_hosts
        for k in range(n_hosts):
            fetches_robots_txt = k >= robots.crawler_hosts
            host = hosts.stray() if fetches_robots_txt else hosts.crawler(k)
            truth.append((host, ROBOT))
            robot_hosts.append(host)
            for crawl in range(_rate_count(rng, robots.crawls_per_week * weeks)):
                t = int(rng.integers(0, weeks * 7 * _DAY))
                paths = site.notes + site.pages
                n = max(1, draw_count(rng, *robots.pages_per_crawl))
                todo = [paths[int(rng.integers(len(paths)))] for _ in range(n)]
                if fetches_robots_txt:
                    todo[0] = "/robots.txt"
                for path in todo:
                    events.append((t, host, seq, "GET", path, 200))
                    seq += 1
                    t += int(rng.integers(1, 11))
                robot_hits += len(todo)

    events.sort()
    lines = []
    for secs, host, _, method, path, status in events:
        rec = LogRecord(host=host, user=None, timestamp=TERM_START + timedelta(seconds=secs),
                        method=method, path=path, protocol="HTTP/1.1", status=status,
                        bytes=site.size[path] if status == 200 else 0)
        lines.append(format_record(rec))
    planted.sort(key=lambda v: (v.start, v.host))
    return SynthResult(lines, truth, planted, robot_hits, robot_hosts)


def pipeline_config_for_synth() -> dict:
    """Config section describing the synthetic site (campus network, cleaning rules)."""
    return {
        "cleaning": {
            "robot_hosts": list(DEFAULT_ROBOT_HOSTS),
            "robot_paths": list(DEFAULT_ROBOT_PATHS),
            "notes_path_patterns": list(DEFAULT_NOTES_PATTERNS),
        },
        "features": {"campus_networks": [CAMPUS_NETWORK]},
    }


def load_spec(path):
    """Read a JSON spec: ``{"weeks": .., "archetypes": [...], "robots": {...} | null}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read spec {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    try:
        specs = tuple(ArchetypeSpec(**{k: tuple(v) if isinstance(v, list) else v
                                       for k, v in a.items()})
                      for a in raw.get("archetypes", []))
        robots = raw.get("robots", {})
        robots = None if robots is None else RobotSpec(**{k: tuple(v) if isinstance(v, list) else v
                                                          for k, v in robots.items()})
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return specs, robots, int(raw.get("weeks", 16))


def spec_to_dict(specs, robots, weeks) -> dict:
    return {
        "weeks": weeks,
        "archetypes": [asdict(s) for s in specs],
        "robots": None if robots is None else asdict(robots),
    }


def write_outputs(result: SynthResult, out_dir) -> dict:
    """Write ``access.log``, ``truth.csv``, ``planted.json`` and ``config.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {name: out / name for name in ("access.log", "truth.csv", "planted.json", "config.json")}
    with open(paths["access.log"], "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(line + "\n" for line in result.lines)
    with open(paths["truth.csv"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("host", "archetype"))
        writer.writerows(result.truth)
    with open(paths["planted.json"], "w", encoding="utf-8") as fh:
        json.dump(result.planted_counts(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(paths["config.json"], "w", encoding="utf-8") as fh:
        json.dump(pipeline_config_for_synth(), fh, indent=2)
        fh.write("\n")
    return paths
