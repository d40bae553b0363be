"""Five-attribute visitor representation.

Each visit becomes ``(campus, daytime, labday, hits, downloads)``: three
0/1 flags plus hit and class-note download counts scaled to [0, 10] and
[0, 15] respectively.
"""

from __future__ import annotations

import csv
import ipaddress
import math
from dataclasses import dataclass, replace
from datetime import datetime
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ConfigError, DataError, IoFailure
from .sessions import Visit

FEATURE_NAMES = ("campus", "daytime", "labday", "hits", "downloads")
CSV_HEADER = ("host", "start") + FEATURE_NAMES
HITS_TOP = 10.0
DOWNLOADS_TOP = 15.0
HITS_COL = 3
DOWNLOADS_COL = 4

WEEKDAYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")


def weekday_number(day) -> int:
    """Accept 0-6 (Monday = 0) or a day name such as ``"Tue"``/``"tuesday"``."""
    if isinstance(day, int):
        if 0 <= day <= 6:
            return day
    else:
        key = str(day).strip()[:3].title()
        if key in WEEKDAYS:
            return WEEKDAYS.index(key)
    raise ConfigError(f"invalid weekday {day!r}")


@dataclass(frozen=True)
class FeatureConfig:
    """Knobs for turning visits into feature vectors.

    ``hits_cap``/``downloads_cap`` may be left as ``None`` and filled in
    from the corpus with :func:`with_corpus_caps`.
    """

    campus_networks: tuple = ()
    day_start: float = 8
    day_end: float = 20
    lab_weekdays: frozenset = frozenset({1, 3})
    hits_cap: Optional[float] = None
    downloads_cap: Optional[float] = None

    def __post_init__(self):
        try:
            nets = tuple(ipaddress.ip_network(n, strict=False) for n in self.campus_networks)
        except ValueError as exc:
            raise ConfigError(f"bad campus network: {exc}") from None
        object.__setattr__(self, "campus_networks", nets)
        object.__setattr__(self, "lab_weekdays",
                           frozenset(weekday_number(d) for d in self.lab_weekdays))
        if not 0 <= self.day_start < self.day_end <= 24:
            raise ConfigError("need 0 <= day_start < day_end <= 24")
        for name in ("hits_cap", "downloads_cap"):
            cap = getattr(self, name)
            if cap is not None and not cap > 0:
                raise ConfigError(f"{name} must be positive")

    def on_campus(self, host: str) -> bool:
        try:
            addr = ipaddress.ip_address(host)
        except ValueError:
            return False
        return any(addr in net for net in self.campus_networks)


@dataclass(frozen=True)
class FeatureVector:
    campus: float
    daytime: float
    labday: float
    hits: float
    downloads: float

    def as_tuple(self) -> tuple:
        return (self.campus, self.daytime, self.labday, self.hits, self.downloads)


def count_cap(values: Sequence[float], q: float = 99.0) -> float:
    """Smallest integer count that ``q`` percent of ``values`` lie strictly below.

    For integer counts this is the ``q``-th percentile (upper order
    statistic) plus one, so at least ``q`` percent of the corpus maps
    strictly inside the scaled range and only the tail saturates.
    """
    if len(values) == 0:
        return 1.0
    top = float(np.percentile(np.asarray(values, dtype=float), q, method="higher"))
    return max(1.0, math.floor(top) + 1.0)


def with_corpus_caps(cfg: FeatureConfig, visits: Sequence[Visit]) -> FeatureConfig:
    """Fill unset caps from the 99th-percentile rule over ``visits``."""
    changes = {}
    if cfg.hits_cap is None:
        changes["hits_cap"] = count_cap([v.hits for v in visits])
    if cfg.downloads_cap is None:
        changes["downloads_cap"] = count_cap([v.downloads for v in visits])
    return replace(cfg, **changes) if changes else cfg


def _scaled(raw: float, cap: float, top: float) -> float:
    return min(raw, cap) / cap * top


def _is_daytime(ts: datetime, cfg: FeatureConfig) -> bool:
    hour = ts.hour + ts.minute / 60 + ts.second / 3600
    return cfg.day_start <= hour < cfg.day_end


def extract(visit: Visit, cfg: FeatureConfig) -> FeatureVector:
    """Feature vector for one visit.

    Day/night and lab-day flags use the visit's start time in the log's
    own UTC offset.
    """
    if cfg.hits_cap is None or cfg.downloads_cap is None:
        raise ConfigError("hits_cap and downloads_cap must be set (see with_corpus_caps)")
    start = visit.start
    return FeatureVector(
        campus=1.0 if cfg.on_campus(visit.host) else 0.0,
        daytime=1.0 if _is_daytime(start, cfg) else 0.0,
        labday=1.0 if start.weekday() in cfg.lab_weekdays else 0.0,
        hits=_scaled(visit.hits, cfg.hits_cap, HITS_TOP),
        downloads=_scaled(visit.downloads, cfg.downloads_cap, DOWNLOADS_TOP),
    )


def extract_all(visits: Sequence[Visit], cfg: FeatureConfig) -> list[FeatureVector]:
    return [extract(v, cfg) for v in visits]


def to_matrix(vectors: Iterable[FeatureVector]) -> np.ndarray:
    rows = [v.as_tuple() for v in vectors]
    return np.asarray(rows, dtype=float).reshape(len(rows), len(FEATURE_NAMES))


def _fmt(value: float) -> str:
    return repr(float(value))


def write_feature_csv(path, visits: Sequence[Visit], vectors: Sequence[FeatureVector]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for visit, vec in zip(visits, vectors):
            writer.writerow([visit.host, visit.start.isoformat()] + [_fmt(x) for x in vec.as_tuple()])


def read_feature_csv(path) -> tuple[list[tuple[str, str]], np.ndarray]:
    """Read a feature CSV; returns ``[(host, start), ...]`` and the n x 5 matrix."""
    keys, rows = [], []
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != CSV_HEADER:
                raise DataError(f"{path}: expected header {','.join(CSV_HEADER)}")
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(CSV_HEADER):
                    raise DataError(f"{path}:{lineno}: expected {len(CSV_HEADER)} columns")
                keys.append((row[0], row[1]))
                try:
                    rows.append([float(x) for x in row[2:]])
                except ValueError:
                    raise DataError(f"{path}:{lineno}: non-numeric feature") from None
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    return keys, np.asarray(rows, dtype=float).reshape(len(rows), len(FEATURE_NAMES))
