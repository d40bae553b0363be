"""Sure / May-Be regions and per-region behaviour profiles.

A point whose top membership reaches ``theta_sure`` sits in the Sure
area of that cluster. Otherwise it belongs to the May-Be overlap of every
cluster holding at least ``theta_member`` of its membership. Profiles
report the mean feature vector and size of every region, laid out like
the usual Regular / Workers / Bad / R&W / R&B / W&B / R&W&B table.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidRule, ShapeMismatch
from .features import DOWNLOADS_COL, FEATURE_NAMES, HITS_COL

REGULAR, WORKERS, BAD = "Regular", "Workers", "Bad"
# Display order of the named behaviour classes.
_CANONICAL = {REGULAR: 0, WORKERS: 1, BAD: 2}
TABLE_COLUMNS = ("Camp.", "Time", "Lab", "Hits", "Req.", "Size")


@dataclass(frozen=True)
class RegionRule:
    theta_sure: float = 0.6
    theta_member: float = 0.25

    def __post_init__(self):
        if not 0.5 < self.theta_sure <= 1:
            raise InvalidRule(f"theta_sure must lie in (0.5, 1], got {self.theta_sure}")
        if not 0 < self.theta_member <= 0.5:
            raise InvalidRule(f"theta_member must lie in (0, 0.5], got {self.theta_member}")


@dataclass(frozen=True)
class RegionAssignment:
    point_index: int
    region: tuple  # sorted cluster indices

    @property
    def sure(self) -> bool:
        return len(self.region) == 1


@dataclass(frozen=True)
class ClusterProfile:
    region_label: str
    region: tuple
    means: Optional[tuple]
    size: int


def assign_regions(U, rule: RegionRule = RegionRule()) -> list[RegionAssignment]:
    U = np.asarray(U, dtype=float)
    if U.ndim != 2:
        raise ShapeMismatch(f"membership matrix must be 2-D, got {U.shape}")
    top = U.argmax(axis=0)
    out = []
    for j in range(U.shape[1]):
        col = U[:, j]
        if col[top[j]] >= rule.theta_sure:
            region = (int(top[j]),)
        else:
            region = tuple(int(i) for i in np.flatnonzero(col >= rule.theta_member))
            if not region:
                region = (int(top[j]),)
        out.append(RegionAssignment(j, region))
    return out


def name_clusters(model) -> list[str]:
    """Behaviour names per cluster index, from the centers' hits and downloads.

    With three clusters the center with the largest hits + downloads is
    "Bad", the smallest "Workers" and the remaining one "Regular". Any
    other cluster count yields ``C1..Cc`` numbered by increasing download
    coordinate. Ties break on downloads, then on cluster index.
    """
    centers = np.asarray(getattr(model, "centers", model), dtype=float)
    if centers.ndim != 2 or centers.shape[1] != len(FEATURE_NAMES):
        raise ShapeMismatch(f"centers must be (c, {len(FEATURE_NAMES)}), got {centers.shape}")
    c = centers.shape[0]
    hits, downloads = centers[:, HITS_COL], centers[:, DOWNLOADS_COL]
    if c == 3:
        order = sorted(range(c), key=lambda i: (hits[i] + downloads[i], downloads[i], i))
        names = [""] * c
        names[order[0]], names[order[1]], names[order[2]] = WORKERS, REGULAR, BAD
        return names
    order = sorted(range(c), key=lambda i: (downloads[i], i))
    names = [""] * c
    for rank, i in enumerate(order):
        names[i] = f"C{rank + 1}"
    return names


def display_order(labels: Sequence[str]) -> list[int]:
    """Cluster indices in table order: Regular, Workers, Bad, then the rest by name."""
    return sorted(range(len(labels)),
                  key=lambda i: (_CANONICAL.get(labels[i], len(_CANONICAL)), labels[i], i))


def _short(labels):
    initials = [name[:1] for name in labels]
    if len(set(initials)) == len(initials) and all(initials):
        return initials
    return list(labels)


def region_label(region: Sequence[int], labels: Sequence[str]) -> str:
    if len(region) == 1:
        return labels[region[0]]
    rank = {i: r for r, i in enumerate(display_order(labels))}
    short = _short(labels)
    return "&".join(short[i] for i in sorted(region, key=rank.get))


def all_regions(labels: Sequence[str], seen=()) -> list[tuple]:
    """Singletons, then overlaps by size in table order.

    Every overlap is listed when there are at most four clusters;
    beyond that only the overlaps present in ``seen`` are.
    """
    order = display_order(labels)
    rank = {i: r for r, i in enumerate(order)}
    regions = [(i,) for i in order]
    seen = {tuple(sorted(s)) for s in seen}
    for size in range(2, len(labels) + 1):
        for combo in combinations(order, size):
            key = tuple(sorted(combo))
            if len(labels) <= 4 or key in seen:
                regions.append(key)
    regions[len(order):] = sorted(regions[len(order):],
                                  key=lambda r: (len(r), sorted(rank[i] for i in r)))
    return regions


def profile(assignments: Sequence[RegionAssignment], X, labels: Sequence[str]) -> list[ClusterProfile]:
    X = np.asarray(X, dtype=float)
    if len(assignments) != len(X):
        raise ShapeMismatch(f"{len(assignments)} assignments for {len(X)} points")
    members = {}
    for a in assignments:
        if not 0 <= a.point_index < len(X):
            raise ShapeMismatch(f"point index {a.point_index} out of range")
        members.setdefault(a.region, []).append(a.point_index)

    out = []
    for region in all_regions(labels, members):
        idx = members.get(region, [])
        means = tuple(float(v) for v in X[idx].mean(axis=0)) if idx else None
        out.append(ClusterProfile(region_label(region, labels), region, means, len(idx)))
    return out


def format_profile_table(profiles: Sequence[ClusterProfile], title: str = "") -> str:
    """Aligned text table: class name, the five feature means, size."""
    header = ("Class Name",) + TABLE_COLUMNS
    rows = []
    for p in profiles:
        cells = ["-"] * 5 if p.means is None else [f"{v:.3g}" for v in p.means]
        rows.append((p.region_label, *cells, str(p.size)))
    widths = [max(len(r[k]) for r in rows + [header]) for k in range(len(header))]
    fmt = lambda r: "  ".join(s.ljust(w) if k == 0 else s.rjust(w)
                              for k, (s, w) in enumerate(zip(r, widths)))
    lines = [title] if title else []
    lines.append(fmt(header))
    lines.append("  ".join("-" * w for w in widths))
    lines.extend(fmt(r) for r in rows)
    return "\n".join(lines) + "\n"


def write_profile_csv(path, profiles: Sequence[ClusterProfile]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("region",) + FEATURE_NAMES + ("size",))
        for p in profiles:
            means = [""] * len(FEATURE_NAMES) if p.means is None else [repr(v) for v in p.means]
            writer.writerow([p.region_label, *means, p.size])


REGION_CSV_HEADER = ("point_index", "host", "start", "region", "sure")


def write_region_csv(path, assignments: Sequence[RegionAssignment], keys, labels) -> None:
    """One row per point: its key (host, start), region label and Sure flag."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REGION_CSV_HEADER)
        for a in assignments:
            host, start = keys[a.point_index]
            writer.writerow([a.point_index, host, start, region_label(a.region, labels),
                             int(a.sure)])
