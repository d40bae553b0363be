"""Model, membership and fit-report files."""

from __future__ import annotations

import csv
import json

import numpy as np

from ..errors import DataError, IoFailure
from .core import ClusterModel, FitReport


def model_to_dict(model: ClusterModel, report: FitReport | None = None) -> dict:
    out = {
        "method": model.method,
        "m": model.m,
        "sigma": model.sigma,
        "centers": model.centers.tolist(),
    }
    if report is not None:
        out["convergence"] = {
            "iterations": report.iterations,
            "converged": report.converged,
            "final_delta": report.final_delta,
            "final_objective": report.objective_trace[-1] if report.objective_trace else None,
        }
    return out


def save_model(path, model: ClusterModel, report: FitReport | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model, report), fh, indent=2)
        fh.write("\n")


def load_model(path) -> ClusterModel:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: not a model file ({exc})") from None
    try:
        return ClusterModel(centers=np.asarray(raw["centers"], dtype=float), m=raw["m"],
                            method=raw["method"], sigma=raw.get("sigma"))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"{path}: invalid model ({exc})") from None


def write_memberships(path, U: np.ndarray) -> None:
    """CSV ``point_index,u_1,...,u_c`` with one row per point."""
    c, n = U.shape
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["point_index"] + [f"u_{i + 1}" for i in range(c)])
        for j in range(n):
            writer.writerow([j] + [repr(float(x)) for x in U[:, j]])


def read_memberships(path) -> np.ndarray:
    """Inverse of :func:`write_memberships`; returns the (c, n) matrix."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows or not rows[0] or rows[0][0] != "point_index":
        raise DataError(f"{path}: expected header point_index,u_1,...")
    c = len(rows[0]) - 1
    if c < 1:
        raise DataError(f"{path}: no membership columns")
    body = rows[1:]
    U = np.empty((c, len(body)))
    for j, row in enumerate(body):
        if len(row) != c + 1 or row[0] != str(j):
            raise DataError(f"{path}: row {j + 2} malformed or out of order")
        try:
            U[:, j] = [float(x) for x in row[1:]]
        except ValueError:
            raise DataError(f"{path}: row {j + 2} has a non-numeric membership") from None
    return U


def format_report(report: FitReport, model: ClusterModel) -> str:
    lines = [
        f"method: {model.method}",
        f"clusters: {model.n_clusters}",
        f"m: {model.m!r}",
        f"sigma: {model.sigma!r}",
        f"iterations: {report.iterations}",
        f"converged: {str(report.converged).lower()}",
        f"final_delta: {report.final_delta!r}",
        "objective_trace:",
    ]
    lines.extend(f"  {i + 1} {v!r}" for i, v in enumerate(report.objective_trace))
    return "\n".join(lines) + "\n"
