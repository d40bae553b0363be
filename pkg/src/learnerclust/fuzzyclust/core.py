"""Fuzzy c-means and Gaussian-kernel fuzzy c-means.

Shapes used throughout: data ``X`` is (n, d), memberships ``U`` are
(c, n) with columns summing to one, ``centers`` are (c, d).

FCM minimizes ``sum_ij u_ij**m * ||x_j - c_i||**2``. KFCM replaces the
squared distance by the kernel-induced ``2 * (1 - K(x_j, c_i))`` with
``K(x, c) = exp(-||x - c||**2 / sigma**2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import DegenerateCluster, InvalidShape, ShapeMismatch
from . import _backend

FCM = "fcm"
KFCM = "kfcm"
METHODS = (FCM, KFCM)

# Distances (and 1 - K values) below this count as "at the center".
FLOOR = 1e-12


@dataclass
class ClusterModel:
    centers: np.ndarray
    m: float = 2.0
    method: str = FCM
    sigma: Optional[float] = None

    def __post_init__(self):
        self.centers = np.ascontiguousarray(self.centers, dtype=float)
        self.method = _check_method(self.method)
        if self.centers.ndim != 2 or self.centers.shape[0] < 2 or self.centers.shape[1] < 1:
            raise InvalidShape(f"centers must be (c >= 2, d >= 1), got {self.centers.shape}")
        if not self.m > 1:
            raise ValueError(f"fuzzifier m must exceed 1, got {self.m}")
        if self.method == KFCM and not (self.sigma is not None and self.sigma > 0):
            raise ValueError("KFCM needs a positive sigma")

    @property
    def n_clusters(self) -> int:
        return self.centers.shape[0]


@dataclass
class FitReport:
    iterations: int = 0
    objective_trace: list = field(default_factory=list)
    converged: bool = False
    final_delta: float = float("inf")


def _check_method(method):
    key = str(method).lower()
    if key not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    return key


def as_points(X) -> np.ndarray:
    """Coerce feature vectors / sequences / arrays to a C-contiguous (n, d) array."""
    if isinstance(X, (list, tuple)) and X and hasattr(X[0], "as_tuple"):
        X = [v.as_tuple() for v in X]
    X = np.ascontiguousarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ShapeMismatch(f"data must be 2-D (n, d), got shape {X.shape}")
    return X


def _check_membership(U, c, n):
    U = np.ascontiguousarray(U, dtype=float)
    if U.shape != (c, n):
        raise ShapeMismatch(f"membership matrix must be {(c, n)}, got {U.shape}")
    return U


def _check_centers(X, centers):
    centers = np.ascontiguousarray(centers, dtype=float)
    if centers.ndim != 2 or centers.shape[1] != X.shape[1]:
        raise ShapeMismatch(f"centers {centers.shape} do not match data dimension {X.shape[1]}")
    return centers


def init_membership(n: int, c: int, seed: int = 0) -> np.ndarray:
    """Random (c, n) membership matrix with unit column sums."""
    if c < 2 or n < c:
        raise InvalidShape(f"need n >= c >= 2, got n={n}, c={c}")
    rng = np.random.default_rng(seed)
    U = rng.random((c, n))
    return U / U.sum(axis=0)


def gaussian_kernel(x, c, sigma: float) -> float:
    x = np.asarray(x, dtype=float)
    c = np.asarray(c, dtype=float)
    return float(np.exp(-np.sum((x - c) ** 2) / sigma ** 2))


def kernel_matrix(X, centers, sigma: float) -> np.ndarray:
    """``K(x_j, c_i)`` for every center/point pair, shape (c, n)."""
    X = as_points(X)
    return np.exp(-_backend.kernels.sq_distances(X, _check_centers(X, centers)) / sigma ** 2)


def _one_minus_kernel(sq_dist, sigma):
    # expm1 keeps 1 - K accurate when ||x - c|| << sigma
    return -np.expm1(-sq_dist / sigma ** 2)


def fcm_objective(X, U, model: ClusterModel) -> float:
    X = as_points(X)
    centers = _check_centers(X, model.centers)
    U = _check_membership(U, centers.shape[0], X.shape[0])
    k = _backend.kernels
    return k.weighted_objective(U, k.sq_distances(X, centers), float(model.m))


def kfcm_objective(X, U, model: ClusterModel) -> float:
    X = as_points(X)
    centers = _check_centers(X, model.centers)
    U = _check_membership(U, centers.shape[0], X.shape[0])
    k = _backend.kernels
    dissim = _one_minus_kernel(k.sq_distances(X, centers), model.sigma)
    return 2.0 * k.weighted_objective(U, dissim, float(model.m))


def _weighted_centers(X, W, iteration=None):
    means, totals = _backend.kernels.weighted_means(X, np.ascontiguousarray(W))
    empty = np.flatnonzero(totals == 0)
    if empty.size:
        raise DegenerateCluster(int(empty[0]), iteration)
    return means


def fcm_centers(X, U, m: float) -> np.ndarray:
    """Centers as ``u**m``-weighted means of the data."""
    X = as_points(X)
    U = np.ascontiguousarray(U, dtype=float)
    if U.ndim != 2 or U.shape[1] != X.shape[0]:
        raise ShapeMismatch(f"membership matrix {U.shape} does not match {X.shape[0]} points")
    return _weighted_centers(X, U ** m)


def fcm_memberships(X, centers, m: float) -> np.ndarray:
    X = as_points(X)
    centers = _check_centers(X, centers)
    k = _backend.kernels
    return k.memberships(k.sq_distances(X, centers), float(m), FLOOR * FLOOR)


def kfcm_memberships(X, centers, model: ClusterModel) -> np.ndarray:
    X = as_points(X)
    centers = _check_centers(X, centers)
    k = _backend.kernels
    dissim = _one_minus_kernel(k.sq_distances(X, centers), model.sigma)
    return k.memberships(dissim, float(model.m), FLOOR)


def kfcm_centers(X, U, model: ClusterModel) -> np.ndarray:
    """One fixed-point step of the kernel center update.

    The kernel weights are evaluated against ``model.centers`` (the
    previous centers), so repeated calls iterate towards the fixed point.
    """
    X = as_points(X)
    centers = _check_centers(X, model.centers)
    U = _check_membership(U, centers.shape[0], X.shape[0])
    K = np.exp(-_backend.kernels.sq_distances(X, centers) / model.sigma ** 2)
    return _weighted_centers(X, U ** model.m * K)


def default_sigma(X, seed: int = 0, sample: int = 500) -> float:
    """Median pairwise distance over a seeded subsample of at most ``sample`` points."""
    X = as_points(X)
    if len(X) > sample:
        idx = np.sort(np.random.default_rng(seed).choice(len(X), size=sample, replace=False))
        X = X[idx]
    if len(X) < 2:
        return 1.0
    iu = np.triu_indices(len(X), k=1)
    diff = X[iu[0]] - X[iu[1]]
    med = float(np.median(np.sqrt(np.einsum("ij,ij->i", diff, diff))))
    return med if med > 0 else 1.0


def fit(X, c: int, method: str = FCM, m: float = 2.0, sigma: Optional[float] = None,
        eps: float = 1e-5, max_iter: int = 300, seed: int = 0, init=None,
        callback: Optional[Callable] = None):
    """Alternate center and membership updates until memberships settle.

    Each iteration updates the centers from the current memberships,
    records the objective, then recomputes the memberships. The loop stops
    when the largest membership change falls below ``eps`` or after
    ``max_iter`` iterations. KFCM starts its kernel center iteration from
    the plain weighted means of the initial memberships.

    ``init`` optionally supplies the initial (c, n) memberships; otherwise
    they are drawn with ``seed``. ``callback(iteration, U, centers)`` is
    called after every iteration.

    Returns ``(model, U, report)``.
    """
    X = as_points(X)
    n = X.shape[0]
    method = _check_method(method)
    if c < 2 or n < c:
        raise InvalidShape(f"need n >= c >= 2, got n={n}, c={c}")
    if not m > 1:
        raise ValueError(f"fuzzifier m must exceed 1, got {m}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    kfcm = method == KFCM
    if kfcm:
        sigma = default_sigma(X, seed) if sigma is None else float(sigma)
        if not sigma > 0:
            raise ValueError("sigma must be positive")

    U = init_membership(n, c, seed) if init is None else _check_membership(init, c, n).copy()
    m = float(m)
    k = _backend.kernels
    report = FitReport()
    centers = _weighted_centers(X, U ** m, iteration=0) if kfcm else None

    for it in range(1, max_iter + 1):
        Um = U ** m
        if kfcm:
            K = np.exp(-k.sq_distances(X, centers) / sigma ** 2)
            centers = _weighted_centers(X, Um * K, iteration=it)
            dissim = _one_minus_kernel(k.sq_distances(X, centers), sigma)
            report.objective_trace.append(2.0 * k.weighted_objective(U, dissim, m))
            U_new = k.memberships(dissim, m, FLOOR)
        else:
            centers = _weighted_centers(X, Um, iteration=it)
            dissim = k.sq_distances(X, centers)
            report.objective_trace.append(k.weighted_objective(U, dissim, m))
            U_new = k.memberships(dissim, m, FLOOR * FLOOR)

        report.final_delta = float(np.max(np.abs(U_new - U)))
        report.iterations = it
        U = U_new
        if callback is not None:
            callback(it, U, centers)
        if report.final_delta < eps:
            report.converged = True
            break

    model = ClusterModel(centers=centers, m=m, method=method, sigma=sigma if kfcm else None)
    return model, U, report
