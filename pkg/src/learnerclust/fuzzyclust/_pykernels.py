"""Pure numpy implementations of the clustering hot loops.

Every function here has a twin in ``_ckernels.pyx`` with the same
signature and semantics. Arrays are C-contiguous float64: ``X`` is
(n, d), ``centers`` is (c, d), memberships and dissimilarities are (c, n).
"""

import numpy as np


def sq_distances(X, centers):
    """Squared Euclidean distances, shape (c, n)."""
    diff = centers[:, None, :] - X[None, :, :]
    return np.einsum("cnd,cnd->cn", diff, diff)


def memberships(dissim, m, floor):
    """Memberships proportional to ``dissim ** (-1/(m-1))``, columns summing to one.

    Entries below ``floor`` count as coincident with their center: the
    column's unit mass is then split equally among those clusters.
    """
    c, n = dissim.shape
    hit = dissim < floor
    coincident = hit.any(axis=0)

    u = np.empty((c, n))
    safe = np.maximum(dissim, floor)
    # ratios against the column minimum stay in (0, 1] and cannot overflow
    ratio = safe.min(axis=0) / safe
    w = ratio ** (1.0 / (m - 1.0))
    u[:] = w / w.sum(axis=0)

    if coincident.any():
        h = hit[:, coincident].astype(float)
        u[:, coincident] = h / h.sum(axis=0)
    return u


def weighted_means(X, W):
    """Row-weighted means of ``X``; returns (means (c, d), row weight sums (c,))."""
    total = W.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        means = (W @ X) / total[:, None]
    return means, total


def weighted_objective(U, dissim, m):
    """``sum_ij U_ij**m * dissim_ij``."""
    return float(np.sum(U ** m * dissim))
