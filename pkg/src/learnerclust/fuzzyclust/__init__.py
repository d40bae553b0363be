"""Fuzzy c-means (FCM) and Gaussian-kernel fuzzy c-means (KFCM).

The inner loops run in a compiled Cython extension when it is available
and in numpy otherwise; see :func:`get_backend`.
"""

from ._backend import available_backends, get_backend, set_backend
from .core import (
    FCM,
    FLOOR,
    KFCM,
    METHODS,
    ClusterModel,
    FitReport,
    as_points,
    default_sigma,
    fcm_centers,
    fcm_memberships,
    fcm_objective,
    fit,
    gaussian_kernel,
    init_membership,
    kernel_matrix,
    kfcm_centers,
    kfcm_memberships,
    kfcm_objective,
)
from .export import (
    format_report,
    load_model,
    model_to_dict,
    read_memberships,
    save_model,
    write_memberships,
)

__all__ = [
    "FCM", "KFCM", "METHODS", "FLOOR", "ClusterModel", "FitReport",
    "as_points", "default_sigma", "fcm_centers", "fcm_memberships", "fcm_objective",
    "fit", "gaussian_kernel", "init_membership", "kernel_matrix", "kfcm_centers",
    "kfcm_memberships", "kfcm_objective",
    "available_backends", "get_backend", "set_backend",
    "format_report", "load_model", "model_to_dict", "read_memberships", "save_model",
    "write_memberships",
]
