"""Kernel backend selection.

The compiled Cython kernels are used when the extension was built; the
numpy kernels are the fallback. Set ``LEARNERCLUST_BACKEND=python`` (or
``cython``) to force a choice before import, or call :func:`set_backend`.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_MODULES = {"python": _pykernels}
if _ckernels is not None:
    _MODULES["cython"] = _ckernels


def available_backends():
    return tuple(_MODULES)


def _initial():
    wanted = os.environ.get("LEARNERCLUST_BACKEND", "auto").strip().lower()
    if wanted in ("", "auto"):
        return "cython" if "cython" in _MODULES else "python"
    if wanted not in _MODULES:
        raise ImportError(f"LEARNERCLUST_BACKEND={wanted!r} is not available; "
                          f"choose from {sorted(_MODULES)}")
    return wanted


_active = _initial()
kernels = _MODULES[_active]


def get_backend():
    return _active


def set_backend(name):
    """Switch the active kernels; returns the previously active backend name."""
    global _active, kernels
    if name not in _MODULES:
        raise ValueError(f"backend {name!r} not available; choose from {sorted(_MODULES)}")
    previous = _active
    _active = name
    kernels = _MODULES[name]
    return previous
