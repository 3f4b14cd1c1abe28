"""Kernel backend selection.

The numba backend is used when available; set ``RECA_BACKEND=numpy`` to force
the pure-numpy fallback or ``RECA_BACKEND=numba`` to require the compiled one.
Both backends compute bit-identical results, so experiment output never
depends on the choice; it only affects speed.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_numpy


def get_backend(name: str) -> ModuleType:
    """Return a kernel backend module by name ('numpy' or 'numba')."""
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba

        return _kernels_numba
    raise ValueError(f"unknown kernel backend {name!r}")


def _select() -> ModuleType:
    requested = os.environ.get("RECA_BACKEND", "").strip().lower()
    if requested == "numpy":
        return _kernels_numpy
    if requested == "numba":
        return get_backend("numba")
    if requested:
        raise ValueError(
            f"RECA_BACKEND must be 'numba' or 'numpy', got {requested!r}"
        )
    try:
        return get_backend("numba")
    except ImportError:
        return _kernels_numpy


kernels = _select()
BACKEND_NAME: str = kernels.BACKEND_NAME
