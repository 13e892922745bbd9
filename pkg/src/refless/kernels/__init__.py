"""Similarity kernels with a compiled fast path and a NumPy fallback.

The backend is chosen once at import time: the Cython extension
`refless.kernels._fastmatch` is preferred when it was built, otherwise
the NumPy implementation in `pyfallback` is used. Set REFLESS_KERNEL to
``python`` or ``compiled`` to force a backend (``compiled`` raises if the
extension is unavailable).

Both backends expose the same four functions and the same numeric
conventions; `benchmarks/kernel_bench.py` compares their speed and
agreement.
"""

from __future__ import annotations

import os

from . import pyfallback


def load_backend(name: str):
    """Return the kernel module for ``name`` ('python' or 'compiled')."""
    if name == "python":
        return pyfallback
    if name == "compiled":
        from . import _fastmatch

        return _fastmatch
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    requested = os.environ.get("REFLESS_KERNEL", "auto").strip().lower()
    if requested in ("", "auto"):
        try:
            return load_backend("compiled")
        except ImportError:
            return pyfallback
    if requested in ("python", "compiled"):
        return load_backend(requested)
    raise ValueError(
        f"REFLESS_KERNEL={requested!r} not understood (use 'auto', 'python' or 'compiled')"
    )


_impl = _select()

BACKEND = _impl.BACKEND_NAME
unit_rows = _impl.unit_rows
cosine_matrix = _impl.cosine_matrix
match_maxima = _impl.match_maxima
self_masked_maxima = _impl.self_masked_maxima

__all__ = [
    "BACKEND",
    "cosine_matrix",
    "load_backend",
    "match_maxima",
    "self_masked_maxima",
    "unit_rows",
]
