"""Backend switch between numba-compiled kernels and plain numpy.

Set ``GRAPHEA_BACKEND=numpy`` to force the numpy path. The default is
``numba`` when it can be imported.
"""

from __future__ import annotations

import os

_requested = os.environ.get("GRAPHEA_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"GRAPHEA_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda fn: fn


USE_NUMBA = HAS_NUMBA and _requested == "numba"
BACKEND = "numba" if USE_NUMBA else "numpy"

__all__ = ["BACKEND", "HAS_NUMBA", "USE_NUMBA", "njit"]
