"""Kernel backend selection.

The hot kernels (polytope hull distance / projection) exist in two builds
from the same source: a numba ``@njit`` build and a pure-numpy fallback.
``GAUGEKIT_BACKEND=numpy`` (or ``numba``) forces a backend; the default is
numba when importable.  ``benchmarks/bench_kernels.py`` compares the two.
"""

import os

from ._impl import make_kernels

_numpy_kernels = make_kernels(lambda f: f)


def _build_numba():
    import numba

    return make_kernels(numba.njit, numba.njit(parallel=True), numba.prange)


_requested = os.environ.get("GAUGEKIT_BACKEND", "").strip().lower()
if _requested in ("", "auto"):
    try:
        _kernels = _build_numba()
        BACKEND = "numba"
    except ImportError:
        _kernels = _numpy_kernels
        BACKEND = "numpy"
elif _requested == "numba":
    _kernels = _build_numba()
    BACKEND = "numba"
elif _requested == "numpy":
    _kernels = _numpy_kernels
    BACKEND = "numpy"
else:
    raise RuntimeError(f"GAUGEKIT_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

hull_project = _kernels["hull_project"]
hull_distances = _kernels["hull_distances"]
hull_projections = _kernels["hull_projections"]
polytope_gauge = _kernels["polytope_gauge"]


def numpy_kernels():
    """The fallback build, importable regardless of the selected backend."""
    return _numpy_kernels


def backend_name() -> str:
    return BACKEND
