"""Distance kernels with a compiled core and a numpy fallback.

The compiled backend (Cython) is used when importable; otherwise, or when
CPDP_BENCH_PURE_PY=1 is set, the numpy implementation takes over. Both
backends produce bitwise-identical results, so the choice only affects
speed (see benchmarks/bench_kernels.py).
"""

import os

import numpy as np

__all__ = [
    "BACKEND",
    "knn_indices",
    "pairwise_sq_dists",
    "tomek_majority_mask",
    "using_compiled",
]

_force_py = os.environ.get("CPDP_BENCH_PURE_PY", "").strip().lower() in {"1", "true", "yes"}
if _force_py:
    from . import _pykernels as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        from . import _pykernels as _impl  # type: ignore[no-redef]

        BACKEND = "numpy"


def using_compiled():
    """True when the compiled extension backs the kernels."""
    return BACKEND == "c"


def _as_matrix(x, name):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {x.shape}")
    return x


def pairwise_sq_dists(a, b):
    """Squared Euclidean distances between all rows of ``a`` and ``b``.

    Returns a float64 matrix of shape (len(a), len(b)).
    """
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"feature dimensions differ: {a.shape[1]} vs {b.shape[1]}")
    return _impl.pairwise_sq_dists(a, b)


def knn_indices(a, b, k, exclude=None):
    """Row indices of the ``k`` nearest rows of ``b`` per row of ``a``.

    Nearest first; exact distance ties are broken by the lower b-row index.
    ``exclude``, when given, is one b-row index per query row to skip (used
    for self-exclusion). k is clamped to the number of available candidates;
    the result has shape (len(a), k_eff).
    """
    a = _as_matrix(a, "a")
    b = _as_matrix(b, "b")
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"feature dimensions differ: {a.shape[1]} vs {b.shape[1]}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if exclude is not None:
        exclude = np.ascontiguousarray(exclude, dtype=np.int64)
        if exclude.shape != (a.shape[0],):
            raise ValueError("exclude must hold one b-row index per query row")
        if exclude.size and (exclude.min() < 0 or exclude.max() >= b.shape[0]):
            raise ValueError("exclude entries out of range")
        if b.shape[0] < 2:
            raise ValueError("need at least 2 candidate rows when excluding one")
    return _impl.knn_indices(a, b, int(k), exclude)


def tomek_majority_mask(x, minority):
    """Boolean mask of majority rows that sit in a cross-class Tomek link.

    A pair (i majority, j minority) is a link iff no other row is strictly
    closer to either member: d(i,j) == min_other(i) == min_other(j).
    """
    x = _as_matrix(x, "x")
    minority = np.ascontiguousarray(minority, dtype=bool)
    if minority.shape != (x.shape[0],):
        raise ValueError("minority mask must hold one flag per row")
    if BACKEND == "c":
        return _impl.tomek_majority_mask(x, minority.view(np.uint8))
    return _impl.tomek_majority_mask(x, minority)
