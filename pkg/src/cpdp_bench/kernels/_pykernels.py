"""Numpy implementations of the distance kernels.

Fallback backend used when the compiled extension is unavailable (or when
forced via CPDP_BENCH_PURE_PY=1). Every function here must produce results
bitwise identical to the compiled backend: squared distances are accumulated
feature by feature, in feature order, exactly as the C loops do.
"""

import numpy as np

# Row block size used to bound temporary matrices in the two-pass routines.
_BLOCK = 512


def _sq_dists(a, b):
    # Accumulate (a[i,f] - b[j,f])^2 over f sequentially; one FP add per
    # feature keeps the rounding identical to the compiled inner loop.
    na, p = a.shape
    nb = b.shape[0]
    out = np.zeros((na, nb), dtype=np.float64)
    diff = np.empty((na, nb), dtype=np.float64)
    for f in range(p):
        np.subtract.outer(a[:, f], b[:, f], out=diff)
        diff *= diff
        out += diff
    return out


def pairwise_sq_dists(a, b):
    """Full matrix of squared Euclidean distances between rows of a and b."""
    return _sq_dists(a, b)


def knn_indices(a, b, k, exclude=None):
    """Indices of the k nearest rows of b for each row of a.

    Ties are broken by the lower b-row index. ``exclude`` optionally gives,
    per query row, one b-row index to leave out of the candidate set.
    """
    na = a.shape[0]
    nb = b.shape[0]
    k_eff = min(k, nb - (1 if exclude is not None else 0))
    out = np.empty((na, k_eff), dtype=np.int64)
    for start in range(0, na, _BLOCK):
        stop = min(start + _BLOCK, na)
        d = _sq_dists(a[start:stop], b)
        if exclude is not None:
            d[np.arange(stop - start), exclude[start:stop]] = np.inf
        order = np.argsort(d, axis=1, kind="stable")
        out[start:stop] = order[:, :k_eff]
    return out


def tomek_majority_mask(x, minority):
    """Majority rows participating in a cross-class minimally-distanced pair.

    Row i (majority) is flagged iff some minority row j attains both rows'
    minimum distance to any other row: d(i,j) == m_i == m_j.
    """
    n = x.shape[0]
    mask = np.zeros(n, dtype=bool)
    if n < 2 or minority.all() or (~minority).all():
        return mask
    m = np.empty(n, dtype=np.float64)
    for start in range(0, n, _BLOCK):
        stop = min(start + _BLOCK, n)
        d = _sq_dists(x[start:stop], x)
        d[np.arange(stop - start), np.arange(start, stop)] = np.inf
        m[start:stop] = d.min(axis=1)
    maj_idx = np.flatnonzero(~minority)
    min_idx = np.flatnonzero(minority)
    m_minority = m[min_idx]
    for start in range(0, maj_idx.size, _BLOCK):
        rows = maj_idx[start : start + _BLOCK]
        d = _sq_dists(x[rows], x[min_idx])
        linked = (d == m[rows, None]) & (d == m_minority[None, :])
        mask[rows] = linked.any(axis=1)
    return mask
