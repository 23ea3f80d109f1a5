# cython: language_level=3
"""Compiled distance kernels.

Hot inner loops of the pipeline: dense pairwise squared Euclidean distances,
fused k-nearest-neighbour selection, and Tomek-link detection. Semantics and
floating-point rounding match cpdp_bench.kernels._pykernels bit for bit
(sequential accumulation over features, no FMA contraction).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline double _sq_dist(const double[:, ::1] a, const double[:, ::1] b,
                            Py_ssize_t i, Py_ssize_t j, Py_ssize_t p) noexcept nogil:
    cdef double acc = 0.0
    cdef double d
    cdef Py_ssize_t f
    for f in range(p):
        d = a[i, f] - b[j, f]
        acc += d * d
    return acc


def pairwise_sq_dists(const double[:, ::1] a, const double[:, ::1] b):
    """Full matrix of squared Euclidean distances between rows of a and b."""
    cdef Py_ssize_t na = a.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t p = a.shape[1]
    out_arr = np.empty((na, nb), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(na):
            for j in range(nb):
                out[i, j] = _sq_dist(a, b, i, j, p)
    return out_arr


def knn_indices(const double[:, ::1] a, const double[:, ::1] b, Py_ssize_t k,
                exclude=None):
    """Indices of the k nearest rows of b for each row of a.

    Ties are broken by the lower b-row index. ``exclude`` optionally gives,
    per query row, one b-row index to leave out of the candidate set.
    """
    cdef Py_ssize_t na = a.shape[0]
    cdef Py_ssize_t nb = b.shape[0]
    cdef Py_ssize_t p = a.shape[1]
    cdef bint has_excl = exclude is not None
    cdef Py_ssize_t k_eff = min(k, nb - (1 if has_excl else 0))
    cdef const long long[::1] excl = exclude if has_excl else None

    out_arr = np.empty((na, k_eff), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr
    best_d_arr = np.empty(k_eff, dtype=np.float64)
    best_j_arr = np.empty(k_eff, dtype=np.int64)
    cdef double[::1] best_d = best_d_arr
    cdef long long[::1] best_j = best_j_arr

    cdef Py_ssize_t i, j, t, pos, filled
    cdef double d
    with nogil:
        for i in range(na):
            filled = 0
            for j in range(nb):
                if has_excl and j == <Py_ssize_t> excl[i]:
                    continue
                d = _sq_dist(a, b, i, j, p)
                if filled == k_eff and d >= best_d[k_eff - 1]:
                    # candidates arrive with increasing j, so an equal
                    # distance never displaces the current last entry
                    continue
                if filled < k_eff:
                    pos = filled
                    filled += 1
                else:
                    pos = k_eff - 1
                # insert after any equal distances: stored ties have lower j
                while pos > 0 and best_d[pos - 1] > d:
                    best_d[pos] = best_d[pos - 1]
                    best_j[pos] = best_j[pos - 1]
                    pos -= 1
                best_d[pos] = d
                best_j[pos] = j
            for t in range(k_eff):
                out[i, t] = best_j[t]
    return out_arr


def tomek_majority_mask(const double[:, ::1] x, const cnp.uint8_t[::1] minority):
    """Majority rows participating in a cross-class minimally-distanced pair.

    Row i (majority) is flagged iff some minority row j attains both rows'
    minimum distance to any other row: d(i,j) == m_i == m_j.
    """
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t p = x.shape[1]
    mask_arr = np.zeros(n, dtype=bool)
    cdef cnp.uint8_t[::1] mask = mask_arr.view(np.uint8)
    if n < 2:
        return mask_arr

    m_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] m = m_arr
    cdef Py_ssize_t i, j
    cdef double d, best
    cdef bint any_min = False, any_maj = False
    for i in range(n):
        if minority[i]:
            any_min = True
        else:
            any_maj = True
    if not (any_min and any_maj):
        return mask_arr

    with nogil:
        for i in range(n):
            best = -1.0
            for j in range(n):
                if j == i:
                    continue
                d = _sq_dist(x, x, i, j, p)
                if best < 0.0 or d < best:
                    best = d
            m[i] = best
        for i in range(n):
            if minority[i]:
                continue
            for j in range(n):
                if not minority[j]:
                    continue
                d = _sq_dist(x, x, i, j, p)
                if d == m[i] and d == m[j]:
                    mask[i] = 1
                    break
    return mask_arr
