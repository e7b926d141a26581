# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled n-gram cosine kernels.

Mirror of onomast._kernels_py with identical semantics; the merge walk and
summation order match the pure version so both backends agree bit-for-bit.
"""

from libc.math cimport sqrt

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "c"


def encode(str text, int n):
    """Pack a string's n-grams into sorted int64 codes with float64 counts."""
    cdef int m = len(text) - n + 1
    if m <= 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.float64)
    cdef dict counts = {}
    cdef int i, j
    cdef long long code
    for i in range(m):
        code = 0
        for j in range(n):
            code = (code << 7) | (ord(text[i + j]) & 0x7F)
        counts[code] = counts.get(code, 0) + 1
    ids = np.fromiter(sorted(counts), dtype=np.int64, count=len(counts))
    w = np.fromiter((counts[int(c)] for c in ids), dtype=np.float64, count=len(ids))
    return ids, w


cdef double _cosine_raw(const long long[:] ids_a, const double[:] w_a,
                        const long long[:] ids_b, const double[:] w_b) noexcept nogil:
    cdef Py_ssize_t la = ids_a.shape[0]
    cdef Py_ssize_t lb = ids_b.shape[0]
    if la == 0 or lb == 0:
        return 0.0
    cdef bint same = la == lb
    cdef Py_ssize_t k
    if same:
        for k in range(la):
            if ids_a[k] != ids_b[k] or w_a[k] != w_b[k]:
                same = False
                break
    if same:
        return 1.0
    cdef double na = 0.0, nb = 0.0, dot = 0.0, val
    cdef Py_ssize_t i = 0, j = 0
    for k in range(la):
        na += w_a[k] * w_a[k]
    for k in range(lb):
        nb += w_b[k] * w_b[k]
    while i < la and j < lb:
        if ids_a[i] < ids_b[j]:
            i += 1
        elif ids_b[j] < ids_a[i]:
            j += 1
        else:
            dot += w_a[i] * w_b[j]
            i += 1
            j += 1
    val = dot / (sqrt(na) * sqrt(nb))
    if val > 1.0:
        return 1.0
    if val < 0.0:
        return 0.0
    return val


def cosine(ids_a, w_a, ids_b, w_b):
    """Cosine of two sparse count vectors given as sorted (ids, weights)."""
    return _cosine_raw(ids_a, w_a, ids_b, w_b)


def cosine_many(ids_q, w_q, bank_ids, bank_w, offsets):
    """Cosine of one query vector against every row of a packed bank."""
    cdef const long long[:] q_ids = ids_q
    cdef const double[:] q_w = w_q
    cdef const long long[:] b_ids = bank_ids
    cdef const double[:] b_w = bank_w
    cdef const long long[:] offs = offsets
    cdef Py_ssize_t rows = offs.shape[0] - 1
    out = np.empty(rows, dtype=np.float64)
    cdef double[:] out_v = out
    cdef Py_ssize_t r, lo, hi
    with nogil:
        for r in range(rows):
            lo = <Py_ssize_t> offs[r]
            hi = <Py_ssize_t> offs[r + 1]
            out_v[r] = _cosine_raw(q_ids, q_w, b_ids[lo:hi], b_w[lo:hi])
    return out
