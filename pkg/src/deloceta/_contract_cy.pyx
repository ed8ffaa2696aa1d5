# cython: language_level=3
"""Compiled tuple-contraction kernel.

Computes  sum over (g_0..g_n) of  tr(A_0(g_0) ... A_n(g_n)) * phi(g_0..g_n)
with the cochain given densely over element ids. Partial products are
kept on a stack and only recomputed below the slot the odometer bumped,
and nothing of size |G|^(n+1) is ever materialized (unlike the numpy
fallback, which builds the full trace tensor).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def contract(list supports, list mats, cnp.ndarray[cnp.complex128_t, ndim=1] phi_flat, int order, int nmat):
    """supports: list of int arrays of element ids, one per tensor slot;
    mats: matching list of complex (s_i, N, N) arrays; phi_flat: dense
    cochain over ids, C-order flattened; returns a Python complex."""
    cdef int slots = len(supports)
    cdef int N = nmat
    cdef int s, i, j, k, lvl
    if slots > 16:
        raise ValueError("contraction kernel supports at most 16 tensor slots")
    cdef Py_ssize_t max_s = 0
    for s in range(slots):
        if len(supports[s]) == 0:
            return 0j
        max_s = max(max_s, len(supports[s]))

    # pad per-slot data into contiguous blocks for pure-C inner loops
    cdef cnp.ndarray[cnp.int64_t, ndim=2] sup = np.zeros((slots, max_s), dtype=np.int64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=4] mat = np.zeros((slots, max_s, N, N), dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sizes = np.zeros(slots, dtype=np.int64)
    for s in range(slots):
        arr = np.asarray(supports[s], dtype=np.int64)
        sizes[s] = arr.shape[0]
        sup[s, : arr.shape[0]] = arr
        mat[s, : arr.shape[0]] = np.asarray(mats[s], dtype=np.complex128)

    cdef cnp.int64_t[:, :] sup_v = sup
    cdef cnp.complex128_t[:, :, :, :] mat_v = mat
    cdef cnp.int64_t[:] sizes_v = sizes
    cdef cnp.complex128_t[:] phi = phi_flat

    cdef cnp.ndarray[cnp.complex128_t, ndim=3] prods = np.zeros((slots, N, N), dtype=np.complex128)
    cdef cnp.complex128_t[:, :, :] pr = prods
    cdef Py_ssize_t[16] pos
    for s in range(slots):
        pos[s] = 0

    cdef cnp.complex128_t total = 0
    cdef cnp.complex128_t tr, phival, acc
    cdef long idx
    cdef int top = 0
    while True:
        for lvl in range(top, slots):
            if lvl == 0:
                for i in range(N):
                    for j in range(N):
                        pr[0, i, j] = mat_v[0, pos[0], i, j]
            else:
                for i in range(N):
                    for j in range(N):
                        acc = 0
                        for k in range(N):
                            acc = acc + pr[lvl - 1, i, k] * mat_v[lvl, pos[lvl], k, j]
                        pr[lvl, i, j] = acc
        idx = 0
        for s in range(slots):
            idx = idx * order + sup_v[s, pos[s]]
        phival = phi[idx]
        if phival != 0:
            tr = 0
            for i in range(N):
                tr = tr + pr[slots - 1, i, i]
            total = total + tr * phival
        s = slots - 1
        while s >= 0:
            pos[s] += 1
            if pos[s] < sizes_v[s]:
                break
            pos[s] = 0
            s -= 1
        if s < 0:
            break
        top = s
    return complex(total)
