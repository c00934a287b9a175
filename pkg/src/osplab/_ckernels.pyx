# cython: language_level=3
"""Compiled inner loops. Every function here has a line-for-line twin in
``_pykernels`` and must return bit-identical results for identical inputs."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def osp_gillespie(int n, const double[:] exps, const double[:] unifs):
    """Run the oriented swap process over active edges only.

    ``exps`` are unit exponentials and ``unifs`` uniforms on [0, 1), one of
    each per swap; exactly n(n-1)/2 swaps happen. Returns 1-based swap edges
    and swap times.
    """
    cdef Py_ssize_t m_total = n * (n - 1) // 2
    if exps.shape[0] < m_total or unifs.shape[0] < m_total:
        raise ValueError("need n(n-1)/2 exponentials and uniforms")
    cdef cnp.ndarray[cnp.int64_t] perm_arr = np.arange(1, n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t] active_arr = np.arange(n - 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t] where_arr = np.arange(n - 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t] out_e = np.empty(m_total, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t] out_t = np.empty(m_total, dtype=np.float64)
    cdef cnp.int64_t[:] perm = perm_arr
    cdef cnp.int64_t[:] active = active_arr
    cdef cnp.int64_t[:] where = where_arr
    cdef cnp.int32_t[:] se = out_e
    cdef cnp.float64_t[:] st = out_t
    cdef Py_ssize_t n_active = n - 1
    cdef Py_ssize_t step, j, k, e, d, pos, last
    cdef double t = 0.0
    cdef cnp.int64_t tmp
    for step in range(m_total):
        t = t + exps[step] / <double>n_active
        j = <Py_ssize_t>(unifs[step] * <double>n_active)
        if j >= n_active:
            j = n_active - 1
        k = active[j]
        tmp = perm[k]
        perm[k] = perm[k + 1]
        perm[k + 1] = tmp
        se[step] = <cnp.int32_t>(k + 1)
        st[step] = t
        # refresh edges k-1, k, k+1 in this fixed order
        for d in range(-1, 2):
            e = k + d
            if e < 0 or e > n - 2:
                continue
            if perm[e] < perm[e + 1]:
                if where[e] < 0:
                    active[n_active] = e
                    where[e] = n_active
                    n_active += 1
            else:
                pos = where[e]
                if pos >= 0:
                    last = active[n_active - 1]
                    active[pos] = last
                    where[last] = pos
                    where[e] = -1
                    n_active -= 1
    return out_e, out_t


def osp_replay(int n, const cnp.int32_t[:] ring_edges, const double[:] ring_times):
    """Drive the process on [n] by an explicit ring sequence (1-based edges).

    Returns swap edges, swap times and the number of rings consumed; the
    replay stops at absorption.
    """
    cdef Py_ssize_t m_total = n * (n - 1) // 2
    cdef cnp.ndarray[cnp.int64_t] perm_arr = np.arange(1, n + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int32_t] out_e = np.empty(m_total, dtype=np.int32)
    cdef cnp.ndarray[cnp.float64_t] out_t = np.empty(m_total, dtype=np.float64)
    cdef cnp.int64_t[:] perm = perm_arr
    cdef cnp.int32_t[:] se = out_e
    cdef cnp.float64_t[:] st = out_t
    cdef Py_ssize_t i, k, count = 0
    cdef Py_ssize_t n_rings = ring_edges.shape[0]
    cdef cnp.int64_t tmp
    i = 0
    while i < n_rings and count < m_total:
        k = ring_edges[i] - 1
        if k < 0 or k > n - 2:
            raise ValueError("ring edge out of range")
        if perm[k] < perm[k + 1]:
            tmp = perm[k]
            perm[k] = perm[k + 1]
            perm[k + 1] = tmp
            se[count] = <cnp.int32_t>(k + 1)
            st[count] = ring_times[i]
            count += 1
        i += 1
    return out_e[:count], out_t[:count], i


def tasep_apply_batch(cnp.int64_t[:, :] configs, const cnp.int32_t[:] ring_edges,
                      const cnp.int64_t[:] offsets):
    """Apply ring sequences to many window configurations in place.

    Row r receives rings ``ring_edges[offsets[r]:offsets[r+1]]``; edge e
    (0-based) swaps columns e and e+1 when the left color is smaller.
    """
    cdef Py_ssize_t r, i, e
    cdef Py_ssize_t width = configs.shape[1]
    cdef cnp.int64_t a, b
    for r in range(configs.shape[0]):
        for i in range(offsets[r], offsets[r + 1]):
            e = ring_edges[i]
            if e < 0 or e >= width - 1:
                raise ValueError("ring edge out of range")
            a = configs[r, e]
            b = configs[r, e + 1]
            if a < b:
                configs[r, e] = b
                configs[r, e + 1] = a


def tasep_snapshots(const cnp.int64_t[:] init, const cnp.int32_t[:] ring_edges):
    """Configuration after every ring, plus a per-ring swapped flag."""
    cdef Py_ssize_t width = init.shape[0]
    cdef Py_ssize_t n_rings = ring_edges.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=2] snaps_arr = np.empty((n_rings, width), dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t] flags_arr = np.zeros(n_rings, dtype=np.uint8)
    cdef cnp.int64_t[:, :] snaps = snaps_arr
    cdef cnp.uint8_t[:] flags = flags_arr
    cdef cnp.ndarray[cnp.int64_t] cur_arr = np.array(init, dtype=np.int64)
    cdef cnp.int64_t[:] cur = cur_arr
    cdef Py_ssize_t i, x, e
    cdef cnp.int64_t a, b
    for i in range(n_rings):
        e = ring_edges[i]
        if e < 0 or e >= width - 1:
            raise ValueError("ring edge out of range")
        a = cur[e]
        b = cur[e + 1]
        if a < b:
            cur[e] = b
            cur[e + 1] = a
            flags[i] = 1
        for x in range(width):
            snaps[i, x] = cur[x]
    return snaps_arr, flags_arr.astype(bool)


def lpp_staircase(int n, const double[:] w):
    """Last passage times on the staircase {i + j <= n}, row-major layout.

    Row i (1-based) holds cells j = 1..n-i starting at offset
    (i-1)*n - (i-1)*i/2. The output uses the same layout.
    """
    cdef Py_ssize_t size = n * (n - 1) // 2
    if w.shape[0] != size:
        raise ValueError("weight vector does not match staircase size")
    cdef cnp.ndarray[cnp.float64_t] out = np.empty(size, dtype=np.float64)
    cdef cnp.float64_t[:] L = out
    cdef Py_ssize_t i, j, row_len, off, prev_off = 0
    cdef double up, left, m
    off = 0
    for i in range(1, n):
        row_len = n - i
        for j in range(row_len):
            if i > 1:
                up = L[prev_off + j]
            else:
                up = 0.0
            if j > 0:
                left = L[off + j - 1]
            else:
                left = 0.0
            m = up if up > left else left
            L[off + j] = w[off + j] + m
        prev_off = off
        off += row_len
    return out
