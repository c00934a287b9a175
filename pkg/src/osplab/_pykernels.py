"""Pure-Python/numpy versions of the compiled kernels in ``_ckernels.pyx``.

Signatures and results match the compiled module exactly; the LPP kernel
sweeps anti-diagonals with numpy but performs the same floating-point
operations per cell, so the output is bit-identical.
"""

from __future__ import annotations

import numpy as np


def osp_gillespie(n, exps, unifs):
    m_total = n * (n - 1) // 2
    if len(exps) < m_total or len(unifs) < m_total:
        raise ValueError("need n(n-1)/2 exponentials and uniforms")
    perm = list(range(1, n + 1))
    active = list(range(n - 1))
    where = list(range(n - 1))
    n_active = n - 1
    exps = np.asarray(exps, dtype=np.float64).tolist()
    unifs = np.asarray(unifs, dtype=np.float64).tolist()
    out_e = [0] * m_total
    out_t = [0.0] * m_total
    t = 0.0
    for step in range(m_total):
        t = t + exps[step] / float(n_active)
        j = int(unifs[step] * float(n_active))
        if j >= n_active:
            j = n_active - 1
        k = active[j]
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        out_e[step] = k + 1
        out_t[step] = t
        for e in (k - 1, k, k + 1):
            if e < 0 or e > n - 2:
                continue
            if perm[e] < perm[e + 1]:
                if where[e] < 0:
                    if n_active < len(active):
                        active[n_active] = e
                    else:
                        active.append(e)
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
    return np.array(out_e, dtype=np.int32), np.array(out_t, dtype=np.float64)


def osp_replay(n, ring_edges, ring_times):
    m_total = n * (n - 1) // 2
    perm = list(range(1, n + 1))
    edges = np.asarray(ring_edges).tolist()
    times = np.asarray(ring_times, dtype=np.float64).tolist()
    out_e = []
    out_t = []
    i = 0
    while i < len(edges) and len(out_e) < m_total:
        k = edges[i] - 1
        if k < 0 or k > n - 2:
            raise ValueError("ring edge out of range")
        if perm[k] < perm[k + 1]:
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            out_e.append(k + 1)
            out_t.append(times[i])
        i += 1
    return np.array(out_e, dtype=np.int32), np.array(out_t, dtype=np.float64), i


def tasep_apply_batch(configs, ring_edges, offsets):
    width = configs.shape[1]
    edges = np.asarray(ring_edges).tolist()
    for r in range(configs.shape[0]):
        row = configs[r].tolist()
        for e in edges[offsets[r]:offsets[r + 1]]:
            if e < 0 or e >= width - 1:
                raise ValueError("ring edge out of range")
            a = row[e]
            b = row[e + 1]
            if a < b:
                row[e] = b
                row[e + 1] = a
        configs[r] = row


def tasep_snapshots(init, ring_edges):
    cur = np.array(init, dtype=np.int64)
    width = cur.shape[0]
    edges = np.asarray(ring_edges).tolist()
    snaps = np.empty((len(edges), width), dtype=np.int64)
    flags = np.zeros(len(edges), dtype=bool)
    for i, e in enumerate(edges):
        if e < 0 or e >= width - 1:
            raise ValueError("ring edge out of range")
        if cur[e] < cur[e + 1]:
            cur[e], cur[e + 1] = cur[e + 1], cur[e]
            flags[i] = True
        snaps[i] = cur
    return snaps, flags


_DIAG_CACHE: dict[int, list[np.ndarray]] = {}


def _diagonal_indices(n):
    idx = _DIAG_CACHE.get(n)
    if idx is None:
        idx = []
        for d in range(2, n + 1):
            i = np.arange(1, d, dtype=np.int64)
            j = d - i
            idx.append((i - 1) * n - (i - 1) * i // 2 + (j - 1))
        if n <= 4096:
            _DIAG_CACHE[n] = idx
    return idx


def lpp_staircase(n, w):
    w = np.asarray(w, dtype=np.float64)
    size = n * (n - 1) // 2
    if w.shape[0] != size:
        raise ValueError("weight vector does not match staircase size")
    out = np.empty(size, dtype=np.float64)
    prev = np.zeros(0)
    for idx in _diagonal_indices(n):
        padded = np.zeros(prev.shape[0] + 2)
        padded[1:-1] = prev
        cur = w[idx] + np.maximum(padded[:-1], padded[1:])
        out[idx] = cur
        prev = cur
    return out
