"""Independent reference implementations used only by the tests.

None of these share code with the package: they are slow, direct
transcriptions of the definitions.
"""

from __future__ import annotations

import heapq
import itertools
from fractions import Fraction

import numpy as np


def brute_force_lpp(w) -> float:
    """Maximum over every up/right path from (1,1) to (m,n) of the weight sum."""
    w = np.asarray(w, dtype=float)
    m, n = w.shape
    best = -np.inf
    for downs in itertools.combinations(range(m + n - 2), m - 1):
        i = j = 0
        total = w[0, 0]
        downs = set(downs)
        for step in range(m + n - 2):
            if step in downs:
                i += 1
            else:
                j += 1
            total += w[i, j]
        best = max(best, total)
    return float(best)


def heap_osp(n: int, rng: np.random.Generator):
    """OSP with N-1 independent rate-1 clocks kept in a heap; every ring is drawn.

    Returns (T, U, rings).
    """
    perm = list(range(1, n + 1))
    heap = [(rng.exponential(), k) for k in range(n - 1)]
    heapq.heapify(heap)
    remaining = n * (n - 1) // 2
    U = [0.0] * (n - 1)
    rings = 0
    t = 0.0
    while remaining:
        t, k = heapq.heappop(heap)
        rings += 1
        if perm[k] < perm[k + 1]:
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            U[k] = t
            remaining -= 1
        heapq.heappush(heap, (t + rng.exponential(), k))
    return t, U, rings


def replay_window(lo: int, hi: int, ring_edges) -> list[list[int]]:
    """Colored TASEP on sites lo..hi from zeta(x) = x; one state per ring."""
    zeta = {x: x for x in range(lo, hi + 1)}
    states = [[zeta[x] for x in range(lo, hi + 1)]]
    for k in ring_edges:
        if zeta[k] < zeta[k + 1]:
            zeta[k], zeta[k + 1] = zeta[k + 1], zeta[k]
        states.append([zeta[x] for x in range(lo, hi + 1)])
    return states


def staircase_cells(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n) for j in range(1, n) if i + j <= n]


def ideals_by_subsets(n: int) -> list[frozenset]:
    """Down-closed subsets of the staircase, found by testing all 2^cells subsets."""
    cells = staircase_cells(n)
    out = []
    for mask in range(1 << len(cells)):
        chosen = {c for b, c in enumerate(cells) if mask >> b & 1}
        if all(((i - 1, j) in chosen or i == 1) and ((i, j - 1) in chosen or j == 1) for i, j in chosen):
            out.append(frozenset(chosen))
    return out


def osp_generator_dense(n: int):
    """Transient states (permutations except the reverse) and sub-generator, as Fractions."""
    rev = tuple(range(n, 0, -1))
    states = [p for p in itertools.permutations(range(1, n + 1)) if p != rev]
    index = {p: i for i, p in enumerate(states)}
    d = len(states)
    S = [[Fraction(0)] * d for _ in range(d)]
    for p, i in index.items():
        for k in range(n - 1):
            if p[k] < p[k + 1]:
                q = list(p)
                q[k], q[k + 1] = q[k + 1], q[k]
                q = tuple(q)
                S[i][i] -= 1
                if q != rev:
                    S[i][index[q]] += 1
    alpha = [Fraction(int(p == tuple(range(1, n + 1)))) for p in states]
    return alpha, S


def gauss_solve(A, b):
    """Plain Gauss-Jordan elimination over Fractions."""
    d = len(A)
    M = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(A, b)]
    for c in range(d):
        piv = next(r for r in range(c, d) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for r in range(d):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [a - f * b_ for a, b_ in zip(M[r], M[c])]
    return [M[r][d] for r in range(d)]


def dense_lst(alpha, S, s) -> Fraction:
    d = len(S)
    A = [[(Fraction(s) if i == j else 0) - S[i][j] for j in range(d)] for i in range(d)]
    exit_vec = [-sum(row) for row in S]
    x = gauss_solve(A, exit_vec)
    return sum(a * v for a, v in zip(alpha, x))


def dense_mean(alpha, S) -> Fraction:
    d = len(S)
    A = [[-S[i][j] for j in range(d)] for i in range(d)]
    x = gauss_solve(A, [1] * d)
    return sum(a * v for a, v in zip(alpha, x))


def ph_cdf(alpha, S, t: float) -> float:
    """1 - alpha exp(S t) 1 by matrix exponential."""
    from scipy.linalg import expm

    a = np.array([float(v) for v in alpha])
    M = np.array([[float(v) for v in row] for row in S])
    return float(1.0 - a @ expm(M * t) @ np.ones(len(a)))
