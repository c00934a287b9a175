"""Exponential last passage percolation.

Two layouts are supported: a full m x n grid (small instances, point-to-point
queries) and the staircase {i + j <= N}, stored row-major as a flat vector,
which is all that V_N needs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .core import Seed, as_seed, exponentials

__all__ = [
    "LppGrid",
    "LppResult",
    "sample_grid",
    "last_passage",
    "v_vector",
    "t_lpp",
    "point_to_point",
    "passage_to_corner",
    "flat_remark_max",
    "flip_grid",
    "staircase_size",
    "staircase_offsets",
    "sample_staircase",
    "staircase_passage",
    "staircase_v",
    "lpp_batch",
]


@dataclass(frozen=True, eq=False)
class LppGrid:
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64)
        if w.ndim != 2 or w.size == 0:
            raise ValueError("weights must be a nonempty 2-d array")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("weights must be finite and nonnegative")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def n(self) -> int:
        return self.weights.shape[1]

    def w(self, i: int, j: int) -> float:
        return float(self.weights[i - 1, j - 1])


@dataclass(frozen=True, eq=False)
class LppResult:
    """``L[i-1, j-1]`` is L(i, j); cells that were not computed hold NaN."""

    L: np.ndarray

    def at(self, i: int, j: int) -> float:
        return float(self.L[i - 1, j - 1])

    @property
    def V(self) -> np.ndarray:
        n = min(self.L.shape) + 1
        return v_vector(self, n)

    @property
    def T(self) -> float:
        return t_lpp(self.V)


def sample_grid(m: int, n: int, seed) -> LppGrid:
    """i.i.d. Exp(1) weights, drawn row-major by inverse CDF."""
    if m < 1 or n < 1:
        raise ValueError("grid dimensions must be positive")
    rng = as_seed(seed, "grid").generator()
    return LppGrid(exponentials(rng, m * n).reshape(m, n))


def _forward(w: np.ndarray) -> np.ndarray:
    m, n = w.shape
    rows = w.tolist()
    L = [[0.0] * n for _ in range(m)]
    for i in range(m):
        for j in range(n):
            up = L[i - 1][j] if i > 0 else 0.0
            left = L[i][j - 1] if j > 0 else 0.0
            L[i][j] = rows[i][j] + (up if up > left else left)
    return np.array(L)


def last_passage(grid: LppGrid) -> LppResult:
    return LppResult(_forward(grid.weights))


def v_vector(result: LppResult, n: int) -> np.ndarray:
    """(L(1, n-1), L(2, n-2), ..., L(n-1, 1))."""
    if n < 2:
        raise ValueError("N must be at least 2")
    L = result.L
    if L.shape[0] < n - 1 or L.shape[1] < n - 1:
        raise ValueError(f"passage times do not cover the size-{n} staircase")
    v = np.array([L[i - 1, n - i - 1] for i in range(1, n)])
    if np.any(np.isnan(v)):
        raise ValueError(f"passage times do not cover the size-{n} staircase")
    return v


def t_lpp(V: Sequence[float]) -> float:
    return float(np.max(np.asarray(V, dtype=np.float64)))


def point_to_point(grid: LppGrid, start: tuple[int, int], end: tuple[int, int]) -> float:
    """Maximal weight of a monotone path from ``start`` to ``end`` (both included)."""
    (i, j), (i2, j2) = start, end
    if not (1 <= i <= i2 <= grid.m and 1 <= j <= j2 <= grid.n):
        raise ValueError("endpoints must satisfy 1 <= i <= i2 <= m and 1 <= j <= j2 <= n")
    sub = grid.weights[i - 1:i2, j - 1:j2]
    return float(_forward(sub)[-1, -1])


def passage_to_corner(grid: LppGrid) -> np.ndarray:
    """G[i-1, j-1] = last passage time from (i, j) to (m, n), built from the corner."""
    flipped = grid.weights[::-1, ::-1]
    return _forward(flipped)[::-1, ::-1]


def flip_grid(grid: LppGrid) -> LppGrid:
    """(i, j) -> (m + 1 - i, n + 1 - j)."""
    return LppGrid(grid.weights[::-1, ::-1].copy())


def flat_remark_max(grid: LppGrid, n: int | None = None) -> float:
    """max_k L((k+1, n-k+1) -> (n, n)) over k = 1..n-1 on an n x n grid."""
    if n is None:
        n = grid.m
    if grid.m != n or grid.n != n:
        raise ValueError("flat-remark maximum needs an n x n grid")
    G = passage_to_corner(grid)
    return float(max(G[k, n - k] for k in range(1, n)))


def staircase_size(n: int) -> int:
    return n * (n - 1) // 2


def staircase_offsets(n: int) -> np.ndarray:
    """Start of row i (1-based) in the row-major staircase vector, i = 1..n."""
    i = np.arange(1, n + 1, dtype=np.int64)
    return (i - 1) * n - (i - 1) * i // 2


def sample_staircase(n: int, seed) -> np.ndarray:
    """Row-major Exp(1) weights on {i + j <= n}."""
    if n < 2:
        raise ValueError("N must be at least 2")
    rng = as_seed(seed, "lpp").generator()
    return exponentials(rng, staircase_size(n))


def staircase_passage(n: int, w: np.ndarray) -> np.ndarray:
    return kernels.lpp_staircase(n, np.ascontiguousarray(w, dtype=np.float64))


def staircase_v(n: int, L: np.ndarray) -> np.ndarray:
    return np.asarray(L)[staircase_offsets(n)[1:] - 1]


def staircase_result(n: int, w: np.ndarray) -> LppResult:
    """Expand a staircase computation into an LppResult (NaN outside the staircase)."""
    flat = staircase_passage(n, w)
    offs = staircase_offsets(n)
    L = np.full((n - 1, n - 1), np.nan)
    for i in range(1, n):
        L[i - 1, : n - i] = flat[offs[i - 1]:offs[i - 1] + n - i]
    return LppResult(L)


def lpp_batch(n: int, replicas: Iterable[int], master_seed: int, keep_v: bool = True,
              with_time: bool = False):
    """T_N^LPP (and optionally V_N) for the given replica indices."""
    replicas = list(replicas)
    T = np.empty(len(replicas))
    V = np.empty((len(replicas), n - 1)) if keep_v else None
    wall = np.empty(len(replicas))
    ends = staircase_offsets(n)[1:] - 1
    for row, r in enumerate(replicas):
        start = time.perf_counter()
        w = sample_staircase(n, Seed(master_seed, r, "lpp"))
        v = kernels.lpp_staircase(n, w)[ends]
        T[row] = v.max()
        if keep_v:
            V[row] = v
        wall[row] = time.perf_counter() - start
    if with_time:
        return T, V, wall
    return T, V
