"""Oriented swap process on [N]: sampling, clock-driven replay, and the
last-swap / finishing / absorbing time statistics."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .core import ClockStream, Seed, as_seed

__all__ = [
    "IncompleteTraceError",
    "OspResult",
    "simulate_osp",
    "simulate_osp_coupled",
    "last_swap_times",
    "finishing_times",
    "absorbing_time",
    "osp_batch",
]


class IncompleteTraceError(RuntimeError):
    """Raised when statistics are requested from a trace that never absorbed."""


@dataclass(frozen=True, eq=False)
class OspResult:
    n: int
    swap_edges: np.ndarray
    swap_times: np.ndarray
    absorbed: bool = True
    rings: int | None = None

    @property
    def swaps(self) -> list[tuple[int, float]]:
        return list(zip(self.swap_edges.tolist(), self.swap_times.tolist()))

    @property
    def U(self) -> np.ndarray:
        return last_swap_times(self)

    @property
    def Z(self) -> np.ndarray:
        return finishing_times(self.U)

    @property
    def T(self) -> float:
        return absorbing_time(self.U)

    def final_permutation(self) -> tuple[int, ...]:
        perm = list(range(1, self.n + 1))
        for k in self.swap_edges.tolist():
            perm[k - 1], perm[k] = perm[k], perm[k - 1]
        return tuple(perm)

    def __eq__(self, other):
        if not isinstance(other, OspResult):
            return NotImplemented
        return (
            self.n == other.n
            and self.absorbed == other.absorbed
            and self.rings == other.rings
            and np.array_equal(self.swap_edges, other.swap_edges)
            and np.array_equal(self.swap_times, other.swap_times)
        )


def _osp_draws(n: int, seed: Seed) -> tuple[np.ndarray, np.ndarray]:
    m = n * (n - 1) // 2
    u = seed.generator().random((m, 2))
    return -np.log1p(-u[:, 0]), np.ascontiguousarray(u[:, 1])


def simulate_osp(n: int, seed) -> OspResult:
    """Exact OSP sample from the identity.

    Only edges that can swap are clocked: the next swap arrives after an
    exponential time of rate (number of increasing adjacent pairs) on a
    uniformly chosen such edge. Suppressed rings are skipped, so ``rings`` is
    not reported.
    """
    if n < 2:
        raise ValueError("N must be at least 2")
    exps, unifs = _osp_draws(n, as_seed(seed, "osp"))
    edges, times = kernels.osp_gillespie(n, exps, unifs)
    return OspResult(n, np.asarray(edges), np.asarray(times), True, None)


def simulate_osp_coupled(n: int, clocks: ClockStream) -> OspResult:
    """Replay the process on [n] from the clocks of edges 1..n-1.

    Rings on other edges of ``clocks`` are ignored. If the stream ends before
    absorption the partial trace comes back with ``absorbed=False``.
    """
    if n < 2:
        raise ValueError("N must be at least 2")
    missing = set(range(1, n)) - set(clocks.edges)
    if missing:
        raise ValueError(f"clock stream lacks edges {sorted(missing)}")
    times, edges = clocks.restrict(range(1, n)).merged()
    se, st, used = kernels.osp_replay(n, np.ascontiguousarray(edges, dtype=np.int32), times)
    absorbed = len(se) == n * (n - 1) // 2
    return OspResult(n, np.asarray(se), np.asarray(st), absorbed, int(used))


def _swap_arrays(swaps, n):
    if isinstance(swaps, OspResult):
        return swaps.n, swaps.swap_edges, swaps.swap_times
    pairs = list(swaps)
    edges = np.array([int(k) for k, _ in pairs], dtype=np.int64)
    times = np.array([float(t) for _, t in pairs], dtype=np.float64)
    if n is None:
        m = len(pairs)
        n = int(round((1 + (1 + 8 * m) ** 0.5) / 2))
    return n, edges, times


def last_swap_times(swaps: OspResult | Iterable[tuple[int, float]], n: int | None = None) -> np.ndarray:
    """U(k) = time of the final swap across edge k, for k = 1..n-1."""
    n, edges, times = _swap_arrays(swaps, n)
    if len(edges) != n * (n - 1) // 2:
        raise IncompleteTraceError(f"{len(edges)} swaps recorded, {n * (n - 1) // 2} needed")
    if np.any(np.diff(times) <= 0):
        raise IncompleteTraceError("swap times are not strictly increasing")
    perm = list(range(1, n + 1))
    for k in edges.tolist():
        if not 1 <= k <= n - 1 or perm[k - 1] > perm[k]:
            raise IncompleteTraceError(f"swap at edge {k} is not an oriented swap")
        perm[k - 1], perm[k] = perm[k], perm[k - 1]
    u = np.zeros(n - 1)
    np.maximum.at(u, edges - 1, times)
    return u


def finishing_times(U: Sequence[float]) -> np.ndarray:
    """Z(k) = max(U(k-1), U(k)) with U(0) = U(N) = 0."""
    padded = np.concatenate([[0.0], np.asarray(U, dtype=np.float64), [0.0]])
    return np.maximum(padded[:-1], padded[1:])


def absorbing_time(U: Sequence[float]) -> float:
    return float(np.max(np.asarray(U, dtype=np.float64)))


def osp_batch(n: int, replicas: Iterable[int], master_seed: int, keep_u: bool = True,
              with_time: bool = False):
    """Absorbing times (and optionally U vectors) for the given replica indices."""
    replicas = list(replicas)
    T = np.empty(len(replicas))
    U = np.empty((len(replicas), n - 1)) if keep_u else None
    wall = np.empty(len(replicas))
    for row, r in enumerate(replicas):
        start = time.perf_counter()
        exps, unifs = _osp_draws(n, Seed(master_seed, r, "osp"))
        edges, times = kernels.osp_gillespie(n, exps, unifs)
        T[row] = times[-1]
        if keep_u:
            u = np.zeros(n - 1)
            np.maximum.at(u, np.asarray(edges, dtype=np.int64) - 1, times)
            U[row] = u
        wall[row] = time.perf_counter() - start
    if with_time:
        return T, U, wall
    return T, U
