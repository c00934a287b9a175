"""Colored TASEP on a finite window of Z.

The window has blocked boundary edges; everything outside it is treated as
frozen at the initial condition zeta(x) = x. ``required_window`` pads the
queried sites so that the frozen-outside approximation differs from the
infinite-lattice process with probability at most ``eps_trunc``: a
discrepancy can only travel W edges by time t through an increasing chain of
rings, which has probability at most t**W / W! per boundary edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .core import BinaryConfig, ClockStream, ColoredWindowConfig, Seed, as_seed, sample_clock_stream, window_radius
from .osp import simulate_osp_coupled

__all__ = [
    "DEFAULT_EPS_TRUNC",
    "HeightQuery",
    "TasepTrajectory",
    "PathwiseReport",
    "simulate_colored_tasep",
    "required_window",
    "padding_radius",
    "height_leq_geq",
    "height_H",
    "heights_over_time",
    "colorless_projection",
    "cutoff_R",
    "pushback_B",
    "verify_pushback_identity",
    "verify_min_identity",
    "verify_coupling_many",
    "osp_absorbed_event",
    "verify_height_identity",
    "sample_heights_batch",
]

DEFAULT_EPS_TRUNC = 1e-12


def _half_integer(y) -> Fraction:
    y = Fraction(y)
    if y.denominator != 2:
        raise ValueError(f"observation point {y} is not in Z + 1/2")
    return y


@dataclass(frozen=True)
class HeightQuery:
    """Either h_{<=A -> >=B} (kind 'h') or H^{>=i}(y) (kind 'H')."""

    kind: str
    a: int
    b: Fraction | int
    t: float | None = None

    def __post_init__(self):
        if self.kind == "h":
            object.__setattr__(self, "a", int(self.a))
            object.__setattr__(self, "b", int(self.b))
        elif self.kind == "H":
            object.__setattr__(self, "a", int(self.a))
            object.__setattr__(self, "b", _half_integer(self.b))
        else:
            raise ValueError("kind must be 'h' or 'H'")

    @classmethod
    def h(cls, A: int, B: int, t: float | None = None) -> "HeightQuery":
        return cls("h", A, B, t)

    @classmethod
    def H(cls, i: int, y, t: float | None = None) -> "HeightQuery":
        return cls("H", i, y, t)

    def sites(self) -> tuple[int, ...]:
        if self.kind == "h":
            return (self.a, self.b - 1, self.b)
        lo = int(self.b - Fraction(1, 2))
        return (self.a - 1, self.a, lo, lo + 1)

    def initial_value(self) -> int:
        if self.kind == "h":
            return max(self.a - self.b + 1, 0)
        return max(int(self.b - Fraction(1, 2)) - self.a + 1, 0)

    def __str__(self) -> str:
        if self.kind == "h":
            return f"h(<={self.a} -> >={self.b})"
        return f"H(>={self.a}, {self.b})"


def padding_radius(span: int, horizon: float, eps_trunc: float = DEFAULT_EPS_TRUNC) -> int:
    """Padding W with a union bound over all edges of the padded window."""
    w = window_radius(horizon, eps_trunc)
    while True:
        edges = max(span + 2 * w, 1)
        w_next = window_radius(horizon, eps_trunc / edges)
        if w_next <= w:
            return w
        w = w_next


def required_window(queries: Sequence[HeightQuery], horizon: float,
                    eps_trunc: float = DEFAULT_EPS_TRUNC) -> tuple[int, int]:
    if not queries:
        raise ValueError("at least one query is needed")
    sites = [s for q in queries for s in q.sites()]
    lo, hi = min(sites), max(sites)
    w = padding_radius(hi - lo, horizon, eps_trunc)
    return lo - w, hi + w


@dataclass(frozen=True, eq=False)
class TasepTrajectory:
    """Event log of a windowed colored TASEP started from zeta(x) = x.

    ``ring_edges`` are absolute edge labels k (sites k, k+1). ``margin`` is
    the number of sites at each end of the window that queries must avoid.
    """

    window_lo: int
    window_hi: int
    horizon: float
    ring_times: np.ndarray
    ring_edges: np.ndarray
    margin: int = 0

    @property
    def width(self) -> int:
        return self.window_hi - self.window_lo + 1

    @property
    def initial(self) -> ColoredWindowConfig:
        return ColoredWindowConfig.initial(self.window_lo, self.window_hi)

    @cached_property
    def _replay(self) -> tuple[np.ndarray, np.ndarray]:
        init = np.arange(self.window_lo, self.window_hi + 1, dtype=np.int64)
        local = np.ascontiguousarray(self.ring_edges - self.window_lo, dtype=np.int32)
        snaps, flags = kernels.tasep_snapshots(init, local)
        return np.vstack([init[None, :], snaps]), np.asarray(flags, dtype=bool)

    @property
    def states(self) -> np.ndarray:
        """Row 0 is the initial configuration; row r follows the r-th ring."""
        return self._replay[0]

    @property
    def swapped(self) -> np.ndarray:
        return self._replay[1]

    @property
    def event_times(self) -> np.ndarray:
        return np.concatenate([[0.0], self.ring_times])

    def state_index(self, t: float) -> int:
        if t < 0 or t > self.horizon:
            raise ValueError(f"time {t} outside [0, {self.horizon}]")
        return int(np.searchsorted(self.ring_times, t, side="right"))

    def config_at(self, t: float) -> ColoredWindowConfig:
        row = self.states[self.state_index(t)]
        return ColoredWindowConfig(self.window_lo, self.window_hi, tuple(row.tolist()))

    def check_covers(self, query: HeightQuery) -> None:
        lo, hi = self.window_lo + self.margin, self.window_hi - self.margin
        for s in query.sites():
            if not lo - 1 <= s <= hi + 1:
                raise ValueError(f"{query} needs site {s}; window covers {lo}..{hi} after margin")


def simulate_colored_tasep(window_lo: int, window_hi: int, horizon: float, seed=None,
                           clocks: ClockStream | None = None, margin: int = 0) -> TasepTrajectory:
    if window_hi <= window_lo:
        raise ValueError("window needs at least two sites")
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    edges = range(window_lo, window_hi)
    if clocks is None:
        if seed is None:
            raise ValueError("either seed or clocks is required")
        clocks = sample_clock_stream(edges, horizon, as_seed(seed, "tasep"))
    else:
        clocks = clocks.restrict(edges).truncate(horizon)
    times, ring_edges = clocks.merged()
    return TasepTrajectory(window_lo, window_hi, float(horizon), times, ring_edges.astype(np.int64), margin)


def _col(traj: TasepTrajectory, x: int) -> int:
    return min(max(x - traj.window_lo, 0), traj.width)


def _count_h(states: np.ndarray, traj: TasepTrajectory, A: int, B: int) -> np.ndarray:
    return (states[..., _col(traj, B):] <= A).sum(axis=-1)


def _count_H(states: np.ndarray, traj: TasepTrajectory, i: int, y: Fraction) -> np.ndarray:
    last = int(y - Fraction(1, 2))
    return (states[..., : _col(traj, last + 1)] >= i).sum(axis=-1)


def height_leq_geq(traj: TasepTrajectory, A: int, B: int, t: float) -> int:
    """Number of colors <= A at positions >= B at time t."""
    q = HeightQuery.h(A, B)
    traj.check_covers(q)
    return int(_count_h(traj.states[traj.state_index(t)], traj, A, B))


def height_H(traj: TasepTrajectory, i: int, y, t: float) -> int:
    """Number of colors >= i at positions < y at time t (y in Z + 1/2)."""
    q = HeightQuery.H(i, y)
    traj.check_covers(q)
    return int(_count_H(traj.states[traj.state_index(t)], traj, i, q.b))


def heights_over_time(traj: TasepTrajectory, query: HeightQuery) -> np.ndarray:
    """The queried height at time 0 and after every ring."""
    traj.check_covers(query)
    if query.kind == "h":
        return _count_h(traj.states, traj, query.a, query.b)
    return _count_H(traj.states, traj, query.a, query.b)


def colorless_projection(traj: TasepTrajectory, k: int, t: float) -> BinaryConfig:
    row = traj.states[traj.state_index(t)]
    return BinaryConfig(traj.window_lo, traj.window_hi, tuple((row <= k).astype(int).tolist()))


def cutoff_R(config: BinaryConfig, k: int) -> BinaryConfig:
    """Keep only the k rightmost particles."""
    parts = config.particles
    if k < 0 or len(parts) < k:
        raise ValueError(f"configuration has {len(parts)} particles, fewer than {k}")
    keep = parts[len(parts) - k:] if k else ()
    return BinaryConfig.from_particles(config.window_lo, config.window_hi, keep)


def pushback_B(config: BinaryConfig, n: int) -> BinaryConfig:
    """Push all particles into (-inf, n], order-preserving with minimal left moves."""
    out = []
    ceiling = n + 1
    for p in sorted(config.particles, reverse=True):
        q = min(p, ceiling - 1)
        out.append(q)
        ceiling = q
    if out and out[-1] < config.window_lo:
        raise ValueError("push-back leaves the window")
    return BinaryConfig.from_particles(config.window_lo, config.window_hi, out)


@dataclass
class PathwiseReport:
    name: str
    n: int
    passed: bool
    streams: int = 1
    events: int = 0
    checks: int = 0
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "N": self.n,
            "passed": self.passed,
            "streams": self.streams,
            "events": self.events,
            "checks": self.checks,
            "counterexample": self.counterexample,
            "notes": list(self.notes),
        }


def _coupled_states(n: int, horizon: float, seed, eps_trunc: float):
    """Infinite-lattice states and [n]-process states at every merged ring."""
    lo, hi = required_window([HeightQuery.h(0, 1), HeightQuery.h(n, n + 1)], horizon, eps_trunc)
    seed = as_seed(seed, "coupling")
    clocks = sample_clock_stream(range(lo, hi), horizon, seed.child("coupling"))
    traj = simulate_colored_tasep(lo, hi, horizon, clocks=clocks)
    fin = simulate_osp_coupled(n, clocks)
    init = np.arange(1, n + 1, dtype=np.int64)
    if len(fin.swap_edges):
        snaps, _ = kernels.tasep_snapshots(init, np.ascontiguousarray(fin.swap_edges - 1, dtype=np.int32))
        fin_states = np.vstack([init[None, :], snaps])
    else:
        fin_states = init[None, :]
    idx = np.searchsorted(fin.swap_times, traj.event_times, side="right")
    return traj, fin, fin_states[idx]


def _descending_positions(mask: np.ndarray, k: int, offset: int) -> np.ndarray:
    rows, cols = np.nonzero(mask)
    counts = np.bincount(rows, minlength=mask.shape[0])
    if np.any(counts != k):
        raise ValueError("window holds too few particles for the cut-off")
    return cols.reshape(mask.shape[0], k)[:, ::-1] + offset


def _check_pushback(n, traj, fin, F) -> PathwiseReport:
    Z = traj.states
    times = traj.event_times
    report = PathwiseReport("pushback", n, True, 1, len(times) - 1)
    for k in range(1, n + 1):
        mask = Z <= k
        right_count = np.cumsum(mask[:, ::-1], axis=1)[:, ::-1]
        p = _descending_positions(mask & (right_count <= k), k, traj.window_lo)
        steps = np.arange(k)
        q = np.minimum(np.minimum.accumulate(p + steps, axis=1), n) - steps
        f = _descending_positions(F <= k, k, 1)
        bad = np.nonzero(np.any(q != f, axis=1))[0]
        report.checks += len(times)
        if bad.size and report.passed:
            r = int(bad[0])
            report.passed = False
            report.counterexample = {
                "time": float(times[r]), "k": k,
                "finite": sorted(f[r].tolist()), "pushed_back": sorted(q[r].tolist()),
            }
    if not fin.absorbed:
        report.notes.append("finite process not absorbed by the horizon")
    return report


def _check_min(n, traj, fin, F) -> PathwiseReport:
    Z = traj.states
    times = traj.event_times
    report = PathwiseReport("min-identity", n, True, 1, len(times) - 1)
    for i in range(1, n):
        finite = (F[:, n - i:] <= i).sum(axis=1)
        infinite = _count_h(Z, traj, i, n + 1 - i)
        bad = np.nonzero(finite != np.minimum(infinite, i))[0]
        report.checks += len(times)
        if bad.size and report.passed:
            r = int(bad[0])
            report.passed = False
            report.counterexample = {
                "time": float(times[r]), "i": i,
                "finite": int(finite[r]), "infinite": int(infinite[r]),
            }
    if fin.absorbed and any((F[-1, n - i:] <= i).sum() != i for i in range(1, n)):
        report.passed = False
        report.notes.append("absorbed finite process does not reach hat h = i")
    return report


_CHECKS = {"pushback": _check_pushback, "min-identity": _check_min}


def verify_pushback_identity(n: int, horizon: float, seed, eps_trunc: float = DEFAULT_EPS_TRUNC) -> PathwiseReport:
    """nu^{k,N} = B_N R_k nu^k at time 0 and after every ring, for all 1 <= k <= N."""
    return _check_pushback(n, *_coupled_states(n, horizon, seed, eps_trunc))


def verify_min_identity(n: int, horizon: float, seed, eps_trunc: float = DEFAULT_EPS_TRUNC) -> PathwiseReport:
    """hat h_{<=i -> >=N+1-i} = min(h_{<=i -> >=N+1-i}, i) after every ring, i < N."""
    return _check_min(n, *_coupled_states(n, horizon, seed, eps_trunc))


def verify_coupling_many(which: Sequence[str] | str, n: int, streams: int, horizon: float,
                         master_seed: int, eps_trunc: float = DEFAULT_EPS_TRUNC) -> dict[str, PathwiseReport]:
    """Run pathwise checks over ``streams`` independent shared-clock streams.

    Every requested check reads the same coupled replay of each stream.
    """
    names = [which] if isinstance(which, str) else list(which)
    totals = {name: PathwiseReport(name, n, True, 0) for name in names}
    for r in range(streams):
        states = _coupled_states(n, horizon, Seed(master_seed, r, "coupling"), eps_trunc)
        for name in names:
            rep = _CHECKS[name](n, *states)
            total = totals[name]
            total.streams += 1
            total.events += rep.events
            total.checks += rep.checks
            if not rep.passed and total.passed:
                total.passed = False
                total.counterexample = dict(rep.counterexample or {}, stream=r)
    return totals


def verify_height_identity(trajectories: int, horizon: float, master_seed: int, span: int = 6,
                        eps_trunc: float = DEFAULT_EPS_TRUNC) -> PathwiseReport:
    """h_{<=A -> >=B} = H^{>=A+1}(B - 1/2) + (A - B + 1) after every ring.

    Each trajectory gets its own random (A, B) in [-span, span]^2 and a window
    covering both heights.
    """
    total = PathwiseReport("height-identity", 0, True, 0)
    for r in range(trajectories):
        seed = Seed(master_seed, r, "height-identity")
        A, B = (int(v) for v in seed.generator().integers(-span, span + 1, size=2))
        h_q, H_q = HeightQuery.h(A, B), HeightQuery.H(A + 1, Fraction(2 * B - 1, 2))
        lo, hi = required_window([h_q, H_q], horizon, eps_trunc)
        traj = simulate_colored_tasep(lo, hi, horizon, seed=seed.child("height-identity-clocks"))
        lhs = heights_over_time(traj, h_q)
        rhs = heights_over_time(traj, H_q) + (A - B + 1)
        total.streams += 1
        total.events += len(lhs) - 1
        total.checks += len(lhs)
        bad = np.flatnonzero(lhs != rhs)
        if bad.size and total.passed:
            j = int(bad[0])
            total.passed = False
            total.counterexample = {"trajectory": r, "A": A, "B": B, "event": j,
                                    "h": int(lhs[j]), "H_plus_const": int(rhs[j])}
    return total


def osp_absorbed_event(traj: TasepTrajectory, n: int, t: float) -> bool:
    """h_{<=i -> >=N+1-i}(t) >= i for every i = 1..N-1 (infinite-lattice heights)."""
    return all(height_leq_geq(traj, i, n + 1 - i, t) >= i for i in range(1, n))


def _batch_rings(width: int, t: float, seeds: Iterable[Seed]):
    n_edges = width - 1
    parts = []
    offsets = [0]
    for seed in seeds:
        rng = seed.generator()
        count = int(rng.poisson(n_edges * t)) if t > 0 else 0
        rings = rng.integers(0, n_edges, size=count, dtype=np.int32)
        parts.append(rings)
        offsets.append(offsets[-1] + count)
    edges = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int32)
    return np.ascontiguousarray(edges, dtype=np.int32), np.asarray(offsets, dtype=np.int64)


def sample_heights_batch(queries: Sequence[HeightQuery], t: float, replicas: Iterable[int],
                         master_seed: int, engine_tag: str = "heights",
                         eps_trunc: float = DEFAULT_EPS_TRUNC, chunk: int = 8192) -> np.ndarray:
    """Joint samples of the queried heights at time t, one row per replica.

    Given the number of rings by time t (Poisson with mean edges * t), ring
    edges are i.i.d. uniform, and the configuration at time t depends only
    on their order, so ring times are never drawn.
    """
    lo, hi = required_window(queries, t, eps_trunc)
    if hi - lo < 1:
        hi = lo + 1
    width = hi - lo + 1
    dummy = TasepTrajectory(lo, hi, t, np.zeros(0), np.zeros(0, dtype=np.int64))
    replicas = list(replicas)
    out = np.empty((len(replicas), len(queries)), dtype=np.int64)
    init = np.arange(lo, hi + 1, dtype=np.int64)
    for start in range(0, len(replicas), chunk):
        block = replicas[start:start + chunk]
        edges, offsets = _batch_rings(width, t, (Seed(master_seed, r, engine_tag) for r in block))
        configs = np.tile(init, (len(block), 1))
        kernels.tasep_apply_batch(configs, edges, offsets)
        for col, q in enumerate(queries):
            if q.kind == "h":
                out[start:start + len(block), col] = _count_h(configs, dummy, q.a, q.b)
            else:
                out[start:start + len(block), col] = _count_H(configs, dummy, q.a, q.b)
    return out
