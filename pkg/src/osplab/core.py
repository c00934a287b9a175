"""Shared configuration types, seeding and clock streams."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "Permutation",
    "ColoredWindowConfig",
    "BinaryConfig",
    "ClockStream",
    "Seed",
    "apply_swap",
    "sample_clock_stream",
    "window_radius",
    "exponentials",
]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class Permutation:
    """Colors on positions 1..N; ``labels[x - 1]`` is the color at position x."""

    labels: tuple[int, ...]

    def __post_init__(self):
        labels = tuple(int(v) for v in self.labels)
        object.__setattr__(self, "labels", labels)
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise ValueError(f"not a permutation of 1..{len(labels)}: {labels}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def reverse(cls, n: int) -> "Permutation":
        return cls(tuple(range(n, 0, -1)))

    def __len__(self) -> int:
        return len(self.labels)

    def at(self, x: int) -> int:
        return self.labels[x - 1]

    def inversions(self) -> int:
        lab = self.labels
        return sum(1 for i in range(len(lab)) for j in range(i + 1, len(lab)) if lab[i] > lab[j])


@dataclass(frozen=True)
class ColoredWindowConfig:
    """Colors on the closed site range [window_lo, window_hi] of Z."""

    window_lo: int
    window_hi: int
    colors: tuple[int, ...]

    def __post_init__(self):
        colors = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if self.window_hi < self.window_lo:
            raise ValueError("empty window")
        if len(colors) != self.window_hi - self.window_lo + 1:
            raise ValueError("colors do not fit the window")
        if sorted(colors) != list(range(self.window_lo, self.window_hi + 1)):
            raise ValueError("colors must be a permutation of the window sites")

    @classmethod
    def initial(cls, window_lo: int, window_hi: int) -> "ColoredWindowConfig":
        return cls(window_lo, window_hi, tuple(range(window_lo, window_hi + 1)))

    def color_at(self, x: int) -> int:
        return self.colors[x - self.window_lo]


@dataclass(frozen=True)
class BinaryConfig:
    """0/1 occupancy of the sites window_lo..window_hi."""

    window_lo: int
    window_hi: int
    occupancy: tuple[int, ...]

    def __post_init__(self):
        occ = tuple(int(v) for v in self.occupancy)
        object.__setattr__(self, "occupancy", occ)
        if len(occ) != self.window_hi - self.window_lo + 1:
            raise ValueError("occupancy does not fit the window")
        if any(v not in (0, 1) for v in occ):
            raise ValueError("occupancy values must be 0 or 1")

    @classmethod
    def from_particles(cls, window_lo: int, window_hi: int, particles: Iterable[int]) -> "BinaryConfig":
        occ = [0] * (window_hi - window_lo + 1)
        for x in particles:
            if not window_lo <= x <= window_hi:
                raise ValueError(f"particle {x} outside window")
            occ[x - window_lo] = 1
        return cls(window_lo, window_hi, tuple(occ))

    @property
    def particles(self) -> tuple[int, ...]:
        return tuple(self.window_lo + i for i, v in enumerate(self.occupancy) if v)

    def count_at_or_right(self, b: int) -> int:
        return sum(1 for x in self.particles if x >= b)


@dataclass(frozen=True)
class Seed:
    """Substream identity: (master_seed, replica_index, engine_tag).

    The generator is Philox-4x64 with key ``(master_seed mod 2**64,
    tag_key)`` and starting counter ``(0, 0, replica_index, 0)``, where
    ``tag_key`` is the first 8 bytes (little endian) of the BLAKE2b digest of
    the UTF-8 engine tag. Each replica therefore owns a 2**128-block counter
    range that no other replica can reach.
    """

    master_seed: int
    replica_index: int = 0
    engine_tag: str = "default"

    def __post_init__(self):
        if self.replica_index < 0:
            raise ValueError("replica_index must be >= 0")

    def tag_key(self) -> int:
        digest = hashlib.blake2b(self.engine_tag.encode("utf-8"), digest_size=8).digest()
        return int.from_bytes(digest, "little")

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed & _MASK64, self.tag_key()], dtype=np.uint64)
        counter = np.array([0, 0, self.replica_index & _MASK64, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key, counter=counter))

    def child(self, engine_tag: str) -> "Seed":
        return Seed(self.master_seed, self.replica_index, engine_tag)

    def with_replica(self, replica_index: int) -> "Seed":
        return Seed(self.master_seed, replica_index, self.engine_tag)


def as_seed(seed, engine_tag: str = "default") -> Seed:
    if isinstance(seed, Seed):
        return seed
    return Seed(int(seed), 0, engine_tag)


def exponentials(rng: np.random.Generator, size) -> np.ndarray:
    """Unit exponentials by inverse CDF from the uniform stream."""
    return -np.log1p(-rng.random(size))


def apply_swap(p: Permutation | Sequence[int], k: int) -> Permutation:
    labels = p.labels if isinstance(p, Permutation) else tuple(p)
    n = len(labels)
    if not 1 <= k <= n - 1:
        raise ValueError(f"edge {k} out of range 1..{n - 1}")
    out = list(labels)
    out[k - 1], out[k] = out[k], out[k - 1]
    return Permutation(tuple(out))


def window_radius(horizon: float, eps: float) -> int:
    """Smallest W >= 0 with horizon**W / W! <= eps."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if horizon == 0:
        return 0
    log_eps = math.log(eps)
    log_h = math.log(horizon)
    w = 0
    while w * log_h - math.lgamma(w + 1) > log_eps:
        w += 1
    return w


@dataclass(frozen=True)
class ClockStream:
    """Rate-1 Poisson ring times on (0, horizon] for a set of edges."""

    horizon: float
    events: Mapping[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be nonnegative")
        frozen = {}
        for k, times in self.events.items():
            arr = np.array(times, dtype=np.float64)
            arr.setflags(write=False)
            if arr.size and (np.any(np.diff(arr) <= 0) or arr[0] <= 0 or arr[-1] > self.horizon):
                raise ValueError(f"edge {k}: ring times must be strictly increasing in (0, horizon]")
            frozen[int(k)] = arr
        object.__setattr__(self, "events", dict(sorted(frozen.items())))
        times, _ = self.merged()
        if times.size > 1 and np.any(np.diff(times) == 0):
            raise ValueError("simultaneous rings on different edges")

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(self.events)

    def merged(self) -> tuple[np.ndarray, np.ndarray]:
        """All rings sorted by time: (times, edges)."""
        if not self.events:
            return np.zeros(0), np.zeros(0, dtype=np.int32)
        times = np.concatenate([self.events[k] for k in self.events])
        edges = np.concatenate(
            [np.full(self.events[k].size, k, dtype=np.int32) for k in self.events]
        )
        order = np.argsort(times, kind="stable")
        return times[order], edges[order]

    def restrict(self, edges: Iterable[int]) -> "ClockStream":
        edges = set(edges)
        missing = edges - set(self.events)
        if missing:
            raise ValueError(f"stream lacks edges {sorted(missing)}")
        return ClockStream(self.horizon, {k: v for k, v in self.events.items() if k in edges})

    def truncate(self, horizon: float) -> "ClockStream":
        return ClockStream(horizon, {k: v[v <= horizon] for k, v in self.events.items()})


def _poisson_times(rng: np.random.Generator, horizon: float) -> np.ndarray:
    if horizon == 0:
        return np.zeros(0)
    block = int(horizon + 6.0 * math.sqrt(horizon) + 8)
    times = np.cumsum(exponentials(rng, block))
    while times[-1] <= horizon:
        more = times[-1] + np.cumsum(exponentials(rng, block))
        times = np.concatenate([times, more])
    return times[times <= horizon]


def _break_ties(events: dict[int, np.ndarray], horizon: float, rng: np.random.Generator) -> dict[int, np.ndarray]:
    """Redraw the increment of the higher-indexed edge at every exact tie."""
    while True:
        merged = np.sort(np.concatenate([events[k] for k in events])) if events else np.zeros(0)
        if merged.size < 2 or np.all(np.diff(merged) > 0):
            return events
        owner: dict[float, int] = {}
        clash = None
        for k in sorted(events):
            for pos, t in enumerate(events[k].tolist()):
                if t in owner:
                    clash = (k, pos)
                    break
                owner[t] = k
            if clash:
                break
        if clash is None:
            return events
        k, pos = clash
        arr = events[k]
        prev = arr[pos - 1] if pos > 0 else 0.0
        delta = prev + float(exponentials(rng, 1)[0]) - arr[pos]
        arr = arr.copy()
        arr[pos:] += delta
        if arr.size and arr[-1] <= horizon:
            tail = arr[-1] + _poisson_times(rng, horizon - arr[-1])
            arr = np.concatenate([arr, tail])
        events[k] = arr[arr <= horizon]


def sample_clock_stream(edges: Iterable[int], horizon: float, seed) -> ClockStream:
    """Independent rate-1 Poisson clocks on ``edges``, drawn in increasing edge order."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    rng = as_seed(seed, "clocks").generator()
    events = {int(k): _poisson_times(rng, horizon) for k in sorted(set(edges))}
    events = _break_ties(events, horizon, rng)
    return ClockStream(horizon, events)
