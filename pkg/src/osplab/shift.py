"""Monte Carlo tests of shift invariance for colored TASEP height vectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import Seed, as_seed
from .stats import KsResult, ks_two_sample
from .tasep import DEFAULT_EPS_TRUNC, HeightQuery, sample_heights_batch

__all__ = [
    "ShiftInstance",
    "ShiftReport",
    "validate_instance",
    "corollary_instance",
    "corollary_shift_sequence",
    "sample_height_vector",
    "sample_height_vectors",
    "random_instance",
    "run_shift_test",
    "N_PROJECTIONS",
]

N_PROJECTIONS = 8


@dataclass(frozen=True)
class ShiftInstance:
    """Cutoffs k_1..k_n, half-integer points y_1..y_n, common time t, 1-based shift index."""

    t: float
    k: tuple[int, ...]
    y: tuple[Fraction, ...]
    iota: int

    def __post_init__(self):
        k = tuple(int(v) for v in self.k)
        y = tuple(Fraction(v) for v in self.y)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "y", y)
        if len(k) != len(y) or not k:
            raise ValueError("k and y must have the same positive length")
        if any(v.denominator != 2 for v in y):
            raise ValueError("observation points must lie in Z + 1/2")
        if self.t < 0:
            raise ValueError("time must be nonnegative")
        if not 1 <= self.iota <= len(k):
            raise ValueError("shift index out of range")

    @property
    def n(self) -> int:
        return len(self.k)

    def shifted(self) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
        i = self.iota - 1
        k = list(self.k)
        y = list(self.y)
        k[i] += 1
        y[i] += 1
        return tuple(k), tuple(y)

    def queries(self, shifted: bool = False) -> list[HeightQuery]:
        k, y = self.shifted() if shifted else (self.k, self.y)
        return [HeightQuery.H(a, b) for a, b in zip(k, y)]

    def apply_shift(self, iota: int | None = None) -> "ShiftInstance":
        k, y = self.shifted()
        return ShiftInstance(self.t, k, y, self.iota if iota is None else iota)


def validate_instance(inst: ShiftInstance) -> str | None:
    """Name of the first violated ordering chain, or None when all four hold."""
    k2, y2 = inst.shifted()
    chains = (
        ("k nondecreasing", inst.k, 1),
        ("shifted k nondecreasing", k2, 1),
        ("y nonincreasing", inst.y, -1),
        ("shifted y nonincreasing", y2, -1),
    )
    for name, seq, sign in chains:
        if any(sign * (b - a) < 0 for a, b in zip(seq, seq[1:])):
            return name
    return None


def corollary_instance(n: int) -> tuple[list[HeightQuery], list[HeightQuery]]:
    """Left: h_{<=i -> >=N+1-i}, i = 1..N-1. Right: h_{<=N-1 -> >=2N-2i}."""
    if n < 2:
        raise ValueError("N must be at least 2")
    lhs = [HeightQuery.h(i, n + 1 - i) for i in range(1, n)]
    rhs = [HeightQuery.h(n - 1, 2 * n - 2 * i) for i in range(1, n)]
    return lhs, rhs


def corollary_shift_sequence(n: int, t: float = 0.0) -> list[ShiftInstance]:
    """Single shifts carrying the left vector to the right one, in H-form.

    h_{<=A -> >=B} = H^{>=A+1}(B - 1/2) + (A - B + 1), and a shift moves
    (A, B) to (A + 1, B + 1), leaving the constant unchanged. Coordinate i
    needs N-1-i shifts; sweeping i = N-1-r down to 1 in round r keeps
    neighbouring cutoffs within distance 2, so every step is a valid instance.
    """
    k = [i + 1 for i in range(1, n)]
    y = [Fraction(2 * (n + 1 - i) - 1, 2) for i in range(1, n)]
    steps = []
    for r in range(1, n - 1):
        for iota in range(n - 1 - r, 0, -1):
            steps.append(ShiftInstance(t, tuple(k), tuple(y), iota))
            k[iota - 1] += 1
            y[iota - 1] += 1
    return steps


def sample_height_vector(inst: ShiftInstance, shifted: bool, seed, eps_trunc: float = DEFAULT_EPS_TRUNC) -> np.ndarray:
    problem = validate_instance(inst)
    if problem:
        raise ValueError(f"invalid instance: {problem}")
    seed = as_seed(seed, "shift-rhs" if shifted else "shift-lhs")
    return sample_heights_batch(inst.queries(shifted), inst.t, [seed.replica_index], seed.master_seed,
                                seed.engine_tag, eps_trunc)[0]


def sample_height_vectors(queries: Sequence[HeightQuery], t: float, replicas: int, master_seed: int,
                          engine_tag: str, eps_trunc: float = DEFAULT_EPS_TRUNC) -> np.ndarray:
    return sample_heights_batch(queries, t, range(replicas), master_seed, engine_tag, eps_trunc)


@dataclass
class ShiftReport:
    label: str
    t: float
    replicas: int
    alpha: float
    threshold: float
    coordinates: list[KsResult] = field(default_factory=list)
    projections: list[KsResult] = field(default_factory=list)

    @property
    def rejected(self) -> bool:
        return any(r.p_value < self.threshold for r in self.coordinates + self.projections)

    @property
    def min_p(self) -> float:
        return min(r.p_value for r in self.coordinates + self.projections)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "t": self.t,
            "replicas": self.replicas,
            "alpha": self.alpha,
            "bonferroni_threshold": self.threshold,
            "rejected": self.rejected,
            "min_p": self.min_p,
            "coordinates": [{"D": r.D, "p": r.p_value} for r in self.coordinates],
            "projections": [{"D": r.D, "p": r.p_value} for r in self.projections],
        }


def run_shift_test(lhs: ShiftInstance | Sequence[HeightQuery], rhs: Sequence[HeightQuery] | None = None,
                   t: float | None = None, replicas: int = 10_000, seed: int = 0, alpha: float = 0.001,
                   label: str = "", eps_trunc: float = DEFAULT_EPS_TRUNC) -> ShiftReport:
    """Compare the joint laws of two height vectors from independent samples.

    Pass a ShiftInstance (unshifted vs shifted) or two query lists plus ``t``.
    Every coordinate and 8 seeded random projections get a two-sample KS
    test; the family is Bonferroni-corrected at level ``alpha``.
    """
    if isinstance(lhs, ShiftInstance):
        problem = validate_instance(lhs)
        if problem:
            raise ValueError(f"invalid instance: {problem}")
        inst = lhs
        t = inst.t
        lhs, rhs = inst.queries(False), inst.queries(True)
        label = label or f"k={inst.k} y={tuple(str(v) for v in inst.y)} iota={inst.iota}"
    if rhs is None or t is None:
        raise ValueError("query lists need both sides and a time")
    if len(lhs) != len(rhs):
        raise ValueError("both sides must have the same length")
    master = int(seed)
    a = sample_height_vectors(lhs, t, replicas, master, "shift-lhs", eps_trunc)
    b = sample_height_vectors(rhs, t, replicas, master, "shift-rhs", eps_trunc)
    n = len(lhs)
    report = ShiftReport(label, float(t), replicas, alpha, alpha / (n + N_PROJECTIONS))
    for j in range(n):
        report.coordinates.append(ks_two_sample(a[:, j], b[:, j]))
    directions = Seed(master, 0, "shift-proj").generator().standard_normal((N_PROJECTIONS, n))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)
    for v in directions:
        report.projections.append(ks_two_sample(a @ v, b @ v))
    return report


def random_instance(rng: np.random.Generator, max_n: int = 4, max_t: float = 3.0) -> ShiftInstance:
    """A random instance satisfying all four ordering chains (rejection sampling)."""
    while True:
        n = int(rng.integers(1, max_n + 1))
        t = float(np.round(rng.uniform(0.25, max_t), 2))
        k = np.sort(rng.integers(-2, 4, size=n))
        y = np.sort(rng.integers(-3, 4, size=n))[::-1]
        inst = ShiftInstance(t, tuple(k.tolist()), tuple(Fraction(2 * v + 1, 2) for v in y.tolist()),
                             int(rng.integers(1, n + 1)))
        if validate_instance(inst) is None:
            return inst
