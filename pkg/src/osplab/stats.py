"""Scaling transforms, two-sample KS tests and Tracy-Widom reference values."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import kolmogorov

from . import _tw_tables
from .core import as_seed

__all__ = [
    "Sample",
    "TwReference",
    "KsResult",
    "MomentReport",
    "gamma",
    "scaled_absorbing_stat",
    "unscale_absorbing_stat",
    "scaled_last_swap_stat",
    "unscale_last_swap_stat",
    "ks_statistic",
    "ks_two_sample",
    "tw_reference",
    "moment_report",
    "histogram",
    "summary_row",
]

ASYMPTOTIC_MIN_SIZE = 50
MAX_PERMUTATIONS = 10_000


@dataclass
class Sample:
    values: np.ndarray
    statistic: str = ""
    n: int | None = None
    seed: int | None = None
    replicas: int | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64).ravel()
        if not np.all(np.isfinite(self.values)):
            raise ValueError("sample values must be finite")
        if self.replicas is None:
            self.replicas = int(self.values.size)


def _values(x) -> np.ndarray:
    if isinstance(x, Sample):
        return x.values
    return np.asarray(x, dtype=np.float64).ravel()


def gamma(y: float) -> float:
    """1 + 2 sqrt(y (1 - y))."""
    return 1.0 + 2.0 * math.sqrt(y * (1.0 - y))


def scaled_absorbing_stat(T, n: int):
    """(T - 2N) / (2^{1/3} N^{1/3})."""
    if n < 2:
        raise ValueError("N must be at least 2")
    return (np.asarray(T, dtype=np.float64) - 2.0 * n) / (2.0 ** (1 / 3) * n ** (1 / 3))


def unscale_absorbing_stat(x, n: int):
    return np.asarray(x, dtype=np.float64) * (2.0 ** (1 / 3) * n ** (1 / 3)) + 2.0 * n


def _last_swap_scale(n: int, k: int) -> tuple[float, float]:
    if not 1 <= k <= n - 1:
        raise ValueError("k must lie in 1..N-1")
    y = k / n
    g = gamma(y)
    return n * g, n ** (1 / 3) * g ** (2 / 3) * (y * (1 - y)) ** (-1 / 6)


def scaled_last_swap_stat(u, n: int, k: int):
    """(u - N gamma_{k/N}) / (N^{1/3} gamma^{2/3} (k/N (1 - k/N))^{-1/6})."""
    center, scale = _last_swap_scale(n, k)
    return (np.asarray(u, dtype=np.float64) - center) / scale


def unscale_last_swap_stat(x, n: int, k: int):
    center, scale = _last_swap_scale(n, k)
    return np.asarray(x, dtype=np.float64) * scale + center


@dataclass(frozen=True)
class KsResult:
    D: float
    p_value: float
    method: str
    n1: int
    n2: int

    def rejects(self, alpha: float) -> bool:
        return self.p_value < alpha


def ks_statistic(x, y) -> float:
    """sup |F_x - F_y| over the pooled sample (ties handled by right-continuity)."""
    x = np.sort(_values(x))
    y = np.sort(_values(y))
    pooled = np.concatenate([x, y])
    fx = np.searchsorted(x, pooled, side="right") / x.size
    fy = np.searchsorted(y, pooled, side="right") / y.size
    return float(np.max(np.abs(fx - fy)))


def _kolmogorov_pvalue(d: float, n1: int, n2: int) -> float:
    en = math.sqrt(n1 * n2 / (n1 + n2))
    return float(min(1.0, kolmogorov((en + 0.12 + 0.11 / en) * d)))


def ks_two_sample(x, y, seed=0, n_permutations: int = MAX_PERMUTATIONS) -> KsResult:
    """Two-sample Kolmogorov-Smirnov test.

    Both samples of size >= 50: asymptotic Kolmogorov law with effective size
    n1 n2 / (n1 + n2). Otherwise a permutation test, enumerated exactly when
    the number of splits does not exceed ``n_permutations``.
    """
    xv, yv = _values(x), _values(y)
    n1, n2 = xv.size, yv.size
    if n1 == 0 or n2 == 0:
        raise ValueError("both samples must be nonempty")
    d = ks_statistic(xv, yv)
    if min(n1, n2) >= ASYMPTOTIC_MIN_SIZE:
        return KsResult(d, _kolmogorov_pvalue(d, n1, n2), "asymptotic", n1, n2)
    pooled = np.concatenate([xv, yv])
    tol = 1e-12
    total = math.comb(n1 + n2, n1)
    if total <= n_permutations:
        hits = 0
        idx = np.arange(n1 + n2)
        for combo in itertools.combinations(range(n1 + n2), n1):
            mask = np.zeros(n1 + n2, dtype=bool)
            mask[list(combo)] = True
            hits += ks_statistic(pooled[mask], pooled[idx[~mask]]) >= d - tol
        return KsResult(d, hits / total, "exact-permutation", n1, n2)
    rng = as_seed(seed, "ks-perm").generator()
    hits = 0
    for _ in range(n_permutations):
        perm = rng.permutation(pooled)
        hits += ks_statistic(perm[:n1], perm[n1:]) >= d - tol
    return KsResult(d, (hits + 1) / (n_permutations + 1), "permutation", n1, n2)


@dataclass(frozen=True)
class TwReference:
    beta: int
    mean: float
    variance: float
    quantiles: tuple[tuple[float, float], ...]
    note: str

    def __post_init__(self):
        probs = [p for p, _ in self.quantiles]
        vals = [v for _, v in self.quantiles]
        if np.any(np.diff(probs) <= 0) or np.any(np.diff(vals) <= 0):
            raise ValueError("quantile table must be strictly increasing")

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def probs(self) -> np.ndarray:
        return np.array([p for p, _ in self.quantiles])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.quantiles])

    def ppf(self, p):
        """Quantile function, linear between table entries and clipped at its ends."""
        return np.interp(p, self.probs, self.values)

    def cdf(self, x):
        """Piecewise-linear CDF through the table; 0 and 1 beyond its ends."""
        x = np.asarray(x, dtype=np.float64)
        out = np.interp(x, self.values, self.probs)
        out = np.where(x < self.values[0], 0.0, out)
        return np.where(x > self.values[-1], 1.0, out)

    def sample(self, size: int, seed) -> np.ndarray:
        rng = as_seed(seed, "tw-sample").generator()
        return self.ppf(rng.random(size))


def tw_reference(beta: int) -> TwReference:
    if beta == 1:
        return TwReference(1, _tw_tables.BETA1_MEAN, _tw_tables.BETA1_VAR, _tw_tables.BETA1_QUANTILES, _tw_tables.NOTE)
    if beta == 2:
        return TwReference(2, _tw_tables.BETA2_MEAN, _tw_tables.BETA2_VAR, _tw_tables.BETA2_QUANTILES, _tw_tables.NOTE)
    raise ValueError("beta must be 1 or 2")


@dataclass
class MomentReport:
    n: int
    mean: float
    variance: float
    std: float
    mean_ci: tuple[float, float]
    variance_ci: tuple[float, float]
    z_mean: float
    z_variance: float
    reference_mean: float
    reference_variance: float
    flags: list[str] = field(default_factory=list)
    quantiles: dict[str, tuple[float, float]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "mean": self.mean,
            "variance": self.variance,
            "std": self.std,
            "mean_ci": list(self.mean_ci),
            "variance_ci": list(self.variance_ci),
            "z_mean": self.z_mean,
            "z_variance": self.z_variance,
            "reference_mean": self.reference_mean,
            "reference_variance": self.reference_variance,
            "flags": list(self.flags),
            "quantiles": {k: list(v) for k, v in self.quantiles.items()},
        }


def moment_report(sample, ref: TwReference, n_boot: int = 1000, level: float = 0.95, seed=0) -> MomentReport:
    """Mean and variance with percentile-bootstrap intervals and z-scores against ``ref``."""
    x = _values(sample)
    n = x.size
    if n == 0:
        raise ValueError("empty sample")
    flags = []
    if n < 100:
        flags.append("small-sample")
    mean = float(x.mean())
    var = float(x.var(ddof=1)) if n > 1 else 0.0
    if var == 0.0:
        flags.append("degenerate")
    rng = as_seed(seed, "bootstrap").generator()
    boot_mean = np.empty(n_boot)
    boot_var = np.empty(n_boot)
    for b in range(n_boot):
        r = x[rng.integers(0, n, n)]
        boot_mean[b] = r.mean()
        boot_var[b] = r.var(ddof=1) if n > 1 else 0.0
    lo, hi = (1 - level) / 2, (1 + level) / 2
    se_mean = math.sqrt(var / n) if var > 0 else 0.0
    m4 = float(np.mean((x - mean) ** 4))
    se_var = math.sqrt(max(m4 - var * var, 0.0) / n)

    def z(diff, se):
        if se > 0:
            return diff / se
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)

    probs = (0.05, 0.25, 0.5, 0.75, 0.95)
    quantiles = {f"q{int(p * 100):02d}": (float(np.quantile(x, p)), float(ref.ppf(p))) for p in probs}
    return MomentReport(
        n=n,
        mean=mean,
        variance=var,
        std=math.sqrt(var),
        mean_ci=(float(np.quantile(boot_mean, lo)), float(np.quantile(boot_mean, hi))),
        variance_ci=(float(np.quantile(boot_var, lo)), float(np.quantile(boot_var, hi))),
        z_mean=z(mean - ref.mean, se_mean),
        z_variance=z(var - ref.variance, se_var),
        reference_mean=ref.mean,
        reference_variance=ref.variance,
        flags=flags,
        quantiles=quantiles,
    )


def histogram(values, bins: int = 40, range_: tuple[float, float] | None = None):
    counts, edges = np.histogram(_values(values), bins=bins, range=range_)
    return counts, edges


SUMMARY_COLUMNS = ("statistic", "n", "mean", "var", "q01", "q05", "q50", "q95", "q99")


def summary_row(statistic: str, n: int, values: Sequence[float]) -> dict:
    x = _values(values)
    q = np.quantile(x, [0.01, 0.05, 0.5, 0.95, 0.99])
    return {
        "statistic": statistic,
        "n": n,
        "mean": float(x.mean()),
        "var": float(x.var(ddof=1)) if x.size > 1 else 0.0,
        "q01": float(q[0]),
        "q05": float(q[1]),
        "q50": float(q[2]),
        "q95": float(q[3]),
        "q99": float(q[4]),
    }
