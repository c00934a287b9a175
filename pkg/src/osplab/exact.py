"""Exact phase-type calculus for small N.

All arithmetic is over the rationals (gmpy2's mpq when available,
``fractions.Fraction`` otherwise); results are returned as ``Fraction``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Sequence

try:
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _Q = Fraction

__all__ = [
    "PhaseType",
    "StaircaseIdeal",
    "LstCertificate",
    "build_osp_chain",
    "build_corner_chain",
    "marginal_U_chain",
    "marginal_V_chain",
    "exponential_ph",
    "erlang_ph",
    "lst_eval",
    "moments",
    "lst_equal",
    "solve",
    "staircase_ideals",
]

MAX_N = 6


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass(frozen=True, eq=False)
class PhaseType:
    """Absorption time of a finite CTMC: initial row ``alpha`` and sub-generator.

    ``rows[i]`` maps column j to S[i][j] (diagonal included, zeros omitted).
    """

    alpha: tuple[Fraction, ...]
    rows: tuple[dict[int, Fraction], ...]
    labels: tuple[Hashable, ...] | None = None
    _order: list = field(default_factory=list, repr=False, compare=False)

    def __post_init__(self):
        alpha = tuple(_frac(a) for a in self.alpha)
        rows = tuple({int(j): _frac(v) for j, v in row.items() if v != 0} for row in self.rows)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "rows", rows)
        d = len(rows)
        if len(alpha) != d or d == 0:
            raise ValueError("alpha and S must have the same positive dimension")
        if any(a < 0 for a in alpha) or sum(alpha) != 1:
            raise ValueError("alpha must be a probability vector")
        for i, row in enumerate(rows):
            for j, v in row.items():
                if not 0 <= j < d:
                    raise ValueError(f"column {j} out of range")
                if j != i and v < 0:
                    raise ValueError(f"negative off-diagonal rate S[{i}][{j}]")
            if sum(row.values()) > 0:
                raise ValueError(f"row {i} of S has positive sum")
        self._check_absorbing()

    def _check_absorbing(self):
        d = self.d
        exits = [i for i in range(d) if self.exit_rate(i) > 0]
        back = [[] for _ in range(d)]
        for i, row in enumerate(self.rows):
            for j in row:
                if j != i:
                    back[j].append(i)
        seen = set(exits)
        queue = deque(exits)
        while queue:
            j = queue.popleft()
            for i in back[j]:
                if i not in seen:
                    seen.add(i)
                    queue.append(i)
        if len(seen) != d:
            raise ValueError("some transient states never reach absorption (S is singular)")

    @property
    def d(self) -> int:
        return len(self.rows)

    def exit_rate(self, i: int) -> Fraction:
        return -sum(self.rows[i].values(), Fraction(0))

    def dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.d for _ in range(self.d)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                out[i][j] = v
        return out

    @classmethod
    def from_dense(cls, alpha: Sequence, S: Sequence[Sequence], labels=None) -> "PhaseType":
        rows = tuple({j: v for j, v in enumerate(r) if v != 0} for r in S)
        return cls(tuple(alpha), rows, labels)

    def topological_order(self) -> list[int] | None:
        """States ordered so that every transition goes forward, or None if cyclic."""
        if self._order:
            return self._order[0]
        d = self.d
        indeg = [0] * d
        for i, row in enumerate(self.rows):
            for j in row:
                if j != i:
                    indeg[j] += 1
        queue = deque(i for i in range(d) if indeg[i] == 0)
        order = []
        while queue:
            i = queue.popleft()
            order.append(i)
            for j in self.rows[i]:
                if j != i:
                    indeg[j] -= 1
                    if indeg[j] == 0:
                        queue.append(j)
        result = order if len(order) == d else None
        self._order.append(result)
        return result


def exponential_ph(rate=1) -> PhaseType:
    rate = _frac(rate)
    return PhaseType((Fraction(1),), ({0: -rate},))


def erlang_ph(k: int, rate=1) -> PhaseType:
    rate = _frac(rate)
    rows = tuple({i: -rate, i + 1: rate} if i < k - 1 else {i: -rate} for i in range(k))
    alpha = (Fraction(1),) + (Fraction(0),) * (k - 1)
    return PhaseType(alpha, rows)


def _solve_triangular(ph: PhaseType, s, rhs, order):
    x = [None] * ph.d
    rows = [{j: _Q(v.numerator, v.denominator) for j, v in row.items()} for row in ph.rows]
    for i in reversed(order):
        row = rows[i]
        acc = rhs[i]
        diag = s
        for j, v in row.items():
            if j == i:
                diag = diag - v
            else:
                acc = acc + v * x[j]
        x[i] = acc / diag
    return x


def _solve_bareiss(ph: PhaseType, s, rhs):
    """Fraction-free Gaussian elimination of (sI - S) x = rhs.

    Rows are scaled to integers first; pivots are chosen as the nonzero entry
    of smallest bit length in the column.
    """
    d = ph.d
    M = []
    for i in range(d):
        row = [_Q(0)] * (d + 1)
        for j, v in ph.rows[i].items():
            row[j] = -_Q(v.numerator, v.denominator)
        row[i] = row[i] + s
        row[d] = rhs[i]
        lcm = 1
        for v in row:
            lcm = math.lcm(lcm, int(_Q(v).denominator))
        M.append([int(_Q(v) * lcm) for v in row])
    prev = 1
    for k in range(d):
        pivot = min(
            (r for r in range(k, d) if M[r][k] != 0),
            key=lambda r: abs(M[r][k]).bit_length(),
            default=None,
        )
        if pivot is None:
            raise ArithmeticError("singular system")
        if pivot != k:
            M[k], M[pivot] = M[pivot], M[k]
        mkk = M[k][k]
        rk = M[k]
        for i in range(k + 1, d):
            ri = M[i]
            mik = ri[k]
            for j in range(k + 1, d + 1):
                ri[j] = (ri[j] * mkk - mik * rk[j]) // prev
            ri[k] = 0
        prev = mkk
    x = [None] * d
    for i in range(d - 1, -1, -1):
        acc = _Q(M[i][d])
        for j in range(i + 1, d):
            if M[i][j]:
                acc -= M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return x


def solve(ph: PhaseType, s, rhs: Sequence, method: str = "auto") -> list[Fraction]:
    """Solve (sI - S) x = rhs exactly.

    ``method`` is 'auto' (back-substitution along a topological order when
    the transition graph is acyclic, else elimination), 'triangular' or
    'bareiss'.
    """
    s = _frac(s)
    if s < 0:
        raise ValueError("s must be nonnegative")
    sq = _Q(s.numerator, s.denominator)
    rq = [_Q(_frac(v).numerator, _frac(v).denominator) for v in rhs]
    order = ph.topological_order() if method in ("auto", "triangular") else None
    if method == "triangular" and order is None:
        raise ValueError("transition graph has cycles")
    x = _solve_triangular(ph, sq, rq, order) if order is not None else _solve_bareiss(ph, sq, rq)
    return [Fraction(int(v.numerator), int(v.denominator)) for v in x]


def lst_eval(ph: PhaseType, s, method: str = "auto") -> Fraction:
    """E[exp(-sT)] = alpha (sI - S)^{-1} (-S 1)."""
    exit_vec = [ph.exit_rate(i) for i in range(ph.d)]
    x = solve(ph, s, exit_vec, method)
    return sum((a * v for a, v in zip(ph.alpha, x) if a), Fraction(0))


def moments(ph: PhaseType, m: int, method: str = "auto") -> Fraction:
    """E[T^m] = m! alpha (-S)^{-m} 1."""
    if m < 1:
        raise ValueError("moment order must be >= 1")
    v = [Fraction(1)] * ph.d
    for _ in range(m):
        v = solve(ph, 0, v, method)
    return math.factorial(m) * sum((a * x for a, x in zip(ph.alpha, v) if a), Fraction(0))


@dataclass
class LstCertificate:
    passed: bool
    d1: int
    d2: int
    table: list[tuple[Fraction, Fraction, Fraction]]
    discrepancy: Fraction | None = None

    @property
    def n_points(self) -> int:
        return len(self.table)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "d1": self.d1,
            "d2": self.d2,
            "points": self.n_points,
            "discrepancy": None if self.discrepancy is None else str(self.discrepancy),
            "table": [[str(s), str(a), str(b)] for s, a, b in self.table],
        }


def lst_equal(ph1: PhaseType, ph2: PhaseType, points: Iterable | None = None,
              progress: Callable[[int, int], None] | None = None) -> LstCertificate:
    """Compare LSTs at d1 + d2 + 1 distinct points (default s = 1, 2, ...).

    Both transforms are rational of degree at most d1 and d2, so agreement at
    that many points proves equality in law.
    """
    if points is None:
        points = range(1, ph1.d + ph2.d + 2)
    points = [_frac(p) for p in points]
    if len(set(points)) != len(points):
        raise ValueError("evaluation points must be distinct")
    cert = LstCertificate(True, ph1.d, ph2.d, [])
    for idx, s in enumerate(points):
        a, b = lst_eval(ph1, s), lst_eval(ph2, s)
        cert.table.append((s, a, b))
        if progress:
            progress(idx + 1, len(points))
        if a != b:
            cert.passed = False
            cert.discrepancy = s
            break
    return cert


def _bfs_chain(start, moves: Callable, absorbed: Callable[[object], bool]) -> PhaseType:
    if absorbed(start):
        raise ValueError("initial state is already absorbed")
    index = {start: 0}
    labels = [start]
    rows: list[dict[int, Fraction]] = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        row: dict[int, Fraction] = {}
        out = Fraction(0)
        for nxt in moves(state):
            out += 1
            if absorbed(nxt):
                continue
            if nxt not in index:
                index[nxt] = len(labels)
                labels.append(nxt)
                queue.append(nxt)
            j = index[nxt]
            row[j] = row.get(j, Fraction(0)) + 1
        row[index[state]] = -out
        rows.append(row)
    alpha = (Fraction(1),) + (Fraction(0),) * (len(labels) - 1)
    return PhaseType(alpha, tuple(rows), tuple(labels))


def _check_n(n: int) -> None:
    if not 2 <= n <= MAX_N:
        raise ValueError(f"N must lie in 2..{MAX_N}")


def _osp_moves(perm: tuple[int, ...]):
    for k in range(len(perm) - 1):
        if perm[k] < perm[k + 1]:
            p = list(perm)
            p[k], p[k + 1] = p[k + 1], p[k]
            yield tuple(p)


def build_osp_chain(n: int) -> PhaseType:
    """OSP on permutations of [n]; absorption at the reverse permutation."""
    _check_n(n)
    rev = tuple(range(n, 0, -1))
    return _bfs_chain(tuple(range(1, n + 1)), _osp_moves, lambda p: p == rev)


def marginal_U_chain(n: int, k: int) -> PhaseType:
    """Last swap time at edge k: hitting time of {colors n-k+1..n fill positions 1..k}."""
    _check_n(n)
    if not 1 <= k <= n - 1:
        raise ValueError("k must lie in 1..N-1")
    top = frozenset(range(n - k + 1, n + 1))
    return _bfs_chain(tuple(range(1, n + 1)), _osp_moves, lambda p: frozenset(p[:k]) == top)


@dataclass(frozen=True)
class StaircaseIdeal:
    """Down-closed cell set of {(i, j): i + j <= n}, stored as row lengths."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.n - 1:
            raise ValueError("need one row length per staircase row")
        for i, r in enumerate(rows, start=1):
            if not 0 <= r <= self.n - i:
                raise ValueError(f"row {i} leaves the staircase")
            if i > 1 and r > rows[i - 2]:
                raise ValueError("row lengths must be nonincreasing (down-closed)")

    @classmethod
    def empty(cls, n: int) -> "StaircaseIdeal":
        return cls(n, (0,) * (n - 1))

    @classmethod
    def full(cls, n: int) -> "StaircaseIdeal":
        return cls(n, tuple(n - i for i in range(1, n)))

    def cells(self) -> frozenset[tuple[int, int]]:
        return frozenset((i, j) for i, r in enumerate(self.rows, start=1) for j in range(1, r + 1))

    def contains(self, i: int, j: int) -> bool:
        return 1 <= i <= self.n - 1 and j <= self.rows[i - 1] and j >= 1

    def addable(self) -> list[tuple[int, int]]:
        out = []
        for i, r in enumerate(self.rows, start=1):
            if r < self.n - i and (i == 1 or self.rows[i - 2] > r):
                out.append((i, r + 1))
        return out

    def add(self, i: int) -> "StaircaseIdeal":
        rows = list(self.rows)
        rows[i - 1] += 1
        return StaircaseIdeal(self.n, tuple(rows))


def staircase_ideals(n: int) -> list[StaircaseIdeal]:
    """All order ideals, by breadth-first growth from the empty one."""
    start = StaircaseIdeal.empty(n)
    seen = {start}
    queue = deque([start])
    while queue:
        lam = queue.popleft()
        for i, _ in lam.addable():
            nxt = lam.add(i)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return sorted(seen, key=lambda lam: (sum(lam.rows), lam.rows))


def _corner_moves(lam: StaircaseIdeal):
    for i, _ in lam.addable():
        yield lam.add(i)


def build_corner_chain(n: int) -> PhaseType:
    """Corner growth on the staircase; absorption once every cell is filled."""
    _check_n(n)
    full = StaircaseIdeal.full(n)
    return _bfs_chain(StaircaseIdeal.empty(n), _corner_moves, lambda lam: lam == full)


def marginal_V_chain(n: int, k: int) -> PhaseType:
    """L(k, n-k): hitting time of the ideals that contain cell (k, n-k)."""
    _check_n(n)
    if not 1 <= k <= n - 1:
        raise ValueError("k must lie in 1..N-1")
    return _bfs_chain(StaircaseIdeal.empty(n), _corner_moves, lambda lam: lam.contains(k, n - k))

