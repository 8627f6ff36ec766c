"""Short, median and long subsets of a length vector and the counts c_k, d_k, alpha_k.

Indices are 0-based throughout: a vector with ``n`` legs has fixed legs
``0 .. n-2`` and the telescopic leg at ``n-1``.

Three engines compute the same :class:`SubsetCounts`:

* :func:`count_ckdk_enum` walks every relevant subset (vectorised with numpy
  on exact integers); it is the authority the other engines are checked
  against.
* :func:`count_ckdk_dp` runs a cardinality-stratified subset-sum dynamic
  program on integer-scaled rational lengths.
* :func:`linkbetti.xy.count_ckdk_xy_closed` uses binomial coefficients for the
  repeated-leg vectors of the XY model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, EngineLimitError
from .exact import QuadraticScalar, ScalarLike, as_scalar

ENUM_CAP = 24
DP_MAX_CELLS = 10**8
_INT64_SAFE = 2**62


class SubsetClass(Enum):
    SHORT = "short"
    MEDIAN = "median"
    LONG = "long"


@dataclass(frozen=True)
class LengthVector:
    """Positive leg lengths; the last entry is the telescopic leg."""

    lengths: tuple[QuadraticScalar, ...]

    def __init__(self, lengths: Iterable[ScalarLike]):
        values = tuple(as_scalar(x) for x in lengths)
        if len(values) < 3:
            raise DomainError(f"a length vector needs n >= 3 legs, got n = {len(values)}")
        for i, x in enumerate(values):
            if x.sign() <= 0:
                raise DomainError(f"leg {i} has non-positive length {x}")
        radicands = {x.s for x in values if not x.is_rational}
        if len(radicands) > 1:
            raise DomainError(
                "at most one radicand per length vector is supported, got "
                + ", ".join(sorted(str(r) for r in radicands))
            )
        object.__setattr__(self, "lengths", values)

    @classmethod
    def parse(cls, text: str) -> "LengthVector":
        """Parse ``"1,1,1/2,sqrt(5/4)"``; the telescopic leg is last."""
        return cls(part for part in text.split(",") if part.strip())

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def fixed(self) -> tuple[QuadraticScalar, ...]:
        return self.lengths[:-1]

    @property
    def telescopic(self) -> QuadraticScalar:
        return self.lengths[-1]

    @property
    def is_rational(self) -> bool:
        return all(x.is_rational for x in self.lengths)

    def total(self) -> QuadraticScalar:
        return sum(self.lengths, QuadraticScalar(Fraction(0)))

    def canonical(self) -> "LengthVector":
        """Copy with the fixed legs sorted ascending; K_l is unchanged."""
        return LengthVector(sorted(self.fixed) + [self.telescopic])

    def with_telescopic(self, length: ScalarLike) -> "LengthVector":
        return LengthVector(self.fixed + (as_scalar(length),))

    def __getitem__(self, i):
        return self.lengths[i]

    def __len__(self):
        return len(self.lengths)

    def __iter__(self):
        return iter(self.lengths)

    def __str__(self):
        return ",".join(str(x) for x in self.lengths)


@dataclass(frozen=True)
class SubsetCounts:
    """c_k for k = 0..n-2, d_k for k = 0..n-2 (d_0 = 0), optional alpha_k."""

    c: tuple[int, ...]
    d: tuple[int, ...]
    max_fixed_index: int
    generic: bool | None = None
    alpha: tuple[int, ...] | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.c) + 1


@dataclass(frozen=True)
class _Scaled:
    """Integer form: leg i equals ``(A[i] + B[i] * sqrt(S)) / D``."""

    A: tuple[int, ...]
    B: tuple[int, ...]
    S: int
    D: int

    @property
    def total(self) -> tuple[int, int]:
        return sum(self.A), sum(self.B)

    def magnitude(self) -> int:
        return max(sum(abs(a) for a in self.A), sum(abs(b) for b in self.B), 1)


def _scaled(lv: LengthVector) -> _Scaled:
    radicand = next((x.s for x in lv if not x.is_rational), Fraction(0))
    p, q = radicand.numerator, radicand.denominator
    a_parts = [x.a for x in lv]
    # b*sqrt(p/q) == (b/q)*sqrt(p*q)
    b_parts = [x.b / q for x in lv]
    D = math.lcm(*(v.denominator for v in a_parts + b_parts))
    return _Scaled(
        tuple(int(v * D) for v in a_parts),
        tuple(int(v * D) for v in b_parts),
        p * q,
        D,
    )


def half_perimeter(lv: LengthVector) -> QuadraticScalar:
    return lv.total() / 2


def classify_subset(lv: LengthVector, J: Iterable[int]) -> SubsetClass:
    """Classify the index set ``J`` (0-based) against half the perimeter."""
    J = set(J)
    if not J <= set(range(lv.n)):
        raise DomainError(f"subset {sorted(J)} is not contained in 0..{lv.n - 1}")
    inside = sum((lv[i] for i in J), QuadraticScalar(Fraction(0)))
    sign = (2 * inside - lv.total()).sign()
    if sign < 0:
        return SubsetClass.SHORT
    if sign == 0:
        return SubsetClass.MEDIAN
    return SubsetClass.LONG


def max_fixed_index(lv: LengthVector) -> int:
    """Smallest index among the fixed legs attaining the maximum length."""
    best = 0
    for i in range(1, lv.n - 1):
        if lv[i] > lv[best]:
            best = i
    return best


def tied_max_indices(lv: LengthVector) -> list[int]:
    top = lv[max_fixed_index(lv)]
    return [i for i in range(lv.n - 1) if lv[i] == top]


def is_generic(lv: LengthVector) -> bool:
    """True iff no signed sum of the lengths vanishes (no median subset)."""
    sc = _scaled(lv)
    ta, tb = sc.total
    if all(b == 0 for b in sc.B):
        if ta % 2:
            return True
        reachable = 1
        for a in sc.A:
            reachable |= reachable << a
        return not (reachable >> (ta // 2)) & 1
    # sqrt(S) is irrational, so a median needs both parts to halve exactly
    if ta % 2 or tb % 2:
        return True
    reachable = {(0, 0)}
    for a, b in zip(sc.A, sc.B):
        reachable |= {(x + a, y + b) for x, y in reachable}
    return (ta // 2, tb // 2) not in reachable


def min_positive_signed_sum(values: Sequence[ScalarLike]) -> QuadraticScalar:
    """Smallest positive value of sum(eps_i * x_i) over eps_i = +-1."""
    lv = LengthVector(list(values))
    sc = _scaled(lv)
    denom = sc.D
    ta, tb = sc.total
    if all(b == 0 for b in sc.B):
        reachable = 1
        for a in sc.A:
            reachable |= reachable << a
        # signed sum = T - 2*s for the subset s taking the minus sign
        below = reachable & ((1 << ((ta + 1) // 2)) - 1)
        best = ta - 2 * (below.bit_length() - 1)
        return QuadraticScalar(Fraction(best, denom))
    best = None
    for x, y in _enumerate_pairs(sc.A, sc.B):
        cand = QuadraticScalar(Fraction(ta - 2 * x, denom), Fraction(tb - 2 * y, denom), Fraction(sc.S))
        if cand.sign() > 0 and (best is None or cand < best):
            best = cand
    return best


def _enumerate_pairs(A, B):
    sums = {(0, 0)}
    for a, b in zip(A, B):
        sums |= {(x + a, y + b) for x, y in sums}
    return sums


# --- exhaustive enumeration -------------------------------------------------


def _dtype_for(sc: _Scaled):
    m = 4 * sc.magnitude()
    return np.int64 if m * m * max(sc.S, 1) < _INT64_SAFE else object


def subset_sum_table(weights_a, weights_b, dtype=np.int64):
    """All 2^m subset sums of integer pairs; row ``mask`` has bit j for leg j.

    Returns ``(sum_a, sum_b, cardinality)``.
    """
    sa = np.zeros(1, dtype=dtype)
    sb = np.zeros(1, dtype=dtype)
    card = np.zeros(1, dtype=np.int64)
    for a, b in zip(weights_a, weights_b):
        sa = np.concatenate([sa, sa + a])
        sb = np.concatenate([sb, sb + b])
        card = np.concatenate([card, card + 1])
    return sa, sb, card


def vector_sign(x: np.ndarray, y: np.ndarray, S: int) -> np.ndarray:
    """Elementwise sign of ``x + y*sqrt(S)`` for integer arrays."""
    sx = (x > 0).astype(np.int8) - (x < 0).astype(np.int8)
    if S == 0:
        return sx
    sy = (y > 0).astype(np.int8) - (y < 0).astype(np.int8)
    diff = x * x - y * y * S
    sd = (diff > 0).astype(np.int8) - (diff < 0).astype(np.int8)
    opposite = np.where(sd > 0, sx, np.where(sd < 0, sy, 0))
    return np.where(sy == 0, sx, np.where((sx == 0) | (sx == sy), sy, opposite)).astype(np.int8)


def _check_enum_cap(n: int, cap: int):
    if n > cap:
        raise EngineLimitError(
            f"enumeration is capped at n = {cap} legs (got n = {n}); "
            "use count_ckdk_dp for rational vectors or the closed-form XY engine"
        )


def count_ckdk_enum(lv: LengthVector, pivot: int | None = None, cap: int = ENUM_CAP) -> SubsetCounts:
    """c_k and d_k by visiting every subset that contains the pivot leg."""
    n = lv.n
    _check_enum_cap(n, cap)
    pivot = max_fixed_index(lv) if pivot is None else _check_pivot(lv, pivot)
    sc = _scaled(lv)
    dtype = _dtype_for(sc)
    others = [i for i in range(n - 1) if i != pivot]
    sa, sb, card = subset_sum_table([sc.A[i] for i in others], [sc.B[i] for i in others], dtype)
    ta, tb = sc.total
    tel = n - 1
    # J = {pivot} + K:            short or median  <=>  2*sum(J) - T <= 0
    x = 2 * (sa + sc.A[pivot]) - ta
    y = 2 * (sb + sc.B[pivot]) - tb
    c_mask = vector_sign(x, y, sc.S) <= 0
    # J = {pivot, tel} + K:       strictly short
    x = x + 2 * sc.A[tel]
    y = y + 2 * sc.B[tel]
    d_mask = vector_sign(x, y, sc.S) < 0
    c = np.bincount(card[c_mask], minlength=n - 1)
    d = np.zeros(n - 1, dtype=np.int64)
    d[1:] = np.bincount(card[d_mask], minlength=n - 1)[: n - 2]
    return SubsetCounts(
        c=tuple(int(v) for v in c),
        d=tuple(int(v) for v in d),
        max_fixed_index=pivot,
        generic=is_generic(lv),
    )


def alpha_enum(lv: LengthVector, cap: int = ENUM_CAP) -> tuple[int, ...]:
    n = lv.n
    _check_enum_cap(n, cap)
    sc = _scaled(lv)
    sa, sb, card = subset_sum_table(sc.A[:-1], sc.B[:-1], _dtype_for(sc))
    ta, tb = sc.total
    x = 2 * (sa + sc.A[-1]) - ta
    y = 2 * (sb + sc.B[-1]) - tb
    mask = vector_sign(x, y, sc.S) < 0
    return tuple(int(v) for v in np.bincount(card[mask], minlength=n)[: n - 1])


def _check_pivot(lv: LengthVector, pivot: int) -> int:
    if pivot not in tied_max_indices(lv):
        raise DomainError(f"index {pivot} is not a longest fixed leg")
    return pivot


# --- dynamic programming ----------------------------------------------------


def _rational_weights(lv: LengthVector, engine: str) -> list[int]:
    if not lv.is_rational:
        raise EngineLimitError(
            f"{engine} needs rational lengths; this vector has a quadratic leg, "
            "use count_ckdk_enum or the closed-form XY engine"
        )
    return list(_scaled(lv).A)


def _cardinality_table(weights: list[int], cap: int) -> np.ndarray:
    """table[j, s] = number of j-element sub-multisets of ``weights`` summing to s <= cap."""
    m = len(weights)
    rows, cols = m + 1, cap + 1
    if rows * cols > DP_MAX_CELLS:
        raise EngineLimitError(
            f"subset-sum table would need {rows * cols} cells (limit {DP_MAX_CELLS}); "
            "lengths have too fine a common denominator for the DP engine"
        )
    # C(m, j) < 2**63 for m <= 62
    dtype = np.int64 if m <= 62 else object
    table = np.zeros((rows, cols), dtype=dtype)
    table[0, 0] = 1
    for count, w in enumerate(weights, start=1):
        if w > cap:
            continue
        table[1 : count + 1, w:] += table[:count, : cols - w].copy()
    return table


def count_ckdk_dp(lv: LengthVector, pivot: int | None = None) -> SubsetCounts:
    """Same contract as :func:`count_ckdk_enum`, for rational lengths only."""
    weights = _rational_weights(lv, "count_ckdk_dp")
    n = lv.n
    pivot = max_fixed_index(lv) if pivot is None else _check_pivot(lv, pivot)
    total = sum(weights)
    wp, wt = weights[pivot], weights[-1]
    others = [weights[i] for i in range(n - 1) if i != pivot]
    # 2*(wp + s) <= T  and  2*(wp + wt + s) < T
    c_cap = (total - 2 * wp) // 2
    d_cap = (total - 2 * wp - 2 * wt - 1) // 2
    c = [0] * (n - 1)
    d = [0] * (n - 1)
    if c_cap >= 0:
        table = _cardinality_table(others, c_cap)
        for k in range(n - 1):
            c[k] = int(table[k].sum())
        if d_cap >= 0:
            for k in range(1, n - 1):
                d[k] = int(table[k - 1, : d_cap + 1].sum())
    return SubsetCounts(c=tuple(c), d=tuple(d), max_fixed_index=pivot, generic=is_generic(lv))


def alpha_dp(lv: LengthVector) -> tuple[int, ...]:
    weights = _rational_weights(lv, "alpha_dp")
    total = sum(weights)
    cap = (total - 2 * weights[-1] - 1) // 2
    n = lv.n
    if cap < 0:
        return (0,) * (n - 1)
    table = _cardinality_table(weights[:-1], cap)
    return tuple(int(table[k].sum()) for k in range(n - 1))


def count_alpha(lv: LengthVector) -> tuple[int, ...]:
    """alpha_k = number of short (k+1)-subsets containing the telescopic leg."""
    if lv.is_rational:
        try:
            return alpha_dp(lv)
        except EngineLimitError:
            if lv.n > ENUM_CAP:
                raise
    return alpha_enum(lv)


def count_ckdk(lv: LengthVector, with_alpha: bool = False) -> SubsetCounts:
    """Dispatch to the cheapest exact engine able to handle ``lv``."""
    counts = None
    if lv.is_rational:
        try:
            counts = count_ckdk_dp(lv)
        except EngineLimitError:
            if lv.n > ENUM_CAP:
                raise
    if counts is None:
        counts = count_ckdk_enum(lv)
    if with_alpha:
        counts = SubsetCounts(counts.c, counts.d, counts.max_fixed_index, counts.generic, count_alpha(lv))
    return counts
