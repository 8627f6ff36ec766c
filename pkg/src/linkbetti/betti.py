"""Betti numbers of the telescopic linkage space K_l from the subset counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError
from .exact import ScalarLike, as_scalar
from .subsets import (
    LengthVector,
    SubsetCounts,
    count_ckdk,
    is_generic,
    min_positive_signed_sum,
)


@dataclass(frozen=True)
class BettiProfile:
    n: int
    b: tuple[int, ...]
    generic: bool | None
    disconnected: bool | None = None

    @property
    def dimension(self) -> int:
        return self.n - 2

    @property
    def total(self) -> int:
        return sum(self.b)

    @property
    def euler(self) -> int:
        return sum(-x if k % 2 else x for k, x in enumerate(self.b))

    @property
    def euler_sign(self) -> int:
        return (self.euler > 0) - (self.euler < 0)

    @property
    def euler_abs(self) -> int:
        return abs(self.euler)

    def betti(self, k: int) -> int:
        return self.b[k] if 0 <= k < len(self.b) else 0

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "dimension": self.dimension,
            "b": [json_int(x) for x in self.b],
            "total": json_int(self.total),
            "euler": json_int(self.euler),
            "generic": self.generic,
            "disconnected": self.disconnected,
        }


def json_int(x: int):
    """Integers beyond the IEEE double range travel as decimal strings."""
    return x if abs(x) < 2**53 else str(x)


def betti_profile(counts: SubsetCounts, n: int | None = None) -> BettiProfile:
    """b_k = c_k + d_{n-3-k} for k = 0..n-2, with d_j = 0 for j <= 0."""
    n = counts.n if n is None else n
    if len(counts.c) != n - 1 or len(counts.d) != n - 1:
        raise DomainError(f"counts have length {len(counts.c)}, expected {n - 1} for n = {n}")

    def d(j):
        return counts.d[j] if 0 < j < len(counts.d) else 0

    b = tuple(counts.c[k] + d(n - 3 - k) for k in range(n - 1))
    return BettiProfile(n=n, b=b, generic=counts.generic)


def profile_of(lv: LengthVector) -> BettiProfile:
    """Profile of ``lv`` with the length-inequality connectivity verdict attached."""
    prof = betti_profile(count_ckdk(lv), lv.n)
    verdict = disconnection_inequality(lv) if lv.n > 3 else None
    return BettiProfile(prof.n, prof.b, prof.generic, verdict)


def disconnection_inequality(lv: LengthVector) -> bool:
    """l_{n-3} + l_{n-2} > s* on the sorted vector (1-based in the usual notation)."""
    if lv.n <= 3:
        raise DomainError(f"the disconnection criterion needs n > 3, got n = {lv.n}")
    can = lv.canonical()
    n = can.n
    # 1-based legs n-3 and n-2 are 0-based n-4 and n-3
    return (2 * (can[n - 4] + can[n - 3]) - can.total()).sign() > 0


def is_disconnected(lv: LengthVector) -> tuple[bool, int]:
    """Return (disconnected, number of components) from the length inequality."""
    verdict = disconnection_inequality(lv)
    return verdict, 2 if verdict else 1


def small_leg_stability(fixed: Sequence[ScalarLike], candidates: Iterable[ScalarLike]) -> bool:
    """Check that every admissible small telescopic length gives the same profile.

    ``fixed`` must be generic and each candidate must lie strictly below its
    smallest positive signed sum.
    """
    fixed = [as_scalar(x) for x in fixed]
    candidates = [as_scalar(x) for x in candidates]
    if len(fixed) < 3:
        raise DomainError(f"need at least three fixed legs, got {len(fixed)}")
    if not candidates:
        raise DomainError("no candidate telescopic lengths given")
    if not is_generic(LengthVector(fixed)):
        raise DomainError("fixed-leg vector is not generic")
    bound = min_positive_signed_sum(fixed)
    for t in candidates:
        if t.sign() <= 0 or not t < bound:
            raise DomainError(
                f"telescopic length {t} is not small: it must lie in (0, {bound})"
            )
    profiles = {betti_profile(count_ckdk(LengthVector(fixed + [t]))).b for t in candidates}
    return len(profiles) == 1
