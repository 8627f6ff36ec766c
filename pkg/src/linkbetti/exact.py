"""Exact arithmetic over Q and a single quadratic extension Q(sqrt s).

Leg lengths are rationals except for the telescopic leg of the XY model,
whose length sqrt(2v + h^2) is in general irrational.  Every comparison that
decides whether a subset is short, median or long goes through
:func:`qs_sign`, which never touches floating point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational
from typing import Union

from .errors import DomainError, IncompatibleRadicandError

RationalLike = Union[int, Fraction, str]
ScalarLike = Union["QuadraticScalar", int, Fraction, str]

_SQRT_RE = re.compile(r"^\s*sqrt\s*[:(]\s*([^()]+?)\s*\)?\s*$")


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"p/q"``, an integer string or a finite decimal string exactly.

    >>> parse_rational("0.5")
    Fraction(1, 2)
    >>> parse_rational("-3/6")
    Fraction(-1, 2)
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise DomainError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Rational):
        return Fraction(text.numerator, text.denominator)
    if isinstance(text, float):
        raise DomainError("binary floats are not accepted on the exact path; pass a string")
    try:
        value = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational literal: {text!r}") from exc
    return value


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Return the rational square root of ``x`` if it exists, else None."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def _sign_int(x) -> int:
    return (x > 0) - (x < 0)


def sign_a_plus_b_sqrt(a, b, s) -> int:
    """Sign of ``a + b*sqrt(s)`` for exact rationals or ints, ``s >= 0``."""
    sa, sb = _sign_int(a), _sign_int(b) if s else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the term with the larger square wins
    lhs, rhs = a * a, b * b * s
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


@total_ordering
@dataclass(frozen=True, eq=False)
class QuadraticScalar:
    """The real number ``a + b*sqrt(s)`` with rational ``a, b, s``.

    Construct through :meth:`rational`, :meth:`sqrt` or :func:`as_scalar`;
    they normalise perfect-square radicands away so that a pure rational is
    always stored with ``b == 0`` and ``s == 0``.
    """

    a: Fraction
    b: Fraction = Fraction(0)
    s: Fraction = Fraction(0)

    def __post_init__(self):
        a, b, s = Fraction(self.a), Fraction(self.b), Fraction(self.s)
        if s < 0:
            raise DomainError(f"negative radicand {s}")
        root = rational_sqrt(s)
        if b == 0 or root is not None:
            a, b, s = a + b * (root or 0), Fraction(0), Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "s", s)

    @classmethod
    def rational(cls, x: RationalLike) -> "QuadraticScalar":
        return cls(parse_rational(x))

    @classmethod
    def sqrt(cls, x: RationalLike) -> "QuadraticScalar":
        """The non-negative square root of a rational."""
        x = parse_rational(x)
        if x < 0:
            raise DomainError(f"square root of negative number {x}")
        return cls(Fraction(0), Fraction(1), x)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise DomainError(f"{self} is irrational")
        return self.a

    def _radicand_with(self, other: "QuadraticScalar") -> Fraction:
        if self.is_rational:
            return other.s
        if other.is_rational or other.s == self.s:
            return self.s
        raise IncompatibleRadicandError(
            f"cannot combine sqrt({self.s}) and sqrt({other.s}): mixed extensions are unsupported"
        )

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        s = self._radicand_with(other)
        return QuadraticScalar(self.a + other.a, self.b + other.b, s)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticScalar(-self.a, -self.b, self.s)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        s = self._radicand_with(other)
        return QuadraticScalar(
            self.a * other.a + self.b * other.b * s,
            self.a * other.b + self.b * other.a,
            s,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QuadraticScalar):
            other = other.as_fraction()
        other = parse_rational(other)
        if other == 0:
            raise ZeroDivisionError("division of quadratic scalar by zero")
        return QuadraticScalar(self.a / other, self.b / other, self.s)

    def sign(self) -> int:
        return sign_a_plus_b_sqrt(self.a, self.b, self.s)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() == 0

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b, self.s))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.s)

    def floor(self) -> int:
        """Exact floor, correcting a floating estimate by exact comparisons."""
        if self.is_rational:
            return math.floor(self.a)
        # b*sqrt(s) = sign(b) * sqrt(b^2 s): take an integer sqrt of a scaled square
        t = self.b * self.b * self.s
        scale = t.denominator
        root = Fraction(math.isqrt(t.numerator * scale), scale)
        guess = math.floor(self.a + (root if self.b > 0 else -root))
        while (self - (guess + 1)).sign() >= 0:
            guess += 1
        while (self - guess).sign() < 0:
            guess -= 1
        return guess

    def __str__(self):
        if self.is_rational:
            return format_rational(self.a)
        if self.a == 0 and self.b == 1:
            return f"sqrt({format_rational(self.s)})"
        return f"{format_rational(self.a)}+{format_rational(self.b)}*sqrt({format_rational(self.s)})"

    def __repr__(self):
        return f"QuadraticScalar({self})"


def _coerce(x):
    if isinstance(x, QuadraticScalar):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return QuadraticScalar(Fraction(x))
    return NotImplemented


def as_scalar(x: ScalarLike) -> QuadraticScalar:
    """Coerce a rational literal, ``"sqrt(p/q)"`` or ``"sqrt:p/q"`` string."""
    if isinstance(x, QuadraticScalar):
        return x
    if isinstance(x, str):
        m = _SQRT_RE.match(x)
        if m:
            return QuadraticScalar.sqrt(m.group(1))
    return QuadraticScalar.rational(x)


def qs_sign(x: QuadraticScalar) -> int:
    return x.sign()


def qs_compare(x: ScalarLike, y: ScalarLike) -> int:
    """Return -1, 0 or +1 as ``x`` is below, equal to or above ``y``."""
    return (as_scalar(x) - as_scalar(y)).sign()


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
