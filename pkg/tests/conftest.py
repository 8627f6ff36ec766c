"""Brute-force reference implementations shared by the test modules.

They walk subsets with itertools and evaluate sums either in exact Fractions
or in 60-digit mpmath floats, so they share no code with the engines.
"""

from fractions import Fraction
from itertools import combinations

import mpmath
import pytest

mpmath.mp.dps = 60
_ZERO = mpmath.mpf("1e-45")


def to_mpf(x):
    """Value of a length given as Fraction, int or ``("sqrt", Fraction)``."""
    if isinstance(x, tuple):
        return mpmath.sqrt(mpmath.mpf(x[1].numerator) / x[1].denominator)
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def sign_of(value):
    if isinstance(value, Fraction):
        return (value > 0) - (value < 0)
    if abs(value) < _ZERO:
        return 0
    return 1 if value > 0 else -1


def brute_counts(lengths):
    """(c, d, alpha) straight from the definitions, 0-based, telescopic leg last."""
    exact = not any(isinstance(x, tuple) for x in lengths)
    vals = [Fraction(x) for x in lengths] if exact else [to_mpf(x) for x in lengths]
    n = len(vals)
    total = sum(vals)
    fixed = vals[:-1]
    pivot = max(range(n - 1), key=lambda i: (fixed[i], -i))
    tel = n - 1

    def cls(J):
        return sign_of(2 * sum(vals[i] for i in J) - total)

    c = [0] * (n - 1)
    d = [0] * (n - 1)
    alpha = [0] * (n - 1)
    rest = [i for i in range(n - 1) if i != pivot]
    for size in range(len(rest) + 1):
        for K in combinations(rest, size):
            if cls((pivot,) + K) <= 0:
                c[size] += 1
            if cls((pivot, tel) + K) < 0:
                d[size + 1] += 1
    for size in range(n - 1):
        for K in combinations(range(n - 1), size):
            if cls(K + (tel,)) < 0:
                alpha[size] += 1
    return tuple(c), tuple(d), tuple(alpha)


def brute_generic(lengths):
    vals = [Fraction(x) for x in lengths]
    n = len(vals)
    for mask in range(1 << n):
        if sum(v if mask >> i & 1 else -v for i, v in enumerate(vals)) == 0:
            return False
    return True


@pytest.fixture
def brute():
    return brute_counts
