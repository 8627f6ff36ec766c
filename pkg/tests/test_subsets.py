import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import brute_counts, brute_generic
from linkbetti.errors import DomainError, EngineLimitError
from linkbetti.exact import QuadraticScalar
from linkbetti.subsets import (
    LengthVector,
    SubsetClass,
    alpha_enum,
    classify_subset,
    count_alpha,
    count_ckdk,
    count_ckdk_dp,
    count_ckdk_enum,
    half_perimeter,
    is_generic,
    max_fixed_index,
    min_positive_signed_sum,
)
from linkbetti.xy import XYParams

legs = st.fractions(min_value=Fraction(1, 8), max_value=12, max_denominator=8).filter(lambda x: x > 0)


def lv(*xs):
    return LengthVector(Fraction(x) if not isinstance(x, str) else x for x in xs)


def test_half_perimeter():
    assert half_perimeter(lv(1, 2, 3, 4, 5)) == Fraction(15, 2)
    assert half_perimeter(lv(1, 1, 1, "1/2")) == Fraction(7, 4)
    assert half_perimeter(XYParams(4, 2, 0).length_vector()) == Fraction(5, 2)


@pytest.mark.parametrize(
    "lengths, J, expected",
    [
        ((1, 2, 3, 4, 5), {0, 1, 2}, SubsetClass.SHORT),
        ((1, 2, 3), {2}, SubsetClass.MEDIAN),
        ((1, 2, 3, 4, 5), {3, 4}, SubsetClass.LONG),
    ],
)
def test_classify(lengths, J, expected):
    assert classify_subset(lv(*lengths), J) is expected


def test_genericity_examples():
    assert is_generic(lv(1, 2, 4))
    assert not is_generic(lv(1, 2, 3))
    assert not is_generic(XYParams(4, 2, 0).length_vector())


def test_max_fixed_index_zero_based():
    assert max_fixed_index(lv(1, 1, 1, "1/2")) == 0
    assert max_fixed_index(lv(1, 3, 2, 5)) == 1
    params = XYParams(6, 2, Fraction(1, 3))
    assert max_fixed_index(params.length_vector()) == params.N


@pytest.mark.parametrize(
    "lengths, c, d",
    [
        ((1, 1, "1/2"), (1, 0), (0, 0)),
        ((1, 1, 1, "1/2"), (1, 0, 0), (0, 1, 0)),
        ((1, 1, 1, 2), (1, 2, 0), (0, 0, 0)),
    ],
)
def test_small_count_examples(lengths, c, d):
    for engine in (count_ckdk_enum, count_ckdk_dp, count_ckdk):
        counts = engine(lv(*lengths))
        assert counts.c == c and counts.d == d


@pytest.mark.parametrize(
    "lengths, alpha",
    [((1, 1, 1, 2), (1, 0, 0)), ((1, 1, 1, "1/2"), (1, 3, 0)), ((1, 1, 10), (0, 0))],
)
def test_alpha_examples(lengths, alpha):
    assert count_alpha(lv(*lengths)) == alpha
    assert alpha_enum(lv(*lengths)) == alpha


def test_engines_agree_on_one_to_six():
    v = lv(1, 2, 3, 4, 5, 6)
    assert count_ckdk_dp(v) == count_ckdk_enum(v)


def test_dp_handles_forty_legs():
    rng = random.Random(3)
    v = LengthVector(Fraction(rng.randint(1, 40), rng.randint(1, 4)) for _ in range(40))
    counts = count_ckdk_dp(v)
    assert len(counts.c) == 39
    assert all(0 <= ck <= math.comb(38, k) for k, ck in enumerate(counts.c))


@settings(max_examples=150, deadline=None)
@given(st.lists(legs, min_size=3, max_size=9))
def test_engines_match_brute_force(values):
    v = LengthVector(values)
    c, d, alpha = brute_counts(values)
    enum = count_ckdk_enum(v)
    assert (enum.c, enum.d) == (c, d)
    assert count_ckdk_dp(v) == enum
    assert count_alpha(v) == alpha


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=3, max_size=8), st.sampled_from([2, 3, 5, Fraction(5, 4)]))
def test_quadratic_telescopic_leg_matches_mpmath(fixed, radicand):
    values = [Fraction(x) for x in fixed] + [("sqrt", Fraction(radicand))]
    v = LengthVector([Fraction(x) for x in fixed] + [QuadraticScalar.sqrt(radicand)])
    c, d, alpha = brute_counts(values)
    counts = count_ckdk(v, with_alpha=True)
    assert (counts.c, counts.d, counts.alpha) == (c, d, alpha)


def test_xy_vector_enumeration_matches_mpmath():
    for N, h, v in ((4, 2, Fraction(-1)), (5, Fraction(1, 2), Fraction(1, 10)), (7, 1, Fraction(-1, 3))):
        params = XYParams(N, h, v)
        rad = 2 * params.v + params.h ** 2
        values = [Fraction(1, N)] * N + [params.h, ("sqrt", rad)]
        c, d, _ = brute_counts(values)
        counts = count_ckdk_enum(params.length_vector())
        assert (counts.c, counts.d) == (c, d)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 20), min_size=2, max_size=10))
def test_genericity_and_margin_against_brute_force(values):
    assume(len(values) >= 3)
    assert is_generic(LengthVector(values)) == brute_generic(values)
    if brute_generic(values):
        sums = set()
        for mask in range(1 << len(values)):
            sums.add(sum(x if mask >> i & 1 else -x for i, x in enumerate(values)))
        assert min_positive_signed_sum(values) == min(s for s in sums if s > 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(legs, min_size=3, max_size=9), st.randoms(use_true_random=False))
def test_counts_ignore_fixed_leg_order(values, rnd):
    fixed = values[:-1]
    rnd.shuffle(fixed)
    a = count_ckdk(LengthVector(values))
    b = count_ckdk(LengthVector(fixed + values[-1:]))
    assert (a.c, a.d) == (b.c, b.d)


def test_invalid_vectors():
    with pytest.raises(DomainError):
        lv(1, 2)
    with pytest.raises(DomainError):
        lv(1, 0, 2)
    with pytest.raises(DomainError):
        LengthVector([1, QuadraticScalar.sqrt(2), QuadraticScalar.sqrt(3)])
    with pytest.raises(EngineLimitError):
        count_ckdk_dp(LengthVector([1, 2, QuadraticScalar.sqrt(2)]))
    with pytest.raises(EngineLimitError):
        count_ckdk_enum(LengthVector(range(1, 30)))


def test_dp_guard_on_fine_denominators():
    v = LengthVector([1 + Fraction(1, 10**6 + 3), 1 + Fraction(1, 10**6 + 33), 1, 1, Fraction(1, 3)])
    with pytest.raises(EngineLimitError):
        count_ckdk_dp(v)
    # the dispatcher falls back to enumeration
    assert count_ckdk(v) == count_ckdk_enum(v)


def test_parse_round_trip():
    v = LengthVector.parse("1,1,1/2,sqrt(5/4)")
    assert str(v) == "1,1,1/2,sqrt(5/4)"
    assert v.n == 4 and not v.is_rational
