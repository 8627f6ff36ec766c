import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linkbetti.betti import (
    betti_profile,
    disconnection_inequality,
    is_disconnected,
    json_int,
    profile_of,
    small_leg_stability,
)
from linkbetti.errors import DomainError
from linkbetti.subsets import LengthVector, SubsetCounts, count_ckdk, is_generic
from linkbetti.xy import count_ckdk_xy_closed

legs = st.fractions(min_value=Fraction(1, 6), max_value=10, max_denominator=6).filter(lambda x: x > 0)


def prof(text):
    return profile_of(LengthVector.parse(text))


def test_torus_minus_disk():
    p = prof("1,1,1,2")
    assert p.b == (1, 2, 0) and p.total == 3 and p.euler == -1
    assert p.disconnected is False and p.generic


def test_two_disks():
    p = prof("1,1,1,1/2")
    assert p.b == (2, 0, 0) and p.total == 2 and p.euler == 2
    assert p.disconnected is True


def test_xy_profile_from_closed_form():
    p = betti_profile(count_ckdk_xy_closed(4, 2, 0))
    assert p.b == (1, 4, 6, 0, 0) and p.total == 11 and p.euler == 3
    assert p.euler_sign == 1 and p.euler_abs == 3


def test_two_copies_of_torus_times_disk():
    v = LengthVector.parse("1,1,5,5,5,1/2")
    assert is_disconnected(v) == (True, 2)
    assert profile_of(v).b == (2, 4, 2, 0, 0)


def test_connected_example():
    assert is_disconnected(LengthVector.parse("1,1,1,2")) == (False, 1)


def test_disconnection_needs_four_legs():
    with pytest.raises(DomainError):
        disconnection_inequality(LengthVector.parse("1,1,1"))


def test_betti_from_counts_convention():
    # d_0 never contributes, even if a caller hands in a nonzero entry
    counts = SubsetCounts(c=(1, 0, 0), d=(5, 1, 0), max_fixed_index=0)
    assert betti_profile(counts).b == (2, 0, 0)


@settings(max_examples=150, deadline=None)
@given(st.lists(legs, min_size=4, max_size=10))
def test_connectivity_verdict_matches_b0(values):
    v = LengthVector(values)
    if not is_generic(v):
        return
    p = profile_of(v)
    assert all(x >= 0 for x in p.b) and len(p.b) == v.n - 1
    if p.b[0] == 0:
        return  # empty linkage space
    assert p.b[0] in (1, 2)
    assert p.disconnected == (p.b[0] == 2)
    if p.disconnected:
        assert p.b == tuple(2 * math.comb(v.n - 4, k) for k in range(v.n - 1))


@settings(max_examples=100, deadline=None)
@given(st.lists(legs, min_size=4, max_size=10))
def test_poincare_duality_of_closed_shapes(values):
    # sum of Betti numbers and Euler characteristic are consistent
    p = profile_of(LengthVector(values))
    assert p.total == sum(p.b)
    assert p.euler == sum((-1) ** k * x for k, x in enumerate(p.b))
    assert p.betti(-1) == 0 and p.betti(len(p.b)) == 0


def test_small_leg_examples():
    assert small_leg_stability([1, 2, 4], ["1/2", "1/4", "1/8"])
    assert small_leg_stability([1, 1, 1], ["1/2", "1/4"]) is True
    with pytest.raises(DomainError):
        small_leg_stability([1, 2, 4], ["1/2", "3/2"])
    with pytest.raises(DomainError):
        small_leg_stability([1, 2, 3], ["1/2"])


def test_json_int_large_values_become_strings():
    assert json_int(5) == 5
    assert json_int(2**60) == str(2**60)
    assert json_int(-(2**60)) == str(-(2**60))


def test_record_fields():
    rec = prof("1,1,1,2").to_record()
    assert rec == {
        "n": 4,
        "dimension": 2,
        "b": [1, 2, 0],
        "total": 3,
        "euler": -1,
        "generic": True,
        "disconnected": False,
    }


def test_counts_for_large_rational_vector():
    v = LengthVector([Fraction(k, 3) for k in range(1, 31)])
    p = betti_profile(count_ckdk(v))
    assert len(p.b) == 29 and p.total > 0
