import math
import random
from fractions import Fraction

import numpy as np
import pytest

from linkbetti.betti import betti_profile, profile_of
from linkbetti.errors import DomainError, InconclusiveError
from linkbetti.oracle import (
    DisjointSet,
    base_resolution,
    cell_slack,
    GridConfig,
    count_periodic_components,
    enum_subsets,
    f_value,
    genericity_margin,
    grid_b0,
)
from linkbetti.subsets import LengthVector, SubsetClass, count_ckdk


def test_f_value_examples():
    assert f_value(LengthVector.parse("1,1,1"), [math.pi]) == pytest.approx(0.0, abs=1e-24)
    assert f_value(LengthVector.parse("1,1,1"), [0.0]) == pytest.approx(-4.0)
    assert f_value(LengthVector.parse("1,2,3,1"), [math.pi, 0.0]) == pytest.approx(-4.0)
    with pytest.raises(DomainError):
        f_value(LengthVector.parse("1,2,3,1"), [0.0])


@pytest.mark.parametrize("text, expected", [("1,1,1,1/2", 2), ("1,1,1,2", 1), ("1,1,5,5,5,1/2", 2)])
def test_grid_examples(text, expected):
    v = LengthVector.parse(text)
    assert grid_b0(v) == expected == betti_profile(count_ckdk(v)).b[0]


def test_six_legs_at_finer_base():
    assert grid_b0(LengthVector.parse("1,1,5,5,5,1/2"), GridConfig(resolution=24, refinement_rounds=2)) == 2


def test_non_generic_vectors_rejected():
    with pytest.raises(DomainError):
        grid_b0(LengthVector.parse("1,2,3,2"))
    with pytest.raises(DomainError):
        grid_b0(LengthVector.parse("1,1,1,2"), GridConfig(min_margin=5.0))


def test_grid_config_validation():
    with pytest.raises(DomainError):
        GridConfig(resolution=8)
    with pytest.raises(DomainError):
        GridConfig(refinement_rounds=0)


def test_disjoint_set():
    ds = DisjointSet(6)
    ds.union(0, 1)
    ds.union(2, 3)
    ds.union(1, 3)
    assert ds.find(0) == ds.find(2)
    assert len({ds.find(i) for i in range(6)}) == 3


def test_periodic_components_wrap_around():
    mask = np.zeros((8, 8), dtype=bool)
    mask[0, 2] = mask[7, 2] = True  # joined through the top/bottom seam
    mask[3, 0] = mask[3, 7] = True  # joined through the left/right seam
    mask[5, 5] = True
    assert count_periodic_components(mask) == 3
    band = np.zeros((4, 6, 5), dtype=bool)
    band[:, 2, :] = True
    assert count_periodic_components(band) == 1
    assert count_periodic_components(np.zeros((5, 5), dtype=bool)) == 0


def test_grid_agrees_with_counts_on_random_vectors():
    rng = random.Random(11)
    checked = 0
    while checked < 12:
        n = rng.choice([4, 5])
        v = LengthVector(Fraction(rng.randint(1, 12), rng.randint(1, 3)) for _ in range(n))
        margin = genericity_margin(v)
        if float(margin) < 0.05 * float(v.total()) / 2:
            continue
        expected = profile_of(v).b[0]
        try:
            got = grid_b0(v, GridConfig(refinement_rounds=2))
        except InconclusiveError:
            continue
        assert got == expected, str(v)
        checked += 1


def test_classification_table_examples():
    table = enum_subsets(LengthVector.parse("1,2,3"))
    assert len(table) == 8
    medians = [m for m, _, c in table.rows() if c is SubsetClass.MEDIAN]
    assert medians == [0b011, 0b100]
    assert table.to_csv().splitlines()[0] == "mask,sum,class"


@pytest.mark.parametrize("text", ["1,2,3", "1,1,1,1/2", "1,2,3,4,5,6,7", "1,1,2,sqrt(2)"])
def test_complement_duality(text):
    table = enum_subsets(LengthVector.parse(text))
    full = len(table) - 1
    flip = {SubsetClass.SHORT: SubsetClass.LONG, SubsetClass.LONG: SubsetClass.SHORT, SubsetClass.MEDIAN: SubsetClass.MEDIAN}
    for mask in range(len(table)):
        assert table.subset_class(full ^ mask) is flip[table.subset_class(mask)]


def test_table_reproduces_counts():
    v = LengthVector.parse("1,1,1,1/2")
    table = enum_subsets(v)
    assert len(table) == 16
    c = [0, 0, 0]
    d = [0, 0, 0]
    for mask, _, cls in table.rows():
        if not mask & 1:
            continue
        size = bin(mask).count("1") - 1
        if mask & 0b1000:
            if cls is SubsetClass.SHORT:
                d[size] += 1
        elif cls is not SubsetClass.LONG:
            c[size] += 1
    counts = count_ckdk(v)
    assert tuple(c) == counts.c and tuple(d) == counts.d


def test_subset_sums_are_exact():
    table = enum_subsets(LengthVector.parse("1/3,1/6,sqrt(2)"))
    assert table.subset_sum(0b011) == Fraction(1, 2)
    assert str(table.subset_sum(0b100)) == "sqrt(2)"


def full_torus_components(lengths, resolution):
    """Direct count on the full (n-2)-torus with the first leg pinned, no reduction."""
    fixed, tel = lengths[:-1], lengths[-1]
    dim = len(fixed) - 1
    theta = (np.arange(resolution) + 0.5) * 2 * np.pi / resolution
    z = np.full((resolution,) * dim, complex(fixed[0]))
    for axis, length in enumerate(fixed[1:]):
        shape = [1] * dim
        shape[axis] = resolution
        z = z + (length * np.exp(1j * theta)).reshape(shape)
    return count_periodic_components(np.abs(z) <= tel)


@pytest.mark.parametrize("lengths", [(3, 4, 5, 3), (2, 3, 3, 7, 2), (1, 1, 1, 0.5), (4, 5, 6, 4.5), (2, 2, 3, 5, 0.5)])
def test_reduction_matches_full_torus(lengths):
    v = LengthVector(Fraction(x).limit_denominator(10) for x in lengths)
    direct = full_torus_components([float(x) for x in v], 128 if v.n == 4 else 96)
    assert grid_b0(v) == direct == profile_of(v).b[0]


def test_supported_sizes():
    with pytest.raises(DomainError):
        grid_b0(LengthVector.parse("1,2,4"))
    with pytest.raises(DomainError):
        grid_b0(LengthVector.parse("1,2,4,8,16,32,64,1/2"))
    v = LengthVector.parse("3,1,1,1,1,1,1/2")
    assert grid_b0(v) == profile_of(v).b[0]


def test_base_resolution_resolves_margin():
    v = LengthVector.parse("17/3,19,11/2,10/3,15/2,5/4")
    margin = float(genericity_margin(v))
    res = base_resolution(v, margin, GridConfig())
    assert res % 8 == 0 and cell_slack(v, res, margin) < margin / 2
    assert grid_b0(v) == profile_of(v).b[0] == 1
    assert base_resolution(v, margin, GridConfig(resolution=20)) == 20
