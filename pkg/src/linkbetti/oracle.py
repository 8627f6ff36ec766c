"""Independent ground truth: brute-force subset tables and a grid estimate of b_0.

The grid oracle works on the torus of angles of the fixed legs, with the
longest fixed leg pinned along the x-axis.  The second-longest fixed leg,
of length m, is then eliminated: once the remaining angles give the partial
sum P, the admissible directions of that leg form one arc (or nothing),
non-empty exactly when | |P| - m | <= l_n.  Projection therefore has
connected fibres and K_l has as many components as the set of remaining
angles satisfying that annulus condition, which lives on an (n-3)-torus.

Cells are kept when their centre satisfies the condition with slack delta:
the Lipschitz bound of |P| over half a cell, capped at half the genericity
margin so that no critical level is crossed.  Without the slack, thin parts
of the set fall between cell centres.  The base resolution is chosen so the
cap is inactive whenever the cell budget allows.  The method is approximate
by design; the refinement protocol turns it into a verdict or an explicit
:class:`InconclusiveError`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, TextIO

import numpy as np
from scipy import ndimage

from .errors import DomainError, EngineLimitError, InconclusiveError
from .exact import QuadraticScalar
from .subsets import (
    ENUM_CAP,
    LengthVector,
    SubsetClass,
    _dtype_for,
    _scaled,
    is_generic,
    min_positive_signed_sum,
    subset_sum_table,
    vector_sign,
)


def f_value(lv: LengthVector, angles: Sequence[float]) -> float:
    """-|l_1 + sum_{i>=2} l_i exp(i theta_i)|^2 over the fixed legs."""
    if len(angles) != lv.n - 2:
        raise DomainError(f"expected {lv.n - 2} angles, got {len(angles)}")
    z = complex(float(lv[0]))
    for length, theta in zip(lv.fixed[1:], angles):
        z += float(length) * complex(math.cos(theta), math.sin(theta))
    return -abs(z) ** 2


class DisjointSet:
    """Union-find with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, i: int) -> int:
        parent = self.parent
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri == rj:
            return
        if self.size[ri] < self.size[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        self.size[ri] += self.size[rj]


# base cells per axis by dimension of the reduced torus
DEFAULT_RESOLUTION = {1: 64, 2: 64, 3: 32, 4: 16}
MAX_REDUCED_DIM = 4


@dataclass(frozen=True)
class GridConfig:
    """``resolution=None`` picks a base resolution from the genericity margin."""

    resolution: int | None = None
    refinement_rounds: int = 1
    min_margin: float = 0.0
    max_cells: int = 10**8

    def __post_init__(self):
        if self.resolution is not None and self.resolution < 16:
            raise DomainError(f"resolution must be >= 16 cells per axis, got {self.resolution}")
        if self.refinement_rounds < 1:
            raise DomainError(f"refinement_rounds must be >= 1, got {self.refinement_rounds}")


@dataclass(frozen=True)
class _GridLegs:
    pinned: float
    eliminated: float
    varied: tuple[float, ...]
    telescopic: float

    @property
    def dim(self) -> int:
        return len(self.varied)

    @property
    def lipschitz(self) -> float:
        return sum(self.varied)


def _grid_legs(lv: LengthVector) -> _GridLegs:
    fixed = sorted(float(x) for x in lv.fixed)
    return _GridLegs(fixed[-1], fixed[-2], tuple(fixed[:-2]), float(lv.telescopic))


def reduced_mask(lv: LengthVector, resolution: int, slack: float = 0.0) -> np.ndarray:
    """Cells of the (n-3)-torus whose centre satisfies | |P| - m | <= l_n + slack."""
    legs = _grid_legs(lv)
    dim = legs.dim
    theta = (np.arange(resolution) + 0.5) * (2 * np.pi / resolution)
    re = np.full((resolution,) * dim, legs.pinned)
    im = np.zeros((resolution,) * dim)
    for axis, length in enumerate(legs.varied):
        shape = [1] * dim
        shape[axis] = resolution
        re += (length * np.cos(theta)).reshape(shape)
        im += (length * np.sin(theta)).reshape(shape)
    re *= re
    im *= im
    re += im
    np.sqrt(re, out=re)
    re -= legs.eliminated
    return np.abs(re) <= legs.telescopic + slack


def cell_slack(lv: LengthVector, resolution: int, margin: float) -> float:
    return min(_grid_legs(lv).lipschitz * math.pi / resolution, 0.5 * margin)


def base_resolution(lv: LengthVector, margin: float, cfg: GridConfig) -> int:
    """Smallest multiple of 8 (at least the default) whose half-cell slack fits in margin/2."""
    legs = _grid_legs(lv)
    if cfg.resolution is not None:
        return cfg.resolution
    needed = math.ceil(2 * math.pi * legs.lipschitz / margin)
    res = max(DEFAULT_RESOLUTION[legs.dim], -(-needed // 8) * 8)
    # leave room for at least one doubling inside the cell budget
    ceiling = int((cfg.max_cells / 2**legs.dim) ** (1 / legs.dim))
    return max(16, min(res, ceiling))


def count_periodic_components(mask: np.ndarray) -> int:
    """Connected components with face adjacency on a periodic grid."""
    structure = ndimage.generate_binary_structure(mask.ndim, 1)
    labels, count = ndimage.label(mask, structure=structure)
    if count == 0:
        return 0
    dsu = DisjointSet(count + 1)
    for axis in range(mask.ndim):
        first = np.take(labels, 0, axis=axis)
        last = np.take(labels, -1, axis=axis)
        both = (first > 0) & (last > 0)
        for a, b in set(zip(first[both].tolist(), last[both].tolist())):
            dsu.union(a, b)
    return len({dsu.find(i) for i in range(1, count + 1)})


def genericity_margin(lv: LengthVector) -> QuadraticScalar:
    """Smallest |sum eps_i l_i| over all signs; zero iff ``lv`` is not generic."""
    if not is_generic(lv):
        return QuadraticScalar(Fraction(0))
    return min_positive_signed_sum(list(lv))


def grid_b0(lv: LengthVector, cfg: GridConfig = GridConfig()) -> int:
    """Number of connected components of K_l estimated on refining grids.

    Counts are taken at resolutions R, 2R, ..., R * 2^rounds; the first pair
    of consecutive resolutions that agree is returned.
    """
    if lv.n < 4 or lv.n - 3 > MAX_REDUCED_DIM:
        raise DomainError(f"grid oracle supports 4 <= n <= {MAX_REDUCED_DIM + 3}, got n = {lv.n}")
    margin = float(genericity_margin(lv))
    if margin <= cfg.min_margin or margin == 0.0:
        raise DomainError(
            f"length vector {lv} has genericity margin {margin:.6g}, "
            f"need more than {cfg.min_margin:.6g}"
        )
    dim = lv.n - 3
    counts = []
    base = res = base_resolution(lv, margin, cfg)
    for _ in range(cfg.refinement_rounds + 1):
        if res**dim > cfg.max_cells:
            raise InconclusiveError(
                f"component counts {counts} for {lv} did not stabilise before the "
                f"{cfg.max_cells} cell guard (next resolution {res})"
            )
        mask = reduced_mask(lv, res, cell_slack(lv, res, margin))
        counts.append(count_periodic_components(mask))
        if len(counts) >= 2 and counts[-1] == counts[-2]:
            return counts[-1]
        res *= 2
    raise InconclusiveError(
        f"component count did not stabilise for {lv}: counts {counts} at resolutions "
        f"{[base * 2**i for i in range(len(counts))]}"
    )


@dataclass
class ClassificationTable:
    """Every subset of the legs with its exact sum and class; row index = bitmask."""

    lv: LengthVector
    sum_a: np.ndarray
    sum_b: np.ndarray
    classes: np.ndarray
    radicand: int
    denominator: int

    def __len__(self):
        return len(self.classes)

    def subset_sum(self, mask: int) -> QuadraticScalar:
        return QuadraticScalar(
            Fraction(int(self.sum_a[mask]), self.denominator),
            Fraction(int(self.sum_b[mask]), self.denominator),
            Fraction(self.radicand),
        )

    def subset_class(self, mask: int) -> SubsetClass:
        return _CLASS_OF_SIGN[int(self.classes[mask])]

    def rows(self) -> Iterator[tuple[int, QuadraticScalar, SubsetClass]]:
        for mask in range(len(self)):
            yield mask, self.subset_sum(mask), self.subset_class(mask)

    def write_csv(self, out: TextIO) -> None:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["mask", "sum", "class"])
        for mask, total, cls in self.rows():
            writer.writerow([mask, str(total), cls.value])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


_CLASS_OF_SIGN = {-1: SubsetClass.SHORT, 0: SubsetClass.MEDIAN, 1: SubsetClass.LONG}


def enum_subsets(lv: LengthVector, cap: int = ENUM_CAP) -> ClassificationTable:
    """Classify all 2^n subsets by brute force."""
    if lv.n > cap:
        raise EngineLimitError(f"subset enumeration is capped at n = {cap}, got n = {lv.n}")
    sc = _scaled(lv)
    sa, sb, _ = subset_sum_table(sc.A, sc.B, _dtype_for(sc))
    ta, tb = sc.total
    classes = vector_sign(2 * sa - ta, 2 * sb - tb, sc.S)
    return ClassificationTable(lv, sa, sb, classes, sc.S, sc.D)
