"""Anti-ferromagnetic mean-field XY model through its telescopic linkage.

The sub-energy set {V <= N v} with N rotators in a field h is the space K_l
for l = (1/N, ..., 1/N, h, sqrt(2v + h^2)), so n = N + 2 legs.  Rates are
always divided by n, not N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, EngineLimitError, RangeError
from .exact import QuadraticScalar, RationalLike, format_rational, parse_rational
from .subsets import LengthVector, SubsetCounts

LN2 = math.log(2.0)
EXACT_MAX_N = 10**5


def v_interval(h: RationalLike) -> tuple[Fraction, Fraction]:
    """Admissible energy densities [a_h, b_h] for field strength h > 0."""
    h = parse_rational(h)
    if h <= 0:
        raise DomainError(f"h must be positive, got h = {format_rational(h)}")
    a = -h * h / 2 if h <= 1 else -h + Fraction(1, 2)
    return a, h + Fraction(1, 2)


def magnetization_radius(h: RationalLike, v: RationalLike) -> QuadraticScalar:
    """Telescopic leg length r = sqrt(2v + h^2) = |M + M_0| at the level set."""
    h, v = parse_rational(h), parse_rational(v)
    radicand = 2 * v + h * h
    if radicand < 0:
        raise DomainError(
            f"2v + h^2 = {format_rational(radicand)} < 0: v = {format_rational(v)} "
            f"is below -h^2/2 = {format_rational(-h * h / 2)} and the sublevel set is empty"
        )
    return QuadraticScalar.sqrt(radicand)


def p_of_v(h: RationalLike, v: RationalLike) -> QuadraticScalar:
    """p_v = (r - h + 1) / 2."""
    h = parse_rational(h)
    return (magnetization_radius(h, v) - h + 1) / 2


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log1p(-p)


def _check_in_interval(h: Fraction, v: Fraction, open_: bool) -> None:
    a, b = v_interval(h)
    inside = a < v < b if open_ else a <= v <= b
    if not inside:
        lo, hi = ("(", ")") if open_ else ("[", "]")
        raise RangeError(
            f"v = {format_rational(v)} outside {lo}a_h, b_h{hi} = "
            f"{lo}{format_rational(a)}, {format_rational(b)}{hi} for h = {format_rational(h)}"
        )


def tau_analytic(h: RationalLike, v: RationalLike) -> float:
    """Limit rate of ln b(M_v) / n: binary entropy of p_v below zero, ln 2 above."""
    h, v = parse_rational(h), parse_rational(v)
    _check_in_interval(h, v, open_=True)
    if v >= 0:
        return LN2
    return binary_entropy(float(p_of_v(h, v)))


@dataclass(frozen=True)
class XYParams:
    N: int
    h: Fraction
    v: Fraction

    def __init__(self, N: int, h: RationalLike, v: RationalLike):
        if isinstance(N, bool) or int(N) != N or N < 2:
            raise DomainError(f"N must be an integer >= 2, got N = {N}")
        h, v = parse_rational(h), parse_rational(v)
        if h <= 0:
            raise DomainError(f"h must be positive, got h = {format_rational(h)}")
        _check_in_interval(h, v, open_=False)
        object.__setattr__(self, "N", int(N))
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.N + 2

    @property
    def radius(self) -> QuadraticScalar:
        return magnetization_radius(self.h, self.v)

    @property
    def p(self) -> QuadraticScalar:
        return p_of_v(self.h, self.v)

    def length_vector(self) -> LengthVector:
        return LengthVector([Fraction(1, self.N)] * self.N + [self.h, self.radius])

    def c_cutoff(self) -> int:
        """Largest k with k/N <= p_v, clipped to [-1, N]."""
        return max(-1, min(self.N, (self.p * self.N).floor()))

    def d_cutoff(self) -> int:
        """Largest j with j/N < (1 - h - r)/2, clipped to [-1, N - 2]."""
        q = (1 - self.h - self.radius) * self.N / 2
        # largest integer strictly below q
        j = -(-q).floor() - 1
        return max(-1, min(self.N - 2, j))

    def is_generic(self) -> bool:
        r = self.radius
        if not r.is_rational:
            return True
        r = r.as_fraction()
        N = self.N
        for x in (self.h + r, self.h - r, -self.h + r, -self.h - r):
            # sum of N signed 1/N legs equals m/N with m = N, N-2, ..., -N
            m = -x * N
            if m.denominator == 1 and abs(m) <= N and (N - m.numerator) % 2 == 0:
                return False
        return True


def _require_closed_form(params: XYParams) -> None:
    if params.h <= Fraction(1, params.N):
        raise DomainError(
            f"closed form needs h > 1/N: h = {format_rational(params.h)}, "
            f"1/N = 1/{params.N}; use the generic engines on the explicit vector"
        )


def count_ckdk_xy_closed(N: int, h: RationalLike, v: RationalLike) -> SubsetCounts:
    """c_k and d_k of the XY length vector from binomial coefficients."""
    params = XYParams(N, h, v)
    _require_closed_form(params)
    kc, jd = params.c_cutoff(), params.d_cutoff()
    c = [math.comb(N, k) if k <= kc else 0 for k in range(N + 1)]
    d = [math.comb(N, k - 1) if 1 <= k and k - 1 <= jd else 0 for k in range(N + 1)]
    return SubsetCounts(c=tuple(c), d=tuple(d), max_fixed_index=N, generic=params.is_generic())


def _prefix_sums(N: int, stops: Iterable[int]) -> dict[int, tuple[int, int]]:
    """For each stop K: (sum_{k<=K} C(N,k), sum_{k<=K} (-1)^k C(N,k))."""
    stops = sorted(set(stops))
    out = {}
    plain = alt = 0
    term = 1
    k = 0
    for K in stops:
        if K < 0:
            out[K] = (0, 0)
            continue
        K = min(K, N)
        while k <= K:
            plain += term
            alt += -term if k & 1 else term
            term = term * (N - k) // (k + 1)
            k += 1
        out[K] = (plain, alt)
    return out


def partial_binomial_sum(N: int, K: int) -> int:
    """sum_{k=0}^{K} C(N, k), exact; uses the complement for K > N/2."""
    if K < 0:
        return 0
    if K >= N:
        return 1 << N
    if 2 * K > N:
        return (1 << N) - partial_binomial_sum(N, N - K - 1)
    return _prefix_sums(N, [K])[K][0]


def log_bigint(x: int) -> float:
    if x <= 0:
        raise DomainError(f"log of non-positive integer {x}")
    shift = max(0, x.bit_length() - 60)
    return math.log(x >> shift) + shift * LN2


def _log_binom(N: int, k: np.ndarray) -> np.ndarray:
    return gammaln(N + 1.0) - gammaln(k + 1.0) - gammaln(N - k + 1.0)


def log_partial_binomial_sum(N: int, K: int, chunk: int = 2048) -> float:
    """ln sum_{k=0}^{K} C(N,k) without big integers.

    Terms grow up to K <= N/2, so the sum is accumulated downward from the
    largest term until the remaining terms are below double resolution.
    """
    if K < 0:
        return -math.inf
    if K >= N:
        return N * LN2
    if 2 * K > N:
        tail = log_partial_binomial_sum(N, N - K - 1, chunk)
        return N * LN2 + math.log1p(-math.exp(tail - N * LN2))
    top = float(_log_binom(N, np.array([K]))[0])
    parts = []
    hi = K
    while hi >= 0:
        ks = np.arange(hi, max(hi - chunk, -1), -1, dtype=np.float64)
        rel = np.exp(_log_binom(N, ks) - top)
        parts.extend(rel.tolist())
        if rel[-1] < 1e-20:
            break
        hi -= chunk
    return top + math.log(math.fsum(parts))


@dataclass(frozen=True)
class TotalBetti:
    value: int | None
    log_value: float
    mode: str


def total_betti_xy(params: XYParams, mode: str = "auto") -> TotalBetti:
    """b(M_v) = c(l) + d(l) exactly, or its logarithm in log space."""
    _require_closed_form(params)
    if mode == "auto":
        mode = "exact" if params.N <= EXACT_MAX_N else "logspace"
    N, kc, jd = params.N, params.c_cutoff(), params.d_cutoff()
    if mode == "exact":
        if N > EXACT_MAX_N:
            raise EngineLimitError(
                f"exact mode is limited to N <= {EXACT_MAX_N} (got N = {N}); use mode='logspace'"
            )
        total = partial_binomial_sum(N, kc) + partial_binomial_sum(N, jd)
        return TotalBetti(total, log_bigint(total), "exact")
    if mode == "logspace":
        logs = [log_partial_binomial_sum(N, kc), log_partial_binomial_sum(N, jd)]
        return TotalBetti(None, float(np.logaddexp(*logs)), "logspace")
    raise DomainError(f"mode must be 'exact', 'logspace' or 'auto', got {mode!r}")


def tau_empirical(params: XYParams, mode: str = "auto") -> float:
    return total_betti_xy(params, mode).log_value / params.n


def euler_xy(params: XYParams) -> int:
    """chi(M_v) = sum_k (-1)^k (c_k + d_{n-3-k}), exact."""
    _require_closed_form(params)
    N, kc, jd = params.N, params.c_cutoff(), params.d_cutoff()
    if N > EXACT_MAX_N:
        raise EngineLimitError(f"Euler characteristic is exact-only, limited to N <= {EXACT_MAX_N}")
    # d_j enters with sign (-1)^(N-1-j) and equals C(N, j-1)
    sums = _prefix_sums(N, [kc, jd])
    c_part, d_part = sums[kc][1], sums[jd][1]
    return c_part + (-d_part if N % 2 else d_part)


@dataclass(frozen=True)
class EulerGrowth:
    sign: int
    rate: float | None
    chi: int


def euler_growth_xy(params: XYParams) -> EulerGrowth:
    """Sign of chi and ln|chi| / n; rate is None when chi vanishes."""
    chi = euler_xy(params)
    if chi == 0:
        return EulerGrowth(0, None, 0)
    return EulerGrowth(1 if chi > 0 else -1, log_bigint(abs(chi)) / params.n, chi)


# --- rate curves and the kink at v = 0 --------------------------------------


def uniform_grid(v_from: RationalLike, v_to: RationalLike, steps: int) -> list[Fraction]:
    """``steps`` exactly equispaced rationals from v_from to v_to inclusive."""
    lo, hi = parse_rational(v_from), parse_rational(v_to)
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    dv = (hi - lo) / (steps - 1)
    return [lo + i * dv for i in range(steps)]


def _second_differences(values: Sequence[float], dv: float) -> list[float | None]:
    out: list[float | None] = [None] * len(values)
    for i in range(1, len(values) - 1):
        out[i] = (values[i + 1] - 2 * values[i] + values[i - 1]) / (dv * dv)
    return out


@dataclass(frozen=True)
class JumpEstimate:
    index: int
    v: Fraction
    jump: float
    score: float


def locate_second_derivative_jump(grid: Sequence[Fraction], values: Sequence[float]) -> JumpEstimate:
    """Grid point where the second difference changes most, relative to its size.

    The score at point i compares the second differences at i-1 and i+1:
    |D2[i-1] - D2[i+1]| / (|D2[i-1]| + |D2[i+1]|).  A jump of tau'' gives a
    score of 1 there, whereas steep but smooth curvature (near the ends of
    the interval) scores below 1.  Ties go to the larger absolute change.
    The reported jump is the difference of one-sided linear extrapolations
    of D2 to the chosen point (left minus right).
    """
    m = len(grid)
    if m < 5:
        raise DomainError(f"kink scan needs at least 5 grid points, got {m}")
    dv = float(grid[1] - grid[0])
    d2 = _second_differences(values, dv)
    best = None
    for i in range(2, m - 2):
        a, b = d2[i - 1], d2[i + 1]
        den = abs(a) + abs(b)
        score = abs(a - b) / den if den > 0 else 0.0
        key = (round(score, 9), abs(a - b))
        if best is None or key > best[0]:
            best = (key, i, score)
    _, i, score = best
    if 3 <= i <= m - 4:
        jump = (2 * d2[i - 1] - d2[i - 2]) - (2 * d2[i + 1] - d2[i + 2])
    else:
        jump = d2[i - 1] - d2[i + 1]
    return JumpEstimate(i, grid[i], jump, score)


@dataclass(frozen=True)
class KinkReport:
    h: Fraction
    dv: Fraction
    analytic: JumpEstimate
    predicted_jump: float
    empirical: dict[int, JumpEstimate] = field(default_factory=dict)


def _check_uniform(grid: Sequence[Fraction]) -> Fraction:
    if len(grid) < 5:
        raise DomainError(f"kink scan needs at least 5 grid points, got {len(grid)}")
    dv = grid[1] - grid[0]
    if dv <= 0 or any(grid[i + 1] - grid[i] != dv for i in range(len(grid) - 1)):
        raise DomainError("kink scan needs a strictly increasing uniform grid")
    return dv


def kink_scan(h: RationalLike, grid: Sequence[RationalLike], Ns: Iterable[int] = ()) -> KinkReport:
    """Locate the second-derivative jump of tau on a uniform v grid.

    The analytic jump at v = 0 is tau''(0-) - tau''(0+) = -1/h^2.  Finite-N
    rates are scanned too but only reported.
    """
    h = parse_rational(h)
    grid = [parse_rational(v) for v in grid]
    dv = _check_uniform(grid)
    for v in grid:
        _check_in_interval(h, v, open_=True)
    analytic = locate_second_derivative_jump(grid, [tau_analytic(h, v) for v in grid])
    empirical = {}
    for N in Ns:
        values = [tau_empirical(XYParams(N, h, v)) for v in grid]
        empirical[N] = locate_second_derivative_jump(grid, values)
    return KinkReport(h, dv, analytic, -1.0 / float(h * h), empirical)


def one_sided_derivatives(h: RationalLike, dv: RationalLike, v0: RationalLike = 0) -> dict[str, float]:
    """Second-order one-sided first and second derivatives of tau_analytic at v0."""
    h, dv, v0 = parse_rational(h), parse_rational(dv), parse_rational(v0)
    f = {j: tau_analytic(h, v0 + j * dv) for j in range(-3, 4)}
    step = float(dv)
    return {
        "d1_left": (3 * f[0] - 4 * f[-1] + f[-2]) / (2 * step),
        "d1_right": (-3 * f[0] + 4 * f[1] - f[2]) / (2 * step),
        "d2_left": (2 * f[0] - 5 * f[-1] + 4 * f[-2] - f[-3]) / step**2,
        "d2_right": (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / step**2,
    }


@dataclass(frozen=True)
class CurveRow:
    v: Fraction
    p: float
    tau: float
    tau_N: dict[int, float]
    sigma_N: dict[int, EulerGrowth]


def tau_curve(h: RationalLike, grid: Sequence[RationalLike], Ns: Sequence[int], mode: str = "auto") -> list[CurveRow]:
    """Rows of the rate curve, ordered by grid index."""
    h = parse_rational(h)
    rows = []
    for v in (parse_rational(x) for x in grid):
        tau_N, sigma_N = {}, {}
        for N in Ns:
            params = XYParams(N, h, v)
            tau_N[N] = tau_empirical(params, mode)
            sigma_N[N] = euler_growth_xy(params)
        rows.append(CurveRow(v, float(p_of_v(h, v)), tau_analytic(h, v), tau_N, sigma_N))
    return rows
