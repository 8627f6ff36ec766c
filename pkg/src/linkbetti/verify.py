"""Randomised and exact consistency checks behind ``linkbetti verify``.

Every check is deterministic for a given seed and returns a
:class:`CheckResult`; failures carry the full inputs needed to reproduce them.
Timings are deliberately not part of the output.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Callable

from .betti import betti_profile, disconnection_inequality, small_leg_stability
from .errors import InconclusiveError
from .exact import format_rational
from .oracle import GridConfig, genericity_margin, grid_b0
from .subsets import (
    LengthVector,
    count_alpha,
    count_ckdk,
    count_ckdk_dp,
    count_ckdk_enum,
    is_generic,
    min_positive_signed_sum,
)
from .xy import (
    XYParams,
    count_ckdk_xy_closed,
    kink_scan,
    one_sided_derivatives,
    p_of_v,
    tau_analytic,
    tau_empirical,
    total_betti_xy,
    uniform_grid,
    v_interval,
)


@dataclass
class CheckResult:
    name: str
    passed: int = 0
    total: int = 0
    notes: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.passed == self.total

    def record(self, ok: bool, inputs: str) -> bool:
        self.total += 1
        if ok:
            self.passed += 1
        else:
            self.failures.append(inputs)
        return ok

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"{status}  {self.name:<20} {self.passed}/{self.total}"
        if self.notes:
            text += "  " + "; ".join(self.notes)
        return text


def _vec(lv: LengthVector) -> str:
    return f"lengths={lv}"


def random_rational(rng: random.Random, lo: int = 1, hi: int = 30, max_den: int = 6) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_generic_vector(rng: random.Random, n: int, **kw) -> LengthVector:
    while True:
        lv = LengthVector([random_rational(rng, **kw) for _ in range(n)])
        if is_generic(lv):
            return lv


def _nonempty(lv: LengthVector) -> bool:
    # K_l is empty exactly when the longest fixed leg is long
    longest = max(lv.fixed)
    return (2 * longest - lv.total()).sign() <= 0


def random_connectivity_vector(rng: random.Random, n: int) -> LengthVector:
    """Generic vector with non-empty K_l; half the draws favour disconnection."""
    while True:
        if rng.random() < 0.5:
            legs = [random_rational(rng) for _ in range(n)]
        else:
            light = [random_rational(rng, 1, 6, 2) for _ in range(n - 4)]
            heavy = [random_rational(rng, 20, 40, 2) for _ in range(3)]
            legs = light + heavy + [random_rational(rng, 1, 12, 4)]
            fixed = legs[:-1]
            rng.shuffle(fixed)
            legs = fixed + legs[-1:]
        lv = LengthVector(legs)
        if is_generic(lv) and _nonempty(lv):
            return lv


# --- criteria -------------------------------------------------------------


def check_engine_equivalence(rng: random.Random, trials: int = 200, n_range=(3, 16)) -> CheckResult:
    res = CheckResult("engine-equivalence")
    for _ in range(trials):
        lv = random_generic_vector(rng, rng.randint(*n_range))
        res.record(count_ckdk_dp(lv) == count_ckdk_enum(lv), _vec(lv))
    return res


def _sorted_with_short_telescopic(rng: random.Random, n: int) -> LengthVector:
    while True:
        lv = random_generic_vector(rng, n).canonical()
        if lv[n - 2] > lv[n - 1]:
            return lv


def check_alpha_identity(rng: random.Random, trials: int = 200, n_range=(4, 16)) -> CheckResult:
    res = CheckResult("alpha-identity")
    for _ in range(trials):
        n = rng.randint(*n_range)
        lv = _sorted_with_short_telescopic(rng, n)
        counts = count_ckdk(lv)
        merged = LengthVector(list(lv[: n - 2]) + [lv[n - 2] + lv[n - 1]])
        reduced = LengthVector(list(lv[: n - 2]) + [lv[n - 2] - lv[n - 1]])
        a_merged, a_reduced = count_alpha(merged), count_alpha(reduced)
        d_ok = all(counts.d[k] == _at(a_merged, k - 1) for k in range(1, n - 1))
        c_ok = all(counts.c[k] == _at(a_reduced, k) for k in range(n - 1))
        res.record(d_ok and c_ok, _vec(lv))
    return res


def _at(seq, k):
    return seq[k] if 0 <= k < len(seq) else 0


def check_disconnection(rng: random.Random, trials: int = 200, n_range=(4, 10)) -> CheckResult:
    res = CheckResult("disconnection")
    disconnected = 0
    for _ in range(trials):
        n = rng.randint(*n_range)
        lv = random_connectivity_vector(rng, n)
        prof = betti_profile(count_ckdk(lv))
        verdict = disconnection_inequality(lv)
        ok = prof.b[0] in (1, 2) and verdict == (prof.b[0] == 2)
        if verdict:
            disconnected += 1
            ok = ok and all(prof.b[k] == 2 * math.comb(n - 4, k) for k in range(n - 1))
        res.record(ok, _vec(lv))
    res.notes.append(f"{disconnected} disconnected")
    return res


def check_grid_oracle(rng: random.Random, trials: int = 50, base_rounds: int = 1) -> CheckResult:
    res = CheckResult("grid-oracle")
    inconclusive = 0
    done = 0
    while done < trials:
        n = rng.choice((4, 5, 6))
        lv = random_generic_vector(rng, n, hi=20, max_den=4)
        if genericity_margin(lv) < lv.total() / 2 * Fraction(5, 100):
            continue
        done += 1
        expected = betti_profile(count_ckdk(lv)).b[0]
        try:
            got = grid_b0(lv, GridConfig(refinement_rounds=base_rounds))
        except InconclusiveError:
            inconclusive += 1
            try:
                got = grid_b0(lv, GridConfig(refinement_rounds=base_rounds + 1))
            except InconclusiveError:
                res.record(False, f"{_vec(lv)} inconclusive after refinement")
                continue
        res.record(got == expected, f"{_vec(lv)} grid={got} counts={expected}")
    rate = inconclusive / trials
    res.notes.append(f"inconclusive at base {inconclusive}/{trials}")
    if rate >= 0.10:
        res.failures.append(f"inconclusive rate {rate:.2f} >= 0.10")
    return res


def xy_sample_v(h: Fraction, count: int = 10) -> list[Fraction]:
    """Zero, both near-endpoints and evenly spread interior points."""
    a, b = v_interval(h)
    eps = Fraction(1, 1000)
    vs = {Fraction(0), a + eps, b - eps}
    k = 1
    while len(vs) < count:
        vs.add(a + (b - a) * Fraction(k, count - 1))
        k += 1
    return sorted(vs)[:count]


def check_xy_closed(rng: random.Random, Ns=(3, 4, 5, 8, 13, 20)) -> CheckResult:
    res = CheckResult("xy-closed")
    for h in (Fraction(1, 2), Fraction(2)):
        for v in xy_sample_v(h):
            for N in Ns:
                if h <= Fraction(1, N):
                    continue
                closed = count_ckdk_xy_closed(N, h, v)
                explicit = count_ckdk_enum(XYParams(N, h, v).length_vector())
                res.record(closed == explicit, f"N={N} h={h} v={v}")
    return res


def entropy_decimal(h: Fraction, v: Fraction, digits: int = 50) -> Decimal:
    """Binary entropy of p_v in decimal arithmetic, independent of the float path."""
    with localcontext() as ctx:
        ctx.prec = digits
        hd = Decimal(h.numerator) / Decimal(h.denominator)
        vd = Decimal(v.numerator) / Decimal(v.denominator)
        p = ((2 * vd + hd * hd).sqrt() - hd + 1) / 2
        return -p * p.ln() - (1 - p) * (1 - p).ln()


def check_tau_formula(rng: random.Random) -> CheckResult:
    res = CheckResult("tau-formula")
    at_zero = tau_analytic(2, 0)
    res.record(abs(at_zero - math.log(2)) <= 4 * math.ulp(math.log(2)), f"h=2 v=0 tau={at_zero!r}")
    reference = entropy_decimal(Fraction(2), Fraction(-1))
    value = tau_analytic(2, -1)
    res.record(abs(Decimal(value) - reference) <= Decimal("1e-6"), f"h=2 v=-1 tau={value!r} ref={reference}")
    res.notes.append(f"tau(h=2,v=-1)={float(reference):.7f}")
    return res


def check_convergence(rng: random.Random, ladder=(512, 1024, 2048, 4096), tol: float = 0.01) -> CheckResult:
    res = CheckResult("convergence")
    for v in ("-1", "-1/2", "1/2", "3/2"):
        target = tau_analytic(2, v)
        errors = [abs(tau_empirical(XYParams(N, 2, v)) - target) for N in ladder]
        ok = all(x > y for x, y in zip(errors, errors[1:])) and errors[-1] < tol
        res.record(ok, f"h=2 v={v} errors={[f'{e:.3e}' for e in errors]}")
    return res


KINK_GRIDS = {
    Fraction(2): uniform_grid("-1.4", "2.4", 77),
    Fraction(1): uniform_grid("-0.45", "1.45", 39),
}


def check_kink(rng: random.Random, dv: str = "1/1000") -> CheckResult:
    res = CheckResult("kink")
    for h in (Fraction(1), Fraction(2)):
        der = one_sided_derivatives(h, dv)
        jump = der["d2_left"] - der["d2_right"]
        expected = 1 / float(h * h)
        res.record(abs(abs(jump) - expected) <= 0.1 * expected, f"h={h} dv={dv} jump={jump:.6g}")
        coarse = one_sided_derivatives(h, Fraction(dv) * 10)
        mismatch = abs(der["d1_left"] - der["d1_right"])
        mismatch_coarse = abs(coarse["d1_left"] - coarse["d1_right"])
        res.record(mismatch < 1e-4 and mismatch < mismatch_coarse, f"h={h} dv={dv} d1 mismatch={mismatch:.3e}")
        scan = kink_scan(h, KINK_GRIDS[h])
        nearest = min(KINK_GRIDS[h], key=abs)
        res.record(
            scan.analytic.v == nearest and abs(abs(scan.analytic.jump) - expected) <= 0.1 * expected,
            f"h={h} scan dv=1/20 located v={scan.analytic.v} jump={scan.analytic.jump:.6g}",
        )
    return res


def check_strong_field(rng: random.Random, Ns=(2, 3, 10, 50, 100, 250, 500)) -> CheckResult:
    res = CheckResult("strong-field")
    h = Fraction(2)
    a, b = v_interval(h)
    vs = [a + (b - a) * Fraction(k, 9) for k in range(10)]
    for v in vs:
        for N in Ns:
            counts = count_ckdk_xy_closed(N, h, v)
            res.record(not any(counts.d), f"N={N} h=2 v={v}")
    # radii that are perfect squares give rational vectors for the DP engine
    for r in (Fraction(6, 5), Fraction(3, 2), Fraction(2), Fraction(5, 2)):
        v = (r * r - h * h) / 2
        for N in (4, 9, 16, 30):
            counts = count_ckdk_dp(XYParams(N, h, v).length_vector())
            res.record(not any(counts.d), f"DP N={N} h=2 v={v}")
    return res


def check_sandwich(rng: random.Random, Ns=(100, 500, 1000)) -> CheckResult:
    res = CheckResult("sandwich")
    h = Fraction(2)
    vs = [Fraction(x) for x in ("-7/5", "-1", "-1/2", "-1/4", "0", "1/4", "1/2", "1", "3/2", "12/5")]
    for N in Ns:
        n = N + 2
        for v in vs:
            b = total_betti_xy(XYParams(N, h, v), "exact").value
            if v <= 0:
                m = math.comb(N, (p_of_v(h, v) * N).floor())
                res.record(m < b < n * m, f"N={N} h=2 v={v} (lower branch)")
            if v >= 0:
                res.record(2 ** (n - 3) <= b <= 2 ** (n - 1), f"N={N} h=2 v={v} (upper branch)")
    return res


def check_small_leg(rng: random.Random, trials: int = 50, n_range=(3, 10)) -> CheckResult:
    res = CheckResult("small-leg")
    for _ in range(trials):
        m = rng.randint(*n_range)
        while True:
            fixed = [random_rational(rng) for _ in range(m)]
            if is_generic(LengthVector(fixed)):
                break
        bound = min_positive_signed_sum(fixed)
        candidates = [bound / 2, bound / 4, bound / 8]
        text = ",".join(format_rational(x) for x in fixed)
        res.record(small_leg_stability(fixed, candidates), f"fixed={text} candidates={[str(c) for c in candidates]}")
    return res


SUITES: dict[str, Callable[..., CheckResult]] = {
    "engine-equivalence": check_engine_equivalence,
    "alpha-identity": check_alpha_identity,
    "disconnection": check_disconnection,
    "grid-oracle": check_grid_oracle,
    "xy-closed": check_xy_closed,
    "tau-formula": check_tau_formula,
    "convergence": check_convergence,
    "kink": check_kink,
    "strong-field": check_strong_field,
    "sandwich": check_sandwich,
    "small-leg": check_small_leg,
}

_TRIAL_SUITES = {"engine-equivalence", "alpha-identity", "disconnection", "grid-oracle", "small-leg"}

QUICK = {
    "engine-equivalence": {"trials": 40, "n_range": (3, 12)},
    "alpha-identity": {"trials": 40, "n_range": (4, 12)},
    "disconnection": {"trials": 40},
    "grid-oracle": {"trials": 10},
    "xy-closed": {"Ns": (3, 5, 12)},
    "convergence": {"ladder": (256, 512, 1024, 2048), "tol": 0.02},
    "strong-field": {"Ns": (2, 10, 100)},
    "sandwich": {"Ns": (100,)},
    "small-leg": {"trials": 15},
}


def run_suites(names=None, seed: int = 0, quick: bool = False, trials: int | None = None) -> list[CheckResult]:
    """Run the named suites (all by default), each with its own seeded generator."""
    names = list(SUITES) if not names else list(names)
    results = []
    for idx, name in enumerate(names):
        kwargs = dict(QUICK.get(name, {})) if quick else {}
        if trials is not None and name in _TRIAL_SUITES:
            kwargs["trials"] = trials
        rng = random.Random(f"{seed}:{name}")
        results.append(SUITES[name](rng, **kwargs))
    return results
