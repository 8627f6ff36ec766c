"""Command line entry point: ``linkbetti <subcommand> ...``.

Exit status is 0 on success, 1 on domain or range errors (one line on
stderr naming the offending parameter) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from .betti import betti_profile, disconnection_inequality, json_int
from .errors import LinkageError
from .exact import as_scalar, format_rational, parse_rational
from .oracle import GridConfig, enum_subsets, grid_b0
from .subsets import LengthVector, count_ckdk, count_ckdk_dp, count_ckdk_enum
from .verify import SUITES, run_suites
from .xy import (
    XYParams,
    count_ckdk_xy_closed,
    euler_growth_xy,
    kink_scan,
    tau_analytic,
    tau_curve,
    total_betti_xy,
    uniform_grid,
    v_interval,
)


def _int_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except LinkageError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _length_vector(args) -> LengthVector:
    parts = [p for p in args.lengths.split(",") if p.strip()]
    if args.telescopic is not None:
        parts.append(args.telescopic)
    return LengthVector(as_scalar(p) for p in parts)


def _dec(x: float, digits: int = 12) -> str:
    return f"{x:.{digits}f}"


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_json(obj, path) -> None:
    with _output(path) as out:
        out.write(json.dumps(obj, indent=2) + "\n")


def cmd_betti(args) -> int:
    lv = _length_vector(args)
    engine = {"auto": count_ckdk, "enum": count_ckdk_enum, "dp": count_ckdk_dp}[args.engine]
    counts = engine(lv)
    prof = betti_profile(counts)
    record = {
        "n": prof.n,
        "dimension": prof.dimension,
        "b": [json_int(x) for x in prof.b],
        "total": json_int(prof.total),
        "euler": json_int(prof.euler),
        "euler_sign": prof.euler_sign,
        "euler_abs": json_int(prof.euler_abs),
        "generic": prof.generic,
        "disconnected": disconnection_inequality(lv) if lv.n > 3 else None,
        "c": [json_int(x) for x in counts.c],
        "d": [json_int(x) for x in counts.d],
        "max_fixed_index": counts.max_fixed_index,
        "lengths": str(lv),
    }
    _emit_json(record, args.output)
    return 0


def cmd_xy(args) -> int:
    params = XYParams(args.N, args.h, args.v)
    total = total_betti_xy(params, args.mode)
    a, b = v_interval(params.h)
    record = {
        "N": params.N,
        "n": params.n,
        "h": format_rational(params.h),
        "v": format_rational(params.v),
        "v_interval": [format_rational(a), format_rational(b)],
        "r": str(params.radius),
        "p_v": _dec(float(params.p)),
        "mode": total.mode,
        "b": None if total.value is None else str(total.value),
        "ln_b": total.log_value,
        "tau_empirical": total.log_value / params.n,
        "tau_analytic": tau_analytic(params.h, params.v) if a < params.v < b else None,
        "generic": params.is_generic(),
    }
    if total.mode == "exact":
        growth = euler_growth_xy(params)
        record.update(euler=str(growth.chi), sigma_sign=growth.sign, sigma=growth.rate)
    if args.counts:
        counts = count_ckdk_xy_closed(params.N, params.h, params.v)
        record.update(c=[str(x) for x in counts.c], d=[str(x) for x in counts.d])
    _emit_json(record, args.output)
    return 0


def cmd_tau_curve(args) -> int:
    grid = uniform_grid(args.v_from, args.v_to, args.steps)
    rows = tau_curve(args.h, grid, args.N, args.mode)
    header = ["v", "p_v", "tau_analytic"]
    for N in args.N:
        header += [f"tau_{N}", f"sigma_sign_{N}", f"sigma_{N}"]
    if args.format == "json":
        data = []
        for row in rows:
            item = {"v": format_rational(row.v), "p_v": _dec(row.p), "tau_analytic": row.tau}
            for N in args.N:
                g = row.sigma_N[N]
                item[f"tau_{N}"] = row.tau_N[N]
                item[f"sigma_sign_{N}"] = g.sign
                item[f"sigma_{N}"] = g.rate
            data.append(item)
        _emit_json(data, args.output)
        return 0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        line = [_dec(float(row.v)), _dec(row.p), _dec(row.tau)]
        for N in args.N:
            g = row.sigma_N[N]
            line += [_dec(row.tau_N[N]), g.sign, "" if g.rate is None else _dec(g.rate)]
        writer.writerow(line)
    with _output(args.output) as out:
        out.write(buf.getvalue())
    return 0


def _jump_record(est) -> dict:
    return {"v": format_rational(est.v), "jump": est.jump, "score": est.score}


def cmd_kink(args) -> int:
    grid = uniform_grid(args.v_from, args.v_to, args.steps)
    report = kink_scan(args.h, grid, args.N or ())
    record = {
        "h": format_rational(report.h),
        "dv": format_rational(report.dv),
        "predicted_jump": report.predicted_jump,
        "analytic": _jump_record(report.analytic),
        "empirical": {str(N): _jump_record(est) for N, est in report.empirical.items()},
    }
    _emit_json(record, args.output)
    return 0


def cmd_oracle_b0(args) -> int:
    lv = _length_vector(args)
    cfg = GridConfig(resolution=args.resolution, refinement_rounds=args.rounds)
    record = {
        "lengths": str(lv),
        "b0_grid": grid_b0(lv, cfg),
        "b0_counts": betti_profile(count_ckdk(lv)).b[0],
    }
    _emit_json(record, args.output)
    return 0


def cmd_oracle_enum(args) -> int:
    table = enum_subsets(_length_vector(args))
    if args.format == "json":
        _emit_json([{"mask": m, "sum": str(s), "class": c.value} for m, s, c in table.rows()], args.output)
    else:
        with _output(args.output) as out:
            table.write_csv(out)
    return 0


def cmd_verify(args) -> int:
    results = run_suites(args.suite, seed=args.seed, quick=args.quick, trials=args.trials)
    lines = [f"seed {args.seed}{' (quick)' if args.quick else ''}"]
    for res in results:
        lines.append(res.line())
        for failure in res.failures:
            lines.append(f"    failing case: {failure}")
    ok = all(r.ok for r in results)
    lines.append("ALL PASS" if ok else "FAILURES")
    with _output(args.output) as out:
        out.write("\n".join(lines) + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linkbetti",
        description="Betti numbers of telescopic planar linkages and the mean-field XY rate curve.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", default=None, help="output path (default: stdout)")

    def lengths(p):
        p.add_argument("--lengths", required=True, help="comma-separated rational legs, telescopic last")
        p.add_argument("--telescopic", default=None, help="append a telescopic leg, e.g. sqrt:5/4 or 1/2")

    p = sub.add_parser("betti", help="Betti profile of K_l")
    lengths(p)
    p.add_argument("--engine", choices=["auto", "enum", "dp"], default="auto")
    p.add_argument("--format", choices=["json"], default="json")
    common(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("xy", help="total Betti number of the XY sub-energy set")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--h", type=_rational, required=True)
    p.add_argument("--v", type=_rational, required=True)
    p.add_argument("--mode", choices=["auto", "exact", "logspace"], default="auto")
    p.add_argument("--counts", action="store_true", help="include the c_k and d_k arrays")
    common(p)
    p.set_defaults(func=cmd_xy)

    p = sub.add_parser("tau-curve", help="rate curve tau(v) with finite-N samples")
    p.add_argument("--h", type=_rational, required=True)
    p.add_argument("--v-from", type=_rational, required=True)
    p.add_argument("--v-to", type=_rational, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--N", type=_int_list, default=[])
    p.add_argument("--mode", choices=["auto", "exact", "logspace"], default="auto")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    common(p)
    p.set_defaults(func=cmd_tau_curve)

    p = sub.add_parser("kink", help="locate the second-derivative jump of tau")
    p.add_argument("--h", type=_rational, required=True)
    p.add_argument("--v-from", type=_rational, required=True)
    p.add_argument("--v-to", type=_rational, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--N", type=_int_list, default=None)
    common(p)
    p.set_defaults(func=cmd_kink)

    p = sub.add_parser("oracle-b0", help="grid estimate of the number of components")
    lengths(p)
    p.add_argument("--resolution", type=int, default=None)
    p.add_argument("--rounds", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_oracle_b0)

    p = sub.add_parser("oracle-enum", help="classify every subset as short/median/long")
    lengths(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    common(p)
    p.set_defaults(func=cmd_oracle_enum)

    p = sub.add_parser("verify", help="run the consistency suites")
    p.add_argument("--quick", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--suite", action="append", choices=sorted(SUITES), default=None)
    p.add_argument("--trials", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LinkageError, ZeroDivisionError) as exc:
        print(f"linkbetti {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
