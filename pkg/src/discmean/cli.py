"""Command line interface.

Exit codes: 0 success, 2 usage or parse error, 3 I/O error, 4 coverage
violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from .io import SampleParseError, fmt, read_sample
from .methods import METHOD_NAMES, MethodConfig, canonical_method
from .refine import merge_plan
from .scenarios import (
    BASE_METHODS,
    COUNT_SHAPES,
    SWEEP_COLUMNS,
    VALUE_SHAPES,
    SweepScenario,
    run_sweep,
    scenario_values,
)
from .verify import TrueDistribution, coverage_estimate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_COVERAGE = 4


class UsageError(Exception):
    pass


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _n_grid(text: str) -> list[int]:
    """``100,200,300`` or ``start:stop:step`` (stop inclusive)."""
    try:
        if ":" in text:
            start, stop, step = (int(x) for x in text.split(":"))
            if step <= 0:
                raise ValueError
            return list(range(start, stop + 1, step))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'a,b,c' or 'start:stop:step', got {text!r}"
        ) from None


def _methods(names, default):
    names = names or list(default)
    out = []
    for name in names:
        if name == "all":
            out += list(BASE_METHODS)
        else:
            try:
                out.append(canonical_method(name))
            except ValueError as exc:
                raise UsageError(str(exc)) from None
    return list(dict.fromkeys(out))


def _emit(text: str, out_path):
    if out_path in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_bound(args) -> int:
    try:
        sample = read_sample(args.input)
    except SampleParseError as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    methods = _methods(args.method, ["nest"])
    rows = []
    for method in methods:
        cfg = MethodConfig(
            method,
            args.side,
            merged_categories=args.merged_categories,
            allowed_failures=args.allowed_failures,
        )
        b = cfg.compute(sample, args.delta)
        rows.append([cfg.method, b.side, sample.n, sample.m, fmt(b.lower), fmt(b.upper)])
    _emit(_csv_text(["method", "side", "n", "m", "lower", "upper"], rows), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    scenario = SweepScenario(
        count_shape=args.counts,
        value_shape=args.values,
        m=args.m,
        n_grid=args.n,
        delta=args.delta,
        methods=_methods(args.method, BASE_METHODS),
        merged_categories=args.merged_categories or [],
        allowed_failures=args.allowed_failures or [],
        side=args.side,
        scale=args.power_scale,
    )
    rows = run_sweep(scenario)
    table = [
        [r["scenario"], r["method"], r["m"], r["n"], r["param"], fmt(r["lower"]), fmt(r["upper"])]
        for r in rows
    ]
    _emit(_csv_text(SWEEP_COLUMNS, table), args.out)
    return EXIT_OK


def _plan_values(args) -> np.ndarray:
    given = [args.values_file is not None, args.values is not None, args.generator is not None]
    if sum(given) != 1:
        raise UsageError("give exactly one of --values-file, --values, --generator")
    if args.values_file is not None:
        try:
            return read_sample(args.values_file).values
        except SampleParseError as exc:
            raise UsageError(f"{args.values_file}: {exc}") from None
    if args.values is not None:
        v = np.unique(np.asarray(args.values, dtype=float))
        if v.size < 1:
            raise UsageError("no values given")
        return v
    if args.m is None:
        raise UsageError("--generator needs --m")
    return scenario_values(args.generator, args.m, args.power_scale)


def cmd_merge_plan(args) -> int:
    try:
        values = _plan_values(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    plan = merge_plan(values, args.merged_categories)
    lines = [f"# m={plan.m} h={plan.cluster_count} max_range={fmt(plan.max_range)}"]
    lines.append("cluster,categories,size,min_value,max_value,range")
    for c, (a, b) in enumerate(plan.bounds, start=1):
        span = f"{a + 1}" if a == b else f"{a + 1}-{b + 1}"
        lines.append(
            f"{c},{span},{b - a + 1},{fmt(values[a])},{fmt(values[b])},{fmt(values[b] - values[a])}"
        )
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_coverage(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if args.values is not None:
        values = np.asarray(args.values, dtype=float)
    else:
        if args.m is None:
            raise UsageError("give --values or --m with --value-shape")
        values = scenario_values(args.value_shape, args.m, args.power_scale)
    if args.probs is not None:
        dist = TrueDistribution(np.asarray(args.probs, dtype=float), values)
    else:
        dist = TrueDistribution.uniform(values)
    cfg = MethodConfig(
        args.method,
        args.side,
        merged_categories=args.merged_categories,
        allowed_failures=args.allowed_failures,
    )
    report = coverage_estimate(cfg, dist, args.n, args.delta, args.trials, args.seed)
    verdict = "pass" if report.passed else "FAIL"
    text = "\n".join(
        [
            f"method: {report.method}",
            f"n: {report.n}",
            f"delta: {fmt(report.delta)}",
            f"seed: {report.seed}",
            f"trials: {report.trials}",
            f"failures: {report.failures}",
            f"failure_rate: {fmt(report.failure_rate)}",
            f"true_mean: {fmt(report.true_mean)}",
            f"threshold: {fmt(report.threshold)}",
            f"verdict: {verdict}",
        ]
    )
    _emit(text + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_COVERAGE


def _add_bound_flags(p, *, repeat_params=False):
    p.add_argument("--delta", type=float, default=0.05, help="failure probability (default 0.05)")
    p.add_argument("--side", default="two", choices=["lower", "upper", "two"])
    if repeat_params:
        p.add_argument("--merged-categories", "-H", type=int, action="append", metavar="H")
        p.add_argument("--allowed-failures", "-A", type=int, action="append", metavar="A")
    else:
        p.add_argument("--merged-categories", "-H", type=int, metavar="H")
        p.add_argument("--allowed-failures", "-A", type=int, metavar="A")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discmean",
        description="PAC bounds on the mean of a distribution over known values.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    methods_help = f"one of {', '.join(METHOD_NAMES)}, or 'all'; repeatable"

    p = sub.add_parser("bound", help="bound the mean of a sample file")
    p.add_argument("input", help="CSV (value,count) or JSON {values, counts}")
    p.add_argument("--method", action="append", help=methods_help)
    _add_bound_flags(p)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("sweep", help="bounds over a grid of sample sizes, as CSV")
    p.add_argument("--counts", choices=COUNT_SHAPES, default="balanced")
    p.add_argument("--values", choices=VALUE_SHAPES, default="linear")
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--n", type=_n_grid, default=_n_grid("100:1000:100"),
                   help="'100,200' or 'start:stop:step' (default 100:1000:100)")
    p.add_argument("--power-scale", type=float, default=20.0)
    p.add_argument("--method", action="append", help=methods_help)
    _add_bound_flags(p, repeat_params=True)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("merge-plan", help="optimal contiguous category merge")
    p.add_argument("--values-file")
    p.add_argument("--values", type=_float_list)
    p.add_argument("--generator", choices=VALUE_SHAPES)
    p.add_argument("--m", type=int)
    p.add_argument("--power-scale", type=float, default=20.0)
    p.add_argument("--merged-categories", "-H", type=int, required=True, metavar="H")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_merge_plan)

    p = sub.add_parser("coverage", help="Monte Carlo failure rate of a bound")
    p.add_argument("--method", default="nest")
    _add_bound_flags(p)
    p.add_argument("--values", type=_float_list)
    p.add_argument("--m", type=int)
    p.add_argument("--value-shape", choices=VALUE_SHAPES, default="linear")
    p.add_argument("--power-scale", type=float, default=20.0)
    p.add_argument("--probs", type=_float_list, help="true probabilities (default uniform)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_coverage)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def _entry():
    sys.exit(main())


if __name__ == "__main__":
    _entry()
