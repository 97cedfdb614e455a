"""Command-line interface: ``circlefit fit | bench | sweep``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import bench
from .baselines import GN_CONFIG, GNM_CONFIG, LM_CONFIG, gauss_newton_fit, lm_classic_fit
from .errors import CircleFitError
from .geometry import Circle, Line, denormalize, normalize, radius_for_center
from .io import read_points_csv, write_rows_csv, write_trace_csv
from .solver import FitReport, SolverConfig, Termination, default_start, fit

log = logging.getLogger("circlefit")


def _result_dict(result) -> dict:
    if isinstance(result, Line):
        return {"type": "line", "point": list(result.point), "direction": list(result.direction)}
    return {"type": "circle", "a": result.a, "b": result.b, "R": result.R}


def cmd_fit(args) -> int:
    pts = read_points_csv(args.input)
    data = normalize(pts)
    t = data.transform
    if args.init == "kasa":
        start = default_start(data)
        if isinstance(start, Line):
            report = FitReport(start, 0, 0, Termination.LINE_FALLBACK)
            init = None
        else:
            init = Circle(start[0], start[1], radius_for_center(data, start))
    else:
        init = Circle(0.0, 0.0, radius_for_center(data, (0.0, 0.0)))

    if init is not None:
        trace = args.trace is not None
        if args.method == "new":
            report = fit(data, init.center, SolverConfig(), record_trace=trace)
        elif args.method == "lm":
            report = lm_classic_fit(data, init, LM_CONFIG, record_trace=trace)
        else:
            cfg = GN_CONFIG if args.method == "gn" else GNM_CONFIG
            report = gauss_newton_fit(data, init, cfg, record_trace=trace)
        if trace:
            write_trace_csv(report.trace, args.trace)

    out = {
        "method": args.method,
        "termination": report.termination.value,
        "iterations": report.iterations,
        "restarts": report.restarts,
        "result": _result_dict(denormalize(report.result, t)),
        "normalized": _result_dict(report.result),
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_bench(args) -> int:
    campaign = bench.Campaign(
        runs=args.runs,
        n_points=args.n,
        point_box=args.box,
        init_mode=args.init,
        random_center_box=args.center_box,
        seed=args.seed,
        algorithms=tuple(args.methods.split(",")),
        score=args.score,
    )
    report = bench.run_campaign(campaign, workers=args.workers)
    text = report.to_json(include_records=False)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.hist:
        write_rows_csv(["k", *report.stats], report.histogram_rows(), args.hist)
    for name, s in report.stats.items():
        log.info("%-4s diverged %.2f%%  mean iterations %.2f  scored %d",
                 name, s.divergence_pct, s.mean_iterations, s.scored)
    return 0


def cmd_sweep(args) -> int:
    if args.input:
        data = normalize(read_points_csv(args.input))
    else:
        data = normalize(bench.NEAR_COLLINEAR_SAMPLE)
    D = np.logspace(np.log10(args.d_min), np.log10(args.d_max), args.steps)
    rows = bench.evaluator_sweep(data, D)
    if args.out:
        write_rows_csv(bench.SweepRow.FIELDS, [r.as_tuple() for r in rows], args.out)
    else:
        print(",".join(bench.SweepRow.FIELDS))
        for r in rows:
            print(",".join(repr(v) for v in r.as_tuple()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="circlefit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a circle to points from a CSV file")
    p.add_argument("--input", required=True, help="CSV with x,y columns")
    p.add_argument("--method", choices=bench.ALGORITHMS, default="new")
    p.add_argument("--init", choices=("kasa", "centroid"), default="kasa")
    p.add_argument("--trace", metavar="CSV", help="write the iterate trace here")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("bench", help="Monte-Carlo divergence/accuracy campaign")
    p.add_argument("--runs", type=int, default=10_000)
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", choices=bench.INIT_MODES, default="kasa")
    p.add_argument("--methods", default="new,gn,gnm,lm")
    p.add_argument("--box", type=float, default=1.0, help="half-width of the point square")
    p.add_argument("--center-box", type=float, default=5.0,
                   help="half-width of the random-center square")
    p.add_argument("--score", action="store_true", help="score against the oracle fit")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="JSON report path (default: stdout)")
    p.add_argument("--hist", help="CSV path for the k-histograms")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="accuracy of F versus center distance")
    p.add_argument("--input", help="CSV with x,y columns (default: built-in arc)")
    p.add_argument("--d-min", type=float, default=0.5)
    p.add_argument("--d-max", type=float, default=1e8)
    p.add_argument("--steps", type=int, default=18)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        return args.func(args)
    except (OSError, ValueError, CircleFitError) as exc:
        print(f"circlefit: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
