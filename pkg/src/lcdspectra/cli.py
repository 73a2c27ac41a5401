"""Command-line interface.

Subcommands:

    lcdspectra run CONFIG            execute a run, write series + summary
    lcdspectra resume CKPT CONFIG    continue from a checkpoint
    lcdspectra oracle ...            tabulate the linear heat-flow norm
    lcdspectra sweep SWEEPCFG        run a parameter grid
    lcdspectra fit SERIES.CSV ...    re-fit an existing series

Exit codes: 0 pass, 2 theory-comparison fail (or argparse usage error),
1 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .config import parse_config
from .decay import FlatProfile, GaussianProfile, heat_oracle_l2
from .errors import LcdSpectraError
from .harness import refit_series, resume_config, run_config, run_sweep

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcdspectra",
        description="Pseudo-spectral decay-rate measurement for the coupled velocity/director system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a run from a config file")
    p_run.add_argument("config", help="path to run configuration")

    p_res = sub.add_parser("resume", help="continue a run from a checkpoint")
    p_res.add_argument("checkpoint", help="path to checkpoint file")
    p_res.add_argument("config", help="path to run configuration")

    p_or = sub.add_parser("oracle", help="print the linear heat-flow L2 norm over times")
    p_or.add_argument("--profile", choices=("flat", "gaussian"), default="flat")
    p_or.add_argument("--amplitude", type=float, default=1.0)
    p_or.add_argument("--k-max", type=float, default=1.0, help="flat-profile cutoff")
    p_or.add_argument("--width", type=float, default=0.5, help="gaussian spectral width")
    p_or.add_argument("--times", required=True, help="comma-separated sample times")

    p_sw = sub.add_parser("sweep", help="run a parameter grid over a base config")
    p_sw.add_argument("sweep_config", help="path to sweep configuration")
    p_sw.add_argument("--workers", type=int, default=None, help="parallel worker processes")

    p_fit = sub.add_parser("fit", help="re-fit an existing series.csv with a new window")
    p_fit.add_argument("series", help="path to series.csv")
    p_fit.add_argument("--t-lo", type=float, required=True)
    p_fit.add_argument("--t-hi", type=float, required=True)
    p_fit.add_argument("--tol-l2", type=float, default=0.5)
    p_fit.add_argument("--tol-linf", type=float, default=0.3)
    p_fit.add_argument("--series-names", default=None, help="comma-separated subset to fit")
    p_fit.add_argument("--out", default=None, help="write summary JSON here as well")

    return parser


def _cmd_oracle(args: argparse.Namespace) -> int:
    try:
        times = [float(v) for v in args.times.split(",") if v.strip()]
    except ValueError:
        print(f"error: cannot parse times {args.times!r}", file=sys.stderr)
        return 2
    if not times:
        print("error: empty time list", file=sys.stderr)
        return 2
    if any(t < 0 for t in times):
        print("error: times must be nonnegative", file=sys.stderr)
        return 2
    if args.profile == "flat":
        profile = FlatProfile(args.amplitude, args.k_max)
    else:
        profile = GaussianProfile(args.amplitude, args.width)
    print("t,value,value_sq")
    for t in sorted(times):
        v = heat_oracle_l2(profile, t)
        print(f"{t!r},{v!r},{v * v!r}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            outcome = run_config(parse_config(args.config))
            if outcome.message:
                print(outcome.message)
            return outcome.exit_code
        if args.command == "resume":
            outcome = resume_config(args.checkpoint, parse_config(args.config))
            if outcome.message:
                print(outcome.message)
            return outcome.exit_code
        if args.command == "oracle":
            return _cmd_oracle(args)
        if args.command == "sweep":
            code, report = run_sweep(args.sweep_config, workers=args.workers)
            n = len(report["runs"])
            n_pass = sum(1 for r in report["runs"].values() if r["overall_pass"])
            print(f"sweep: {n_pass}/{n} runs passed (exit {code})")
            return code
        if args.command == "fit":
            names = None
            if args.series_names:
                names = [s.strip() for s in args.series_names.split(",") if s.strip()]
            outcome = refit_series(
                args.series,
                (args.t_lo, args.t_hi),
                tol_l2=args.tol_l2,
                tol_linf=args.tol_linf,
                series_names=names,
                out_path=args.out,
            )
            print(json.dumps(outcome.summary, indent=2, sort_keys=True))
            return outcome.exit_code
    except LcdSpectraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
