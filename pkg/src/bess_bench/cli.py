"""
Command line interface: ``bess-bench <subcommand> [options]``.

Exit codes: 0 when every row solved to optimality, 2 when a report holds
failure rows, 1 on configuration errors.
"""

import argparse
import logging
import sys
from pathlib import Path

from .plans import RunConfig
from .plans import emit_perf_curve
from .plans import emit_region
from .plans import run_spt
from .plans import run_tep
from .plans import summarize
from .startup import init_session
from .utils.config_loaders import ConfigError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_FAILURE_ROWS = 2


def _int_list(text):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from e


def _name_list(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


def _add_run_options(parser, tep=False):
    parser.add_argument("--seed", type=int, help="master seed")
    parser.add_argument("--instances", type=int, dest="n_instances", help="instances per fleet size")
    parser.add_argument("--bess-count", type=_int_list, dest="bess_counts", help="fleet sizes, e.g. 1,2,3")
    parser.add_argument("--models", type=_name_list, help="model kinds, e.g. Exc,LP,NA")
    if tep:
        parser.add_argument("--days", type=int, help="typical days per instance")
    parser.add_argument("--profiles", help="profile CSV path or 'synthetic'")
    parser.add_argument("--out", help="report CSV path")
    parser.add_argument("--workers", type=int, help="worker processes")
    parser.add_argument("--mip-gap", type=float, dest="mip_rel_gap", help="relative MIP gap")
    parser.add_argument("--dump-problems", dest="dump_problems", help="directory for problem text dumps")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bess-bench",
        description="Benchmark linear battery storage formulations.",
    )
    parser.add_argument("--config", help="iconfig YAML file")
    parser.add_argument("--logging-config", help="logging YAML file")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_run_options(sub.add_parser("run-spt", help="set-point tracking experiment"))
    _add_run_options(sub.add_parser("run-tep", help="transmission expansion experiment"), tep=True)

    region = sub.add_parser("region", help="feasible-region grid of one BESS")
    region.add_argument("--params", help="BESS parameter YAML (default: worked example)")
    region.add_argument("--model", default="all", help="model kind or 'all'")
    region.add_argument("--grid", type=int, default=101, help="points per axis")
    region.add_argument("--out", default="region.csv", help="output CSV")

    curve = sub.add_parser("perf-curve", help="performance curves from a report")
    curve.add_argument("report", help="report CSV")
    curve.add_argument(
        "--out",
        default="perf_curve.csv",
        help="path whose stem names the outputs: one <stem>_<model>.csv per model",
    )

    summary = sub.add_parser("summarize", help="per-model averages of a report")
    summary.add_argument("report", help="report CSV")
    summary.add_argument("--out", help="write the summary CSV here instead of printing it")
    return parser


def _default_out(iconfig, key, fallback):
    output = iconfig.get("OUTPUT", {})
    return str(Path(output.get("DIRECTORY", "results")) / output.get(key, fallback))


def _run(args, iconfig):
    overrides = {
        k: getattr(args, k, None)
        for k in (
            "seed", "n_instances", "bess_counts", "models", "days",
            "profiles", "out", "workers", "mip_rel_gap", "dump_problems",
        )
    }  # fmt: skip
    if args.command == "run-spt":
        overrides["out"] = overrides["out"] or _default_out(iconfig, "SPT_REPORT", "spt_report.csv")
        report = run_spt(RunConfig.from_config(iconfig, **overrides))
    else:
        overrides["out"] = overrides["out"] or _default_out(iconfig, "TEP_REPORT", "tep_report.csv")
        report = run_tep(RunConfig.from_config(iconfig, **overrides))
    return EXIT_FAILURE_ROWS if report.n_failures else EXIT_OK


def main(argv=None):
    """Entry point of the ``bess-bench`` console script."""
    args = build_parser().parse_args(argv)
    try:
        iconfig = init_session(args.config, args.logging_config)
        if args.command in ("run-spt", "run-tep"):
            return _run(args, iconfig)
        if args.command == "region":
            emit_region(args.params, args.model, args.grid, args.out)
        elif args.command == "perf-curve":
            emit_perf_curve(args.report, args.out)
        elif args.command == "summarize":
            table = summarize(args.report)
            if args.out:
                Path(args.out).parent.mkdir(parents=True, exist_ok=True)
                table.to_csv(args.out, index=False)
            else:
                print(table.to_string(index=False))
    except (ConfigError, ValueError, OSError) as e:
        logger.error("%s", e)
        return EXIT_CONFIG_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
