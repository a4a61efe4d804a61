"""
Layeb Benchmark Toolkit - Command Line
======================================

Subcommands:
- list     catalog of the 21 functions with bounds, flags and stated optima
- eval     evaluate one point (``--compare`` prints radians and degrees)
- run      run an experiment grid and write the result files
- verify   check every stated optimum and scan the 2-D instances
- surface  export an (x, y, f) grid for plotting
- rank     re-rank an existing runs.csv

Exit codes: 0 success, 1 runtime error, 2 configuration or input error,
3 verification failure.

Environment Requirements:
- LAYEB_OUTPUT_DIR, LAYEB_LOG_LEVEL, LAYEB_MASTER_SEED (all optional, may be
  set in a .env file)
"""

import argparse
import logging
import os
import sys

from dotenv import load_dotenv

import benchmarks
import experiment
import verify
from angles import Mode, power_residual, sin_at_pi
from errors import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_VERIFY,
    BenchmarkError,
    ConfigError,
    DimensionMismatchError,
    UnknownFunctionError,
)
from reports import write_csv


def error_exit(message, code=EXIT_RUNTIME):
    """Standardized error exit"""
    logging.error(message)
    print(f"error: {message}", file=sys.stderr)
    return code


def _parse_point(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"Point must be comma-separated reals, got {text!r}")


def _parse_bounds(text):
    if text is None:
        return None
    values = _parse_point(text)
    if len(values) != 2 or not values[0] < values[1]:
        raise ConfigError(f"--bounds must be LO,HI with LO < HI, got {text!r}")
    return values[0], values[1]


def _fmt_optimum(desc, n):
    if not desc.accepts(n):
        return "-"
    return f"{benchmarks.stated_optimum_value(desc.id, n).value:.6g}"


def cmd_list(args):
    header = (f"{'id':<14} {'name':<14} {'bounds':<16} {'modality':<11} {'separable':<10} "
              f"{'noisy':<6} {'consistency':<24} {'opt(10)':>11} {'opt(30)':>11}  formula")
    print(header)
    for function_id in benchmarks.list_functions():
        desc = benchmarks.descriptor(function_id)
        bounds = f"[{desc.lower_bound:g}, {desc.upper_bound:g}]"
        print(f"{desc.id.value:<14} {desc.display_name:<14} {bounds:<16} {desc.modality.value:<11} "
              f"{'yes' if desc.separable else 'no':<10} {'noisy' if desc.noisy else '-':<6} "
              f"{desc.consistency.value:<24} {_fmt_optimum(desc, 10):>11} {_fmt_optimum(desc, 30):>11}  "
              f"{desc.stated_optimum.formula_text}")
    return EXIT_OK


def cmd_eval(args):
    point = _parse_point(args.point)
    modes = [Mode.RADIANS, Mode.DEGREES] if args.compare else [Mode.parse(args.mode)]
    for mode in modes:
        ctx = benchmarks.EvaluationContext.create(mode, args.seed)
        value = benchmarks.evaluate(args.function, point, ctx)
        print(f"{mode.value} {value!r}" if args.compare else repr(value))
    if args.compare:
        residual = sin_at_pi()
        print(f"sin(pi) in binary64 = {residual!r}; to the power 0.1 = {power_residual(residual)!r}")
    return EXIT_OK


def _run_overrides(args):
    return {
        "FUNCTIONS": args.functions,
        "ALGORITHMS": args.algorithms,
        "DIMENSIONS": args.dimensions,
        "RUNS": args.runs,
        "BUDGET_FACTOR": args.budget_factor,
        "MAX_FES": args.max_fes,
        "MODE": args.mode,
        "MASTER_SEED": args.seed,
        "OUTPUT_DIR": args.output,
        "WORKERS": args.workers,
        "RANK_MODE": args.rank_mode,
    }


def cmd_run(args):
    config = experiment.load_config(args.config, _run_overrides(args))
    records = experiment.run_experiment(config)
    paths = experiment.write_results(config, records)
    for path in paths:
        print(path)
    logging.info(f"Experiment finished: {len(records)} runs written to {config.output_directory}")
    return EXIT_OK


def cmd_verify(args):
    dimensions = [int(d) for d in args.dimensions.split(",")] if args.dimensions else verify.DEFAULT_DIMENSIONS
    entries = verify.build_report(dimensions, args.tolerance, args.mode, args.grid_resolution, args.seed)
    output = args.output or experiment.default_output_dir()
    txt_path, csv_path = verify.write_report(entries, output)
    failed = [e for e in entries if e.failed]
    print(f"{len(entries)} entries, {len(failed)} failed; report: {txt_path}, {csv_path}")
    if failed:
        names = ", ".join(sorted({f"{e.function.value}@{e.dimension}" for e in failed}))
        return error_exit(f"Verification failed for {names}", EXIT_VERIFY)
    return EXIT_OK


def cmd_surface(args):
    mode = Mode.parse(args.mode)
    grid = verify.surface_grid(args.function, args.resolution, mode, _parse_bounds(args.bounds), args.seed)
    output = args.output or experiment.default_output_dir()
    path = write_csv(os.path.join(output, f"surface_{grid.function.value}_{mode.value}.csv"),
                     ["x", "y", "f"], grid.rows())
    print(path)
    return EXIT_OK


def cmd_rank(args):
    paths = experiment.rerank(args.runs_csv, args.output, args.rank_mode)
    if not paths:
        print("nothing to rank (need at least 2 algorithms and 2 functions per dimension)")
    for path in paths:
        print(path)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="layeb", description="Layeb benchmark functions and mTSA experiments")
    parser.add_argument("--log-level", default=None, help="logging level (default LAYEB_LOG_LEVEL or INFO)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list the function catalog")
    p.set_defaults(handler=cmd_list)

    p = sub.add_parser("eval", help="evaluate a function at one point")
    p.add_argument("function")
    p.add_argument("point", help="comma-separated reals, e.g. 2,2 (use -- before negative values)")
    p.add_argument("--mode", default="radians", choices=[m.value for m in Mode])
    p.add_argument("--seed", type=int, default=0, help="noise seed for layeb19/layeb20")
    p.add_argument("--compare", action="store_true", help="print radian and degree values")
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("run", help="run an experiment")
    p.add_argument("--config", help="KEY=VALUE experiment file")
    p.add_argument("--functions", help="comma list or 'all'")
    p.add_argument("--algorithms", help="comma list of registered optimizers")
    p.add_argument("--dimensions", help="comma list, default 10,30")
    p.add_argument("--runs", type=int)
    p.add_argument("--budget-factor", type=int, help="max_fes = factor * D (default 10000)")
    p.add_argument("--max-fes", type=int, help="absolute budget, overrides the factor")
    p.add_argument("--mode", choices=[m.value for m in Mode])
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--output")
    p.add_argument("--workers", type=int)
    p.add_argument("--rank-mode", choices=list(experiment.RANK_MODES))
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("verify", help="verify stated optima")
    p.add_argument("--tolerance", type=float, help="default 1e-9 (degrees) / 1e-6 (radians)")
    p.add_argument("--mode", choices=[m.value for m in Mode], help="force one evaluation mode")
    p.add_argument("--dimensions", help="comma list, default 2,10,30")
    p.add_argument("--grid-resolution", type=int, default=1001, help="2-D grid size, 0 to skip")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("surface", help="export a 2-D surface grid")
    p.add_argument("function")
    p.add_argument("--resolution", type=int, default=201)
    p.add_argument("--mode", default="radians", choices=[m.value for m in Mode])
    p.add_argument("--bounds", help="LO,HI in the mode's unit")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(handler=cmd_surface)

    p = sub.add_parser("rank", help="re-rank an existing runs.csv")
    p.add_argument("runs_csv")
    p.add_argument("--rank-mode", default="mean", choices=list(experiment.RANK_MODES))
    p.add_argument("--output")
    p.set_defaults(handler=cmd_rank)
    return parser


def main(argv=None):
    load_dotenv()
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (args.log_level or os.getenv("LAYEB_LOG_LEVEL", "INFO")).upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        return args.handler(args)
    except (ConfigError, UnknownFunctionError, DimensionMismatchError, ValueError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        return error_exit(message, EXIT_CONFIG)
    except (BenchmarkError, OSError) as e:
        return error_exit(str(e), EXIT_RUNTIME)
    except Exception as e:
        logging.exception("Unexpected error")
        return error_exit(f"Unexpected error: {e}", EXIT_RUNTIME)


if __name__ == "__main__":
    sys.exit(main())
