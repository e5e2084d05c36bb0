"""Command-line benchmark runner.

Subcommands: run one seeded instance to CSV, sweep consecutive seeds into
a directory, compare two sweep directories, or snapshot a 2D run as SVG.
Exit codes: 0 success, 1 usage or config problems, 2 planner failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import (ConfigError, read_trace_dir, compare, parse_config,
                    run_instance, sweep, write_comparison)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mgpf", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one instance, write its trace CSV")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", required=True)
    p_run.add_argument("--timings", action="store_true",
                       help="include measured wall times (breaks byte-level "
                            "reproducibility of the CSV)")

    p_sweep = sub.add_parser("sweep", help="run consecutive seeds of one config")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--seeds", required=True, type=int)
    p_sweep.add_argument("--out-dir", required=True)
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.add_argument("--timings", action="store_true")

    p_cmp = sub.add_parser("compare", help="summarise two sweep directories")
    p_cmp.add_argument("--a", required=True)
    p_cmp.add_argument("--b", required=True)
    p_cmp.add_argument("--out", required=True)

    p_snap = sub.add_parser("snapshot", help="render a 2D run state as SVG")
    p_snap.add_argument("--config", required=True)
    p_snap.add_argument("--iter", required=True, type=int)
    p_snap.add_argument("--out", required=True)
    return parser


def _load_config(path):
    if not os.path.exists(path):
        raise FileNotFoundError(f"config file not found: {path}")
    return parse_config(path)


def _prepare(args):
    """Config parsing and static validation; returns the job to execute.

    Anything raised here is a usage problem (exit 1); anything raised by
    the returned job is a planner failure (exit 2).
    """
    if args.command == "run":
        cfg = _load_config(args.config)
        return lambda: run_instance(cfg, args.out, timings=args.timings)

    if args.command == "sweep":
        if args.seeds < 1 or args.jobs < 1:
            raise ConfigError("--seeds and --jobs must be >= 1")
        cfg = _load_config(args.config)
        return lambda: sweep(cfg, args.seeds, args.out_dir, jobs=args.jobs,
                             timings=args.timings)

    if args.command == "compare":
        rows, ratio = compare(read_trace_dir(args.a), read_trace_dir(args.b))
        return lambda: write_comparison(rows, ratio, args.out)

    cfg = _load_config(args.config)
    if cfg.planner != "ist":
        raise ConfigError("snapshot requires an 'ist' planner config")
    if cfg.dim != 2:
        raise ConfigError("snapshot supports dim 2 only")
    if args.iter < 0:
        raise ConfigError("--iter must be >= 0")

    def job():
        from .svg import render_svg
        env = cfg.build_env()
        planner = cfg.build_planner(env, cfg.build_terminals(env))
        for _ in range(args.iter):
            planner.step()
        doc = render_svg(planner.rm, planner.forest, planner.tg, env,
                         prob=planner.prob)
        with open(args.out, "w") as fh:
            fh.write(doc)

    return job


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        job = _prepare(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        print(f"mgpf: {exc}", file=sys.stderr)
        return 1
    try:
        job()
    except Exception as exc:
        print(f"mgpf: planner failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
