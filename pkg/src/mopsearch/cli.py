"""Command line entry point.

Exit codes: 0 success, 1 configuration error, 2 runtime/numerical error.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, load_config
from .experiment import benchmark_suite, run_experiment


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mopsearch",
        description="Multi-objective pattern search for vibration-based damage location.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="run an experiment from a TOML config")
    run_parser.add_argument("config", help="path to the run configuration file")

    bench_parser = sub.add_parser("benchmark", help="run built-in correctness benchmarks")
    bench_parser.add_argument("names", nargs="*",
                              help="benchmark names (default: all; 'none' for a no-op)")

    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "run":
        try:
            config = load_config(args.config)
        except ConfigError as exc:
            print(f"configuration rejected ({len(exc.errors)} problem(s)):", file=sys.stderr)
            for err in exc.errors:
                print(f"  - {err}", file=sys.stderr)
            return 1
        try:
            artifacts = run_experiment(config)
        except Exception as exc:
            print(f"run failed: {exc}", file=sys.stderr)
            return 2
        print(f"front: {artifacts.front_csv}")
        print(f"stats: {artifacts.stats_csv}")
        print(f"theta profiles: {artifacts.theta_profiles_csv}")
        print(f"staircase: {artifacts.staircase_csv}")
        print(f"log: {artifacts.run_log}")
        return 0

    names = None
    if args.names:
        names = [] if args.names == ["none"] else args.names
    try:
        reports = benchmark_suite(names)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"benchmark failed: {exc}", file=sys.stderr)
        return 2
    failed = False
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        failed = failed or not rep.passed
        print(f"{status} {rep.name} ({rep.seconds:.3f}s): {rep.detail}")
    return 2 if failed else 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
