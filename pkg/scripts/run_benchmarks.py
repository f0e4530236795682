#!/usr/bin/env python3
"""Run the built-in correctness benchmarks and print pass/fail with timing."""
import argparse

from mopsearch.experiment import BENCHMARKS, benchmark_suite


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", metavar="name",
                        help=f"subset of {', '.join(BENCHMARKS)} (default: all)")
    args = parser.parse_args()
    try:
        reports = benchmark_suite(args.names or None)
    except ValueError as exc:
        print(exc)
        return 1
    failed = False
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        failed = failed or not rep.passed
        print(f"{status} {rep.name} ({rep.seconds:.3f}s): {rep.detail}")
    return 2 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
