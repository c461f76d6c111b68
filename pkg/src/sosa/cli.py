"""``sosa-bench``: run benchmark experiments from the command line."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import List, Optional

from .bench import config_from_sources, load_config, run_experiment, summarize
from .exceptions import SosaError
from .optimizer import VARIANTS
from .testfunctions import SUITE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sosa-bench",
        description="Run surrogate optimizers on the benchmark suite and write CSV results.",
        epilog=f"algorithms: {', '.join(VARIANTS)}; problems: <name><d>, name in {', '.join(SUITE)}",
    )
    parser.add_argument("--config", help="INI file with [experiment], [algorithms] and [problems] sections")
    parser.add_argument("--algorithms", help="comma-separated list, e.g. sosa,dds")
    parser.add_argument("--problems", help="comma-separated list, e.g. ackley30,levy30")
    parser.add_argument("--trials", type=int)
    parser.add_argument("--budget", type=int, help="evaluations per run (default 500)")
    parser.add_argument("--seed", type=int, help="base seed; trial k uses seed + k")
    parser.add_argument("--problem-seed", type=int, dest="problem_seed",
                        help="seed for randomly generated problem instances (schoen)")
    parser.add_argument("--out", help="output directory (default: $SOSA_OUT_DIR or ./results)")
    parser.add_argument("--jobs", type=int, help="parallel worker processes")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        file_values = load_config(args.config) if args.config else {}
        config = config_from_sources(
            file_values, algorithms=args.algorithms, problems=args.problems, trials=args.trials,
            budget=args.budget, seed=args.seed, out=args.out, jobs=args.jobs,
            problem_seed=args.problem_seed,
        )
        if config.out is None:
            config.out = "results"
        config.validate()
    except (SosaError, ValueError) as exc:
        print(f"sosa-bench: configuration error: {exc}", file=sys.stderr)
        return 2

    try:
        records = run_experiment(config)
    except OSError as exc:
        print(f"sosa-bench: {exc}", file=sys.stderr)
        return 1
    summary = summarize(records)
    print(f"{'algorithm':<10} {'problem':<16} {'mean':>12} {'std':>10} {'Q':>8}")
    for row in summary.rows:
        print(f"{row.algorithm:<10} {row.problem:<16} {row.mean_final:>12.4f} {row.std_final:>10.4f} {row.q:>8.3f}")
    for alg in summary.ranking():
        print(f"Q({alg}) = {summary.q_totals[alg]:.3f}")
    print(f"results written to {config.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
