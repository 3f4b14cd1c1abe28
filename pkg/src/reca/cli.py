"""Command line interface for experiment sweeps.

Example:
    reca --rules 90,165,90+165 --iterations 2,4 --mappings 4,8 \
         --distractor 200 --runs 20 --seed 42 --out results.csv

Exit status is 0 only if every configuration ran cleanly.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ExperimentSpec,
    ResultRow,
    build_config,
    derive_run_seed,
    emit_diagram,
    emit_results,
    run_experiment,
)
from .reservoir import TRANSITION_NORMALIZED_ADDITION, TRANSITION_PERMUTATION


def parse_rule_entries(text: str) -> tuple[tuple[int, ...], ...]:
    """'90,165,90+165' -> ((90,), (165,), (90, 165))."""
    entries = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError("empty rule entry")
        numbers = tuple(int(p) for p in part.split("+"))
        if len(numbers) not in (1, 2):
            raise ValueError(
                f"rule entry {part!r} must be a single rule or a pair 'a+b'"
            )
        entries.append(numbers)
    return tuple(entries)


def parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(p) for p in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reca",
        description=(
            "Run 5-bit memory-task experiments on cellular-automata "
            "reservoirs and aggregate success rates."
        ),
    )
    parser.add_argument(
        "--rules",
        required=True,
        help="comma list of rule numbers; 'a+b' denotes a two-rule reservoir",
    )
    parser.add_argument(
        "--iterations", default="4", help="comma list of I values (default 4)"
    )
    parser.add_argument(
        "--mappings", default="8", help="comma list of R values (default 8)"
    )
    parser.add_argument(
        "--c-multiplier", type=int, default=10, help="expansion factor C (default 10)"
    )
    parser.add_argument(
        "--distractor", type=int, default=200, help="distractor period (default 200)"
    )
    parser.add_argument(
        "--runs", type=int, default=20, help="runs per configuration (default 20)"
    )
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument(
        "--transition",
        choices=["permutation", "normadd"],
        default="permutation",
        help="time-transition function (default permutation)",
    )
    parser.add_argument(
        "--reg",
        type=float,
        default=1.0,
        help="readout regularization parameter C (default 1.0)",
    )
    parser.add_argument("--out", help="write aggregated results to this path")
    parser.add_argument(
        "--format", choices=["csv", "json"], default="csv", help="result file format"
    )
    parser.add_argument(
        "--diagram",
        metavar="PATH",
        help=(
            "write a PBM space-time diagram of test sequence 0 under the "
            "first configuration (run 0's seed)"
        ),
    )
    return parser


def _print_rows(rows: list[ResultRow]) -> None:
    header = f"{'rules':>10} {'I':>3} {'R':>3} {'C':>3} {'size':>5} " \
             f"{'success':>8} {'accuracy':>9}  error"
    print(header)
    for row in rows:
        print(
            f"{row.rules:>10} {row.iterations:>3} {row.r_count:>3} "
            f"{row.c_multiplier:>3} {row.size_metric:>5} "
            f"{row.success_rate:>8.3f} {row.mean_accuracy:>9.4f}  {row.error}"
        )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    transition = (
        TRANSITION_NORMALIZED_ADDITION
        if args.transition == "normadd"
        else TRANSITION_PERMUTATION
    )
    try:
        spec = ExperimentSpec(
            rule_entries=parse_rule_entries(args.rules),
            i_values=parse_int_list(args.iterations),
            r_values=parse_int_list(args.mappings),
            c_multiplier=args.c_multiplier,
            distractor=args.distractor,
            runs=args.runs,
            master_seed=args.seed,
            regularization=args.reg,
            transition=transition,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    def progress(row: ResultRow) -> None:
        status = row.error or f"success_rate={row.success_rate:.3f}"
        print(
            f"[reca] rules={row.rules} I={row.iterations} R={row.r_count}: {status}",
            file=sys.stderr,
        )

    rows = run_experiment(spec, progress=progress)
    _print_rows(rows)

    try:
        if args.out:
            emit_results(rows, args.format, args.out, spec)
        if args.diagram:
            entry, i, r = spec.configurations()[0]
            config = build_config(
                entry, i, r, spec.c_multiplier, spec.transition,
                derive_run_seed(spec.master_seed, 0, 0),
            )
            emit_diagram(config, spec.distractor, 0, args.diagram)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0 if all(not row.error for row in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
