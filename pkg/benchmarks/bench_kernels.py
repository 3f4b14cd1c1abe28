"""Compare the numba and pure-numpy kernel backends on the reservoir hot loop.

Run: python3 benchmarks/bench_kernels.py [--steps 210] [--sequences 32]
"""

import argparse
import time

import numpy as np

from reca._backend import get_backend
from reca.automaton import RuleAssignment
from reca.encoding import create_mappings
from reca.rules import rule_from_number


def build_workload(rule_numbers, iterations, r_count, c_multiplier, steps, seqs):
    input_length = 4
    mappings = create_mappings(input_length, r_count, c_multiplier, seed=1)
    width = mappings.total_width
    rules = [rule_from_number(n) for n in rule_numbers]
    if len(rules) == 1:
        assignment = RuleAssignment.uniform(rules[0], width)
    else:
        assignment = RuleAssignment.pair(rules[0], rules[1], width)
    rng = np.random.default_rng(0)
    xs = rng.integers(0, 2, size=(seqs, steps, input_length), dtype=np.uint8)
    target_pos, target_src = mappings.target_arrays()
    return dict(
        xs=xs,
        target_pos=target_pos,
        target_src=target_src,
        mapped_mask=mappings.mapped_mask_words(),
        tables=assignment.tables(),
        seg_masks=assignment.segment_masks(),
        width=width,
        iterations=iterations,
    )


def run_backend(kern, work, repeats):
    best = float("inf")
    checksum = 0
    for _ in range(repeats):
        t0 = time.perf_counter()
        total = 0
        for seq in work["xs"]:
            _, iters = kern.sequence_permutation(
                seq,
                work["target_pos"],
                work["target_src"],
                work["mapped_mask"],
                work["tables"],
                work["seg_masks"],
                work["width"],
                work["iterations"],
            )
            total += int(iters[-1, -1, 0])
        checksum = total
        best = min(best, time.perf_counter() - t0)
    return best, checksum


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--rules", default="90", help="rule number or pair 'a+b'")
    parser.add_argument("--iterations", type=int, default=4)
    parser.add_argument("--mappings", type=int, default=8)
    parser.add_argument("--c-multiplier", type=int, default=10)
    parser.add_argument("--steps", type=int, default=210)
    parser.add_argument("--sequences", type=int, default=32)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rule_numbers = [int(p) for p in args.rules.split("+")]
    work = build_workload(
        rule_numbers, args.iterations, args.mappings, args.c_multiplier,
        args.steps, args.sequences,
    )
    cell_updates = (
        args.sequences * args.steps * args.iterations * work["width"]
    )
    print(
        f"workload: rules={args.rules} I={args.iterations} R={args.mappings} "
        f"C={args.c_multiplier} width={work['width']} "
        f"steps={args.steps} sequences={args.sequences}"
    )

    timings = {}
    for name in ("numpy", "numba"):
        try:
            kern = get_backend(name)
        except ImportError:
            print(f"{name:>6}: not available")
            continue
        run_backend(kern, work, 1)  # warmup (and JIT compile for numba)
        best, checksum = run_backend(kern, work, args.repeats)
        timings[name] = best
        rate = cell_updates / best / 1e6
        print(f"{name:>6}: best {best * 1e3:8.1f} ms   {rate:8.1f} M cell-updates/s"
              f"   checksum {checksum}")
    if len(timings) == 2:
        print(f"speedup: {timings['numpy'] / timings['numba']:.1f}x (numba vs numpy)")


if __name__ == "__main__":
    main()
