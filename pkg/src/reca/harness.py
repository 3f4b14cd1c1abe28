"""Experiment harness: seeded sweeps, aggregation, and result files.

Every run's seed is a pure function of (master seed, configuration index,
run index), so runs are order-independent and sweeps replay byte-identically
(wall-time fields aside). Between runs only the derived seed changes, i.e.
runs differ in their random mappings.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from .diagram import space_time_bitmap, write_pbm
from .encoding import RNG_ALGORITHM
from .readout import TrainingSet, predict_batch, train
from .reservoir import (
    TRANSITION_PERMUTATION,
    TRANSITIONS,
    ReservoirConfig,
    init_run,
    process_sequence,
    sequence_features,
)
from .rules import rule_from_number
from .tasks import Dataset, RunScore, generate_5bit, score_run

INPUT_LENGTH = 4  # the 5-bit task feeds four input signals per step

CSV_COLUMNS = (
    "rules",
    "iterations",
    "r_count",
    "c_multiplier",
    "size_metric",
    "runs",
    "successes",
    "success_rate",
    "mean_accuracy",
    "error",
    "master_seed",
    "rng",
    "version",
    "wall_time_s",
)


@dataclass(frozen=True)
class ExperimentSpec:
    """A sweep: every rule entry crossed with every (I, R) combination."""

    rule_entries: tuple[tuple[int, ...], ...]
    i_values: tuple[int, ...]
    r_values: tuple[int, ...]
    c_multiplier: int = 10
    distractor: int = 200
    runs: int = 20
    master_seed: int = 0
    regularization: float = 1.0
    transition: str = TRANSITION_PERMUTATION

    def __post_init__(self):
        if not self.rule_entries:
            raise ValueError("need at least one rule entry")
        if not self.i_values or not self.r_values:
            raise ValueError("need at least one I and one R value")
        if any(i < 1 for i in self.i_values) or any(r < 1 for r in self.r_values):
            raise ValueError("I and R values must be >= 1")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.c_multiplier < 1:
            raise ValueError("c_multiplier must be >= 1")
        if self.distractor < 1:
            raise ValueError("distractor must be >= 1")
        if not self.regularization > 0:
            raise ValueError("regularization must be positive")
        if self.transition not in TRANSITIONS:
            raise ValueError(f"transition must be one of {TRANSITIONS}")

    def configurations(self) -> list[tuple[tuple[int, ...], int, int]]:
        """(rules, I, R) triples in sweep order."""
        return [
            (entry, i, r)
            for entry in self.rule_entries
            for i in self.i_values
            for r in self.r_values
        ]


@dataclass
class ResultRow:
    rules: str
    iterations: int
    r_count: int
    c_multiplier: int
    size_metric: int
    runs: int
    successes: int
    success_rate: float
    mean_accuracy: float
    wall_time_s: float
    error: str = ""

    def to_dict(self) -> dict:
        return {
            "rules": self.rules,
            "iterations": self.iterations,
            "r_count": self.r_count,
            "c_multiplier": self.c_multiplier,
            "size_metric": self.size_metric,
            "runs": self.runs,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "mean_accuracy": self.mean_accuracy,
            "error": self.error,
            "wall_time_s": self.wall_time_s,
        }


def format_rules(entry: tuple[int, ...]) -> str:
    return "+".join(str(n) for n in entry)


def derive_run_seed(master_seed: int, config_index: int, run_index: int) -> int:
    """First uint64 of SeedSequence(master, spawn_key=(config, run))."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(config_index, run_index))
    return int(ss.generate_state(1, np.uint64)[0])


def build_config(
    entry: tuple[int, ...],
    iterations: int,
    r_count: int,
    c_multiplier: int,
    transition: str,
    seed: int,
) -> ReservoirConfig:
    rules = tuple(rule_from_number(n) for n in entry)
    return ReservoirConfig(
        rules=rules,
        iterations=iterations,
        r_count=r_count,
        c_multiplier=c_multiplier,
        input_length=INPUT_LENGTH,
        transition=transition,
        seed=seed,
    )


def execute_run(
    config: ReservoirConfig, dataset: Dataset, regularization: float
) -> RunScore:
    """Train on the training split, score all-or-nothing on the test split."""
    state = init_run(config)
    train_features = [sequence_features(state, s.inputs) for s in dataset.train]
    labels = np.concatenate([s.labels() for s in dataset.train])
    model = train(
        TrainingSet(np.concatenate(train_features), labels), regularization
    )
    predictions = [
        predict_batch(model, sequence_features(state, s.inputs))
        for s in dataset.test
    ]
    return score_run(predictions, dataset)


def _run_task(args) -> RunScore:
    entry, i, r, c, transition, seed, distractor, regularization = args
    config = build_config(entry, i, r, c, transition, seed)
    return execute_run(config, generate_5bit(distractor), regularization)


def run_experiment(
    spec: ExperimentSpec, jobs: int = 1, progress=None
) -> list[ResultRow]:
    """Execute every configuration of the sweep; one result row each.

    ``jobs`` > 1 runs the independent runs of each configuration in a
    process pool; results are identical to the sequential order because all
    randomness flows from the per-run derived seeds.
    """
    dataset = generate_5bit(spec.distractor)
    rows = []
    for config_index, (entry, i, r) in enumerate(spec.configurations()):
        started = time.perf_counter()
        label = format_rules(entry)
        try:
            scores = _config_scores(spec, dataset, config_index, entry, i, r, jobs)
            successes = sum(1 for s in scores if s.success)
            row = ResultRow(
                rules=label,
                iterations=i,
                r_count=r,
                c_multiplier=spec.c_multiplier,
                size_metric=r * i * spec.c_multiplier,
                runs=spec.runs,
                successes=successes,
                success_rate=successes / spec.runs,
                mean_accuracy=float(np.mean([s.accuracy for s in scores])),
                wall_time_s=time.perf_counter() - started,
            )
        except ValueError as exc:
            row = ResultRow(
                rules=label,
                iterations=i,
                r_count=r,
                c_multiplier=spec.c_multiplier,
                size_metric=r * i * spec.c_multiplier,
                runs=spec.runs,
                successes=0,
                success_rate=0.0,
                mean_accuracy=0.0,
                wall_time_s=time.perf_counter() - started,
                error=str(exc),
            )
        rows.append(row)
        if progress is not None:
            progress(row)
    return rows


def _config_scores(
    spec: ExperimentSpec, dataset: Dataset, config_index, entry, i, r, jobs
) -> list[RunScore]:
    seeds = [
        derive_run_seed(spec.master_seed, config_index, run)
        for run in range(spec.runs)
    ]
    # Validate the configuration once up front so bad configs fail fast.
    build_config(entry, i, r, spec.c_multiplier, spec.transition, seeds[0])
    if jobs <= 1:
        return [
            execute_run(
                build_config(entry, i, r, spec.c_multiplier, spec.transition, seed),
                dataset,
                spec.regularization,
            )
            for seed in seeds
        ]
    tasks = [
        (entry, i, r, spec.c_multiplier, spec.transition, seed, spec.distractor,
         spec.regularization)
        for seed in seeds
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_task, tasks))


def _format_row(row: ResultRow, spec: ExperimentSpec) -> list[str]:
    return [
        row.rules,
        str(row.iterations),
        str(row.r_count),
        str(row.c_multiplier),
        str(row.size_metric),
        str(row.runs),
        str(row.successes),
        f"{row.success_rate:.6f}",
        f"{row.mean_accuracy:.6f}",
        row.error,
        str(spec.master_seed),
        RNG_ALGORITHM,
        __version__,
        f"{row.wall_time_s:.3f}",
    ]


def emit_results(
    rows: list[ResultRow], fmt: str, path, spec: ExperimentSpec
) -> None:
    """Write rows plus run metadata as CSV or JSON.

    CSV carries the metadata (master seed, RNG algorithm, version) as fixed
    trailing columns so the file stays header + one line per row; the
    wall-time column is last so determinism checks can strip it.
    """
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        lines += [",".join(_format_row(row, spec)) for row in rows]
        text = "\n".join(lines) + "\n"
        with open(path, "w", newline="") as fh:
            fh.write(text)
        return
    if fmt == "json":
        doc = {
            "metadata": {
                "master_seed": spec.master_seed,
                "rng_algorithm": RNG_ALGORITHM,
                "version": __version__,
                "runs_per_config": spec.runs,
                "distractor": spec.distractor,
                "transition": spec.transition,
                "regularization": spec.regularization,
                "c_multiplier": spec.c_multiplier,
                "success_criterion": (
                    "every predicted output signal correct at every step of "
                    "every test sequence"
                ),
                "run_variation": "per-run derived seeds (fresh random mappings)",
            },
            "rows": [row.to_dict() for row in rows],
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
        return
    raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")


def emit_diagram(
    config: ReservoirConfig, distractor: int, sequence_index: int, path
) -> None:
    """Write the space-time diagram of one test sequence as a PBM file."""
    dataset = generate_5bit(distractor)
    if not 0 <= sequence_index < len(dataset.test):
        raise ValueError(
            f"sequence index must be in [0, {len(dataset.test)}), "
            f"got {sequence_index}"
        )
    state = init_run(config)
    traces = process_sequence(state, dataset.test[sequence_index].inputs)
    write_pbm(space_time_bitmap(traces), path)
