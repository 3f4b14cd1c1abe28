"""The 5-bit memory task: dataset generation and run scoring.

Each sequence presents a 5-bit pattern on (a1, a2) for five steps, holds a
distractor signal a3 for T_d - 1 steps, fires the cue a4 on the last
distractor step, and then expects the pattern replayed on (y1, y2) for five
steps while a3 stays on. y3 is the waiting signal, 1 on every step before
the recall period. Timeline: T = T_d + 10.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

PATTERN_BITS = 5
NUM_PATTERNS = 2**PATTERN_BITS
NUM_INPUT_SIGNALS = 4
NUM_OUTPUT_SIGNALS = 3
# Output class indices: 0 -> y1, 1 -> y2, 2 -> y3 (waiting).
WAIT_CLASS = 2


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SequenceSample:
    """One task sequence: per-step 4-bit inputs and one-hot 3-bit targets."""

    pattern: str
    inputs: np.ndarray
    targets: np.ndarray
    distractor: int

    def __post_init__(self):
        object.__setattr__(self, "inputs", _frozen(self.inputs))
        object.__setattr__(self, "targets", _frozen(self.targets))

    @property
    def length(self) -> int:
        return int(self.inputs.shape[0])

    def labels(self) -> np.ndarray:
        """Per-step target class indices."""
        return np.argmax(self.targets, axis=1)


@dataclass(frozen=True)
class Dataset:
    train: tuple[SequenceSample, ...]
    test: tuple[SequenceSample, ...]
    distractor: int


def _build_sequence(pattern_value: int, distractor: int) -> SequenceSample:
    total = distractor + 10
    pattern = format(pattern_value, f"0{PATTERN_BITS}b")
    bits = np.array([int(ch) for ch in pattern], dtype=np.uint8)
    inputs = np.zeros((total, NUM_INPUT_SIGNALS), dtype=np.uint8)
    targets = np.zeros((total, NUM_OUTPUT_SIGNALS), dtype=np.uint8)

    inputs[:PATTERN_BITS, 0] = bits
    inputs[:PATTERN_BITS, 1] = 1 - bits
    cue_step = PATTERN_BITS + distractor - 1
    inputs[PATTERN_BITS:cue_step, 2] = 1
    inputs[cue_step, 3] = 1
    recall_start = cue_step + 1
    inputs[recall_start:, 2] = 1

    targets[:recall_start, 2] = 1
    targets[recall_start:, 0] = bits
    targets[recall_start:, 1] = 1 - bits
    return SequenceSample(pattern, inputs, targets, distractor)


def generate_5bit(distractor: int) -> Dataset:
    """All 32 patterns, in numeric order, as both training and test set.

    The task is noise free and has exactly 32 possible sequences, so both
    splits contain every pattern; run-to-run variation comes from the
    reservoir's random mappings, not from the data.
    """
    if distractor < 1:
        raise ValueError("distractor period must be >= 1")
    samples = tuple(_build_sequence(p, distractor) for p in range(NUM_PATTERNS))
    return Dataset(train=samples, test=samples, distractor=distractor)


@dataclass(frozen=True)
class RunScore:
    """success is all-or-nothing: every step of every test sequence correct."""

    success: bool
    accuracy: float


def score_run(predictions: Sequence[np.ndarray], dataset: Dataset) -> RunScore:
    """Score per-step class predictions against the test set."""
    if len(predictions) != len(dataset.test):
        raise ValueError(
            f"got predictions for {len(predictions)} sequences, "
            f"test set has {len(dataset.test)}"
        )
    correct = 0
    total = 0
    for pred, sample in zip(predictions, dataset.test):
        pred = np.asarray(pred)
        if pred.shape != (sample.length,):
            raise ValueError("predictions must cover every step of every sequence")
        correct += int(np.sum(pred == sample.labels()))
        total += sample.length
    return RunScore(success=correct == total, accuracy=correct / total)


def export_csv(samples: Sequence[SequenceSample], path) -> None:
    """One row per step: sequence id, step index, a1..a4, y1..y3."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sequence", "step", "a1", "a2", "a3", "a4", "y1", "y2", "y3"])
        for seq_id, sample in enumerate(samples):
            for t in range(sample.length):
                writer.writerow(
                    [seq_id, t, *sample.inputs[t].tolist(), *sample.targets[t].tolist()]
                )
