"""Cell vectors, per-cell rule assignments, and synchronous CA evolution.

States are stored bit-packed in uint64 words; the observable contract is
per-cell: cell ``i`` updates from the neighborhood ``(i-1, i, i+1)`` with
wrap-around at both ends. All values here are immutable once constructed,
so they are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ._backend import kernels
from ._packing import pack_bits, unpack_words, words_needed
from .rules import Rule

MIN_STEP_WIDTH = 3


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CellVector:
    """Fixed-width binary CA state, bit-packed into uint64 words."""

    words: np.ndarray
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be positive")
        words = np.asarray(self.words, dtype=np.uint64)
        if words.shape != (words_needed(self.width),):
            raise ValueError("packed word count does not match width")
        rem = self.width & 63
        if rem and words[-1] >> np.uint64(rem):
            raise ValueError("bits beyond width must be zero")
        object.__setattr__(self, "words", _frozen(words))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "CellVector":
        arr = np.asarray(list(bits) if not isinstance(bits, np.ndarray) else bits)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("cell states must be a non-empty 1-D sequence")
        if not np.isin(arr, (0, 1)).all():
            raise ValueError("cell states must be 0 or 1")
        arr = arr.astype(np.uint8)
        return cls(pack_bits(arr), int(arr.size))

    @classmethod
    def from_string(cls, s: str) -> "CellVector":
        """Parse e.g. '00100'; leftmost character is cell 0."""
        return cls.from_bits([int(ch) for ch in s])

    @classmethod
    def zeros(cls, width: int) -> "CellVector":
        if width < 1:
            raise ValueError("width must be positive")
        return cls(np.zeros(words_needed(width), dtype=np.uint64), width)

    def bits(self) -> np.ndarray:
        """Per-cell states as a fresh uint8 array of length ``width``."""
        return unpack_words(self.words, self.width).copy()

    def to_string(self) -> str:
        return "".join(str(b) for b in self.bits())

    def invert(self) -> "CellVector":
        bits = self.bits()
        return CellVector.from_bits(1 - bits)

    def reverse(self) -> "CellVector":
        return CellVector.from_bits(self.bits()[::-1])

    def __len__(self) -> int:
        return self.width

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellVector):
            return NotImplemented
        return self.width == other.width and bool(
            np.array_equal(self.words, other.words)
        )

    def __repr__(self) -> str:
        shown = self.to_string() if self.width <= 64 else f"<{self.width} cells>"
        return f"CellVector({shown})"


@dataclass(frozen=True)
class RuleAssignment:
    """Ordered (rule, cell_count) segments covering a cell vector.

    One segment is a uniform CA; two segments form the quasi-uniform
    parallel reservoir, loosely coupled at the segment boundary and at the
    wrap-around ends.
    """

    segments: tuple[tuple[Rule, int], ...]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("assignment needs at least one segment")
        for rule, count in self.segments:
            if not isinstance(rule, Rule):
                raise ValueError("segment rule must be a Rule")
            if count < 1:
                raise ValueError("segment cell counts must be positive")

    @classmethod
    def uniform(cls, rule: Rule, width: int) -> "RuleAssignment":
        return cls(((rule, width),))

    @classmethod
    def pair(cls, first: Rule, second: Rule, width: int) -> "RuleAssignment":
        """Two equal halves; the first rule gets floor(width / 2) cells."""
        if width < 2:
            raise ValueError("two-rule assignment needs width >= 2")
        half = width // 2
        return cls(((first, half), (second, width - half)))

    @property
    def width(self) -> int:
        return sum(count for _, count in self.segments)

    @property
    def rules(self) -> tuple[Rule, ...]:
        return tuple(rule for rule, _ in self.segments)

    def tables(self) -> np.ndarray:
        """Per-segment lookup tables as a (n_segments, 8) uint8 array."""
        return np.array([rule.table for rule, _ in self.segments], dtype=np.uint8)

    def segment_masks(self) -> np.ndarray:
        """Packed per-segment cell masks, shape (n_segments, nw) uint64."""
        width = self.width
        bits = np.zeros((len(self.segments), width), dtype=np.uint8)
        start = 0
        for seg, (_, count) in enumerate(self.segments):
            bits[seg, start : start + count] = 1
            start += count
        return pack_bits(bits)


def _check_step_args(state: CellVector, assignment: RuleAssignment) -> None:
    if assignment.width != state.width:
        raise ValueError(
            f"assignment covers {assignment.width} cells, state has {state.width}"
        )
    if state.width < MIN_STEP_WIDTH:
        raise ValueError("stepping requires width >= 3")


def step(state: CellVector, assignment: RuleAssignment) -> CellVector:
    """One synchronous update of every cell under its segment's rule."""
    _check_step_args(state, assignment)
    words = kernels.step_words(
        state.words, assignment.tables(), assignment.segment_masks(), state.width
    )
    return CellVector(words, state.width)


def evolve(
    state: CellVector, assignment: RuleAssignment, iterations: int
) -> list[CellVector]:
    """Apply ``step`` repeatedly; returns states 1..iterations (input excluded)."""
    _check_step_args(state, assignment)
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    out = kernels.evolve_words(
        state.words,
        assignment.tables(),
        assignment.segment_masks(),
        state.width,
        iterations,
    )
    return [CellVector(out[i], state.width) for i in range(iterations)]
