"""The recurrent ReCA pipeline.

Per sequence step: encode the input, combine it with the previous step's
final CA state through the time-transition function, evolve I iterations,
and emit the concatenated feature vector [A_1; ...; A_I]. The first step of
a sequence bypasses the transition and uses the encoded input directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from ._packing import pack_bits, unpack_words
from .automaton import MIN_STEP_WIDTH, CellVector, RuleAssignment
from .encoding import MappingSet, _check_input, create_mappings, encode
from .rules import Rule

TRANSITION_PERMUTATION = "permutation"
TRANSITION_NORMALIZED_ADDITION = "normalized_addition"
TRANSITIONS = (TRANSITION_PERMUTATION, TRANSITION_NORMALIZED_ADDITION)


@dataclass(frozen=True)
class ReservoirConfig:
    """Everything that defines one reservoir run.

    ``rules`` holds one rule (uniform CA) or two (parallel two-rule
    reservoir split into equal halves). The reservoir is R*C*L cells wide;
    features are I times that; the size metric reported alongside results
    is R*I*C.
    """

    rules: tuple[Rule, ...]
    iterations: int
    r_count: int
    c_multiplier: int
    input_length: int
    transition: str = TRANSITION_PERMUTATION
    seed: int = 0

    def __post_init__(self):
        if len(self.rules) not in (1, 2) or not all(
            isinstance(r, Rule) for r in self.rules
        ):
            raise ValueError("rules must be one or two Rule values")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.r_count < 1 or self.c_multiplier < 1 or self.input_length < 1:
            raise ValueError("r_count, c_multiplier and input_length must be >= 1")
        if self.transition not in TRANSITIONS:
            raise ValueError(
                f"transition must be one of {TRANSITIONS}, got {self.transition!r}"
            )
        if self.width < MIN_STEP_WIDTH:
            raise ValueError("reservoir width R*C*L must be >= 3")

    @property
    def width(self) -> int:
        return self.r_count * self.c_multiplier * self.input_length

    @property
    def feature_width(self) -> int:
        return self.iterations * self.width

    @property
    def size_metric(self) -> int:
        return self.r_count * self.iterations * self.c_multiplier


@dataclass(frozen=True)
class StepTrace:
    """Reservoir activity for one sequence step."""

    a0: CellVector
    iterations: tuple[CellVector, ...]
    feature: np.ndarray = field(repr=False)


class ReservoirState:
    """Mutable run context: mappings, rule assignment, previous-step memory.

    Single-owner: not safe for concurrent use. Create via ``init_run``.
    """

    def __init__(self, config: ReservoirConfig):
        self.config = config
        # Independent sub-streams for the mapping draw and the
        # normalized-addition coin flips, both derived from config.seed.
        root = np.random.SeedSequence(config.seed)
        mapping_seed, transition_seed = (
            int(v) for v in root.generate_state(2, np.uint64)
        )
        self.mappings: MappingSet = create_mappings(
            config.input_length, config.r_count, config.c_multiplier, mapping_seed
        )
        if len(config.rules) == 1:
            self.assignment = RuleAssignment.uniform(config.rules[0], config.width)
        else:
            self.assignment = RuleAssignment.pair(
                config.rules[0], config.rules[1], config.width
            )
        self.rng = np.random.default_rng(transition_seed)
        self._tables = self.assignment.tables()
        self._seg_masks = self.assignment.segment_masks()
        self._target_pos, self._target_src = self.mappings.target_arrays()
        self._mapped_mask = self.mappings.mapped_mask_words()
        self._prev: np.ndarray | None = None
        self._step_index = 0

    @property
    def step_index(self) -> int:
        return self._step_index

    def previous_final_state(self) -> CellVector | None:
        if self._prev is None:
            return None
        return CellVector(self._prev.copy(), self.config.width)

    def reset(self) -> None:
        """Clear the previous-state memory (start of a new sequence)."""
        self._prev = None
        self._step_index = 0


def init_run(config: ReservoirConfig) -> ReservoirState:
    """Create the seeded mappings and rule assignment for one run."""
    return ReservoirState(config)


def transition_permutation(
    x, prev_last: CellVector, mapping_set: MappingSet
) -> CellVector:
    """Mapped cells take the new input's bits; all others copy prev_last."""
    if prev_last.width != mapping_set.total_width:
        raise ValueError("previous state width does not match the mapping set")
    enc = encode(x, mapping_set)
    words = enc.words | (prev_last.words & ~mapping_set.mapped_mask_words())
    return CellVector(words, prev_last.width)


def transition_normalized_addition(
    x_encoded: CellVector, prev_last: CellVector, rng: np.random.Generator
) -> CellVector:
    """Cell-wise: sum 2 -> 1, sum 0 -> 0, sum 1 -> a fair random bit."""
    if x_encoded.width != prev_last.width:
        raise ValueError("cell vector widths differ")
    rand = pack_bits(rng.integers(0, 2, size=x_encoded.width, dtype=np.uint8))
    a, b = x_encoded.words, prev_last.words
    return CellVector((a & b) | ((a ^ b) & rand), x_encoded.width)


def _feature_from_words(iter_words: np.ndarray, width: int) -> np.ndarray:
    feat = unpack_words(iter_words, width).reshape(-1)
    feat.setflags(write=False)
    return feat


def _trace_from_words(a0_words, iter_words, width: int) -> StepTrace:
    return StepTrace(
        a0=CellVector(a0_words.copy(), width),
        iterations=tuple(
            CellVector(iter_words[i].copy(), width)
            for i in range(iter_words.shape[0])
        ),
        feature=_feature_from_words(iter_words, width),
    )


def process_step(state: ReservoirState, x) -> StepTrace:
    """Run one sequence step and advance the stored previous state."""
    cfg = state.config
    arr = _check_input(x, cfg.input_length)
    enc = kernels.encode_words(arr, state._target_pos, state._target_src, cfg.width)
    if state._prev is None:
        a0 = enc
    elif cfg.transition == TRANSITION_PERMUTATION:
        a0 = enc | (state._prev & ~state._mapped_mask)
    else:
        rand = pack_bits(state.rng.integers(0, 2, size=cfg.width, dtype=np.uint8))
        prev = state._prev
        a0 = (enc & prev) | ((enc ^ prev) & rand)
    iters = kernels.evolve_words(
        a0, state._tables, state._seg_masks, cfg.width, cfg.iterations
    )
    state._prev = iters[-1].copy()
    state._step_index += 1
    return _trace_from_words(a0, iters, cfg.width)


def _validated_sequence(state: ReservoirState, xs) -> np.ndarray:
    arr = np.asarray(xs)
    if arr.ndim != 2 or arr.shape[0] < 1:
        raise ValueError("sequence must be a non-empty (steps, input_length) array")
    if arr.shape[1] != state.config.input_length:
        raise ValueError(
            f"sequence rows must have length {state.config.input_length}"
        )
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("input bits must be 0 or 1")
    return np.ascontiguousarray(arr, dtype=np.uint8)


def _run_sequence_kernel(state: ReservoirState, arr: np.ndarray):
    """Whole-sequence permutation-transition run; advances the state."""
    cfg = state.config
    a0s, iters = kernels.sequence_permutation(
        arr,
        state._target_pos,
        state._target_src,
        state._mapped_mask,
        state._tables,
        state._seg_masks,
        cfg.width,
        cfg.iterations,
    )
    state._prev = iters[-1, -1].copy()
    state._step_index = arr.shape[0]
    return a0s, iters


def process_sequence(state: ReservoirState, xs) -> list[StepTrace]:
    """Process a whole sequence, clearing the reservoir memory first."""
    arr = _validated_sequence(state, xs)
    state.reset()
    if state.config.transition != TRANSITION_PERMUTATION:
        return [process_step(state, row) for row in arr]
    a0s, iters = _run_sequence_kernel(state, arr)
    return [
        _trace_from_words(a0s[t], iters[t], state.config.width)
        for t in range(arr.shape[0])
    ]


def sequence_features(state: ReservoirState, xs) -> np.ndarray:
    """Feature matrix (steps, I*W) for one sequence; resets memory first.

    Same trajectory as ``process_sequence`` without building trace objects;
    this is the hot path for experiment sweeps.
    """
    if state.config.transition != TRANSITION_PERMUTATION:
        return np.stack([t.feature for t in process_sequence(state, xs)])
    arr = _validated_sequence(state, xs)
    state.reset()
    _, iters = _run_sequence_kernel(state, arr)
    cfg = state.config
    return unpack_words(iters, cfg.width).reshape(arr.shape[0], cfg.feature_width)
