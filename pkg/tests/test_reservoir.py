"""Time-transitions, step processing, and the whole-sequence fast path."""

import numpy as np
import pytest

from reca.automaton import CellVector
from reca.encoding import MappingSet, create_mappings, encode
from reca.reservoir import (
    ReservoirConfig,
    init_run,
    process_sequence,
    process_step,
    sequence_features,
    transition_normalized_addition,
    transition_permutation,
)
from reca.rules import rule_from_number


def config(rule_numbers=(90,), iterations=4, r_count=8, c_multiplier=5, seed=0,
           transition="permutation", input_length=4):
    return ReservoirConfig(
        rules=tuple(rule_from_number(n) for n in rule_numbers),
        iterations=iterations,
        r_count=r_count,
        c_multiplier=c_multiplier,
        input_length=input_length,
        transition=transition,
        seed=seed,
    )


def manual_mapping(targets, c_multiplier):
    return MappingSet(
        input_length=len(targets),
        r_count=1,
        c_multiplier=c_multiplier,
        maps=np.array([targets], dtype=np.int64),
    )


def random_sequence(rng, steps, input_length=4):
    return rng.integers(0, 2, size=(steps, input_length), dtype=np.uint8)


class TestConfig:
    def test_width_arithmetic(self):
        cfg = config((90,), iterations=4, r_count=8, c_multiplier=10)
        assert cfg.width == 320
        assert cfg.feature_width == 1280
        assert cfg.size_metric == 320

    def test_uniform_and_pair_assignment(self):
        state = init_run(config((90,), r_count=8, c_multiplier=10))
        assert [c for _, c in state.assignment.segments] == [320]
        state = init_run(config((90, 165), r_count=8, c_multiplier=10))
        assert [c for _, c in state.assignment.segments] == [160, 160]

    def test_three_rules_rejected(self):
        with pytest.raises(ValueError):
            config((90, 165, 150))

    def test_bad_transition_rejected(self):
        with pytest.raises(ValueError):
            config(transition="telepathy")


class TestPermutationTransition:
    def test_explicit_example(self):
        # Mapped cells 5,2,0,7 take x's bits (1,0,0,0); the rest keep 1.
        m = manual_mapping([5, 2, 0, 7], c_multiplier=2)
        prev = CellVector.from_string("11111111")
        out = transition_permutation([1, 0, 0, 0], prev, m)
        assert out.to_string() == "01011110"

    def test_zero_input_forces_mapped_cells_to_zero(self):
        rng = np.random.default_rng(4)
        m = create_mappings(4, 2, 3, seed=9)
        prev = CellVector.from_bits(rng.integers(0, 2, size=m.total_width))
        out = transition_permutation([0, 0, 0, 0], prev, m).bits()
        mapped = m.mapped_bits() == 1
        assert (out[mapped] == 0).all()
        assert (out[~mapped] == prev.bits()[~mapped]).all()

    def test_zero_previous_state_reduces_to_encode(self):
        m = create_mappings(4, 2, 3, seed=10)
        x = [1, 0, 1, 1]
        out = transition_permutation(x, CellVector.zeros(m.total_width), m)
        assert out == encode(x, m)

    def test_width_mismatch_rejected(self):
        m = create_mappings(4, 2, 3, seed=11)
        with pytest.raises(ValueError):
            transition_permutation([1, 0, 0, 0], CellVector.zeros(5), m)


class TestNormalizedAddition:
    def test_sum_two_and_zero_are_deterministic(self):
        rng = np.random.default_rng(0)
        ones = CellVector.from_string("1111")
        zeros = CellVector.from_string("0000")
        assert transition_normalized_addition(ones, ones, rng) == ones
        assert transition_normalized_addition(zeros, zeros, rng) == zeros

    def test_sum_one_is_a_fair_coin(self):
        x = CellVector.from_string("1100")
        prev = CellVector.from_string("1010")
        n = 10_000
        counts = np.zeros(4)
        for seed in range(n):
            out = transition_normalized_addition(
                x, prev, np.random.default_rng(seed)
            ).bits()
            assert out[0] == 1 and out[3] == 0
            counts += out
        assert abs(counts[1] / n - 0.5) < 0.02
        assert abs(counts[2] / n - 0.5) < 0.02

    def test_width_mismatch_rejected(self):
        with pytest.raises(ValueError):
            transition_normalized_addition(
                CellVector.zeros(4), CellVector.zeros(5), np.random.default_rng(0)
            )


class TestProcessStep:
    def test_first_step_bypasses_transition(self):
        state = init_run(config(seed=42))
        x = [1, 0, 1, 0]
        trace = process_step(state, x)
        assert trace.a0 == encode(x, state.mappings)

    def test_identity_rule_repeats_a0(self):
        state = init_run(config((204,), iterations=5, seed=1))
        trace = process_step(state, [1, 1, 0, 0])
        assert all(v == trace.a0 for v in trace.iterations)

    def test_feature_concatenates_iterations(self):
        state = init_run(config(seed=3))
        trace = process_step(state, [0, 1, 1, 0])
        cfg = state.config
        assert trace.feature.shape == (cfg.feature_width,)
        stacked = np.concatenate([v.bits() for v in trace.iterations])
        assert (trace.feature == stacked).all()

    def test_later_steps_apply_permutation_transition(self):
        state = init_run(config(seed=5))
        process_step(state, [1, 0, 0, 1])
        prev = state.previous_final_state()
        x2 = [0, 1, 1, 0]
        trace = process_step(state, x2)
        assert trace.a0 == transition_permutation(x2, prev, state.mappings)

    def test_bad_input_rejected(self):
        state = init_run(config(seed=6))
        with pytest.raises(ValueError):
            process_step(state, [1, 0, 1])
        with pytest.raises(ValueError):
            process_step(state, [1, 0, 1, 3])


class TestProcessSequence:
    def test_one_trace_per_step(self):
        state = init_run(config(seed=7))
        xs = random_sequence(np.random.default_rng(2), 11)
        traces = process_sequence(state, xs)
        assert len(traces) == 11

    def test_empty_sequence_rejected(self):
        state = init_run(config(seed=8))
        with pytest.raises(ValueError):
            process_sequence(state, np.zeros((0, 4), dtype=np.uint8))

    def test_back_to_back_sequences_are_identical(self):
        state = init_run(config(seed=9))
        xs = random_sequence(np.random.default_rng(3), 9)
        first = process_sequence(state, xs)
        second = process_sequence(state, xs)
        for a, b in zip(first, second):
            assert a.a0 == b.a0
            assert a.iterations == b.iterations

    def test_matches_step_by_step_path(self):
        cfg = config(seed=10)
        fast = init_run(cfg)
        slow = init_run(cfg)
        xs = random_sequence(np.random.default_rng(4), 13)
        traces = process_sequence(fast, xs)
        slow.reset()
        for x, trace in zip(xs, traces):
            ref = process_step(slow, x)
            assert trace.a0 == ref.a0
            assert trace.iterations == ref.iterations
            assert (trace.feature == ref.feature).all()

    def test_sequence_features_matches_traces(self):
        cfg = config(seed=11)
        state = init_run(cfg)
        xs = random_sequence(np.random.default_rng(5), 8)
        feats = sequence_features(state, xs)
        traces = process_sequence(init_run(cfg), xs)
        assert feats.shape == (8, cfg.feature_width)
        for row, trace in zip(feats, traces):
            assert (row == trace.feature).all()

    def test_rule_zero_copies_zeros_into_unmapped_cells(self):
        state = init_run(config((0,), seed=12))
        xs = random_sequence(np.random.default_rng(6), 5)
        traces = process_sequence(state, xs)
        unmapped = state.mappings.mapped_bits() == 0
        for trace in traces[1:]:
            assert (trace.a0.bits()[unmapped] == 0).all()

    def test_echo_property_exact_positions(self):
        state = init_run(config(seed=13))
        xs = random_sequence(np.random.default_rng(7), 30)
        traces = process_sequence(state, xs)
        unmapped = state.mappings.mapped_bits() == 0
        for prev, cur in zip(traces, traces[1:]):
            prev_last = prev.iterations[-1].bits()
            assert (cur.a0.bits()[unmapped] == prev_last[unmapped]).all()

    def test_equal_rule_pair_is_trace_identical_to_uniform(self):
        xs = random_sequence(np.random.default_rng(8), 12)
        uni = process_sequence(init_run(config((90,), seed=14)), xs)
        two = process_sequence(init_run(config((90, 90), seed=14)), xs)
        for a, b in zip(uni, two):
            assert a.a0 == b.a0
            assert a.iterations == b.iterations

    def test_normalized_addition_deterministic_given_seed(self):
        cfg = config(seed=15, transition="normalized_addition")
        xs = random_sequence(np.random.default_rng(9), 7)
        a = process_sequence(init_run(cfg), xs)
        b = process_sequence(init_run(cfg), xs)
        for ta, tb in zip(a, b):
            assert ta.a0 == tb.a0
            assert ta.iterations == tb.iterations

    def test_normalized_addition_differs_only_where_sum_is_one(self):
        cfg = config(seed=16, transition="normalized_addition")
        state = init_run(cfg)
        xs = random_sequence(np.random.default_rng(10), 6)
        traces = process_sequence(state, xs)
        replay = init_run(cfg)
        replay_traces = process_sequence(replay, xs)  # same rng draw order
        for t in range(1, len(traces)):
            enc = encode(xs[t], state.mappings).bits()
            prev = traces[t - 1].iterations[-1].bits()
            a0 = traces[t].a0.bits()
            agree = enc == prev
            assert (a0[agree] == enc[agree]).all()
        for ta, tb in zip(traces, replay_traces):
            assert ta.a0 == tb.a0
