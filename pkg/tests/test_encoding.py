"""Random mapping creation and the expanding encoder."""

import numpy as np
import pytest

from reca.encoding import MappingSet, create_mappings, encode


def manual_mapping(targets, c_multiplier):
    """Single-segment MappingSet from an explicit input->cell map."""
    return MappingSet(
        input_length=len(targets),
        r_count=1,
        c_multiplier=c_multiplier,
        maps=np.array([targets], dtype=np.int64),
    )


def test_widths_from_parameters():
    m = create_mappings(4, 2, 2, seed=1)
    assert m.segment_width == 8
    assert m.total_width == 16
    assert m.maps.shape == (2, 4)

    big = create_mappings(4, 8, 10, seed=1)
    assert big.total_width == 320


def test_single_cell_mapping_is_forced():
    m = create_mappings(1, 1, 1, seed=123)
    assert m.maps.tolist() == [[0]]
    assert encode([1], m).to_string() == "1"


def test_invalid_parameters_rejected():
    for bad in [(0, 1, 1), (1, 0, 1), (1, 1, 0), (-2, 3, 3)]:
        with pytest.raises(ValueError):
            create_mappings(*bad, seed=0)


def test_maps_are_injective_across_seeds():
    for seed in range(50):
        m = create_mappings(4, 8, 10, seed=seed)
        for p in range(m.r_count):
            assert len(set(m.maps[p].tolist())) == m.input_length
        assert m.maps.min() >= 0
        assert m.maps.max() < m.segment_width


def test_same_seed_reproduces_mappings_and_encoding():
    a = create_mappings(4, 8, 10, seed=99)
    b = create_mappings(4, 8, 10, seed=99)
    assert a == b
    x = [1, 0, 1, 1]
    assert encode(x, a) == encode(x, b)


def test_zero_input_encodes_to_zero_vector():
    m = create_mappings(4, 3, 5, seed=5)
    assert encode([0, 0, 0, 0], m).bits().sum() == 0


def test_popcount_preserved_per_segment():
    rng = np.random.default_rng(0)
    m = create_mappings(6, 4, 3, seed=77)
    for _ in range(20):
        x = rng.integers(0, 2, size=6)
        bits = encode(x, m).bits().reshape(m.r_count, m.segment_width)
        assert (bits.sum(axis=1) == x.sum()).all()


def test_all_ones_input_lands_on_the_map_targets():
    m = create_mappings(4, 1, 2, seed=3)
    bits = encode([1, 1, 1, 1], m).bits()
    assert bits.sum() == 4
    assert sorted(np.flatnonzero(bits).tolist()) == sorted(m.maps[0].tolist())


def test_explicit_map_example():
    m = manual_mapping([5, 2, 0, 7], c_multiplier=2)
    assert encode([1, 0, 0, 0], m).to_string() == "00000100"


def test_encode_rejects_wrong_length_or_values():
    m = create_mappings(4, 2, 2, seed=8)
    with pytest.raises(ValueError):
        encode([1, 0, 1], m)
    with pytest.raises(ValueError):
        encode([1, 0, 2, 0], m)


def test_mapping_set_validation():
    with pytest.raises(ValueError):
        manual_mapping([0, 0, 1, 2], c_multiplier=2)  # not injective
    with pytest.raises(ValueError):
        manual_mapping([0, 1, 2, 8], c_multiplier=2)  # target out of range
    with pytest.raises(ValueError):
        MappingSet(4, 2, 2, maps=np.zeros((1, 4), dtype=np.int64))  # bad shape


def test_json_round_trip():
    m = create_mappings(4, 8, 10, seed=2024)
    clone = MappingSet.from_json(m.to_json())
    assert clone == m
    assert clone.seed == 2024
    x = [0, 1, 1, 0]
    assert encode(x, clone) == encode(x, m)


def test_mapped_bits_marks_exactly_the_targets():
    m = create_mappings(4, 2, 3, seed=31)
    mask = m.mapped_bits()
    expected = np.zeros(m.total_width, dtype=np.uint8)
    expected[m.global_targets().ravel()] = 1
    assert (mask == expected).all()
    assert mask.sum() == m.r_count * m.input_length
