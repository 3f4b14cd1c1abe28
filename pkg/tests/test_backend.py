"""The numba and numpy kernel backends must be bit-identical."""

import numpy as np
import pytest

from reca._backend import get_backend
from reca._packing import pack_bits, unpack_words
from reca.automaton import RuleAssignment
from reca.encoding import create_mappings
from reca.rules import rule_from_number


def backends():
    numpy_backend = get_backend("numpy")
    try:
        numba_backend = get_backend("numba")
    except ImportError:
        pytest.skip("numba not installed")
    return numpy_backend, numba_backend


def test_pack_round_trip():
    rng = np.random.default_rng(0)
    for width in (1, 3, 63, 64, 65, 127, 129, 320):
        bits = rng.integers(0, 2, size=width, dtype=np.uint8)
        assert (unpack_words(pack_bits(bits), width) == bits).all()


def test_evolve_words_identical_across_backends():
    np_k, nb_k = backends()
    rng = np.random.default_rng(1)
    for width in (5, 64, 100, 320):
        assignment = RuleAssignment.pair(
            rule_from_number(153), rule_from_number(195), width
        )
        tables, masks = assignment.tables(), assignment.segment_masks()
        state = pack_bits(rng.integers(0, 2, size=width, dtype=np.uint8))
        a = np_k.evolve_words(state, tables, masks, width, 7)
        b = nb_k.evolve_words(state, tables, masks, width, 7)
        assert (a == b).all()


def test_sequence_permutation_identical_across_backends():
    np_k, nb_k = backends()
    rng = np.random.default_rng(2)
    mappings = create_mappings(4, 3, 5, seed=3)
    width = mappings.total_width
    assignment = RuleAssignment.uniform(rule_from_number(110), width)
    xs = rng.integers(0, 2, size=(25, 4), dtype=np.uint8)
    pos, src = mappings.target_arrays()
    args = (
        xs, pos, src, mappings.mapped_mask_words(),
        assignment.tables(), assignment.segment_masks(), width, 4,
    )
    a0_np, it_np = np_k.sequence_permutation(*args)
    a0_nb, it_nb = nb_k.sequence_permutation(*args)
    assert (a0_np == a0_nb).all()
    assert (it_np == it_nb).all()


def test_encode_words_identical_across_backends():
    np_k, nb_k = backends()
    mappings = create_mappings(6, 2, 4, seed=9)
    pos, src = mappings.target_arrays()
    for x in ([1, 0, 0, 1, 1, 0], [0] * 6, [1] * 6):
        arr = np.array(x, dtype=np.uint8)
        a = np_k.encode_words(arr, pos, src, mappings.total_width)
        b = nb_k.encode_words(arr, pos, src, mappings.total_width)
        assert (a == b).all()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        get_backend("fortran")
