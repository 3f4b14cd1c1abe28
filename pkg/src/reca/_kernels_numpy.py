"""Pure-numpy kernel backend operating on packed uint64 cell words.

Same interface as ``_kernels_numba``; selected via the RECA_BACKEND env var.
All inputs and outputs are canonical packed arrays (bits >= width are zero).
"""

from __future__ import annotations

import numpy as np

from ._packing import tail_mask, words_needed

BACKEND_NAME = "numpy"

_ONE = np.uint64(1)
_SIXTY_THREE = np.uint64(63)


def _neighbors(state: np.ndarray, width: int):
    """Left/right wrap-around neighbor vectors of a packed state."""
    nw = state.shape[0]
    wrap_word = (width - 1) >> 6
    wrap_shift = np.uint64((width - 1) & 63)

    left = state << _ONE
    if nw > 1:
        left[1:] |= state[:-1] >> _SIXTY_THREE
    left[0] |= (state[wrap_word] >> wrap_shift) & _ONE
    left[-1] &= tail_mask(width)

    right = state >> _ONE
    if nw > 1:
        right[:-1] |= state[1:] << _SIXTY_THREE
    right[wrap_word] |= (state[0] & _ONE) << wrap_shift
    return left, right


def _apply_tables(left, center, right, tables, seg_masks):
    """OR of per-segment rule outputs; seg_masks carry the tail masking."""
    out = np.zeros_like(center)
    for seg in range(tables.shape[0]):
        acc = np.zeros_like(center)
        for k in range(8):
            if tables[seg, k]:
                term = left if k & 4 else ~left
                term = term & (center if k & 2 else ~center)
                term = term & (right if k & 1 else ~right)
                acc |= term
        out |= acc & seg_masks[seg]
    return out


def step_words(state, tables, seg_masks, width):
    left, right = _neighbors(state, width)
    return _apply_tables(left, state, right, tables, seg_masks)


def evolve_words(state, tables, seg_masks, width, n_iter):
    """Evolve ``n_iter`` synchronous steps; returns (n_iter, nw) words."""
    out = np.empty((n_iter, state.shape[0]), dtype=np.uint64)
    cur = state
    for i in range(n_iter):
        cur = step_words(cur, tables, seg_masks, width)
        out[i] = cur
    return out


def encode_words(x, target_pos, target_src, width):
    """Scatter input bits to their mapped cells; all other cells zero."""
    words = np.zeros(words_needed(width), dtype=np.uint64)
    active = x[target_src] == 1
    np.bitwise_or.at(
        words,
        target_pos[active] >> 6,
        _ONE << (target_pos[active] & np.int64(63)).astype(np.uint64),
    )
    return words


def sequence_permutation(
    xs, target_pos, target_src, mapped_mask, tables, seg_masks, width, n_iter
):
    """Run a whole sequence under the permutation time-transition.

    Returns ``(a0s, iters)``: packed post-transition initial states of shape
    (T, nw) and iteration states of shape (T, n_iter, nw).
    """
    steps = xs.shape[0]
    nw = words_needed(width)
    a0s = np.empty((steps, nw), dtype=np.uint64)
    iters = np.empty((steps, n_iter, nw), dtype=np.uint64)
    unmapped = ~mapped_mask
    prev = None
    for t in range(steps):
        a0 = encode_words(xs[t], target_pos, target_src, width)
        if prev is not None:
            a0 |= prev & unmapped
        a0s[t] = a0
        iters[t] = evolve_words(a0, tables, seg_masks, width, n_iter)
        prev = iters[t, -1]
    return a0s, iters
