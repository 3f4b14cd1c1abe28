"""Numba-compiled kernel backend operating on packed uint64 cell words.

Mirrors ``_kernels_numpy`` exactly; bit-identical outputs on the same inputs.
All intermediates stay uint64 to avoid numba's mixed signed/unsigned promotion.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BACKEND_NAME = "numba"

_U1 = np.uint64(1)
_U63 = np.uint64(63)
_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)


@njit(cache=True)
def _tail_mask(width):
    rem = width & 63
    if rem == 0:
        return _FULL
    return (_U1 << np.uint64(rem)) - _U1


@njit(cache=True)
def _neighbors(state, width, left, right):
    nw = state.shape[0]
    wrap_word = (width - 1) >> 6
    wrap_shift = np.uint64((width - 1) & 63)
    carry = np.uint64(0)
    for i in range(nw):
        v = state[i]
        left[i] = (v << _U1) | carry
        carry = v >> _U63
    left[0] |= (state[wrap_word] >> wrap_shift) & _U1
    left[nw - 1] &= _tail_mask(width)
    for i in range(nw - 1):
        right[i] = (state[i] >> _U1) | (state[i + 1] << _U63)
    right[nw - 1] = state[nw - 1] >> _U1
    right[wrap_word] |= (state[0] & _U1) << wrap_shift


@njit(cache=True)
def _apply_tables(left, center, right, tables, seg_masks, out):
    nw = center.shape[0]
    nseg = tables.shape[0]
    for i in range(nw):
        li = left[i]
        ci = center[i]
        ri = right[i]
        acc = np.uint64(0)
        for seg in range(nseg):
            o = np.uint64(0)
            for k in range(8):
                if tables[seg, k]:
                    t = li if k & 4 else ~li
                    t = t & (ci if k & 2 else ~ci)
                    t = t & (ri if k & 1 else ~ri)
                    o |= t
            acc |= o & seg_masks[seg, i]
        out[i] = acc


@njit(cache=True)
def evolve_words(state, tables, seg_masks, width, n_iter):
    nw = state.shape[0]
    out = np.empty((n_iter, nw), np.uint64)
    cur = state.copy()
    left = np.empty(nw, np.uint64)
    right = np.empty(nw, np.uint64)
    nxt = np.empty(nw, np.uint64)
    for it in range(n_iter):
        _neighbors(cur, width, left, right)
        _apply_tables(left, cur, right, tables, seg_masks, nxt)
        for i in range(nw):
            out[it, i] = nxt[i]
            cur[i] = nxt[i]
    return out


def step_words(state, tables, seg_masks, width):
    return evolve_words(state, tables, seg_masks, width, 1)[0]


@njit(cache=True)
def encode_words(x, target_pos, target_src, width):
    nw = (width + 63) >> 6
    words = np.zeros(nw, np.uint64)
    for m in range(target_pos.shape[0]):
        if x[target_src[m]]:
            p = target_pos[m]
            words[p >> 6] |= _U1 << np.uint64(p & 63)
    return words


@njit(cache=True)
def sequence_permutation(
    xs, target_pos, target_src, mapped_mask, tables, seg_masks, width, n_iter
):
    steps = xs.shape[0]
    nw = (width + 63) >> 6
    a0s = np.empty((steps, nw), np.uint64)
    iters = np.empty((steps, n_iter, nw), np.uint64)
    left = np.empty(nw, np.uint64)
    right = np.empty(nw, np.uint64)
    nxt = np.empty(nw, np.uint64)
    cur = np.empty(nw, np.uint64)
    for t in range(steps):
        a0 = encode_words(xs[t], target_pos, target_src, width)
        if t > 0:
            for i in range(nw):
                a0[i] |= iters[t - 1, n_iter - 1, i] & ~mapped_mask[i]
        for i in range(nw):
            a0s[t, i] = a0[i]
            cur[i] = a0[i]
        for it in range(n_iter):
            _neighbors(cur, width, left, right)
            _apply_tables(left, cur, right, tables, seg_masks, nxt)
            for i in range(nw):
                iters[t, it, i] = nxt[i]
                cur[i] = nxt[i]
    return a0s, iters
