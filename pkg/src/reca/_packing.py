"""Bit packing between per-cell arrays and uint64 word arrays.

Cell ``k`` lives at bit ``k & 63`` of word ``k >> 6`` (LSB-first). Packed
arrays are kept canonical: bits at positions >= width are always zero.
Word views assume a little-endian host.
"""

from __future__ import annotations

import sys

import numpy as np

if sys.byteorder != "little":
    raise ImportError("packed CA kernels require a little-endian host")


def words_needed(width: int) -> int:
    return (width + 63) >> 6


def tail_mask(width: int) -> np.uint64:
    """Mask of valid bits in the last word."""
    rem = width & 63
    if rem == 0:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << rem) - 1)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a (..., width) 0/1 array into (..., words_needed(width)) uint64."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    width = bits.shape[-1]
    nbytes = words_needed(width) * 8
    packed = np.packbits(bits, axis=-1, bitorder="little")
    if packed.shape[-1] != nbytes:
        pad = np.zeros(bits.shape[:-1] + (nbytes - packed.shape[-1],), dtype=np.uint8)
        packed = np.concatenate([packed, pad], axis=-1)
    return packed.view(np.uint64)


def unpack_words(words: np.ndarray, width: int) -> np.ndarray:
    """Unpack (..., nw) uint64 words into a (..., width) uint8 0/1 array."""
    words = np.ascontiguousarray(words, dtype=np.uint64)
    as_bytes = words.view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=-1, bitorder="little")
    return bits[..., :width]


def zeros_words(width: int) -> np.ndarray:
    return np.zeros(words_needed(width), dtype=np.uint64)
