"""Random injective input mappings and the expanding encoder.

The input vector of length L is mapped R times into segments of width C*L;
within each segment the L input bits land on L distinct random cells and
every other cell starts at zero. The concatenated segments (total width
R*C*L) form the reservoir's initial state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ._packing import pack_bits
from .automaton import CellVector

RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True, eq=False)
class MappingSet:
    """R injective maps from input positions into segment cells.

    ``maps[p, j]`` is the segment-local target cell of input bit ``j`` in
    segment ``p``; targets within a segment are distinct. ``seed`` records
    how the maps were drawn (None for hand-built sets).
    """

    input_length: int
    r_count: int
    c_multiplier: int
    maps: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        if self.input_length < 1 or self.r_count < 1 or self.c_multiplier < 1:
            raise ValueError("input_length, r_count and c_multiplier must be >= 1")
        maps = np.asarray(self.maps, dtype=np.int64)
        if maps.shape != (self.r_count, self.input_length):
            raise ValueError(
                f"maps must have shape ({self.r_count}, {self.input_length})"
            )
        if maps.min(initial=0) < 0 or maps.max(initial=0) >= self.segment_width:
            raise ValueError("map targets must lie inside the segment")
        for p in range(self.r_count):
            if len(set(maps[p].tolist())) != self.input_length:
                raise ValueError(f"map {p} is not injective")
        maps = np.ascontiguousarray(maps)
        maps.setflags(write=False)
        object.__setattr__(self, "maps", maps)

    @property
    def segment_width(self) -> int:
        return self.c_multiplier * self.input_length

    @property
    def total_width(self) -> int:
        return self.r_count * self.segment_width

    def global_targets(self) -> np.ndarray:
        """Targets as absolute cell indices, shape (R, L)."""
        offsets = np.arange(self.r_count, dtype=np.int64) * self.segment_width
        return self.maps + offsets[:, None]

    def target_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Flat (positions, source input index) arrays for the kernels."""
        pos = self.global_targets().ravel()
        src = np.tile(np.arange(self.input_length, dtype=np.int64), self.r_count)
        return np.ascontiguousarray(pos), np.ascontiguousarray(src)

    def mapped_bits(self) -> np.ndarray:
        """uint8 array over the total width: 1 where some input bit lands."""
        bits = np.zeros(self.total_width, dtype=np.uint8)
        bits[self.global_targets().ravel()] = 1
        return bits

    def mapped_mask_words(self) -> np.ndarray:
        return pack_bits(self.mapped_bits())

    def to_json(self) -> str:
        return json.dumps(
            {
                "input_length": self.input_length,
                "r_count": self.r_count,
                "c_multiplier": self.c_multiplier,
                "seed": self.seed,
                "rng_algorithm": RNG_ALGORITHM,
                "maps": self.maps.tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MappingSet":
        doc = json.loads(text)
        return cls(
            input_length=int(doc["input_length"]),
            r_count=int(doc["r_count"]),
            c_multiplier=int(doc["c_multiplier"]),
            maps=np.asarray(doc["maps"], dtype=np.int64),
            seed=None if doc.get("seed") is None else int(doc["seed"]),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, MappingSet):
            return NotImplemented
        return (
            self.input_length == other.input_length
            and self.r_count == other.r_count
            and self.c_multiplier == other.c_multiplier
            and bool(np.array_equal(self.maps, other.maps))
        )


def create_mappings(
    input_length: int, r_count: int, c_multiplier: int, seed: int
) -> MappingSet:
    """Draw R independent uniformly random injective maps from a seeded PCG64.

    Each map picks L distinct targets among the C*L segment cells, assigned
    to input bits in random order. Identical seeds reproduce the set exactly.
    """
    if input_length < 1 or r_count < 1 or c_multiplier < 1:
        raise ValueError("input_length, r_count and c_multiplier must be >= 1")
    rng = np.random.default_rng(seed)
    segment_width = c_multiplier * input_length
    maps = np.stack(
        [
            rng.choice(segment_width, size=input_length, replace=False)
            for _ in range(r_count)
        ]
    ).astype(np.int64)
    return MappingSet(input_length, r_count, c_multiplier, maps, seed=seed)


def _check_input(x, input_length: int) -> np.ndarray:
    arr = np.asarray(x)
    if arr.ndim != 1 or arr.size != input_length:
        raise ValueError(f"input must have length {input_length}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("input bits must be 0 or 1")
    return arr.astype(np.uint8)


def encode(x, mapping_set: MappingSet) -> CellVector:
    """Project an input vector into the expanded, concatenated cell vector.

    Cell ``maps[p, j]`` of segment ``p`` carries ``x[j]``; cells with no
    mapping are zero.
    """
    arr = _check_input(x, mapping_set.input_length)
    bits = np.zeros(mapping_set.total_width, dtype=np.uint8)
    bits[mapping_set.global_targets()] = arr
    return CellVector(pack_bits(bits), mapping_set.total_width)
