"""Space-time diagrams as plain PBM (P1) bitmaps.

Layout for a processed sequence: each step contributes I rows (iterations
A_1..A_I, time flowing downward, 1 = black), and an all-black separator row
follows every step except the last. Step t therefore occupies rows
t*(I+1) .. t*(I+1)+I-1.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .reservoir import StepTrace

_MAX_LINE = 70


def space_time_bitmap(traces: Sequence[StepTrace], separators: bool = True):
    """Stack the iteration rows of a trace list into a (rows, width) bitmap."""
    if not traces:
        raise ValueError("need at least one step trace")
    width = traces[0].iterations[0].width
    rows = []
    for idx, trace in enumerate(traces):
        for state in trace.iterations:
            rows.append(state.bits())
        if separators and idx != len(traces) - 1:
            rows.append(np.ones(width, dtype=np.uint8))
    return np.stack(rows)


def write_pbm(bitmap: np.ndarray, path) -> None:
    """Write a 0/1 array as ASCII PBM; 1 renders black."""
    bitmap = np.asarray(bitmap)
    if bitmap.ndim != 2:
        raise ValueError("bitmap must be 2-D")
    height, width = bitmap.shape
    with open(path, "w") as fh:
        fh.write(f"P1\n{width} {height}\n")
        for row in bitmap:
            digits = "".join("1" if v else "0" for v in row)
            for start in range(0, width, _MAX_LINE):
                fh.write(digits[start : start + _MAX_LINE])
                fh.write("\n")


def read_pbm(path) -> np.ndarray:
    """Parse an ASCII PBM back into a (height, width) uint8 array."""
    with open(path) as fh:
        text = fh.read()
    tokens: list[str] = []
    for line in text.splitlines():
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            tokens.extend(stripped.split())
    if not tokens or tokens[0] != "P1":
        raise ValueError("not an ASCII PBM (P1) file")
    width, height = int(tokens[1]), int(tokens[2])
    digits = "".join(tokens[3:])
    if len(digits) != width * height:
        raise ValueError("pixel count does not match the PBM header")
    flat = np.frombuffer(digits.encode(), dtype=np.uint8) - ord("0")
    if not np.isin(flat, (0, 1)).all():
        raise ValueError("PBM pixels must be 0 or 1")
    return flat.reshape(height, width).astype(np.uint8)


def iteration_rows(bitmap: np.ndarray, iterations: int) -> np.ndarray:
    """Drop separator rows from a diagram laid out by ``space_time_bitmap``.

    Returns shape (steps, iterations, width).
    """
    height = bitmap.shape[0]
    if (height + 1) % (iterations + 1) != 0:
        raise ValueError("bitmap height does not fit the step layout")
    steps = (height + 1) // (iterations + 1)
    keep = [
        t * (iterations + 1) + i for t in range(steps) for i in range(iterations)
    ]
    return bitmap[keep].reshape(steps, iterations, bitmap.shape[1])
