"""SplitMix64 counter-based uniform generator.

Value ``k`` (0-based, row-major over the grid) is the SplitMix64 output for
state ``seed + (k + 1) * 0x9E3779B97F4A7C15 (mod 2**64)``; the top 53 bits
give a double in ``[0, 1)``.  Any language with 64-bit unsigned arithmetic
reproduces the same fields bit for bit.
"""

from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, count: int, start: int = 0) -> np.ndarray:
    """``count`` raw 64-bit outputs starting at counter ``start``."""
    seed = np.uint64(int(seed) % 2**64)
    k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = seed + k * GOLDEN
        z = (z ^ (z >> np.uint64(30))) * M1
        z = (z ^ (z >> np.uint64(27))) * M2
    return z ^ (z >> np.uint64(31))


def uniform(seed: int, shape, low: float = 0.0, high: float = 1.0) -> np.ndarray:
    if not low < high:
        raise ValueError("need low < high")
    count = int(np.prod(shape))
    u = (splitmix64(seed, count) >> np.uint64(11)).astype(np.float64) * 2.0**-53
    return (low + (high - low) * u).reshape(shape)
