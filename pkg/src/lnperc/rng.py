"""Seeded random streams.

Every stream is a numpy ``Generator`` over the counter-based Philox4x32-10
bit generator keyed by a 64-bit seed.  Child seeds are derived with the
SplitMix64 finaliser, ``split(seed, i) = mix64(seed + (i + 1) * GAMMA)``,
so the i-th child never depends on how many siblings are drawn.
"""

from __future__ import annotations

import numpy as np

RNG_ALGORITHM = "numpy Philox4x32-10 keyed by 64-bit seed; children via SplitMix64"

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def split(seed: int, index: int) -> int:
    """Return the ``index``-th child seed of ``seed``."""
    if index < 0:
        raise ValueError("index must be non-negative")
    return mix64((seed & _MASK) + (index + 1) * _GAMMA)


def generator(seed: int) -> np.random.Generator:
    if seed < 0 or seed > _MASK:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed))
