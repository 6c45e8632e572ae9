"""Bit-reproducible random numbers: xoshiro256** seeded by splitmix64.

Seeding a generator from ``(seed, stream)``:

1. ``x = (seed XOR (stream * 0xD1342543DE82EF95)) mod 2**64``
2. the four state words are four successive splitmix64 outputs from ``x``
   (increment 0x9E3779B97F4A7C15; multipliers 0xBF58476D1CE4E5B9 and
   0x94D049BB133111EB; shifts 30, 27, 31)
3. each double is ``(xoshiro256**() >> 11) * 2**-53``

Independent trials use ``stream = trial index``.
"""
from __future__ import annotations

import numpy as np

from . import kernels

MASK64 = (1 << 64) - 1
_STREAM_MUL = 0xD1342543DE82EF95


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns ``(new_state, output)``."""
    state = (state + 0x9E3779B97F4A7C15) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return state, z ^ (z >> 31)


class Xoshiro256:
    def __init__(self, seed: int, stream: int = 0):
        x = (int(seed) ^ (int(stream) * _STREAM_MUL)) & MASK64
        words = []
        for _ in range(4):
            x, out = splitmix64(x)
            words.append(out)
        self.state = np.array(words, dtype=np.uint64)

    def random(self, n: int) -> np.ndarray:
        """``n`` doubles uniform on [0, 1)."""
        out = np.empty(int(n), dtype=np.float64)
        kernels.xoshiro_fill(self.state, out)
        return out
