"""Portable seeded pseudo-random numbers based on SplitMix64.

The generator is a plain integer recurrence with fixed 64-bit constants, so
identical seeds produce identical streams on every platform and Python
version.  Parallel workers derive independent streams with ``derive``, which
mixes ``seed XOR index`` through the SplitMix64 finalizer.
"""

import math

MASK64 = (1 << 64) - 1

# SplitMix64 constants (Steele, Lea, Flood 2014).
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """SplitMix64 finalizer: a 64-bit bijective avalanche mix."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


class Rng:
    """SplitMix64 stream with uniform, integer and Gaussian draws."""

    def __init__(self, seed: int):
        self.seed = seed & MASK64
        self._state = seed & MASK64
        self._gauss = None  # cached second Box-Muller variate

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        return mix64(self._state)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        """Uniform in [lo, hi)."""
        u = (self.next_u64() >> 11) * 2.0 ** -53
        return lo + (hi - lo) * u

    def randint(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled so there is no bias."""
        if n <= 0:
            raise ValueError("randint bound must be positive")
        limit = MASK64 + 1 - (MASK64 + 1) % n
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def choice(self, seq):
        return seq[self.randint(len(seq))]

    def gaussian(self) -> float:
        """Standard normal via Box-Muller (deterministic, cached pair)."""
        if self._gauss is not None:
            g, self._gauss = self._gauss, None
            return g
        # u1 strictly inside (0, 1) so log() is safe
        u1 = ((self.next_u64() >> 11) + 0.5) * 2.0 ** -53
        u2 = (self.next_u64() >> 11) * 2.0 ** -53
        r = math.sqrt(-2.0 * math.log(u1))
        self._gauss = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def gaussian_matrix(self, rows: int, cols: int):
        import numpy as np

        out = np.empty((rows, cols))
        for i in range(rows):
            for j in range(cols):
                out[i, j] = self.gaussian()
        return out


def derive(seed: int, index: int) -> Rng:
    """Independent child stream for trial ``index`` of a run seeded ``seed``."""
    return Rng(mix64((seed ^ index) & MASK64))
