"""Seeded splitmix64 generator for reproducible sample draws.

The generator is specified exactly (Steele/Lea/Flood splitmix64) so that
sample points and directions are bit-identical across platforms and runs:

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)

Doubles are the top 53 bits of z scaled to [0, 1).
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """Deterministic 64-bit generator with uniform helpers."""

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def uniform(self, lo: float = 0.0, hi: float = 1.0) -> float:
        u = (self.next_u64() >> 11) * 2.0**-53
        return lo + u * (hi - lo)

    def uniforms(self, n: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
        return np.array([self.uniform(lo, hi) for _ in range(n)])

    def unit_vector(self, dim: int) -> np.ndarray:
        """Direction on the unit sphere (Box-Muller over splitmix uniforms)."""
        v = np.empty(dim)
        i = 0
        while i < dim:
            u1 = self.uniform()
            u2 = self.uniform()
            u1 = max(u1, 2.0**-53)
            r = np.sqrt(-2.0 * np.log(u1))
            v[i] = r * np.cos(2.0 * np.pi * u2)
            if i + 1 < dim:
                v[i + 1] = r * np.sin(2.0 * np.pi * u2)
            i += 2
        return v / np.linalg.norm(v)
