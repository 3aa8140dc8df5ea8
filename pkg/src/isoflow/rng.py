"""Seeded random matrices with a fully documented generator.

The stream is splitmix64 (Steele, Lea, Vigna): the state advances by the
64-bit odd constant 0x9E3779B97F4A7C15 and each output is finalized with
two xor-shift-multiply rounds.  Uniforms take the top 53 bits; normals come
from the Box-Muller transform.  This keeps "random initial data" identical
across platforms and interpreter versions, unlike stdlib or numpy defaults.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit stream with uniform and normal draws."""

    def __init__(self, seed: int):
        self._state = seed & _MASK
        self._spare_normal = None

    def next_u64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Uniform in [0, 1) with 53-bit resolution."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def normal(self) -> float:
        """Standard normal via Box-Muller (pairs generated, one cached)."""
        if self._spare_normal is not None:
            value = self._spare_normal
            self._spare_normal = None
            return value
        # u1 in (0, 1] so the log is finite
        u1 = 1.0 - self.uniform()
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare_normal = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def normal_matrix(self, rows: int, cols: int) -> np.ndarray:
        out = np.empty((rows, cols), dtype=np.float64)
        for i in range(rows):
            for j in range(cols):
                out[i, j] = self.normal()
        return out

    def complex_matrix(self, n: int) -> np.ndarray:
        re = self.normal_matrix(n, n)
        im = self.normal_matrix(n, n)
        return (re + 1j * im).astype(np.complex128)


def random_hermitian(n: int, rng: SplitMix64) -> np.ndarray:
    a = rng.complex_matrix(n)
    return (a + a.conj().T) / 2.0


def random_skew_symmetric(n: int, rng: SplitMix64) -> np.ndarray:
    a = rng.normal_matrix(n, n).astype(np.complex128)
    return (a - a.T) / 2.0


def random_symmetric(n: int, rng: SplitMix64) -> np.ndarray:
    a = rng.normal_matrix(n, n).astype(np.complex128)
    return (a + a.T) / 2.0
