"""Deterministic, splittable random streams.

Every stochastic stage of the library (projection matrices, test matrices,
synthetic data) draws from a counter-based generator so that results are a
pure function of a 64-bit seed and a short stream label.  There is no global
state; two streams built from the same (seed, label) replay the same sequence
regardless of platform, process or thread interleaving.

Generator
---------
The raw 64-bit word at counter ``c`` is the SplitMix64 output function applied
to ``key + (c + 1) * 0x9E3779B97F4A7C15 (mod 2^64)``, where

    key = mix64(seed XOR mix64(fnv1a64(label)))

and ``mix64`` is the SplitMix64 finalizer.  Uniform doubles take the top 53
bits of a raw word.  Standard normals use the basic Box-Muller transform with
a fixed pairing convention: the draw at counter ``c`` consumes the two raw
words at ``c`` and ``c + 1`` and returns

    sqrt(-2 ln u1) * cos(2 pi u2),   u1 in (0, 1],  u2 in [0, 1),

i.e. only the cosine branch is used, so each normal costs exactly two
counters and any draw can be reproduced in isolation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3

_INV_2_53 = 2.0 ** -53
_TWO_PI = 2.0 * np.pi


def _fnv1a64(label: str) -> int:
    h = _FNV_OFFSET
    for byte in label.encode("ascii"):
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def _mix64(x: int) -> int:
    """SplitMix64 finalizer on a python integer."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * _MIX_A) & _MASK64
    x = ((x ^ (x >> 27)) * _MIX_B) & _MASK64
    return x ^ (x >> 31)


def _raw_words(key: int, counters: np.ndarray) -> np.ndarray:
    """Vectorized SplitMix64 output for an array of uint64 counters."""
    x = (np.uint64(key) + (counters + np.uint64(1)) * np.uint64(_GOLDEN))
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_MIX_A)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_MIX_B)
    return x ^ (x >> np.uint64(31))


@dataclass
class RandomStream:
    """One addressable random sequence identified by (seed, label).

    The instance holds only a cursor; all values are functions of the
    counter, so streams may be re-created or split freely.  A single
    instance is not meant to be shared across threads.
    """

    seed: int
    label: str
    _counter: int = field(default=0, repr=False)

    def __post_init__(self):
        if not (0 <= self.seed <= _MASK64):
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        self._key = _mix64(self.seed ^ _mix64(_fnv1a64(self.label)))

    def _take(self, count: int) -> np.ndarray:
        counters = np.arange(self._counter, self._counter + count, dtype=np.uint64)
        self._counter += count
        return _raw_words(self._key, counters)

    def uniforms(self, count: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
        """`count` uniform draws in [lo, hi); consumes one counter each."""
        if lo >= hi:
            raise ValueError(f"uniform bounds require lo < hi, got [{lo}, {hi})")
        u = (self._take(count) >> np.uint64(11)).astype(np.float64) * _INV_2_53
        return lo + (hi - lo) * u

    def standard_normals(self, count: int) -> np.ndarray:
        """`count` standard-normal draws; consumes two counters each."""
        raw = self._take(2 * count)
        hi53 = (raw >> np.uint64(11)).astype(np.float64)
        u1 = (hi53[0::2] + 1.0) * _INV_2_53  # (0, 1]: log is finite
        u2 = hi53[1::2] * _INV_2_53
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(_TWO_PI * u2)

    def next_uniform(self, lo: float, hi: float) -> float:
        return float(self.uniforms(1, lo, hi)[0])

    def next_standard_normal(self) -> float:
        return float(self.standard_normals(1)[0])
