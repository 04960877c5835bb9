"""Seedable, splittable random number streams.

Everything stochastic in this package is driven by a counter-based Philox
generator keyed on a ``(seed, stream)`` pair.  The same pair always produces
the same draws, on any machine and with any number of worker processes, so
simulations are reproducible and parallel work items never share generator
state: each task derives its own substream instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def mix64(x: int) -> int:
    """SplitMix64 finalizer: scrambles a 64-bit word into a well-mixed one."""
    x = (x + _GOLDEN) & _MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK64
    x ^= x >> 31
    return x


def stream_mix(base: int, *indices: int) -> int:
    """Fold integer indices into a base stream id, one mix round per index.

    Folding left-to-right makes the result depend on index order, so
    ``(i, j, r)`` and ``(j, i, r)`` land in different streams.
    """
    h = base & _MASK64
    for ix in indices:
        h = mix64(h ^ ((ix & _MASK64) * 0xFF51AFD7ED558CCD & _MASK64))
    return h


@dataclass(frozen=True)
class RngSeed:
    """A (seed, stream) pair identifying one reproducible random stream.

    ``seed`` names the experiment, ``stream`` the substream within it; both
    are 64-bit unsigned integers and together form the 128-bit Philox key.
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)):
                raise ValueError(f"{name} must be an integer, got {type(v).__name__}")
            if not 0 <= v <= _MASK64:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {v}")

    def generator(self) -> np.random.Generator:
        """Fresh Generator for this (seed, stream); independent of all others."""
        key = (int(self.seed) & _MASK64) | ((int(self.stream) & _MASK64) << 64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, *indices: int) -> "RngSeed":
        """Derive a child seed for a parallel work item.

        The child keeps ``seed`` and mixes ``indices`` into ``stream``, so a
        grid cell or replicate gets the same draws no matter how work is
        partitioned across workers.
        """
        return RngSeed(self.seed, stream_mix(self.stream, *indices))


def as_generator(rng: "RngSeed | np.random.Generator") -> np.random.Generator:
    """Accept either an RngSeed or an already-constructed Generator."""
    if isinstance(rng, RngSeed):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngSeed or numpy Generator, got {type(rng).__name__}")
