"""
Seeded random streams for reproducible Monte-Carlo propagation.

Splitting rule: every stream is a ``numpy.random.Philox`` (counter-based,
64-bit words) generator seeded by ``SeedSequence(entropy=seed,
spawn_key=key)``. Keys are built by appending integers with ``child``;
the sweep uses ``key = (intensity_index, detuning_index, realization_index)``.
A realization draws exactly one uniform per superatom cell, in cell order,
with ``Generator.random``. Streams therefore depend only on the master seed
and the key, never on scheduling or on how many other streams exist.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np


class SeededRNG:
    """Master seed plus a spawn key identifying one independent stream."""

    def __init__(self, seed: int, key: Tuple[int, ...] = ()):
        if not 0 <= seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        self._seed = int(seed)
        self._key = tuple(int(k) for k in key)

    @property
    def seed(self) -> int:
        return self._seed

    @property
    def key(self) -> Tuple[int, ...]:
        return self._key

    def child(self, *key: int) -> SeededRNG:
        """Stream for a sub-task, derived by extending the spawn key."""
        return SeededRNG(self._seed, self._key + tuple(key))

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(entropy=self._seed, spawn_key=self._key)
        return np.random.Generator(np.random.Philox(sequence))

    def uniforms(self, count: int) -> np.ndarray:
        """The first ``count`` uniforms in [0, 1) of this stream."""
        return self.generator().random(count)

    def realization_uniforms(self, n_realizations: int, count: int) -> np.ndarray:
        """Matrix (n_realizations, count); row k is ``child(k).uniforms(count)``."""
        return np.stack([self.child(k).uniforms(count) for k in range(n_realizations)])

    def __repr__(self) -> str:
        return f"SeededRNG(seed={self._seed}, key={self._key})"
