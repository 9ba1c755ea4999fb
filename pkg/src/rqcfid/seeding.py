"""Deterministic, splittable seeding built on numpy's SeedSequence.

A :class:`Seed` is (value, stream, path).  ``value`` is the user-facing 64-bit
seed, ``stream`` separates independent draw purposes (so that e.g. toggling
gate noise does not perturb the permutation draws), and ``path`` records
derivation lineage (trial index, sweep point, ...).  Identical seeds give
bit-identical generators; distinct (stream, path) give statistically
independent streams.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

# Stream ids used by the circuit simulator.  Keeping them apart means that
# turning one error source on or off never changes the other sources' draws.
STREAM_CIRCUIT = 0      # ideal-circuit draws: permutations, Haar gates, R layers
STREAM_GATE_NOISE = 1   # GUE generators for the two-qubit gate noise
STREAM_PERM_NOISE = 2   # swap-omission coins / pulse exponents beta
STREAM_INIT = 3         # initial basis-state draw


@dataclass(frozen=True)
class Seed:
    """Reproducible RNG root: 64-bit value plus stream id and derivation path."""

    value: int
    stream: int = 0
    path: tuple[int, ...] = ()

    def __post_init__(self):
        if not 0 <= int(self.value) < 2**64:
            raise ValueError(f"seed value must be a 64-bit unsigned integer, got {self.value}")
        if self.stream < 0:
            raise ValueError("stream id must be nonnegative")

    def child(self, *ids: int) -> "Seed":
        """Derived seed with `ids` appended to the path (e.g. a trial index)."""
        return replace(self, path=self.path + tuple(int(i) for i in ids))

    def with_stream(self, stream: int) -> "Seed":
        return replace(self, stream=stream)

    def sequence(self) -> np.random.SeedSequence:
        return np.random.SeedSequence(self.value, spawn_key=(self.stream, *self.path))

    def rng(self) -> np.random.Generator:
        """Fresh PCG64 generator; same Seed always yields bit-identical draws."""
        return np.random.default_rng(self.sequence())
