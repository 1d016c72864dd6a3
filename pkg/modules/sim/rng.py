"""Seeded random streams for reproducible simulations.

Every measurement setting draws from its own stream, derived from
(seed, setting, part), so results never depend on the order or the
grouping in which settings are run.
"""

import numpy as np

MAX_SEED = 2**64 - 1


class SeedStreams:
    """Deterministic numpy generators keyed by (setting, part)."""

    def __init__(self, seed: int):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
            raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
        if not 0 <= int(seed) <= MAX_SEED:
            raise ValueError(f"seed must lie in [0, 2**64 - 1], got {seed}")
        self._seed = int(seed)

    @property
    def seed(self) -> int:
        return self._seed

    def generator(self, setting: int = 0, part: int = 0) -> np.random.Generator:
        sequence = np.random.SeedSequence(entropy=self._seed, spawn_key=(setting, part))
        return np.random.Generator(np.random.PCG64(sequence))


def as_generator(seed, setting: int = 0, part: int = 0) -> np.random.Generator:
    """Accept an int seed, a SeedStreams or a ready Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, SeedStreams):
        return seed.generator(setting, part)
    return SeedStreams(seed).generator(setting, part)
