import math

import numpy as np
import pytest

from modules.hilbert import ket, pure_density
from modules.pentagon import canonical_frame
from modules.states import named_state


def random_pure(rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    return pure_density(ket(*z))


def random_density(rng: np.random.Generator, rank: int = 3) -> np.ndarray:
    g = rng.normal(size=(3, rank)) + 1j * rng.normal(size=(3, rank))
    rho = g @ np.conj(g).T
    return rho / np.trace(rho).real


def random_states(rng: np.random.Generator, count: int):
    """Mix of pure, rank-2 and full-rank states."""
    states = []
    for i in range(count):
        rank = i % 3 + 1
        states.append(random_pure(rng) if rank == 1 else random_density(rng, rank))
    return states


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def frame():
    return canonical_frame()


@pytest.fixture
def states(rng):
    return random_states(rng, 1000)


@pytest.fixture
def t1f():
    return named_state("T1f").rho


@pytest.fixture
def nx():
    return named_state("Nx").rho


@pytest.fixture
def state_of():
    return lambda name: named_state(name).rho


# Frames away from the canonical angles, used for the frame-independent identities
ANGLE_PAIRS = [
    (math.pi / 3, math.pi / 4),
    (0.3, 1.1),
    (1.2, 0.4),
    (math.pi / 6, math.pi / 5),
]
