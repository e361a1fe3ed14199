import cmath
import math

import numpy as np
import pytest

from projcocycle.geometry import MobiusMap
from projcocycle.maps import Arnold, Compose, Conjugate, Inverse, Mobius, Power, Rotation

# lines recorded by the acceptance suite, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_mobius(rng, rmax=0.6) -> MobiusMap:
    r = rmax * math.sqrt(rng.uniform())
    return MobiusMap(rng.uniform(0, 2 * math.pi), cmath.rect(r, rng.uniform(0, 2 * math.pi)))


def random_leaf(rng):
    kind = rng.integers(3)
    if kind == 0:
        return Rotation(float(rng.uniform(-3, 3)))
    if kind == 1:
        return Mobius(random_mobius(rng))
    return Arnold(float(rng.uniform(-1, 1)), float(rng.uniform(-0.6, 0.6)))


def random_map(rng, depth=3):
    """Random expression of depth <= ``depth`` with moderate distortion."""
    if depth <= 1 or rng.uniform() < 0.3:
        return random_leaf(rng)
    kind = rng.integers(4)
    if kind == 0:
        return Compose(random_map(rng, depth - 1), random_map(rng, depth - 1))
    if kind == 1:
        return Inverse(random_map(rng, depth - 1))
    if kind == 2:
        return Power(random_map(rng, depth - 1), int(rng.integers(-2, 3)))
    return Conjugate(random_map(rng, depth - 1), random_map(rng, depth - 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
