import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from fibretool.geom2 import ProjMatrix

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# bounded coordinates keep the round-off of random isometries far below the test tolerances
coord = st.floats(-5.0, 5.0, allow_nan=False, allow_infinity=False)
height = st.floats(0.05, 5.0, allow_nan=False, allow_infinity=False)
interior = st.builds(complex, coord, height)


def kak(theta: float, r: float, psi: float) -> ProjMatrix:
    """Rotation by ``theta`` about i, dilation by ``e^r``, rotation by ``psi``."""
    from fibretool.geom2 import translation_along
    from fibretool.seedgen import rotation_about_i

    return rotation_about_i(theta) @ translation_along(r) @ rotation_about_i(psi)


# rounding drops subnormal-scale angles, whose fixed points sit near 1e300
angles = st.floats(0.0, 2 * math.pi).map(lambda t: round(t, 9))


@st.composite
def isometries(draw):
    """A random isometry moving i by at most distance 2 (well conditioned)."""
    return kak(draw(angles), draw(st.floats(-2.0, 2.0)), draw(angles))


def random_isometry(rng: np.random.Generator) -> ProjMatrix:
    t, r, p = rng.uniform(0, 2 * math.pi), rng.uniform(-2.0, 2.0), rng.uniform(0, 2 * math.pi)
    return kak(float(t), float(r), float(p))


def random_interior(rng: np.random.Generator) -> complex:
    return complex(rng.normal(), math.exp(rng.normal()))


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))
