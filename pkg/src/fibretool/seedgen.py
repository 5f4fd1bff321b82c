"""Maximal-area seed representations.

The symmetric seed puts the half-turn centers q_1..q_n counterclockwise at
equal angles around ``i`` (the disc center after the Cayley map) at a common
hyperbolic radius. With ``Rot`` the rotation by 2 pi/n about ``i`` one has

    R(q_n) ... R(q_1) = (Rot^-1 R(q_1))^n   (up to sign),

so the relation holds exactly when ``Rot^-1 R(q_1)`` rotates by 2 pi/n.
That rotation angle decreases monotonically in the radius; its crossing of
2 pi/n is the largest-radius solution, which is the maximal-area one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .geom2 import ProjMatrix, reflection
from .groups import Representation, g_from_r, h_rep, relation_residual

RADIUS_BRACKET = (0.1, 5.0)
GRID_POINTS = 200
# SeedSpec draws use numpy's PCG64 bit generator.
RNG_ALGORITHM = "numpy.random.PCG64"


class SeedError(RuntimeError):
    pass


@dataclass(frozen=True)
class SeedSpec:
    n: int
    seed: int = 0
    magnitude: float = 1.0

    def __post_init__(self):
        if self.n < 6 or self.n % 2:
            raise ValueError(f"n must be even and >= 6, got {self.n}")
        if not self.magnitude >= 0:
            raise ValueError("magnitude must be non-negative")


def disc_point(radius: float, angle: float) -> complex:
    """Half-plane point at hyperbolic distance ``radius`` from ``i`` in direction ``angle``."""
    w = math.tanh(radius / 2.0) * complex(math.cos(angle), math.sin(angle))
    return 1j * (1 + w) / (1 - w)


def rotation_about_i(angle: float) -> ProjMatrix:
    """Counterclockwise rotation by ``angle`` about ``i``."""
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    # conjugate of diag(e^{i a/2}, e^{-i a/2}) by the Cayley map
    return ProjMatrix(c, s, -s, c)


def _rotation_angle(m: ProjMatrix) -> float:
    return 2.0 * math.acos(min(1.0, abs(m.trace) / 2.0))


def _defect(radius: float, n: int) -> float:
    rot = rotation_about_i(2 * math.pi / n)
    e = rot.inv() @ reflection(disc_point(radius, 0.0))
    return _rotation_angle(e) - 2 * math.pi / n


def seed_radius(n: int) -> float:
    """Common distance of the half-turn centers from ``i`` in the symmetric seed."""
    lo, hi = RADIUS_BRACKET
    grid = np.linspace(lo, hi, GRID_POINTS)
    vals = [_defect(r, n) for r in grid]
    # the defect must be monotone on the grid and change sign exactly once
    if any(b > a for a, b in zip(vals, vals[1:])):
        raise SeedError(f"rotation-angle defect is not monotone on {RADIUS_BRACKET}")
    crossings = [i for i in range(len(vals) - 1) if vals[i] > 0 >= vals[i + 1]]
    if len(crossings) != 1:
        raise SeedError(f"expected one sign change of the defect, found {len(crossings)}")
    i = crossings[0]
    return brentq(_defect, grid[i], grid[i + 1], args=(n,), xtol=1e-15, rtol=1e-15)


def symmetric_hyperelliptic(n: int) -> Representation:
    if n < 6 or n % 2:
        raise ValueError(f"n must be even and >= 6, got {n}")
    rho = seed_radius(n)
    # q_n and q_1 sit symmetrically about the imaginary axis, below i
    start = -math.pi / 2 - math.pi / n
    centers = [disc_point(rho, start + 2 * math.pi * j / n) for j in range(n)]
    rep = h_rep([reflection(q) for q in centers])
    res = relation_residual(rep)
    if res > 1e-9:
        raise SeedError(f"seed residual {res:.3g} exceeds 1e-9")
    return rep


def symmetric_g(n: int) -> Representation:
    return g_from_r(symmetric_hyperelliptic(n))


def chart_sample(spec: SeedSpec) -> np.ndarray:
    """The ``n - 6`` chart coordinates drawn for ``spec``."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    return rng.uniform(-spec.magnitude, spec.magnitude, spec.n - 6)


def deformed_rep(spec: SeedSpec) -> Representation:
    """A point of the fibre over the symmetric seed, at random chart coordinates."""
    from .fibration import pushforward
    from .fibre import fibre_point

    base = pushforward(symmetric_g(spec.n), 1)
    return fibre_point(base, [float(x) for x in chart_sample(spec)])
