import math

import numpy as np
import pytest

from fibretool.fibration import fibre_coordinates, pushforward
from fibretool.geom2 import center, dist, intersect_geodesics, axis
from fibretool.groups import g_from_r, relation_residual
from fibretool.invariants import rep_area
from fibretool.seedgen import (
    SeedSpec,
    chart_sample,
    deformed_rep,
    disc_point,
    rotation_about_i,
    seed_radius,
    symmetric_g,
    symmetric_hyperelliptic,
)


@pytest.mark.parametrize("n", [6, 8, 10, 12])
def test_seed_radius_closed_form(n):
    # the regular polygon of half-turn centers closes up when cosh r = cot(pi/n)
    assert abs(seed_radius(n) - math.acosh(1 / math.tan(math.pi / n))) < 1e-10


@pytest.mark.parametrize("n", [6, 8, 10])
def test_seed_values(n):
    h = symmetric_hyperelliptic(n)
    assert relation_residual(h) < 1e-9
    assert abs(rep_area(h) - (n - 4) * math.pi) < 1e-6
    assert abs(rep_area(g_from_r(h)) - 2 * (n - 4) * math.pi) < 1e-4


def test_seed_axes_share_a_point():
    g = symmetric_g(8)
    pts = [intersect_geodesics(axis(g[1]), axis(g[i])) for i in range(2, 8)]
    # every g_i = r_n r_i has its axis through the center of r_n
    qn = center(symmetric_hyperelliptic(8)[8])
    assert all(abs(p - qn) < 1e-9 for p in pts)


def test_seed_rejects_bad_n():
    with pytest.raises(ValueError):
        symmetric_hyperelliptic(7)
    with pytest.raises(ValueError):
        SeedSpec(5)
    with pytest.raises(ValueError):
        SeedSpec(8, 0, -1.0)


def test_disc_helpers():
    assert abs(disc_point(0.0, 1.0) - 1j) < 1e-15
    r = rotation_about_i(0.7)
    assert abs(r(1j) - 1j) < 1e-15
    p = disc_point(1.0, 0.2)
    assert abs(r(p) - disc_point(1.0, 0.9)) < 1e-12


def test_chart_sample_deterministic():
    a = chart_sample(SeedSpec(10, 3, 0.5))
    b = chart_sample(SeedSpec(10, 3, 0.5))
    assert a.shape == (4,) and np.array_equal(a, b)
    assert np.all(np.abs(a) <= 0.5)
    assert not np.array_equal(a, chart_sample(SeedSpec(10, 4, 0.5)))


def test_zero_magnitude_is_hyperelliptic():
    rep = deformed_rep(SeedSpec(8, 1, 0.0))
    g = symmetric_g(8)
    assert max(dist(a, b) for a, b in zip(rep.images, g.images)) < 1e-10


@pytest.mark.parametrize("n,seed", [(8, 0), (8, 1), (10, 2)])
def test_deformed_rep_properties(n, seed):
    rep = deformed_rep(SeedSpec(n, seed))
    assert relation_residual(rep) < 1e-8
    assert abs(rep_area(rep) - 2 * (n - 4) * math.pi) < 1e-6
    base = pushforward(symmetric_g(n), 1)
    assert max(dist(a, b) for a, b in zip(pushforward(rep, 1).images, base.images)) < 1e-8
    assert max(abs(x) for x in fibre_coordinates(rep)) > 1e-3
