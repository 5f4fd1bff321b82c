import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import dblquad
from scipy.linalg import expm

from fibretool.cxhyp import (
    FORM,
    CxHypError,
    DegenerateConfiguration,
    NotAPointTriple,
    boundary_integral,
    embed_fuchsian,
    embed_matrix,
    embedded_residual,
    geodesic_frame,
    disc_coordinate,
    gram,
    half_plane_vector,
    herm_product,
    herm_vector,
    is_positive_cycle_cg,
    kahler_segment_integral,
    phase_residual,
    su11_block,
    toledo_invariant,
    triangle_area31,
    vector_kind,
)
from fibretool.geom2 import IDENTITY, center, reflection
from fibretool.groups import g_from_r, g_rep
from fibretool.invariants import rep_area, triangle_area_gb

from conftest import interior, isometries, random_interior, random_isometry
from reps import deformed, seed_g, seed_h


def random_ball_vector(rng):
    """Random negative vector with a random complex scale."""
    z = rng.normal(size=2) + 1j * rng.normal(size=2)
    z *= rng.uniform(0, 1) / np.linalg.norm(z)
    scale = complex(rng.normal(), rng.normal())
    return scale * herm_vector(z[0], z[1], 1.0)


def random_unitary(rng, size=1.0):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    a = size * (a - a.conj().T) / 2
    return expm(FORM @ a)


def slice_vector(w):
    return herm_vector(w, 0.0, 1.0)


def test_herm_examples():
    assert herm_product(herm_vector(0, 0, 1), herm_vector(0, 0, 1)) == -1
    assert herm_product(herm_vector(1, 0, 0), herm_vector(0, 0, 1)) == 0
    assert herm_product(herm_vector(0.5, 0, 1), herm_vector(0.5j, 0, 1)) == -1 - 0.25j


def test_herm_symmetry(rng):
    for _ in range(100):
        p, q, r = (random_ball_vector(rng) for _ in range(3))
        a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        assert abs(herm_product(p, q) - herm_product(q, p).conjugate()) < 1e-12
        lhs = herm_product(a * p + b * r, q)
        rhs = a * herm_product(p, q) + b * herm_product(r, q)
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs))
        assert abs(herm_product(q, a * p) - a.conjugate() * herm_product(q, p)) < 1e-10 * max(1.0, abs(lhs))


def test_vector_kind():
    assert vector_kind(herm_vector(0, 0, 1)) == "interior"
    assert vector_kind(herm_vector(1, 0, 1)) == "boundary"
    assert vector_kind(herm_vector(1, 1, 0)) == "positive"


def test_unitary_helper_preserves_form(rng):
    u = random_unitary(rng)
    assert np.max(np.abs(u.conj().T @ FORM @ u - FORM)) < 1e-10


def test_segment_examples(rng):
    for _ in range(20):
        u, p = random_ball_vector(rng), random_ball_vector(rng)
        assert abs(kahler_segment_integral(u, u, p)) < 1e-12
        assert abs(kahler_segment_integral(u, p, p)) < 1e-12
    with pytest.raises(CxHypError):
        kahler_segment_integral(herm_vector(1, 0, 1), herm_vector(0, 0, 1), herm_vector(0.1, 0, 1))


def test_boundary_integral_is_minus_area(rng):
    for _ in range(100):
        u, p1, p2, p3 = (random_ball_vector(rng) for _ in range(4))
        assert abs(boundary_integral(u, p1, p2, p3) + triangle_area31(p1, p2, p3)) < 1e-9


def test_area31_worked_triple():
    a = triangle_area31(herm_vector(0, 0, 1), herm_vector(0.5, 0, 1), herm_vector(0.5j, 0, 1))
    assert abs(a - 0.5 * math.atan(0.25)) < 1e-12


def test_area31_degenerate_cases(rng):
    for _ in range(50):
        p1, p2, p3 = (random_ball_vector(rng).real.astype(complex) for _ in range(3))
        if all(vector_kind(p) == "interior" for p in (p1, p2, p3)):
            assert abs(triangle_area31(p1, p2, p3)) < 1e-12
        p, q = random_ball_vector(rng), random_ball_vector(rng)
        assert abs(triangle_area31(p, p, q)) < 1e-12
    iso = herm_vector(1, 0, 1)
    assert triangle_area31(iso, iso, herm_vector(0, 0, 1)) == 0.0
    with pytest.raises(NotAPointTriple):
        triangle_area31(herm_vector(1, 1, 0), herm_vector(0, 0, 1), herm_vector(0.1, 0, 1))


def test_sylvester_guard(rng):
    for _ in range(10_000):
        pts = [random_ball_vector(rng) for _ in range(3)]
        # scale to <p, p> = -1 so the Gram determinant is comparable across samples
        pts = [p / math.sqrt(-herm_product(p, p).real) for p in pts]
        g = gram(pts)
        assert np.linalg.det(g).real <= 1e-10
        prod = -g[0, 1] * g[1, 2] * g[2, 0]
        assert prod.real >= -1e-10 * max(1.0, abs(prod))
        assert abs(triangle_area31(*pts)) <= math.pi / 4 + 1e-12


def test_area31_invariance(rng):
    for _ in range(100):
        pts = [random_ball_vector(rng) for _ in range(3)]
        a = triangle_area31(*pts)
        u = random_unitary(rng)
        assert abs(triangle_area31(*[u @ p for p in pts]) - a) < 1e-9
        scales = [complex(*rng.normal(size=2)) for _ in range(3)]
        assert abs(triangle_area31(*[s * p for s, p in zip(scales, pts)]) - a) < 1e-12


def test_area31_alternation(rng):
    for _ in range(100):
        p, q, r = (random_ball_vector(rng) for _ in range(3))
        a = triangle_area31(p, q, r)
        assert abs(triangle_area31(q, p, r) + a) < 1e-12
        assert abs(triangle_area31(q, r, p) - a) < 1e-12


def test_quadrature_oracle_ratio():
    """Slice triangles have a quarter of their curvature -1 area."""

    def to_half_plane(w):
        return 1j * (1 + w) / (1 - w)

    # disc triangle 0, 1/2, i/2: two straight sides and an arc of the circle
    # orthogonal to the unit circle through 1/2 and i/2 (center c(1 + i), radius^2 = 2c^2 - 1)
    c = 1.25
    rad = math.sqrt(2 * c * c - 1)

    def upper(x):
        # y below the arc (the arc bulges towards the origin)
        return c - math.sqrt(rad * rad - (x - c) ** 2)

    def density(y, x):
        return 4.0 / (1 - x * x - y * y) ** 2

    area, err = dblquad(density, 0.0, 0.5, 0.0, upper, epsabs=1e-12, epsrel=1e-12)
    assert abs(area - triangle_area_gb(*(to_half_plane(w) for w in (0, 0.5, 0.5j)))) < 1e-9
    a31 = triangle_area31(slice_vector(0), slice_vector(0.5), slice_vector(0.5j))
    assert abs(a31 / area - 0.25) < 1e-9


@given(interior, interior, interior)
def test_slice_area_ratio(p, q, r):
    gb = triangle_area_gb(p, q, r)
    a31 = triangle_area31(*(half_plane_vector(z) for z in (p, q, r)))
    assert abs(a31 - gb / 4) < 1e-9


def test_ideal_triangle():
    a = triangle_area31(*(slice_vector(w) for w in (1, 1j, -1)))
    assert abs(a - math.pi / 4) < 1e-12


def test_positive_cycle_cg(rng):
    ws = [cmath.exp(1j * t) for t in (0.1, 1.5, 3.0, 4.4)]
    pts = [slice_vector(w) for w in ws]
    assert is_positive_cycle_cg(pts)
    assert not is_positive_cycle_cg([pts[1], pts[0], pts[2], pts[3]])
    spread = [herm_vector(1, 0, 1), herm_vector(0, 1, 1), herm_vector(0.6, 0.8j, 1)]
    assert not is_positive_cycle_cg(spread)
    with pytest.raises(CxHypError):
        is_positive_cycle_cg([pts[0], 2j * pts[0], pts[1]])
    with pytest.raises(CxHypError):
        is_positive_cycle_cg([pts[0], herm_vector(0, 0, 1), pts[1]])
    # the same cycles moved into a random complex geodesic
    u = random_unitary(rng)
    assert is_positive_cycle_cg([u @ p for p in pts])
    assert not is_positive_cycle_cg([u @ p for p in (pts[1], pts[0], pts[2], pts[3])])


def test_positive_cycle_concatenation(rng):
    for _ in range(200):
        u = random_unitary(rng, 0.5)
        k = int(rng.integers(3, 6))
        angles = rng.uniform(0, 2 * math.pi, k + 1)
        pts = [u @ slice_vector(cmath.exp(1j * t)) for t in angles]
        head = pts[:k]
        if is_positive_cycle_cg(head) and is_positive_cycle_cg([pts[k - 1], pts[k], pts[0]]):
            assert is_positive_cycle_cg(pts)


def test_frame_reduction_consistency(rng):
    for _ in range(100):
        u = random_unitary(rng, 0.5)
        ws = [cmath.exp(1j * t) for t in rng.uniform(0, 2 * math.pi, 3)]
        pts = [u @ slice_vector(w) for w in ws]
        frame = geodesic_frame(pts[0], pts[1])
        reduced = [slice_vector(disc_coordinate(p, frame)) for p in pts]
        assert abs(triangle_area31(*pts) - triangle_area31(*reduced)) < 1e-9


def test_embed_examples(rng):
    assert np.allclose(embed_matrix(IDENTITY), np.eye(3))
    for _ in range(100):
        m, n = random_isometry(rng), random_isometry(rng)
        assert phase_residual(embed_matrix(m) @ embed_matrix(n) @ np.linalg.inv(embed_matrix(m @ n))) < 1e-9
        e = embed_matrix(m)
        assert np.max(np.abs(e.conj().T @ FORM @ e - FORM)) < 1e-9
        z = random_interior(rng)
        w = e @ half_plane_vector(z)
        assert abs(w[1]) < 1e-12
        target = half_plane_vector(m(z))
        assert abs(w[0] / w[2] - target[0]) < 1e-9


def test_embedded_half_turn_fixes_slice_point(rng):
    for _ in range(20):
        p = random_interior(rng)
        e = embed_matrix(reflection(p), 1j)
        v = half_plane_vector(p)
        w = e @ v
        assert abs(w[0] * v[2] - w[2] * v[0]) < 1e-9 and abs(w[1]) < 1e-12


def test_su11_block_unit_determinant(rng):
    b = su11_block(random_isometry(rng))
    assert abs(np.linalg.det(b) - 1) < 1e-12


@pytest.mark.parametrize("n", [6, 8, 10])
def test_embed_fuchsian_residual(n):
    assert embedded_residual(embed_fuchsian(seed_h(n))) < 1e-9
    assert embedded_residual(embed_fuchsian(seed_g(n))) < 1e-9


@pytest.mark.parametrize("n", [6, 8])
def test_toledo_values(n):
    for rep in (seed_g(n), deformed(n, 0)):
        assert abs(toledo_invariant(embed_fuchsian(rep)) - (n - 4) * math.pi / 2) < 1e-5
    h = seed_h(n)
    tol_h = toledo_invariant(embed_fuchsian(h))
    assert abs(tol_h - rep_area(h) / 4) < 1e-6


def test_toledo_basepoint_and_trivial(rng):
    rep3 = embed_fuchsian(deformed(8, 2))
    for _ in range(5):
        x0 = random_ball_vector(rng)
        assert abs(toledo_invariant(rep3, x0) - 2 * math.pi) < 1e-6
    assert toledo_invariant(embed_fuchsian(g_rep([IDENTITY] * 5))) == 0.0
    with pytest.raises(CxHypError):
        toledo_invariant(rep3, herm_vector(1, 0, 1))


def test_toledo_rejects_broken_relations():
    rep3 = embed_fuchsian(seed_g(6))
    images = list(rep3.images)
    images[0] = images[0] @ embed_matrix(reflection(1 + 1j)) @ embed_matrix(reflection(2 + 1j))
    from fibretool.cxhyp import EmbeddedRep

    with pytest.raises(CxHypError):
        toledo_invariant(EmbeddedRep(rep3.presentation, tuple(images)))
