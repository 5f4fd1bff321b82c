"""The complex hyperbolic plane as the negative cone of a ++- Hermitian form.

Vectors are complex numpy arrays of shape (3,) and the form is
``<p, q> = p1 conj(q1) + p2 conj(q2) - p3 conj(q3)``. Negative vectors are
points of the ball, isotropic ones are boundary points.

A real 2x2 isometry of the half-plane acts on the slice ``z2 = 0`` through the
Cayley intertwiner: the half-plane point ``z`` becomes the vector
``(w, 0, 1)`` with ``w = (z - i)/(z + i)`` in the unit disc.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .geom2 import ProjMatrix
from .groups import Presentation, Representation, eval_word
from .invariants import fan_area, is_positive_cycle

FORM = np.diag([1.0, 1.0, -1.0]).astype(complex)
ISOTROPIC_TOL = 1e-10
GUARD_TOL = 1e-10
COPLANAR_TOL = 1e-8
# deterministic basepoint perturbation used after a degenerate fan
JITTER = np.array([0.0137 + 0.0071j, 0.0089 - 0.0113j, 0.0])

_CAYLEY = np.array([[1.0, -1j], [1.0, 1j]])
_CAYLEY_INV = np.linalg.inv(_CAYLEY)


class CxHypError(ValueError):
    pass


class NotAPointTriple(CxHypError):
    pass


class DegenerateConfiguration(CxHypError):
    pass


def herm_vector(z1, z2, z3) -> np.ndarray:
    return np.array([z1, z2, z3], dtype=complex)


def herm_product(p, q) -> complex:
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    return complex(p[0] * q[0].conjugate() + p[1] * q[1].conjugate() - p[2] * q[2].conjugate())


def _unit(p) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    return p / np.linalg.norm(p)


def vector_kind(p, tol: float = ISOTROPIC_TOL) -> str:
    """``"interior"``, ``"boundary"`` or ``"positive"`` by the sign of ``<p, p>``."""
    u = _unit(p)
    s = herm_product(u, u).real
    if abs(s) <= tol:
        return "boundary"
    return "interior" if s < 0 else "positive"


def gram(points: Sequence) -> np.ndarray:
    """Matrix of ``g_ij = <p_i, p_j>``."""
    P = np.array([np.asarray(p, dtype=complex) for p in points])
    return P @ FORM @ P.conj().T


def half_plane_vector(z: complex) -> np.ndarray:
    """The point of the slice ``z2 = 0`` over the half-plane point ``z``."""
    return herm_vector((z - 1j) / (z + 1j), 0.0, 1.0)


def kahler_segment_integral(u, p1, p2) -> float:
    """Integral of the Kahler potential based at ``u`` along the segment ``[p1, p2]``.

    The quotient ``<u,p2><p2,p1>/<u,p1>`` always has non-positive real part,
    and equals a negative real for ``p2 = p1``. Its argument is therefore
    taken in ``[0, 2 pi)``, the branch continuous along the segment; with it
    the integrals around a triangle add up to minus :func:`triangle_area31`.
    """
    for name, p in (("u", u), ("p1", p1), ("p2", p2)):
        if vector_kind(p) != "interior":
            raise CxHypError(f"{name} is not an interior point")
    u1, u2, g21 = herm_product(u, p1), herm_product(u, p2), herm_product(p2, p1)
    if u1 == 0 or u2 == 0 or g21 == 0:
        raise DegenerateConfiguration("vanishing inner product")
    arg = cmath.phase(u2 * g21 / u1)
    if arg < 0:
        arg += 2 * math.pi
    return -math.pi / 2 + 0.5 * arg


def boundary_integral(u, p1, p2, p3) -> float:
    """Sum of the segment integrals around the triangle ``p1, p2, p3``.

    This is the integral of the Kahler form over the triangle, i.e. minus its area.
    """
    return (
        kahler_segment_integral(u, p1, p2)
        + kahler_segment_integral(u, p2, p3)
        + kahler_segment_integral(u, p3, p1)
    )


def triangle_area31(p1, p2, p3) -> float:
    """Half the argument of ``-g12 g23 g31``, in ``[-pi/4, pi/4]``.

    The points are rescaled to unit Euclidean norm before the guard
    ``Re(-g12 g23 g31) >= -1e-10`` is applied; the area itself does not depend
    on the scaling. A vanishing product (a repeated isotropic vertex) gives 0.
    """
    pts = [_unit(p) for p in (p1, p2, p3)]
    for k, p in enumerate(pts, 1):
        if vector_kind(p) == "positive":
            raise NotAPointTriple(f"p{k} is a positive vector")
    g = gram(pts)
    prod = -g[0, 1] * g[1, 2] * g[2, 0]
    if abs(prod) <= 1e-24:
        return 0.0
    if prod.real < -GUARD_TOL:
        raise NotAPointTriple(f"Re(-g12 g23 g31) = {prod.real:.3g} is negative")
    # round-off below the guard is clipped back onto the closed right half-plane
    return 0.5 * math.atan2(prod.imag, max(prod.real, 0.0))


def geodesic_frame(p1, p2) -> tuple[np.ndarray, np.ndarray]:
    """Form-orthonormal ``(e_minus, e_plus)`` spanning the complex geodesic through ``p1, p2``."""
    p1, p2 = _unit(p1), _unit(p2)
    g12 = herm_product(p1, p2)
    if abs(g12) < 1e-12:
        raise DegenerateConfiguration("points span no complex geodesic")
    mu = -g12 / abs(g12)
    v = p1 + mu * p2
    norm = herm_product(v, v).real
    if not norm < 0:
        raise DegenerateConfiguration("span of the points is not a complex geodesic")
    e_minus = v / math.sqrt(-norm)
    rest = p1 + herm_product(p1, e_minus) * e_minus
    rn = herm_product(rest, rest).real
    if rn <= 0:
        rest = p2 + herm_product(p2, e_minus) * e_minus
        rn = herm_product(rest, rest).real
    e_plus = rest / math.sqrt(rn)
    return e_minus, e_plus


def disc_coordinate(p, frame) -> complex:
    """Coordinate ``w = alpha/beta`` of ``p = alpha e_plus + beta e_minus``."""
    e_minus, e_plus = frame
    alpha = herm_product(p, e_plus)
    beta = -herm_product(p, e_minus)
    if beta == 0:
        raise DegenerateConfiguration("point lies outside the ball of the frame")
    return alpha / beta


def _boundary_point(w: complex) -> float:
    """Half-plane boundary point ``-cot(theta/2)`` over the unit-circle point ``w = e^{i theta}``.

    Going through the angle keeps points near ``w = 1`` (near ``inf``) well conditioned.
    """
    half = cmath.phase(w) / 2
    if abs(math.sin(half)) < 1e-15:
        return math.inf
    return -math.cos(half) / math.sin(half)


def is_positive_cycle_cg(points: Sequence) -> bool:
    """Isotropic points lying in one complex geodesic, in positive cyclic order there."""
    if len(points) < 3:
        raise CxHypError("a cycle needs at least three points")
    pts = [_unit(p) for p in points]
    for k, p in enumerate(pts, 1):
        if vector_kind(p) != "boundary":
            raise CxHypError(f"point {k} is not isotropic")
    for i in range(len(pts)):
        for j in range(i):
            if abs(herm_product(pts[i], pts[j])) < 1e-12:
                raise CxHypError(f"points {j + 1} and {i + 1} are proportional")
    for k in range(2, len(pts)):
        if abs(np.linalg.det(np.array([pts[0], pts[1], pts[k]]))) > COPLANAR_TOL:
            return False
    frame = geodesic_frame(pts[0], pts[1])
    return is_positive_cycle([_boundary_point(disc_coordinate(p, frame)) for p in pts])


def su11_block(m: ProjMatrix) -> np.ndarray:
    """The disc-model matrix ``C m C^-1`` of a half-plane isometry."""
    return _CAYLEY @ m.as_array() @ _CAYLEY_INV


def embed_matrix(m: ProjMatrix, z2: complex = 1.0) -> np.ndarray:
    """3x3 matrix acting by ``m`` on ``(z1, z3)`` and by the scalar ``z2`` on ``z2``."""
    u = su11_block(m)
    out = np.zeros((3, 3), dtype=complex)
    out[0, 0], out[0, 2], out[2, 0], out[2, 2] = u[0, 0], u[0, 1], u[1, 0], u[1, 1]
    out[1, 1] = z2
    return out


@dataclass(frozen=True)
class EmbeddedRep:
    presentation: Presentation
    images: tuple  # 3x3 complex arrays

    @property
    def kind(self) -> str:
        return self.presentation.kind

    @property
    def n(self) -> int:
        return self.presentation.n

    def __getitem__(self, i: int) -> np.ndarray:
        if not 1 <= i <= len(self.images):
            raise IndexError(f"generator index {i} out of range")
        return self.images[i - 1]


def _word_matrix(rep3: EmbeddedRep, word) -> np.ndarray:
    out = np.eye(3, dtype=complex)
    for i, e in word:
        out = out @ (rep3[i] if e > 0 else np.linalg.inv(rep3[i]))
    return out


def phase_residual(m: np.ndarray) -> float:
    """Distance of ``m`` from the scalar matrices, relative to the scalar."""
    c = np.trace(m) / 3
    if abs(c) == 0:
        return math.inf
    return float(np.max(np.abs(m - c * np.eye(3))) / abs(c))


def embedded_residual(rep3: EmbeddedRep) -> float:
    return max(phase_residual(_word_matrix(rep3, w)) for w in rep3.presentation.relators())


def _sign(m: ProjMatrix) -> float:
    return 1.0 if m.a + m.d > 0 or (m.a + m.d == 0 and m.a >= 0) else -1.0


def embed_fuchsian(rep: Representation) -> EmbeddedRep:
    """Embed a representation into the stabilizer of the slice ``z2 = 0``.

    The ``z2`` entries are chosen so that every relator maps to a scalar: a
    half-turn squares to ``-I`` in SL(2, R), so half-turns get ``+-i``; the sign
    of each long relator in SL(2, R) is absorbed by one generator.
    """
    n, pres = rep.n, rep.presentation
    signs = [_sign(eval_word(rep, w)) for w in pres.long_relators()]
    if rep.kind == "H":
        z2 = [1j] * (n - 1)
        z2.append(signs[0] / 1j ** (n - 1))
    else:
        if signs[0] != signs[1]:
            raise CxHypError("relators have different signs in SL(2, R); no embedding lift")
        z2 = [signs[0]] + [1.0] * (n - 2)
    return EmbeddedRep(pres, tuple(embed_matrix(m, s) for m, s in zip(rep.images, z2)))


def _act(m: np.ndarray, p) -> np.ndarray:
    return m @ p


def toledo_invariant(rep3: EmbeddedRep, x0=None, tol: float = 1e-6) -> float:
    """Fan sum of :func:`triangle_area31` over the long-relator orbit polygons of ``x0``."""
    res = embedded_residual(rep3)
    if res > tol:
        raise CxHypError(f"relations violated up to phase (residual {res:.3g})")
    x0 = herm_vector(0, 0, 1) if x0 is None else np.asarray(x0, dtype=complex)
    if vector_kind(x0) != "interior":
        raise CxHypError("basepoint is not an interior point")

    def total(base):
        return sum(
            fan_area([rep3[i] if e > 0 else np.linalg.inv(rep3[i]) for i, e in w], base,
                     area=triangle_area31, act=_act)
            for w in rep3.presentation.long_relators()
        )

    try:
        return total(x0)
    except NotAPointTriple:
        pass
    try:
        return total(x0 + JITTER * abs(x0[2]))
    except NotAPointTriple as exc:
        raise DegenerateConfiguration("fan degenerate at the basepoint and its perturbation") from exc
