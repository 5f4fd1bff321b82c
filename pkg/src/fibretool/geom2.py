"""Upper half-plane model of the hyperbolic plane.

Interior points are Python ``complex`` numbers with positive imaginary part.
Boundary points are ``float`` values, with ``math.inf`` standing for the point
at infinity. Isometries are :class:`ProjMatrix` instances, i.e. elements of
SL(2, R) taken up to sign.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Union

import numpy as np

EPS_DET = 1e-10
EPS_Y = 1e-12
EPS_CLS = 1e-9
EPS_AXIS = 1e-8
TOL = 1e-8

INF = math.inf

Point = Union[complex, float]


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DegenerateIntersection(GeometryError):
    pass


class PointNotOnAxis(GeometryError):
    pass


class NotInV(GeometryError):
    pass


@dataclass(frozen=True)
class ProjMatrix:
    """An orientation-preserving isometry ``[[a, b], [c, d]]`` of determinant 1.

    The plain constructor rescales by ``sqrt(det)``; use :meth:`checked` for
    data coming from outside. Products and inverses skip the rescale, since
    for badly conditioned factors it would spread the cancellation error of
    the determinant into every entry.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not det > 0 or not math.isfinite(det):
            raise GeometryError(f"matrix has non-positive determinant {det!r}")
        if det != 1.0:
            s = math.sqrt(det)
            object.__setattr__(self, "a", self.a / s)
            object.__setattr__(self, "b", self.b / s)
            object.__setattr__(self, "c", self.c / s)
            object.__setattr__(self, "d", self.d / s)

    @classmethod
    def checked(cls, a, b, c, d, eps=EPS_DET) -> "ProjMatrix":
        det = a * d - b * c
        if not abs(det - 1.0) < eps:
            raise GeometryError(f"determinant {det!r} differs from 1 by more than {eps}")
        return cls(float(a), float(b), float(c), float(d))

    @classmethod
    def raw(cls, a, b, c, d, eps=EPS_DET) -> "ProjMatrix":
        """Like :meth:`checked` but keeps the entries exactly as given."""
        det = a * d - b * c
        if not abs(det - 1.0) < eps:
            raise GeometryError(f"determinant {det!r} differs from 1 by more than {eps}")
        m = object.__new__(cls)
        for name, x in zip("abcd", (a, b, c, d)):
            object.__setattr__(m, name, float(x))
        return m

    @classmethod
    def _exact(cls, a, b, c, d) -> "ProjMatrix":
        m = object.__new__(cls)
        for name, x in zip("abcd", (a, b, c, d)):
            object.__setattr__(m, name, x)
        return m

    @classmethod
    def from_array(cls, m) -> "ProjMatrix":
        return cls(float(m[0][0]), float(m[0][1]), float(m[1][0]), float(m[1][1]))

    @classmethod
    def identity(cls) -> "ProjMatrix":
        return cls(1.0, 0.0, 0.0, 1.0)

    def __matmul__(self, other: "ProjMatrix") -> "ProjMatrix":
        a, b, c, d = self.a, self.b, self.c, self.d
        e, f, g, h = other.a, other.b, other.c, other.d
        return ProjMatrix._exact(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inv(self) -> "ProjMatrix":
        return ProjMatrix._exact(self.d, -self.b, -self.c, self.a)

    def conj(self, by: "ProjMatrix") -> "ProjMatrix":
        """``by @ self @ by^-1``."""
        return by @ self @ by.inv()

    @property
    def trace(self) -> float:
        return self.a + self.d

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def canonical(self) -> "ProjMatrix":
        """Sign representative with ``a > 0``, or ``a == 0`` and ``b > 0``."""
        if self.a < 0 or (self.a == 0 and self.b < 0):
            return ProjMatrix(-self.a, -self.b, -self.c, -self.d)
        return self

    def __call__(self, z):
        return apply(self, z)


def dist(m: ProjMatrix, n: ProjMatrix) -> float:
    """Sup-norm distance between ``m`` and ``n``, minimized over the sign of ``n``."""
    minus = max(abs(x - y) for x, y in zip(m.entries(), n.entries()))
    plus = max(abs(x + y) for x, y in zip(m.entries(), n.entries()))
    return min(minus, plus)


def close(m: ProjMatrix, n: ProjMatrix, tol: float = TOL) -> bool:
    return dist(m, n) < tol


IDENTITY = ProjMatrix.identity()


def interior_point(x: float, y: float) -> complex:
    if not y > EPS_Y:
        raise GeometryError(f"interior point needs y > {EPS_Y}, got {y!r}")
    return complex(x, y)


def is_boundary(z) -> bool:
    return not isinstance(z, complex)


def apply(m: ProjMatrix, z):
    """Moebius action; boundary points stay real (or ``inf``)."""
    a, b, c, d = m.entries()
    if isinstance(z, complex):
        den = c * z + d
        if den == 0:
            raise GeometryError("interior point mapped to a pole")
        return (a * z + b) / den
    z = float(z)
    if math.isinf(z):
        return INF if c == 0 else a / c
    den = c * z + d
    if den == 0:
        return INF
    return (a * z + b) / den


class Kind(enum.Enum):
    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class IsometryClass:
    kind: Kind
    repeller: float | None = None
    attractor: float | None = None
    fixed: complex | None = None


@dataclass(frozen=True)
class Geodesic:
    """Oriented full geodesic from ``src`` to ``dst`` (boundary points)."""

    src: float
    dst: float

    def __post_init__(self):
        if _same_boundary(self.src, self.dst):
            raise GeometryError("geodesic endpoints coincide")

    def reversed(self) -> "Geodesic":
        return Geodesic(self.dst, self.src)


def _same_boundary(x: float, y: float, tol: float = 1e-14) -> bool:
    if math.isinf(x) or math.isinf(y):
        return math.isinf(x) and math.isinf(y)
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def _fixed_points(m: ProjMatrix) -> tuple[float, float]:
    """Real roots of ``c x^2 + (d - a) x - b = 0`` (``inf`` for a vanishing ``c``)."""
    a, b, c, d = m.entries()
    disc = (a + d) ** 2 - 4.0
    sq = math.sqrt(max(disc, 0.0))
    B = d - a
    q = -0.5 * (B + math.copysign(sq, B))
    if c == 0:
        return INF, -b / q
    return q / c, -b / q


def classify(m: ProjMatrix) -> IsometryClass:
    tr = abs(m.trace)
    if tr > 2 + EPS_CLS:
        x1, x2 = _fixed_points(m)
        # a finite fixed point x attracts iff |c x + d| > 1; inf attracts iff |a| > |d|
        if math.isinf(x1):
            attracting = abs(m.a) > abs(m.d)
        else:
            attracting = abs(m.c * x1 + m.d) > 1.0
        if attracting:
            return IsometryClass(Kind.HYPERBOLIC, repeller=x2, attractor=x1)
        return IsometryClass(Kind.HYPERBOLIC, repeller=x1, attractor=x2)
    if tr < 2 - EPS_CLS:
        a, b, c, d = m.entries()
        s = math.sqrt(4.0 - m.trace ** 2)
        z = complex((a - d) / (2 * c), s / (2 * abs(c)))
        return IsometryClass(Kind.ELLIPTIC, fixed=z)
    if close(m, IDENTITY, EPS_CLS):
        return IsometryClass(Kind.IDENTITY)
    return IsometryClass(Kind.PARABOLIC)


def axis(m: ProjMatrix) -> Geodesic:
    cls = classify(m)
    if cls.kind is not Kind.HYPERBOLIC:
        raise GeometryError(f"isometry is {cls.kind.value}, not hyperbolic")
    return Geodesic(cls.repeller, cls.attractor)


def reflection(p: complex) -> ProjMatrix:
    """Half-turn about the interior point ``p``."""
    x, y = p.real, p.imag
    if not y > EPS_Y:
        raise GeometryError(f"reflection center must be interior, got {p!r}")
    return ProjMatrix(-x / y, (x * x + y * y) / y, -1.0 / y, x / y)


def center(m: ProjMatrix) -> complex:
    """Fixed point of an elliptic isometry (for a half-turn: its center)."""
    cls = classify(m)
    if cls.kind is not Kind.ELLIPTIC:
        raise GeometryError(f"isometry is {cls.kind.value}, not elliptic")
    return cls.fixed


def is_half_turn(m: ProjMatrix, tol: float = TOL) -> bool:
    return abs(m.trace) < tol


def point_on_ray(k: float, q: float, u: float) -> complex:
    """Point ``(1 + i/k) t(u)`` with ``t(u) = q / ((1 + k^-2)(1 + u))``."""
    if not (q > 0 and u > 0 and k > 0):
        raise GeometryError("point_on_ray needs k, q, u > 0")
    t = q / ((1.0 + k ** -2) * (1.0 + u))
    return complex(t, t / k)


def ray_intersection(k: float, q: float) -> complex:
    """Intersection of the ray ``(1 + i/k) R+`` with the geodesic ``G(q, 0)``."""
    t = q / (1.0 + k ** -2)
    return complex(t, t / k)


def normalize_to(g: Geodesic, ref: Point | None = None) -> ProjMatrix:
    """Isometry sending ``g.src`` to ``inf`` and ``g.dst`` to ``0``.

    The left side of ``g`` (the side of its normal vector) goes to ``Re z > 0``.
    The remaining dilation is fixed by ``ref``: an interior reference point off
    the geodesic lands on real part +-1, one on the geodesic (or a boundary
    point) lands on modulus 1. Without ``ref`` no dilation is applied.
    """
    p, q = g.src, g.dst
    if math.isinf(p):
        n = ProjMatrix(1.0, -q, 0.0, 1.0)
    elif math.isinf(q):
        n = ProjMatrix(0.0, -1.0, 1.0, -float(p))
    elif q > p:
        n = ProjMatrix(1.0, -q, 1.0, -p)
    else:
        n = ProjMatrix(-1.0, q, 1.0, -p)
    if ref is None:
        return n
    w = apply(n, ref)
    if isinstance(w, complex) and abs(w.real) > TOL * abs(w):
        scale = abs(w.real)
    else:
        scale = abs(w)
    if not (scale > 0 and math.isfinite(scale)):
        raise GeometryError("reference point cannot fix the dilation")
    r = 1.0 / math.sqrt(scale)
    return ProjMatrix(r, 0.0, 0.0, 1.0 / r) @ n


def dist_to_geodesic(z: complex, g: Geodesic) -> float:
    """Hyperbolic distance from an interior point to a geodesic."""
    w = apply(normalize_to(g), z)
    return math.asinh(abs(w.real) / w.imag)


def intersect_geodesics(g1: Geodesic, g2: Geodesic) -> complex | None:
    """Interior crossing point of two geodesics, or ``None`` if they do not cross."""
    same = (_same_boundary(g1.src, g2.src) and _same_boundary(g1.dst, g2.dst)) or (
        _same_boundary(g1.src, g2.dst) and _same_boundary(g1.dst, g2.src)
    )
    if same:
        raise DegenerateIntersection("geodesics coincide")
    n = normalize_to(g1)
    x1, x2 = apply(n, g2.src), apply(n, g2.dst)
    if math.isinf(x1) or math.isinf(x2) or x1 * x2 >= 0:
        return None
    y = math.sqrt(-x1 * x2)
    return apply(n.inv(), complex(0.0, y))


def translation_along(phi: float) -> ProjMatrix:
    """Translation by ``phi`` along ``G(0, inf)``: ``x -> e^phi x``."""
    r = math.exp(phi / 2.0)
    return ProjMatrix(r, 0.0, 0.0, 1.0 / r)


def v_coordinate(f: ProjMatrix, tol: float = 1e-9) -> float:
    """Inverse of :func:`translation_along`; raises :class:`NotInV` off the group."""
    f = f.canonical()
    if abs(f.b) > tol or abs(f.c) > tol or not f.d > 0:
        raise NotInV(f"not a translation along G(inf, 0): {f.entries()}")
    return 2.0 * math.log(f.a)


def split_at_axis_point(g: ProjMatrix, c: complex) -> tuple[ProjMatrix, ProjMatrix]:
    """Write ``g = t s`` with ``t`` the half-turn about ``c`` on the axis of ``g``."""
    ax = axis(g)
    if dist_to_geodesic(c, ax) > EPS_AXIS:
        raise PointNotOnAxis(f"{c!r} is not on the axis of g")
    t = reflection(c)
    s = t @ g
    return t, s


def cayley(z) -> complex:
    """Half-plane to disc: ``z -> (z - i)/(z + i)``; ``inf -> 1``."""
    if not isinstance(z, complex) and math.isinf(z):
        return complex(1.0, 0.0)
    return (z - 1j) / (z + 1j)


def boundary_angle(x: float) -> float:
    """Angle in ``[0, 2 pi)`` of the Cayley image of a boundary point."""
    return cmath.phase(cayley(x)) % (2 * math.pi)
