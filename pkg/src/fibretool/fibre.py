"""Fibres of the first projection and reconstruction from a pair of images.

Coordinates: the common axis G of ``a_1 a_n`` is sent to the imaginary axis
with ``b^1 = inf`` (repeller of ``a_1 a_n``) and ``e^1 = 0``. A curve
equidistant from G on the side of its normal vector is then a ray
``(1 + i/k) R+``, and a point on it is described by its real part ``t``
(the "ray coordinate"). Translations along G act on ray coordinates by
multiplication, so ``log`` of a ratio of ray coordinates is a translation
length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from scipy.optimize import brentq

from .fibration import alternating_sum
from .geom2 import (
    IDENTITY,
    INF,
    Geodesic,
    ProjMatrix,
    apply,
    axis,
    center,
    close,
    is_half_turn,
    normalize_to,
    reflection,
    translation_along,
)
from .groups import Representation, g_rep, h_rep, relation_residual
from .invariants import is_positive_cycle

BRACKET = (1e-12, 1e12)
# a few ulps per factor: bound on the relative rounding error of a five-factor product
HEXAGON_ROUNDING = 1e-15


class FibreError(RuntimeError):
    """Internal inconsistency in a fibre construction (should not happen on valid input)."""


class DomainError(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class NotSameEquidistant(ValueError):
    pass


class NotAFibrePair(ValueError):
    pass


class MismatchedBase(ValueError):
    pass


def _positive_quadratic_root(a: float, b: float, c: float) -> float:
    """Positive root of ``a x^2 + b x + c`` when ``a > 0 > c`` (exactly one exists)."""
    disc = b * b - 4 * a * c
    q = -0.5 * (b + math.copysign(math.sqrt(disc), b))
    r1, r2 = q / a, c / q
    return r1 if r1 > 0 else r2


def _ray_point(k: float, t: float) -> complex:
    return complex(t, t / k)


@dataclass(frozen=True)
class Lemma233Result:
    u: float
    p2: complex
    p3: complex


def lemma233_solve(b3: float, e3: float, k2: float, k3: float) -> Lemma233Result:
    """Half-turn centers ``p_2, p_3`` on the rays of slopes ``1/k2``, ``1/k3``.

    With ``b^1 = inf``, ``e^1 = 0 < b3 < e3`` the returned points satisfy
    ``R(p3) b3 = b2``, ``R(p3) e3 = e2``, ``R(p2) b2 = inf``, ``R(p2) e2 = 0``
    and ``inf, 0, b2, e2, b3, e3`` is a positive cycle.
    """
    if not (0 < b3 < e3):
        raise DomainError(f"need 0 < b3 < e3, got b3={b3!r}, e3={e3!r}")
    if not (k2 > 0 and k3 > 0):
        raise DomainError("k2 and k3 must be positive")
    ratio = 1.0 - b3 / e3
    A = 1.0 + k3 * k3
    B = 1.0 + ratio * (k3 * k3 - k2 * k2)
    C = -ratio * k2 * k2
    if not (A > 0 > C):
        raise FibreError("quadratic for u lost its sign pattern")
    u = _positive_quadratic_root(A, B, C)
    ik3 = k3 ** -2
    t3 = b3 / ((1.0 + ik3) * (1.0 + u))
    t2 = b3 * u / ((1.0 + u) * (ik3 + u + ik3 * u))
    return Lemma233Result(u, _ray_point(k2, t2), _ray_point(k3, t3))


@dataclass(frozen=True)
class Lemma234Config:
    """Normalized hexagon data: ``a_5`` swaps ``(inf, 0)`` with ``(b, e)``."""

    b: float
    e: float
    k2: float
    k3: float
    k4: float
    d1: float = 1.0  # a_6 is the half-turn about i*d1

    def __post_init__(self):
        if not (0 < self.b < self.e):
            raise DomainError(f"need 0 < b < e, got b={self.b!r}, e={self.e!r}")
        if not (self.k2 > 0 and self.k3 > 0 and self.k4 > 0):
            raise DomainError("k2, k3, k4 must be positive")

    def coefficients(self):
        b, e = self.b, self.e
        k2s, k3s, k4s = self.k2 ** 2, self.k3 ** 2, self.k4 ** 2
        alpha = e * (1.0 + k4s) / (e - b)
        beta = e / (e - b) + k4s
        gamma = 1.0 + k2s + k3s
        delta = k2s * k3s
        return alpha, beta, gamma, delta

    def cubic(self, v: float, w: float) -> float:
        al, be, ga, de = self.coefficients()
        return al * v * w * (w - v) + be * w * (w - v) + ga * (v + 1) * (w - v) - de * v * (v + 1)

    def w_scale(self) -> float:
        """Factor turning ``t_1 t_2^-1 t_3 t_4^-1`` into ``w``."""
        k2, k3, k4 = self.k2, self.k3, self.k4
        return k2 * (k3 + 1 / k3) * math.sqrt(self.b * self.e - self.b ** 2) / (k4 + 1 / k4)


def lemma234_forward(cfg: Lemma234Config, v: float) -> float:
    """The root ``w > v`` of the hexagon cubic at ``v``.

    For fixed ``v`` the cubic is a quadratic in ``w`` with positive leading and
    negative constant coefficient, so the root is unique and closed-form.
    """
    if not v > 0:
        raise DomainError(f"v must be positive, got {v!r}")
    al, be, ga, de = cfg.coefficients()
    A = al * v + be
    B = ga * (v + 1) - A * v
    C = -(ga + de) * v * (v + 1)
    w = _positive_quadratic_root(A, B, C)
    # one Newton step against the full cubic removes the last ulps
    dw = 2 * A * w + B
    if dw != 0:
        w -= (A * w * w + B * w + C) / dw
    return w


def lemma234_invert(cfg: Lemma234Config, w_target: float) -> float:
    """The unique ``v > 0`` with ``lemma234_forward(cfg, v) == w_target``.

    ``w(v)`` is increasing with ``v < w(v)``, so the root lies in ``(0, w_target)``;
    it is located by sign-bracketing and refined with Brent's method.
    """
    if not w_target > 0:
        raise DomainError(f"w must be positive, got {w_target!r}")
    lo, hi = BRACKET
    hi = min(hi, w_target)

    def g(v):
        return lemma234_forward(cfg, v) - w_target

    if not (lo < hi and g(lo) < 0 < g(hi)):
        raise OutOfRange(f"cannot bracket w={w_target!r} within {BRACKET}")
    v = brentq(g, lo, hi, xtol=1e-300, rtol=4 * 2.3e-16, maxiter=500)
    return v


def solve_conj_translation(a: ProjMatrix, c: ProjMatrix, g: Geodesic, tol: float = 1e-7) -> float:
    """Translation length ``phi`` along ``g`` with ``c = f a f^-1``.

    ``phi`` is measured in the frame :func:`normalize_to` (``g.src`` at inf),
    where ``f`` becomes ``x -> e^phi x``.
    """
    n = normalize_to(g)
    za, zc = apply(n, center(a)), apply(n, center(c))
    off_a = math.asinh(za.real / za.imag)
    off_c = math.asinh(zc.real / zc.imag)
    if abs(off_a - off_c) > tol:
        raise NotSameEquidistant(f"offsets from G differ: {off_a!r} vs {off_c!r}")
    return math.log(abs(zc) / abs(za))


def base_axis(rep1: Representation) -> Geodesic:
    """Axis of ``a_1 a_n``, oriented from ``b^1`` to ``e^1``."""
    return axis(rep1[1] @ rep1[rep1.n])


def _prod(ms) -> ProjMatrix:
    out = IDENTITY
    for m in ms:
        out = out @ m
    return out


def u_closed(t: Sequence, n: int, i: int) -> ProjMatrix:
    """``u_i`` for ``1 <= i <= n-3`` as a product of ``t``'s (1-based ``t``)."""
    stop = i + 1 if i % 2 == 0 else i
    return _prod(t[j] for j in range(n - 2, stop - 1, -1))


def v_closed(t: Sequence, n: int, i: int) -> ProjMatrix:
    stop = i if i % 2 == 0 else i + 1
    return _prod(t[j] for j in range(n - 1, stop - 1, -1))


def reconstruct(rep1: Representation, rep2: Representation, tol: float = 1e-6) -> Representation:
    """The G_n-representation whose two hyperelliptic images are ``rep1`` and ``rep2``."""
    if rep1.kind != "H" or rep2.kind != "H" or rep1.n != rep2.n:
        raise ValueError("expected two H_n representations with the same n")
    for rep in (rep1, rep2):
        res = relation_residual(rep)
        if res > tol:
            raise ValueError(f"input relations violated (residual {res:.3g})")
    n = rep1.n
    a = [None] + list(rep1.images)
    c = [None] + list(rep2.images)
    if not close(a[n], c[n], tol):
        raise MismatchedBase("images of r_n differ")
    if not close(a[n - 1], c[n - 1], tol):
        raise NotAFibrePair(f"images of r_{n - 1} differ")
    g = base_axis(rep1)
    frame = normalize_to(g)
    try:
        phi = [solve_conj_translation(a[i], c[i], g) for i in range(1, n - 1)]
    except NotSameEquidistant as exc:
        raise NotAFibrePair(str(exc)) from exc
    alt = alternating_sum(phi)
    if abs(alt) > tol:
        raise NotAFibrePair(f"alternating sum of translation lengths is {alt:.3g}")
    finv = frame.inv()
    f = [None] + [translation_along(x).conj(finv) for x in phi]

    t = [None] * n
    t[n - 1] = a[n]
    t[n - 2] = t[n - 1].inv() @ f[n - 2]
    for i in range(n - 3, 1, -1):
        left = _prod(t[j] for j in range(n - 1, i, -1))
        right = _prod(t[j] for j in range(i + 1, n - 1))
        t[i] = left.inv() @ f[i] @ right.inv()
    t[1] = t[n - 1]

    s = [None] * n
    u1 = u_closed(t, n, 1)
    s[1] = u1.inv() @ a[1]
    for i in range(2, n - 2):
        s[i] = a[i].conj(u_closed(t, n, i).inv())
    s[n - 2] = a[n - 2]
    s[n - 1] = a[n - 1]
    out = g_rep([t[i] @ s[i] for i in range(1, n)])
    res = relation_residual(out)
    if res > 1e-5:
        raise FibreError(f"reconstructed representation has residual {res:.3g}")
    return out


def logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


@dataclass(frozen=True)
class Hexagon:
    """The last four half-turn centers of a fibre construction (normalized frame).

    The product ``R_{n-1} ... R_5`` of the outer half-turns equals
    ``T^-1 M`` with ``M`` the half-turn swapping ``inf <-> b`` and ``0 <-> e``
    and ``T`` a translation along G. Absorbing ``T`` into ``R(p_n)`` leaves a
    hexagon ``R(p6) M R4 R3 R2 R1 = 1`` with ``p6`` on G.
    """

    v: float
    p1: complex
    p2: complex
    p3: complex
    p4: complex
    w: float


def model_a5(cfg: Lemma234Config) -> ProjMatrix:
    """Half-turn swapping ``inf <-> b`` and ``0 <-> e``."""
    b, e = cfg.b, cfg.e
    return ProjMatrix(-b, b * e, -1.0, b)


def effective_p6(cfg: Lemma234Config, outer: ProjMatrix, pn: complex) -> complex:
    """Center of ``R(pn) T^-1`` where ``outer = T^-1 M``."""
    t_inv = outer @ model_a5(cfg)
    r = reflection(pn) @ t_inv
    if not is_half_turn(r, 1e-7):
        raise FibreError("outer product is not a translation along G times the model half-turn")
    p6 = center(r)
    if abs(p6.real) > 1e-7 * abs(p6):
        raise FibreError(f"effective sixth center {p6!r} is off the base geodesic")
    return complex(0.0, p6.imag)


def _hexagon(cfg: Lemma234Config, p6: complex, v: float) -> Hexagon:
    """Centers ``p_4, p_3, p_2`` for ``v`` and ``p_1`` closing ``R(p6) M R4 R3 R2 R1 = 1``."""
    b = cfg.b
    t4 = b / ((1.0 + cfg.k4 ** -2) * (1.0 + v))
    p4 = _ray_point(cfg.k4, t4)
    r4 = reflection(p4)
    sol = lemma233_solve(apply(r4, b), apply(r4, cfg.e), cfg.k2, cfg.k3)
    factors = [reflection(p6), model_a5(cfg), r4, reflection(sol.p3), reflection(sol.p2)]
    r1 = _prod(factors).inv()
    # rounding in the product grows with the product of the factor sizes
    tol = max(1e-7, HEXAGON_ROUNDING * math.prod(max(map(abs, f.entries())) for f in factors))
    if not is_half_turn(r1, tol):
        raise FibreError(f"closing isometry is not a half-turn (trace {r1.trace!r})")
    p1 = center(r1)
    if abs(p1.real) > tol * abs(p1):
        raise FibreError(f"closing half-turn center {p1!r} is off the base geodesic")
    w = cfg.w_scale() * (p1.imag / p6.imag) / sol.p2.real * sol.p3.real / t4
    return Hexagon(v, p1, sol.p2, sol.p3, p4, w)


def chart_offsets(A: Sequence, Q: Sequence, k: Sequence) -> dict:
    """Logits ``c_k`` of the centers of the normalized ``A`` on their own segments."""
    n = len(A) - 1
    b = apply(A[n - 1], INF)
    out = {}
    for j in range(n - 2, 4, -1):
        frac = Q[j].real / (b / (1.0 + k[j] ** -2))
        if not 0 < frac < 1:
            raise FibreError(f"center q_{j} lies outside its admissible segment (fraction {frac!r})")
        out[j] = math.log(frac / (1.0 - frac))
        b = apply(A[j], b)
    return out


def fibre_point(
    rep1: Representation, lam: Sequence[float], p4_sigma: float = 0.5
) -> Representation:
    """The point of the fibre over ``rep1`` with chart coordinates ``lam``.

    For ``k = n-2, ..., 5`` the new center on the k-th equidistant ray is put at
    fraction ``logistic(lam[k-5] + c_k)`` of the admissible segment from
    ``e^1 = 0`` to the crossing with ``G(b^k, e^1)``. The offsets ``c_k`` are
    read off ``rep1`` itself, so ``lam = 0`` returns the hyperelliptic point
    ``g_from_r(rep1)``. The remaining four centers come from the hexagon
    correction, which enforces the alternating constraint on the translation
    lengths. ``p4_sigma`` places the provisional fourth center and does not
    affect the result.
    """
    n = rep1.n
    if rep1.kind != "H":
        raise ValueError("expected an H_n representation")
    if len(lam) != n - 6:
        raise ValueError(f"need {n - 6} chart coordinates, got {len(lam)}")
    if not 0 < p4_sigma < 1:
        raise ValueError("p4_sigma must lie in (0, 1)")
    res = relation_residual(rep1)
    if res > 1e-6:
        raise ValueError(f"relations violated (residual {res:.3g})")

    frame = normalize_to(base_axis(rep1))
    A = [None] + [m.conj(frame) for m in rep1.images]
    Q = [None] + [center(m) for m in A[1:]]
    k = [None] * (n + 1)
    for j in range(2, n - 1):
        if not Q[j].real > 0:
            raise FibreError(f"center q_{j} is not on the normal side of G")
        k[j] = Q[j].real / Q[j].imag

    b = {n - 2: apply(A[n - 1], INF)}
    e = {n - 2: apply(A[n - 1], 0.0)}
    new = {}
    phi = {}
    offset = chart_offsets(A, Q, k)
    a5 = A[n - 1]
    for j in range(n - 2, 4, -1):
        if not 0 < b[j] < e[j]:
            raise FibreError(f"admissible segment on ray {j} is empty (b={b[j]!r}, e={e[j]!r})")
        t_d = b[j] / (1.0 + k[j] ** -2)
        t = logistic(lam[j - 5] + offset[j]) * t_d
        new[j] = _ray_point(k[j], t)
        phi[j] = math.log(t / Q[j].real)
        r = reflection(new[j])
        b[j - 1], e[j - 1] = apply(r, b[j]), apply(r, e[j])
        a5 = a5 @ r
    if not 0 < b[4] < e[4]:
        raise FibreError(f"admissible segment on ray 4 is empty (b={b[4]!r}, e={e[4]!r})")
    chain = [INF, 0.0] + [x for j in range(4, n - 1) for x in (b[j], e[j])]
    if not is_positive_cycle(chain):
        raise FibreError("boundary chain is not a positive cycle")

    cfg0 = Lemma234Config(b[4], e[4], k[2], k[3], k[4])
    p6 = effective_p6(cfg0, a5, Q[n])
    cfg = Lemma234Config(b[4], e[4], k[2], k[3], k[4], d1=p6.imag)
    prov = _hexagon(cfg, p6, 1.0 / p4_sigma - 1.0)
    if abs(prov.w - lemma234_forward(cfg, prov.v)) > 1e-8 * prov.w:
        raise FibreError("model hexagon disagrees with the closed form for w(v)")
    phi_prov = [
        math.log(prov.p1.imag / Q[1].imag),
        math.log(prov.p2.real / Q[2].real),
        math.log(prov.p3.real / Q[3].real),
        math.log(prov.p4.real / Q[4].real),
    ]
    rest = sum(phi[j] if j % 2 == 0 else -phi[j] for j in range(5, n - 1))
    # f''_1^-1 f''_2 f''_3^-1 f''_4 = f'_1 f'_2^-1 f'_3 f'_4^-1 f_5 f_6^-1 ... f_{n-2}^-1
    required = (phi_prov[0] - phi_prov[1] + phi_prov[2] - phi_prov[3]) - rest
    w_new = prov.w * math.exp(-required)
    hexa = _hexagon(cfg, p6, lemma234_invert(cfg, w_new))
    if abs(hexa.w - w_new) > 1e-8 * w_new:
        raise FibreError(f"hexagon correction missed: w={hexa.w!r}, wanted {w_new!r}")
    new.update({1: hexa.p1, 2: hexa.p2, 3: hexa.p3, 4: hexa.p4})

    finv = frame.inv()
    images = [reflection(new[j]).conj(finv) for j in range(1, n - 1)]
    images += [rep1[n - 1], rep1[n]]
    rep2 = h_rep(images)
    res = relation_residual(rep2)
    if res > 1e-6:
        raise FibreError(f"second hyperelliptic image has residual {res:.3g}; the chart point is numerically degenerate")
    return reconstruct(rep1, rep2)
