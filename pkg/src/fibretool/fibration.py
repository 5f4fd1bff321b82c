"""From a G_n-representation to its two hyperelliptic images.

Every ``g_i`` is split as ``t_i s_i`` where ``t_i`` is the half-turn about the
crossing point of the axes of ``g_1`` and ``g_i``. Products of consecutive
``t``'s are translations along the axis G of ``g_1``; regrouping them gives
conjugators ``u_i``, ``v_i`` and the two H_n-representations

    a_1 = u_1 s_1,   a_i = u_i s_i u_i^-1
    c_1 = v_1 s_1,   c_i = v_i s_i v_i^-1      (i = 2..n)

All lists below are stored 1-based: index 0 holds ``None``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geom2 import (
    IDENTITY,
    Geodesic,
    GeometryError,
    Kind,
    ProjMatrix,
    apply,
    axis,
    center,
    classify,
    close,
    dist,
    intersect_geodesics,
    normalize_to,
    reflection,
    v_coordinate,
)
from .groups import Representation, h_rep, relation_residual


class NotInMaximalComponent(ValueError):
    pass


class FibrationError(RuntimeError):
    pass


def _prod(ms) -> ProjMatrix:
    out = IDENTITY
    for m in ms:
        out = out @ m
    return out


@dataclass(frozen=True)
class TSData:
    axis: Geodesic  # axis of g_1, repeller -> attractor
    t: tuple  # t[1..n-1]
    s: tuple  # s[1..n]
    centers: tuple  # crossing points, centers[i] for i = 2..n-1

    @property
    def n(self) -> int:
        return len(self.s) - 1

    def frame(self) -> ProjMatrix:
        """Normalizing isometry: attractor of g_1 to inf, repeller to 0.

        In this frame the hyperelliptic images have ``b^1 = inf``, ``e^1 = 0``
        and their remaining half-turn centers on the side ``Re z > 0``.
        """
        return normalize_to(self.axis.reversed())


@dataclass(frozen=True)
class UVTables:
    h: tuple  # h[2..n-1]
    u: tuple  # u[1..n]
    v: tuple  # v[1..n]


def ts_decompose(rep: Representation, tol: float = 1e-6) -> TSData:
    """Split every ``g_i`` at the crossing of its axis with the axis of ``g_1``.

    The geometric preconditions are checked before the relations, so a
    representation outside the maximal component is reported as such.
    """
    if rep.kind != "G":
        raise ValueError("expected a G_n representation")
    n = rep.n
    for i, g in enumerate(rep.images, 1):
        k = classify(g).kind
        if k is not Kind.HYPERBOLIC:
            raise NotInMaximalComponent(f"image of g_{i} is {k.value}, not hyperbolic")
    big = axis(rep[1])
    t = [None] * n
    centers = [None] * n
    for i in range(2, n):
        try:
            p = intersect_geodesics(big, axis(rep[i]))
        except GeometryError:
            p = None
        if p is None:
            raise NotInMaximalComponent(f"axes of g_1 and g_{i} do not cross")
        centers[i] = p
        t[i] = reflection(p)
    res = relation_residual(rep)
    if res > tol:
        raise ValueError(f"relations violated (residual {res:.3g})")
    t[1] = t[n - 1]
    s = [None] * (n + 1)
    for i in range(1, n):
        s[i] = t[i] @ rep[i]
    s[n] = t[n - 1]
    return TSData(big, tuple(t), tuple(s), tuple(centers))


def uv_tables(ts: TSData) -> UVTables:
    n, t = ts.n, ts.t
    h = [None, None] + [t[i] @ t[i - 1] for i in range(2, n)]
    u = [None] * (n + 1)
    v = [None] * (n + 1)
    u[n] = u[n - 1] = u[n - 2] = IDENTITY
    acc = IDENTITY
    # u_{n-2j-1} = u_{n-2j-2} = h_{n-2} h_{n-4} ... h_{n-2j}
    for j in range(1, n // 2):
        acc = acc @ h[n - 2 * j]
        u[n - 2 * j - 1] = acc
        if n - 2 * j - 2 >= 1:
            u[n - 2 * j - 2] = acc
    v[n] = v[n - 1] = IDENTITY
    acc = IDENTITY
    # v_{n-2j} = v_{n-2j-1} = h_{n-1} h_{n-3} ... h_{n-2j+1}
    for j in range(1, n // 2):
        acc = acc @ h[n - 2 * j + 1]
        v[n - 2 * j] = acc
        v[n - 2 * j - 1] = acc
    return UVTables(tuple(h), tuple(u), tuple(v))


def hyperelliptic_images(ts: TSData, uv: UVTables) -> tuple[list, list]:
    """The half-turns ``a_1..a_n`` and ``c_1..c_n`` (0-based lists)."""
    n, s = ts.n, ts.s
    a = [uv.u[1] @ s[1]]
    c = [uv.v[1] @ s[1]]
    for i in range(2, n + 1):
        a.append(s[i].conj(uv.u[i]))
        c.append(s[i].conj(uv.v[i]))
    return a, c


def pushforward(rep: Representation, which: int) -> Representation:
    """``pi_1`` (``which=1``, r_i -> a_i) or ``pi_2`` (``which=2``, r_i -> c_i)."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    ts = ts_decompose(rep)
    a, c = hyperelliptic_images(ts, uv_tables(ts))
    return h_rep(a if which == 1 else c)


def f_elements(ts: TSData) -> list:
    """``f_1..f_{n-2}`` from the closed forms in the ``t``'s (0-based list)."""
    n, t = ts.n, ts.t
    out = [_prod(t[j] for j in range(n - 1, 1, -1))]  # f_1 = t_{n-1} ... t_2
    for i in range(2, n - 2):
        left = [t[j] for j in range(n - 1, i, -1)]
        right = [t[j] for j in range(i + 1, n - 1)]
        out.append(_prod(left + [t[i]] + right))
    out.append(t[n - 1] @ t[n - 2])
    return out


def alternating_sum(phi) -> float:
    """``-phi_1 + phi_2 - phi_3 + ... + phi_{n-2}`` for a 0-based list."""
    return sum(x if k % 2 else -x for k, x in enumerate(phi))


def f_params(ts: TSData, uv: UVTables, tol: float = 1e-7) -> list[float]:
    """Translation lengths of ``f_1..f_{n-2}`` along G (0-based list).

    Coordinates are taken in :meth:`TSData.frame`. Consistency with
    ``c_i = f_i a_i f_i^-1`` and ``f_i = v_i u_i^-1`` is checked.
    """
    fs = f_elements(ts)
    a, c = hyperelliptic_images(ts, uv)
    frame = ts.frame()
    phi = []
    for i, f in enumerate(fs, 1):
        if not close(c[i - 1], a[i - 1].conj(f), tol):
            raise FibrationError(f"c_{i} is not a_{i} conjugated by f_{i}")
        if i >= 2 and not close(f, uv.v[i] @ uv.u[i].inv(), tol):
            raise FibrationError(f"f_{i} differs from v_{i} u_{i}^-1")
        try:
            phi.append(v_coordinate(f.conj(frame), tol))
        except GeometryError as exc:
            raise FibrationError(f"f_{i} is not a translation along G") from exc
    if abs(alternating_sum(phi)) > 1e-8 * max(1.0, max(abs(x) for x in phi)):
        raise FibrationError(f"alternating sum of f coordinates is {alternating_sum(phi):.3g}")
    return phi


def fibre_coordinates(rep: Representation) -> list[float]:
    ts = ts_decompose(rep)
    return f_params(ts, uv_tables(ts))
