"""Signed areas of geodesic triangles and the area invariant of a representation."""

from __future__ import annotations

import cmath
import math
from typing import Sequence

from .geom2 import (
    ProjMatrix,
    apply,
    boundary_angle,
    cayley,
)
from .groups import Representation, relation_residual

ANGLE_TOL = 1e-10


class AreaError(ValueError):
    pass


def _is_inf(z) -> bool:
    return not isinstance(z, complex) and math.isinf(z)


def _coincide(z, w, tol=1e-13) -> bool:
    if isinstance(z, complex) != isinstance(w, complex):
        return False
    if _is_inf(z) or _is_inf(w):
        return _is_inf(z) and _is_inf(w)
    return abs(z - w) <= tol * max(1.0, abs(z), abs(w))


def is_positive_cycle(points: Sequence) -> bool:
    """True iff the boundary points are in strict counterclockwise cyclic order.

    Orientation is read off the Cayley images on the unit circle.
    """
    if len(points) < 3:
        raise AreaError("a cycle needs at least three points")
    angles = [boundary_angle(x) for x in points]
    two_pi = 2 * math.pi
    for i in range(len(angles)):
        for j in range(i):
            gap = abs(angles[i] - angles[j]) % two_pi
            if min(gap, two_pi - gap) < ANGLE_TOL:
                raise AreaError(f"cycle points {j} and {i} coincide")
    rel = [(a - angles[0]) % two_pi for a in angles[1:]]
    return all(x < y for x, y in zip(rel, rel[1:]))


def _directions(p: complex, others) -> list[float]:
    """Directions at ``p`` of the geodesic rays towards each point of ``others``."""
    out = []
    for q in others:
        # move p to i, then the disc picture at 0 shows rays as straight lines
        if _is_inf(q):
            w = complex(1.0, 0.0)
        else:
            z = (q - p.real) / p.imag
            if not isinstance(z, complex):
                z = complex(z, 0.0)
            w = cayley(z)
        out.append(cmath.phase(w))
    return out


def _interior_angle(p: complex, q, r) -> tuple[float, float]:
    """Unsigned angle at ``p`` and the orientation sign of ``(p, q, r)``."""
    a, b = _directions(p, (q, r))
    turn = math.remainder(b - a, 2 * math.pi)
    return abs(turn), math.copysign(1.0, turn) if turn != 0 else 0.0


def triangle_area_gb(p1, p2, p3) -> float:
    """Signed area of the geodesic triangle by the Gauss-Bonnet angle defect.

    Positive for counterclockwise vertex order; ideal vertices have angle 0;
    triangles with coinciding vertices or collinear vertices have area 0.
    """
    pts = (p1, p2, p3)
    if _coincide(p1, p2) or _coincide(p2, p3) or _coincide(p1, p3):
        return 0.0
    angles = []
    sign = None
    for k in range(3):
        p, q, r = pts[k], pts[(k + 1) % 3], pts[(k + 2) % 3]
        if isinstance(p, complex):
            ang, s = _interior_angle(p, q, r)
            angles.append(ang)
            if sign is None:
                sign = s
        else:
            angles.append(0.0)
    if sign is None:
        # all vertices ideal: orientation from cyclic order on the circle
        sign = 1.0 if is_positive_cycle(pts) else -1.0
    if sign == 0.0:
        return 0.0
    defect = math.pi - sum(angles)
    if defect < 1e-14:
        return 0.0
    return sign * defect


def fan_area(images: Sequence[ProjMatrix], x0, area=triangle_area_gb, act=apply) -> float:
    """Fan sum over the closed polygon ``x0, y_1 x0, ..., y_m x0``.

    ``y_j`` is the product of the first ``j`` letters, so within each prefix
    the rightmost letter acts first.
    """
    verts = []
    y = None
    for m in images:
        y = m if y is None else y @ m
        verts.append(act(y, x0))
    total = 0.0
    for j in range(len(verts) - 2):
        total += area(x0, verts[j], verts[j + 1])
    return total


def relator_letters(rep: Representation, word) -> list[ProjMatrix]:
    return [rep[i] if e > 0 else rep[i].inv() for i, e in word]


def rep_area(rep: Representation, x0: complex = 1j, tol: float = 1e-6) -> float:
    """Area invariant: fan sums over the long relators, added up.

    For H_n this is the single relator ``r_n ... r_1``; for G_n both relators
    contribute, which makes the sum independent of ``x0``.
    """
    res = relation_residual(rep)
    if res > tol:
        raise AreaError(f"relations violated (residual {res:.3g})")
    return sum(
        fan_area(relator_letters(rep, w), x0) for w in rep.presentation.long_relators()
    )
