"""Presentations of H_n and G_n, words, and relation residuals.

H_n is generated by involutions r_1..r_n with r_n...r_2 r_1 = 1.
G_n is its even subgroup, generated by g_i = r_n r_i (i = 1..n-1) with the
two relators

    g_{n-1} g_{n-2}^-1 g_{n-3} ... g_2^-1 g_1
    g_{n-1}^-1 g_{n-2} g_{n-3}^-1 ... g_2 g_1^-1

Generator indices are 1-based throughout; a word is a sequence of
``(index, exponent)`` pairs read left to right, so the rightmost letter acts
first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .geom2 import IDENTITY, ProjMatrix, close, dist, is_half_turn

Word = tuple  # tuple[tuple[int, int], ...]


class InvalidInput(ValueError):
    pass


class NotHyperellipticInvolution(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    kind: str  # "H" or "G"
    n: int

    def __post_init__(self):
        if self.kind not in ("H", "G"):
            raise ValueError(f"unknown presentation kind {self.kind!r}")
        if self.n < 6 or self.n % 2:
            raise ValueError(f"n must be even and >= 6, got {self.n}")

    @property
    def ngens(self) -> int:
        return self.n if self.kind == "H" else self.n - 1

    def long_relators(self) -> list[Word]:
        """Relators used for area computations (the involution relators excluded)."""
        n = self.n
        if self.kind == "H":
            return [tuple((i, 1) for i in range(n, 0, -1))]
        first = tuple((i, 1 if i % 2 else -1) for i in range(n - 1, 0, -1))
        second = tuple((i, -e) for i, e in first)
        return [first, second]

    def relators(self) -> list[Word]:
        rels = self.long_relators()
        if self.kind == "H":
            rels = [((i, 1), (i, 1)) for i in range(1, self.n + 1)] + rels
        return rels


@dataclass(frozen=True)
class Representation:
    presentation: Presentation
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.presentation.ngens:
            raise ValueError(
                f"{self.presentation.kind}_{self.presentation.n} needs "
                f"{self.presentation.ngens} images, got {len(self.images)}"
            )

    @property
    def kind(self) -> str:
        return self.presentation.kind

    @property
    def n(self) -> int:
        return self.presentation.n

    def __getitem__(self, i: int) -> ProjMatrix:
        """Image of the generator with 1-based index ``i``."""
        if not 1 <= i <= len(self.images):
            raise IndexError(f"generator index {i} out of range")
        return self.images[i - 1]

    def conjugate(self, m: ProjMatrix) -> "Representation":
        return Representation(self.presentation, [x.conj(m) for x in self.images])


def h_rep(images: Sequence[ProjMatrix]) -> Representation:
    """H_n-representation; every image must be a half-turn."""
    for i, m in enumerate(images, 1):
        if not is_half_turn(m):
            raise ValueError(f"image of r_{i} is not a half-turn (trace {m.trace!r})")
    return Representation(Presentation("H", len(images)), images)


def g_rep(images: Sequence[ProjMatrix]) -> Representation:
    return Representation(Presentation("G", len(images) + 1), images)


def eval_word(rep: Representation, word: Word) -> ProjMatrix:
    out = IDENTITY
    for i, e in word:
        m = rep[i]
        out = out @ (m if e > 0 else m.inv())
    return out


def relation_residual(rep: Representation) -> float:
    return max(dist(eval_word(rep, w), IDENTITY) for w in rep.presentation.relators())


def g_from_r(rep_h: Representation, tol: float = 1e-6) -> Representation:
    """G_n-representation ``g_i -> r_n r_i`` induced by an H_n-representation."""
    if rep_h.kind != "H":
        raise InvalidInput("expected an H_n representation")
    res = relation_residual(rep_h)
    if res > tol:
        raise InvalidInput(f"H_n relations violated (residual {res:.3g})")
    rn = rep_h[rep_h.n]
    return g_rep([rn @ rep_h[i] for i in range(1, rep_h.n)])


def h_from_g(rep_g: Representation, r: ProjMatrix, tol: float = 1e-6) -> Representation:
    """Extend a G_n-representation by the involution ``r`` (``r_n = r``, ``r_i = r g_i``)."""
    if rep_g.kind != "G":
        raise InvalidInput("expected a G_n representation")
    if not is_half_turn(r, tol):
        raise NotHyperellipticInvolution(f"r is not a half-turn (trace {r.trace!r})")
    for i, g in enumerate(rep_g.images, 1):
        if not close(g.conj(r), g.inv(), tol):
            raise NotHyperellipticInvolution(f"conjugation by r does not invert g_{i}")
    out = h_rep([r @ g for g in rep_g.images] + [r])
    res = relation_residual(out)
    if res > tol:
        raise NotHyperellipticInvolution(f"extended representation has residual {res:.3g}")
    return out
