"""Mukai vectors over a Neron-Severi lattice.

A Mukai vector (v0, v1, v2) has rational rank and degree-4 components and
an NS-valued middle part; the pairing is v1.w1 - v0*w2 - v2*w0. Rational
components are first class citizens because twisted characters demand
them; integrality is a checked property, not a type constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import HypothesisViolation, LatticeMismatchError
from .lattice import Lattice, LatticeVector, pairing


@dataclass(frozen=True)
class MukaiVector:
    v0: Fraction
    v1: LatticeVector
    v2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "v0", Fraction(self.v0))
        object.__setattr__(self, "v2", Fraction(self.v2))

    @property
    def lattice(self) -> Lattice:
        return self.v1.lattice

    @property
    def is_integral(self) -> bool:
        return (
            self.v0.denominator == 1
            and self.v2.denominator == 1
            and self.v1.is_integral
        )

    def pair(self, other: "MukaiVector") -> Fraction:
        return mukai_pairing(self, other)

    def square(self) -> Fraction:
        return mukai_pairing(self, self)

    def __mul__(self, other: "MukaiVector") -> "MukaiVector":
        return mukai_product(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MukaiVector):
            return NotImplemented
        return (
            self.v0 == other.v0
            and self.v2 == other.v2
            and self.v1.lattice.gram == other.v1.lattice.gram
            and self.v1.coords == other.v1.coords
        )

    def __hash__(self):
        return hash((self.v0, self.v1.coords, self.v2, self.v1.lattice.gram))

    def __repr__(self):
        return f"({self.v0}, {self.v1!r}, {self.v2})"


@dataclass(frozen=True)
class TopologicalType:
    """Chern-class data (r, c1, c2) of a positive-rank sheaf."""

    r: int
    c1: LatticeVector
    c2: int

    def __post_init__(self):
        if self.r <= 0:
            raise HypothesisViolation("topological type requires positive rank")


def mukai_from_chern(r, c1: LatticeVector, ch2) -> MukaiVector:
    """Mukai vector of a sheaf with rank r, first Chern class c1, ch2."""
    r = Fraction(r)
    if r < 0:
        raise HypothesisViolation("negative rank")
    return MukaiVector(r, c1, Fraction(ch2) + r)


def mukai_pairing(x: MukaiVector, y: MukaiVector) -> Fraction:
    if x.v1.lattice.gram != y.v1.lattice.gram:
        raise LatticeMismatchError("Mukai vectors over different NS lattices")
    return pairing(x.v1, y.v1) - x.v0 * y.v2 - x.v2 * y.v0


def mukai_square(x: MukaiVector) -> Fraction:
    return mukai_pairing(x, x)


def discriminant(v: MukaiVector) -> Fraction:
    """v^2 / (2 v0^2) + 1; the Bogomolov-inequality quantity."""
    if v.v0 == 0:
        raise HypothesisViolation("discriminant requires nonzero rank")
    return mukai_square(v) / (2 * v.v0 ** 2) + 1


def discriminant_from_chern(tau: TopologicalType) -> Fraction:
    """(1/r)(c2 - (r-1)/(2r) c1^2), the Chern-class form of the discriminant."""
    r = Fraction(tau.r)
    return (Fraction(tau.c2) - (r - 1) / (2 * r) * tau.c1.square()) / r


def topological_type(v: MukaiVector) -> TopologicalType:
    """(r, c1, c2) of an integral positive-rank Mukai vector."""
    if not v.is_integral:
        raise HypothesisViolation("topological type requires an integral Mukai vector")
    if v.v0 < 1:
        raise HypothesisViolation("topological type requires rank >= 1")
    c2 = v.v1.square() / 2 + v.v0 - v.v2
    if c2.denominator != 1:
        raise HypothesisViolation(f"second Chern class {c2} is not an integer")
    return TopologicalType(int(v.v0), v.v1, int(c2))


def mukai_product(x: MukaiVector, y: MukaiVector) -> MukaiVector:
    """Cup product of even-degree classes, componentwise on (r, c1, s)."""
    if x.v1.lattice.gram != y.v1.lattice.gram:
        raise LatticeMismatchError("Mukai vectors over different NS lattices")
    return MukaiVector(
        x.v0 * y.v0,
        y.v1.scale(x.v0) + x.v1.scale(y.v0),
        x.v0 * y.v2 + x.v2 * y.v0 + pairing(x.v1, y.v1),
    )


def exp_class(delta: LatticeVector) -> MukaiVector:
    """(1, delta, delta^2/2): exponential of a degree-2 class."""
    return MukaiVector(Fraction(1), delta, delta.square() / 2)


def unit(lattice: Lattice) -> MukaiVector:
    return MukaiVector(Fraction(1), lattice.zero(), Fraction(0))


def _fraction_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    pn, pd = x.numerator, x.denominator
    rn, rd = isqrt(pn), isqrt(pd)
    if rn * rn != pn or rd * rd != pd:
        return None
    return Fraction(rn, rd)


def mukai_sqrt(x: MukaiVector) -> MukaiVector:
    """The square root (s, m, t) with (s, m, t)^2 = x and s > 0.

    Requires x0 to be the square of a positive rational; the other two
    components are then forced: m = x1/(2s) and t = (x2 - m^2)/(2s).
    """
    s = _fraction_sqrt(x.v0)
    if s is None or s == 0:
        raise HypothesisViolation(f"rank {x.v0} is not the square of a positive rational")
    m = x.v1.scale(Fraction(1, 2) / s)
    t = (x.v2 - m.square()) / (2 * s)
    root = MukaiVector(s, m, t)
    if mukai_product(root, root) != x:
        raise HypothesisViolation("inconsistent middle term: no Mukai square root")
    return root


def mukai_divide(y: MukaiVector, x: MukaiVector) -> MukaiVector:
    """The unique z with x * z = y, for invertible x (x0 != 0)."""
    if x.v0 == 0:
        raise HypothesisViolation("division by a rank-0 Mukai vector")
    z0 = y.v0 / x.v0
    z1 = (y.v1 - x.v1.scale(z0)).scale(1 / x.v0)
    z2 = (y.v2 - x.v2 * z0 - pairing(x.v1, z1)) / x.v0
    z = MukaiVector(z0, z1, z2)
    if mukai_product(x, z) != y:
        raise HypothesisViolation("inconsistent Mukai division")
    return z


def dual(x: MukaiVector) -> MukaiVector:
    """(x0, -x1, x2); matches dualizing a locally free sheaf."""
    return MukaiVector(x.v0, -x.v1, x.v2)
