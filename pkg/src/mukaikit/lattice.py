"""Lattices with integer Gram matrices and their standard invariants.

Hosts the concrete lattices of the K3 world: hyperbolic planes U, the
negative definite E8 lattice, diagonal lattices and direct sums, with
pairings, saturated orthogonal complements and discriminant groups, all
in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import gcd
from typing import Iterable, Sequence

from . import exactlin
from .errors import HypothesisViolation, LatticeMismatchError, ValidationError
from .exactlin import IntMatrix, int_matrix, rational_signature


@dataclass(frozen=True)
class Lattice:
    """Free abelian group of finite rank with an integer Gram matrix."""

    gram: IntMatrix
    label: str = ""

    def __post_init__(self):
        gram = int_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        rows, cols = exactlin.shape(gram)
        if rows != cols:
            raise ValidationError("Gram matrix must be square")
        if not exactlin.is_symmetric(gram):
            raise ValidationError("Gram matrix must be symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def vector(self, coords: Iterable) -> "LatticeVector":
        return LatticeVector(self, tuple(Fraction(c) for c in coords))

    def basis_vector(self, i: int) -> "LatticeVector":
        if not 0 <= i < self.rank:
            raise ValidationError(f"basis index {i} out of range for rank {self.rank}")
        return self.vector(tuple(int(i == j) for j in range(self.rank)))

    def zero(self) -> "LatticeVector":
        return self.vector((0,) * self.rank)

    def signature(self) -> tuple[int, int, int]:
        return rational_signature(self.gram)

    def is_nondegenerate(self) -> bool:
        return self.signature()[1] == 0

    def __repr__(self):
        name = self.label or f"rank-{self.rank} lattice"
        return f"Lattice({name})"


@dataclass(frozen=True, eq=False)
class LatticeVector:
    """A rational vector written in the basis of a fixed lattice."""

    lattice: Lattice
    coords: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        if len(coords) != self.lattice.rank:
            raise ValidationError(
                f"vector of length {len(coords)} in a rank-{self.lattice.rank} lattice"
            )

    def __eq__(self, other) -> bool:
        # Labels are display data; two vectors agree when their coordinates
        # and Gram matrices do.
        if not isinstance(other, LatticeVector):
            return NotImplemented
        return self.coords == other.coords and self.lattice.gram == other.lattice.gram

    def __hash__(self):
        return hash((self.coords, self.lattice.gram))

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def dot(self, other: "LatticeVector") -> Fraction:
        return pairing(self, other)

    def square(self) -> Fraction:
        return pairing(self, self)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        _check_same_lattice(self, other)
        return LatticeVector(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        _check_same_lattice(self, other)
        return LatticeVector(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "LatticeVector":
        return LatticeVector(self.lattice, tuple(-a for a in self.coords))

    def scale(self, k) -> "LatticeVector":
        k = Fraction(k)
        return LatticeVector(self.lattice, tuple(k * a for a in self.coords))

    def __repr__(self):
        return f"({', '.join(str(c) for c in self.coords)})"


def _check_same_lattice(x: LatticeVector, y: LatticeVector) -> None:
    if x.lattice.gram != y.lattice.gram:
        raise LatticeMismatchError("vectors live in different lattices")


def pairing(x: LatticeVector, y: LatticeVector) -> Fraction:
    """Intersection pairing x^T . gram . y, exact."""
    _check_same_lattice(x, y)
    g = x.lattice.gram
    total = Fraction(0)
    for i, xi in enumerate(x.coords):
        if xi:
            row = g[i]
            total += xi * sum(row[j] * yj for j, yj in enumerate(y.coords) if yj)
    return total


# -- Standard lattices --------------------------------------------------------

# Negated E8 Cartan matrix; node i is joined to node i+1 along the chain
# 0-1-2-3-4-5-6 with node 7 attached to node 4.
_E8_MINUS = (
    (-2, 1, 0, 0, 0, 0, 0, 0),
    (1, -2, 1, 0, 0, 0, 0, 0),
    (0, 1, -2, 1, 0, 0, 0, 0),
    (0, 0, 1, -2, 1, 0, 0, 0),
    (0, 0, 0, 1, -2, 1, 0, 1),
    (0, 0, 0, 0, 1, -2, 1, 0),
    (0, 0, 0, 0, 0, 1, -2, 0),
    (0, 0, 0, 0, 1, 0, 0, -2),
)


def u_lattice(label: str = "U") -> Lattice:
    """Hyperbolic plane: Gram [[0,1],[1,0]]."""
    return Lattice(((0, 1), (1, 0)), label)


def e8_minus_lattice(label: str = "E8(-1)") -> Lattice:
    """Negative definite E8 lattice (even, unimodular)."""
    return Lattice(_E8_MINUS, label)


def diagonal_lattice(entries: Sequence[int], label: str = "") -> Lattice:
    gram = tuple(
        tuple(entries[i] if i == j else 0 for j in range(len(entries)))
        for i in range(len(entries))
    )
    return Lattice(gram, label or f"diag{tuple(entries)}")


def direct_sum(parts: Sequence[Lattice], label: str = "") -> Lattice:
    """Orthogonal direct sum, block diagonal Gram."""
    total = sum(p.rank for p in parts)
    rows = []
    offset = 0
    for part in parts:
        for row in part.gram:
            rows.append((0,) * offset + row + (0,) * (total - offset - part.rank))
        offset += part.rank
    return Lattice(tuple(rows), label or "(+)".join(p.label or "?" for p in parts))


def standard_lattice(kind: str, entries: Sequence[int] | None = None,
                     parts: Sequence[Lattice] | None = None) -> Lattice:
    """Dispatcher over the standard constructors, keyed by name."""
    if kind == "U":
        return u_lattice()
    if kind == "E8minus":
        return e8_minus_lattice()
    if kind == "diagonal":
        if not entries:
            raise ValidationError("diagonal lattice needs entries")
        return diagonal_lattice(entries)
    if kind == "direct_sum":
        if not parts:
            raise ValidationError("direct sum needs parts")
        return direct_sum(parts)
    raise ValidationError(f"unknown lattice kind {kind!r}")


@cache
def k3_lattice() -> Lattice:
    """U^3 (+) E8(-1)^2, the second cohomology lattice of a K3 surface."""
    u = u_lattice()
    e8 = e8_minus_lattice()
    return direct_sum((u, u, u, e8, e8), "LambdaK3")


@cache
def full_mukai_lattice() -> Lattice:
    """U^4 (+) E8(-1)^2; the first U summand plays the role of H^0 (+) H^4."""
    u = u_lattice()
    e8 = e8_minus_lattice()
    return direct_sum((u, u, u, u, e8, e8), "Mukai")


# -- Invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class OrthogonalComplement:
    """Saturated orthogonal complement with its inclusion basis.

    ``basis`` rows are coordinates in the ambient lattice (Hermite normal
    form, hence deterministic); ``sub.gram`` is the induced Gram matrix.
    """

    sub: Lattice
    basis: IntMatrix


def orthogonal_complement(l: Lattice, vs: Sequence[LatticeVector]) -> OrthogonalComplement:
    """Saturated sublattice of all x with pairing(x, v) = 0 for v in vs."""
    for v in vs:
        if v.lattice.gram != l.gram:
            raise LatticeMismatchError("complement vectors must live in the given lattice")
    if not vs:
        return OrthogonalComplement(Lattice(l.gram, l.label), exactlin.identity(l.rank))
    rows = []
    for v in vs:
        # x . gram . v = 0 is one integer linear condition after clearing
        # denominators.
        form = exactlin.mat_vec(l.gram, v.coords)
        denom = 1
        for c in form:
            denom = denom * c.denominator // gcd(denom, c.denominator)
        rows.append(tuple(int(c * denom) for c in form))
    basis = exactlin.integer_kernel_saturated(rows)
    if not basis:
        return OrthogonalComplement(Lattice((), f"{l.label}-perp"), ())
    gram = exactlin.matmul(exactlin.matmul(basis, l.gram), exactlin.transpose(basis))
    sub = Lattice(tuple(tuple(int(x) for x in row) for row in gram), f"{l.label}-perp")
    return OrthogonalComplement(sub, basis)


def discriminant_group(l: Lattice) -> tuple[int, ...]:
    """Invariant factors of the finite group l^* / l, unit factors dropped."""
    if l.rank == 0:
        return ()
    diag, _, _ = exactlin.smith_normal_form(l.gram)
    if any(d == 0 for d in diag):
        raise HypothesisViolation("discriminant group of a degenerate lattice")
    return tuple(d for d in diag if d != 1)


def content(x: LatticeVector) -> int:
    """gcd of the coordinates of a nonzero integral vector.

    Equivalently the largest k such that x/k is still integral; invariant
    under unimodular base change.
    """
    if x.is_zero:
        raise HypothesisViolation("content of the zero vector is undefined")
    if not x.is_integral:
        raise ValidationError("content requires integer coordinates")
    return exactlin.content_of(tuple(int(c) for c in x.coords))


def coprime_rank_class(r: int, xi: LatticeVector) -> bool:
    """The coprimality condition between a rank and a first Chern class.

    Implemented as gcd(r, content(xi)) = 1, with content(0) read as 0 so
    the zero class is coprime to nothing once r >= 2.
    """
    if xi.is_zero:
        return abs(r) == 1
    if not xi.is_integral:
        return False
    return gcd(r, content(xi)) == 1
