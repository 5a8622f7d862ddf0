"""Walls and chambers for polarizations.

For a positive-rank class with discriminant Delta, the wall classes are
the D in NS with -r^4 Delta / 2 <= D^2 < 0; a polarization is generic
when no wall class is orthogonal to it. Everything here is decided in
exact rational arithmetic: enumeration reduces to short vectors of
definite forms, and sign tests are exact predicates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import shortvec
from .errors import HypothesisViolation, ValidationError
from .exactlin import integer_kernel_saturated, mat_vec, matmul, transpose
from .lattice import LatticeVector
from .mukai import MukaiVector, discriminant
from .surface import H11Class, K3Model, is_polarization
from .twisted import TwistData, TwistedSheafData, delta_E


@dataclass(frozen=True)
class WallProfile:
    """The two numbers the wall machinery needs: a rank and a discriminant."""

    rank: int
    delta: Fraction

    def __post_init__(self):
        if self.rank < 1:
            raise HypothesisViolation("wall sets are defined for positive rank")
        object.__setattr__(self, "delta", Fraction(self.delta))

    @classmethod
    def of(cls, v) -> "WallProfile":
        if isinstance(v, WallProfile):
            return v
        if isinstance(v, MukaiVector):
            if v.v0 < 1:
                raise HypothesisViolation("wall sets are defined for positive rank")
            return cls(int(v.v0), discriminant(v))
        raise ValidationError(f"cannot derive a wall profile from {v!r}")

    @classmethod
    def twisted(cls, f: TwistedSheafData, e: TwistData) -> "WallProfile":
        """Profile of a twisted class; same machinery, twisted discriminant."""
        return cls(f.r, delta_E(f, e))


def wall_bound(v) -> Fraction:
    """r^4 Delta / 2. Negative exactly when the wall set is empty."""
    profile = WallProfile.of(v)
    return Fraction(profile.rank) ** 4 * profile.delta / 2


@dataclass(frozen=True)
class Wall:
    """A primitive NS class of negative square within the wall bound.

    Stored with canonical sign (first nonzero coordinate positive) so
    that D and -D, which cut the same hyperplane, coincide.
    """

    d: LatticeVector
    d_square: Fraction
    bound: Fraction
    source: tuple[int, LatticeVector] | None = None

    def __post_init__(self):
        if not (-self.bound <= self.d_square < 0):
            raise ValidationError("wall square out of range")
        first = next((c for c in self.d.coords if c != 0), None)
        if first is None or first < 0:
            raise ValidationError("wall class must be nonzero with canonical sign")


def _canonical_sign(d: LatticeVector) -> LatticeVector:
    for c in d.coords:
        if c > 0:
            return d
        if c < 0:
            return -d
    return d


def is_wall(d: LatticeVector, v) -> bool:
    """Membership of an integral NS class in the wall set of v."""
    if not d.is_integral:
        raise ValidationError("wall membership is tested on integral classes")
    bound = wall_bound(v)
    sq = d.square()
    return -bound <= sq < 0


def wall_set_is_empty(m: K3Model, v) -> bool | None:
    """Whether no NS class at all satisfies the wall inequality.

    Decided exactly when the bound is negative or NS is negative definite
    (a finite ball); on an indefinite NS with nonnegative bound the
    answer would need representation theory, so None is returned.
    """
    bound = wall_bound(v)
    if bound < 0:
        return True
    if m.ns.rank == 0:
        return True
    n_plus, _, _ = m.ns.signature()
    if n_plus > 0:
        return None
    neg = tuple(tuple(-x for x in row) for row in m.ns.gram)
    hits = shortvec.short_vectors(neg, bound)
    return not any(m.ns.vector(x).square() < 0 for x in hits)


@dataclass(frozen=True)
class DestabilizerVerdict:
    """Classification of D = r zeta - s xi for a potential destabilizer."""

    kind: str  # "zero" | "wall" | "out_of_range"
    d: LatticeVector
    d_square: Fraction
    bound: Fraction
    wall: Wall | None
    reason: str


def destabilizer_wall(v: MukaiVector, s: int, zeta: LatticeVector) -> DestabilizerVerdict:
    """Wall attached to a rank-s subsheaf with first Chern class zeta.

    Genuine slope-equal subsheaf data always lands in the closed range
    [-r^4 Delta/2, 0]; anything outside is reported as an inconsistency
    rather than silently kept.
    """
    profile = WallProfile.of(v)
    r = profile.rank
    if not 0 < s < r:
        raise HypothesisViolation(f"subsheaf rank {s} must lie strictly between 0 and {r}")
    d = zeta.scale(r) - v.v1.scale(s)
    bound = wall_bound(profile)
    sq = d.square()
    if d.is_zero:
        return DestabilizerVerdict("zero", d, sq, bound, None, "proportional Chern classes")
    if sq >= 0:
        return DestabilizerVerdict(
            "out_of_range", d, sq, bound, None,
            "nonnegative square is impossible for a class orthogonal to a polarization",
        )
    if sq < -bound:
        return DestabilizerVerdict(
            "out_of_range", d, sq, bound, None,
            f"square {sq} below the wall bound {-bound}",
        )
    wall = Wall(_make_primitive(_canonical_sign(d)), _primitive_square(d), bound, (s, zeta))
    return DestabilizerVerdict("wall", d, sq, bound, wall, "in range")


def _make_primitive(d: LatticeVector) -> LatticeVector:
    c = _integral_content(d)
    return d.scale(Fraction(1, c)) if c > 1 else d


def _integral_content(d: LatticeVector) -> int:
    g = 0
    for c in d.coords:
        g = gcd(g, abs(int(c)))
    return g or 1


def _primitive_square(d: LatticeVector) -> Fraction:
    c = _integral_content(d)
    return d.square() / (c * c)


def _wall_sort_key(w: Wall):
    return (-w.d_square, w.d.coords)


def _candidate_primitives(m: K3Model, vectors, bound: Fraction, basis=None) -> list[Wall]:
    """Map enumerated coordinate vectors to canonical primitive wall classes."""
    seen = {}
    for x in vectors:
        if basis is not None:
            coords = tuple(
                sum(x[i] * basis[i][j] for i in range(len(basis)))
                for j in range(m.ns.rank)
            )
        else:
            coords = x
        g = 0
        for c in coords:
            g = gcd(g, abs(c))
        if g == 0:
            continue
        coords = tuple(c // g for c in coords)
        d = _canonical_sign(m.ns.vector(coords))
        key = d.coords
        if key in seen:
            continue
        sq = d.square()
        if -bound <= sq < 0:
            seen[key] = Wall(d, sq, bound)
    return sorted(seen.values(), key=_wall_sort_key)


def walls_through_class(m: K3Model, v, omega: H11Class, *, workers: int = 1) -> list[Wall]:
    """All wall classes of v orthogonal to the polarization omega.

    The conditions D . omega = 0 cut a saturated sublattice of NS on
    which the form is negative definite (omega has positive square), so
    the wall inequality -bound <= D^2 < 0 confines D to a finite ball
    which is enumerated exactly.
    """
    if not is_polarization(m, omega):
        raise HypothesisViolation("walls are computed through polarizations only")
    bound = wall_bound(v)
    if bound < 0 or m.ns.rank == 0:
        return []
    form = mat_vec(m.ns.gram, omega.ns_part.coords)
    denom = 1
    for c in form:
        denom = denom * c.denominator // gcd(denom, c.denominator)
    row = tuple(int(c * denom) for c in form)
    if any(row):
        basis = integer_kernel_saturated((row,))
    else:
        basis = tuple(tuple(int(i == j) for j in range(m.ns.rank)) for i in range(m.ns.rank))
    if not basis:
        return []
    sub_gram = matmul(matmul(basis, m.ns.gram), transpose(basis))
    neg = tuple(tuple(-x for x in r) for r in sub_gram)
    hits = shortvec.short_vectors(neg, bound, workers=workers)
    return _candidate_primitives(m, hits, bound, basis)


@dataclass(frozen=True)
class Segment:
    """The affine segment t -> (1-t) start + t end between two polarizations."""

    start: H11Class
    end: H11Class

    def at(self, m: K3Model, t: Fraction) -> H11Class:
        t = Fraction(t)
        ns = self.start.ns_part.scale(1 - t) + self.end.ns_part.scale(t)
        tp = self.start.t_part.scale(1 - t) + self.end.t_part.scale(t)
        return H11Class(ns, tp)


@dataclass(frozen=True)
class WallCrossing:
    wall: Wall
    t: Fraction


def segment_candidate_bound(m: K3Model, omega: H11Class, omega_prime: H11Class,
                            bound: Fraction) -> Fraction:
    """Upper bound for the majorant M(x) = 2 (x.w)^2/w^2 - x^2 on crossing walls.

    Write a = w^2, b = w.w', c = w'^2. A wall class D orthogonal to some
    interior point of the segment satisfies, via Cauchy-Schwarz in the
    negative definite orthogonal complement of w,
        (D.w)^2 <= bound * (b^2 - ac) / c,
    which gives M(D) <= bound * (2 b^2 - ac) / (ac).
    """
    a = m.square(omega)
    b = m.pair(omega, omega_prime)
    c = m.square(omega_prime)
    return bound * (2 * b * b - a * c) / (a * c)


def walls_crossing_segment(m: K3Model, v, seg: Segment, *, workers: int = 1) -> list[WallCrossing]:
    """All walls separating the endpoints, each with its crossing parameter.

    Both endpoints must be generic (no wall through either); walls are
    reported with the exact t in (0,1) where D . omega_t = 0, sorted by t.
    """
    omega, omega_prime = seg.start, seg.end
    for name, endpoint in (("start", omega), ("end", omega_prime)):
        if not is_polarization(m, endpoint):
            raise HypothesisViolation(f"segment {name} point is not a polarization")
    if m.pair(omega, omega_prime) <= 0:
        raise HypothesisViolation("endpoints lie in different positive-cone components")
    for name, endpoint in (("start", omega), ("end", omega_prime)):
        if walls_through_class(m, v, endpoint, workers=workers):
            raise HypothesisViolation(f"segment {name} point lies on a wall")
    bound = wall_bound(v)
    if bound < 0 or m.ns.rank == 0:
        return []
    mbound = segment_candidate_bound(m, omega, omega_prime, bound)
    if mbound < 0:
        return []
    # Majorant Gram on NS: 2 w_i w_j / w^2 - G_ij with w = G . omega_ns.
    w = mat_vec(m.ns.gram, omega.ns_part.coords)
    a = m.square(omega)
    n = m.ns.rank
    maj = tuple(
        tuple(2 * w[i] * w[j] / a - m.ns.gram[i][j] for j in range(n)) for i in range(n)
    )
    hits = shortvec.short_vectors(maj, mbound, workers=workers)
    crossings = []
    for wall in _candidate_primitives(m, hits, bound):
        p = m.pair_ns(wall.d, omega)
        q = m.pair_ns(wall.d, omega_prime)
        if (p < 0 < q) or (q < 0 < p):
            t = p / (p - q)
            crossings.append(WallCrossing(wall, t))
    crossings.sort(key=lambda c: (c.t, c.wall.d.coords))
    return crossings


def is_generic(m: K3Model, v, omega: H11Class, *, workers: int = 1) -> bool:
    """True when no wall class of v is orthogonal to omega."""
    return not walls_through_class(m, v, omega, workers=workers)


def same_chamber(m: K3Model, v, omega: H11Class, omega_prime: H11Class,
                 *, workers: int = 1) -> bool:
    """Whether two generic polarizations see the same stable sheaves.

    Chambers are convex, so this is equivalent to the segment between
    the classes crossing no wall.
    """
    return not walls_crossing_segment(m, v, Segment(omega, omega_prime), workers=workers)
