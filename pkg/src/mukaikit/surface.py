"""Finite-rank model of a K3 surface.

The (1,1) part of second cohomology is modelled as an orthogonal direct
sum of the Neron-Severi lattice and a transcendental block. Polarizations
are rational classes in the positive cone component selected by a
reference class, cut down by any user-supplied effective curve classes.
Reduced-rank transcendental blocks are allowed: every verdict downstream
is signature-level, so desk-scale models suffice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import HypothesisViolation, LatticeMismatchError, ValidationError
from .lattice import Lattice, LatticeVector, pairing


@dataclass(frozen=True)
class H11Class:
    """A (1,1) class split into its NS and transcendental parts."""

    ns_part: LatticeVector
    t_part: LatticeVector

    def __repr__(self):
        return f"({self.ns_part!r}; {self.t_part!r})"


@dataclass(frozen=True)
class K3Model:
    ns: Lattice
    reference_positive: H11Class
    t11: Lattice = Lattice(())
    curve_classes: tuple[LatticeVector, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "curve_classes", tuple(self.curve_classes))
        ns_plus, ns_zero, _ = self.ns.signature()
        if ns_zero:
            raise ValidationError("NS lattice must be nondegenerate")
        if ns_plus > 1:
            raise ValidationError("NS lattice has more than one positive direction")
        t_plus, t_zero, _ = self.t11.signature()
        if t_zero:
            raise ValidationError("transcendental block must be nondegenerate")
        if ns_plus + t_plus > 1:
            raise ValidationError("H^{1,1} model has more than one positive direction")
        self._check_membership(self.reference_positive)
        for c in self.curve_classes:
            if c.lattice.gram != self.ns.gram:
                raise LatticeMismatchError("curve classes must live in NS")
        if self.square(self.reference_positive) <= 0:
            raise ValidationError("reference class must have positive square")

    def _check_membership(self, omega: H11Class) -> None:
        if omega.ns_part.lattice.gram != self.ns.gram:
            raise LatticeMismatchError("NS part lives in the wrong lattice")
        if omega.t_part.lattice.gram != self.t11.gram:
            raise LatticeMismatchError("transcendental part lives in the wrong lattice")

    def h11(self, ns_coords, t_coords=()) -> H11Class:
        return H11Class(self.ns.vector(ns_coords), self.t11.vector(t_coords))

    def pair(self, x: H11Class, y: H11Class) -> Fraction:
        """Intersection pairing on the full (1,1) model; blocks are orthogonal."""
        self._check_membership(x)
        self._check_membership(y)
        return pairing(x.ns_part, y.ns_part) + pairing(x.t_part, y.t_part)

    def square(self, x: H11Class) -> Fraction:
        return self.pair(x, x)

    def pair_ns(self, xi: LatticeVector, omega: H11Class) -> Fraction:
        """xi . omega for xi in NS; only the NS part of omega contributes."""
        self._check_membership(omega)
        if xi.lattice.gram != self.ns.gram:
            raise LatticeMismatchError("class must live in NS")
        return pairing(xi, omega.ns_part)

    def embed_ns(self, xi: LatticeVector) -> H11Class:
        return H11Class(xi, self.t11.zero())


def is_projective_surface(m: K3Model) -> bool:
    """True iff NS represents a positive square, i.e. n_plus(NS) >= 1."""
    n_plus, _, _ = m.ns.signature()
    return n_plus >= 1


def is_polarization(m: K3Model, omega: H11Class) -> bool:
    """Positive square, same cone component as the reference, positive on curves."""
    m._check_membership(omega)
    if m.square(omega) <= 0:
        return False
    if m.pair(omega, m.reference_positive) <= 0:
        return False
    for c in m.curve_classes:
        if m.pair_ns(c, omega) <= 0:
            return False
    return True


@dataclass(frozen=True)
class NSProjection:
    """The NS component of a polarization, with its own positivity verdict."""

    ns_part: LatticeVector
    ns_is_polarization: bool
    as_h11: H11Class


def project_to_ns(m: K3Model, omega: H11Class) -> NSProjection:
    """Drop the transcendental part of a polarization.

    Pairing against any NS class is unchanged by construction. The
    returned verdict says whether the projection still passes the
    polarization test inside NS (the model's ampleness check); on a
    non-projective model it never does.
    """
    if not is_polarization(m, omega):
        raise HypothesisViolation("projection is defined for polarizations only")
    projected = m.embed_ns(omega.ns_part)
    return NSProjection(omega.ns_part, is_polarization(m, projected), projected)
