"""Verdicts about moduli spaces of slope-stable sheaves.

Everything here is lattice arithmetic: dimensions and deformation classes
from the Mukai square, the second-cohomology lattice as an orthogonal
complement in the rank-24 Mukai lattice, the projectivity criterion via
the signature of the algebraic part of v-perp, the transfer isometry
between v-perp and w-perp, and the existence/irreducibility checker for
stable bundles on surfaces with cyclic Neron-Severi group.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import exactlin
from .errors import HypothesisViolation, ValidationError
from .exactlin import IntMatrix, int_matrix, rational_signature
from .lattice import (
    Lattice,
    LatticeVector,
    content,
    coprime_rank_class,
    discriminant_group,
    full_mukai_lattice,
    k3_lattice,
    orthogonal_complement,
)
from .mukai import (
    MukaiVector,
    discriminant,
    discriminant_from_chern,
    dual,
    exp_class,
    mukai_divide,
    mukai_pairing,
    mukai_product,
    mukai_sqrt,
    mukai_square,
    topological_type,
)
from .surface import H11Class, K3Model, is_polarization, is_projective_surface
from .walls import is_generic

COPRIMALITY_NOTE = (
    "coprimality of the rank and the first Chern class is read as "
    "gcd(rank, content(c1)) = 1, a basis-independent interpretation"
)
RATIONAL_GENERICITY_NOTE = (
    "genericity is certified exactly for the given rational polarization; "
    "density of generic classes is a statement about real classes"
)


# -- Embedding into the abstract Mukai lattice --------------------------------


@dataclass(frozen=True)
class EmbeddedMukaiVector:
    """An integer vector of the rank-24 Mukai lattice U^4 (+) E8(-1)^2.

    The first hyperbolic plane carries the degree-0 and degree-4 parts, so
    an algebraic class (r, xi, a) embeds as (r, -a) there, followed by the
    image of xi under a primitive embedding of NS into U^3 (+) E8(-1)^2.
    """

    coords: tuple[int, ...]
    origin: MukaiVector | None = None

    def __post_init__(self):
        ambient = full_mukai_lattice()
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != ambient.rank:
            raise ValidationError(f"embedded vector must have length {ambient.rank}")
        object.__setattr__(self, "coords", coords)

    def vector(self) -> LatticeVector:
        return full_mukai_lattice().vector(self.coords)

    def square(self) -> int:
        gram = full_mukai_lattice().gram
        c = self.coords
        return sum(
            ci * sum(row[j] * c[j] for j in range(len(c)) if c[j])
            for ci, row in zip(c, gram)
            if ci
        )

    @property
    def is_primitive(self) -> bool:
        return exactlin.content_of(self.coords) == 1

    @classmethod
    def from_algebraic(cls, v: MukaiVector, ns_embedding: IntMatrix) -> "EmbeddedMukaiVector":
        if not v.is_integral:
            raise ValidationError("only integral Mukai vectors embed in the integral lattice")
        emb = int_matrix(ns_embedding)
        validate_ns_embedding(v.lattice, emb)
        xi = tuple(int(c) for c in v.v1.coords)
        image = exactlin.vec_mat(xi, emb)
        coords = (int(v.v0), -int(v.v2)) + tuple(image)
        out = cls(coords, origin=v)
        if out.square() != mukai_square(v):
            raise ValidationError("embedding does not preserve the Mukai square")
        return out


def validate_ns_embedding(ns: Lattice, emb: IntMatrix) -> None:
    """Check that emb rows give a primitive isometric embedding NS -> LambdaK3."""
    lam = k3_lattice()
    rows, cols = exactlin.shape(emb)
    if rows != ns.rank or cols != lam.rank:
        raise ValidationError(
            f"embedding must be {ns.rank}x{lam.rank}, got {rows}x{cols}"
        )
    induced = exactlin.matmul(exactlin.matmul(emb, lam.gram), exactlin.transpose(emb))
    if induced != ns.gram:
        raise ValidationError("embedding does not respect the intersection form")
    diag, _, _ = exactlin.smith_normal_form(emb)
    if any(d != 1 for d in diag):
        raise ValidationError("embedding is not primitive (image is not saturated)")


def standard_ns_embedding(ns: Lattice) -> IntMatrix:
    """Primitive embedding of a diagonal even NS of rank <= 3 into U^3.

    The generator of square 2k goes to e + k f in its own hyperbolic
    plane. Other shapes need a user-supplied embedding matrix.
    """
    if ns.rank > 3:
        raise ValidationError("standard embeddings cover rank <= 3 only")
    lam_rank = k3_lattice().rank
    rows = []
    for i in range(ns.rank):
        for j in range(ns.rank):
            if i != j and ns.gram[i][j] != 0:
                raise ValidationError("standard embeddings cover diagonal Gram matrices only")
        entry = ns.gram[i][i]
        if entry % 2 != 0:
            raise ValidationError("NS of a K3 is even; odd square has no standard embedding")
        row = [0] * lam_rank
        row[2 * i] = 1
        row[2 * i + 1] = entry // 2
        rows.append(tuple(row))
    return tuple(rows)


# -- The second cohomology lattice of the moduli space ------------------------


@dataclass(frozen=True)
class H2LatticeResult:
    lattice: Lattice
    signature: tuple[int, int, int]
    discriminant: tuple[int, ...]
    perp_basis: IntMatrix
    quotient_by_v: bool


def h2_lattice(v: EmbeddedMukaiVector) -> H2LatticeResult:
    """The lattice isometric to H^2 of the moduli space.

    For v^2 > 0 this is the orthogonal complement of v in the rank-24
    Mukai lattice; for v^2 = 0 the complement contains v in its radical
    and the result is the quotient by that line.
    """
    if not v.is_primitive:
        raise HypothesisViolation("the second-cohomology lattice needs a primitive class")
    sq = v.square()
    if sq < 0:
        raise HypothesisViolation("negative Mukai square has no moduli interpretation here")
    ambient = full_mukai_lattice()
    comp = orthogonal_complement(ambient, [ambient.vector(v.coords)])
    if sq > 0:
        lat = Lattice(comp.sub.gram, "v-perp")
        return H2LatticeResult(
            lat, rational_signature(lat.gram), discriminant_group(lat), comp.basis, False
        )
    # Isotropic case: the Gram of v-perp has a rank-one radical spanned by
    # v itself; quotient it out through a unimodular change of basis that
    # puts the radical first.
    gram = comp.sub.gram
    radical = exactlin.integer_kernel_saturated(gram)
    if len(radical) != 1:
        raise HypothesisViolation("isotropic class has an unexpected radical rank")
    _, _, right = exactlin.smith_normal_form(radical)
    to_new = exactlin.invert_unimodular(right)
    # First row of to_new spans the radical; congruent Gram has zero first
    # row and column.
    new_gram = exactlin.matmul(exactlin.matmul(to_new, gram), exactlin.transpose(to_new))
    if any(new_gram[0][j] != 0 for j in range(len(new_gram))):
        raise HypothesisViolation("radical reduction failed")
    reduced = tuple(tuple(int(x) for x in row[1:]) for row in new_gram[1:])
    lat = Lattice(reduced, "v-perp mod v")
    return H2LatticeResult(
        lat, rational_signature(lat.gram), discriminant_group(lat), comp.basis, True
    )


# -- Projectivity criterion ----------------------------------------------------


@dataclass(frozen=True)
class ProjectivityCheck:
    projective_moduli: bool
    surface_projective: bool
    gram: tuple[tuple[Fraction, ...], ...]
    signature: tuple[int, int, int]
    generators: tuple[MukaiVector, ...]
    isotropy_identity: tuple[Fraction, Fraction]  # ((e^(xi/r)(2r^2,0,v^2))^2, -4 r^2 v^2)


def projectivity_check(m: K3Model, v: MukaiVector) -> ProjectivityCheck:
    """Decide projectivity of the moduli space from the algebraic part of v-perp.

    The (1,1) part of v-perp is spanned over Q by the exp(xi/r)-twists of
    the NS classes and of (2r^2, 0, v^2). The moduli space is projective
    iff that span represents a positive square, which happens iff the
    surface itself is projective: the extra generator has square
    -4 r^2 v^2 <= 0 and is orthogonal to the twisted NS block.
    """
    if v.lattice.gram != m.ns.gram:
        raise ValidationError("Mukai vector must live over the model's NS lattice")
    sq = mukai_square(v)
    if sq < 0:
        raise HypothesisViolation("projectivity criterion requires v^2 >= 0")
    if v.v0 < 2 or v.v0.denominator != 1:
        raise HypothesisViolation("projectivity criterion requires integer rank >= 2")
    r = v.v0
    twist = exp_class(v.v1.scale(1 / r))
    gens = [mukai_product(twist, MukaiVector(Fraction(0), m.ns.basis_vector(i), Fraction(0)))
            for i in range(m.ns.rank)]
    extra = mukai_product(twist, MukaiVector(2 * r ** 2, m.ns.zero(), sq))
    gens.append(extra)
    for g in gens:
        if mukai_pairing(g, v) != 0:
            raise HypothesisViolation("generator is not orthogonal to v")
    gram = tuple(tuple(mukai_pairing(x, y) for y in gens) for x in gens)
    sig = rational_signature(gram)
    return ProjectivityCheck(
        projective_moduli=sig[0] >= 1,
        surface_projective=is_projective_surface(m),
        gram=gram,
        signature=sig,
        generators=tuple(gens),
        isotropy_identity=(mukai_square(extra), -4 * r ** 2 * sq),
    )


# -- Transfer isometry ----------------------------------------------------------


def transfer_multiplier(v: MukaiVector) -> MukaiVector:
    """The class ch(F^dual)/sqrt(ch(F (x) F^dual)) computed from v alone.

    Always equals exp(-xi/r); the square-root route is evaluated and the
    two must agree exactly, otherwise the division is inconsistent.
    """
    if not v.is_integral:
        raise HypothesisViolation("transfer multiplier requires an integral Mukai vector")
    if v.v0 < 1:
        raise HypothesisViolation("transfer multiplier requires rank >= 1")
    r = v.v0
    ch_f = MukaiVector(r, v.v1, v.v2 - r)
    ch_f_dual = dual(ch_f)
    endo = mukai_product(ch_f, ch_f_dual)
    root = mukai_sqrt(endo)
    mult = mukai_divide(ch_f_dual, root)
    expected = exp_class(v.v1.scale(-1 / r))
    if mult != expected:
        raise HypothesisViolation("transfer multiplier disagrees with exp(-xi/r)")
    return mult


def transfer_isometry(v: MukaiVector, beta: MukaiVector) -> MukaiVector:
    """Image of a class of v-perp under the isometry onto w-perp.

    w is the twisted vector (r, 0, a - xi^2/2r) of a stable bundle with
    Mukai vector v; the map multiplies by the transfer multiplier and
    preserves the Mukai pairing.
    """
    if mukai_pairing(beta, v) != 0:
        raise HypothesisViolation("transfer isometry is defined on v-perp only")
    return mukai_product(beta, transfer_multiplier(v))


def transfer_image_of_v(v: MukaiVector) -> MukaiVector:
    """Where the v-line goes: (r, 0, a - xi^2/2r)."""
    image = mukai_product(v, transfer_multiplier(v))
    r = v.v0
    expected = MukaiVector(r, v.lattice.zero(), v.v2 - v.v1.square() / (2 * r))
    if image != expected:
        raise HypothesisViolation("transfer image of v disagrees with the closed form")
    return image


# -- Existence and irreducibility on cyclic NS ---------------------------------


@dataclass(frozen=True)
class IrreducibilityVerdict:
    irreducible: bool
    min_lower_bound: Fraction | None
    witness: tuple[int, int] | None  # (r1, n2) minimizing the bound
    trivial: bool = False


def irreducibility_oracle(r: int, xi_square, delta) -> IrreducibilityVerdict:
    """Decide irreducibility by minimizing the subsheaf discriminant bound.

    On NS = Z L with L^2 = xi_square < 0, any rank decomposition
    r = r1 + r2 with sub-Chern class n2 L forces
        Delta >= LB(r1, n2) = -(xi_square / (2 r1 r2)) (r2/r - n2)^2.
    If the minimum of LB over all decompositions exceeds delta, no
    destabilizing subsheaf can exist; otherwise the minimizer is returned
    as a witness decomposition.
    """
    xi_square = Fraction(xi_square)
    delta = Fraction(delta)
    if r < 1:
        raise HypothesisViolation("rank must be >= 1")
    if xi_square >= 0:
        raise HypothesisViolation("oracle requires a negative definite rank-1 NS lattice")
    if r == 1:
        return IrreducibilityVerdict(True, None, None, trivial=True)
    best: Fraction | None = None
    argmin: tuple[int, int] | None = None
    for r1 in range(1, r):
        r2 = r - r1
        center = Fraction(r2, r)
        # The quadratic in n2 is minimized at the integers nearest r2/r.
        for n2 in {center.__floor__(), center.__ceil__()}:
            lb = -(xi_square / (2 * r1 * r2)) * (center - n2) ** 2
            if best is None or lb < best or (lb == best and (r1, n2) < argmin):
                best = lb
                argmin = (r1, n2)
    assert best is not None and argmin is not None
    if best > delta:
        return IrreducibilityVerdict(True, best, argmin)
    return IrreducibilityVerdict(False, best, argmin)


@dataclass(frozen=True)
class ExistenceVerdict:
    accepted: bool
    failures: tuple[str, ...]
    r: int
    d: int
    g: int
    xi_square: int | None = None
    delta: Fraction | None = None
    c2: int | None = None
    mukai: MukaiVector | None = None
    dim: int | None = None
    irreducibility: IrreducibilityVerdict | None = None


def bundle_existence_check(r: int, d: int, g: int) -> ExistenceVerdict:
    """Check the hypotheses for compact moduli of irreducible bundles.

    Accepts (r, d, g) iff d is even in [0, 2r-2], g <= -(r^2-1)(r-1) and
    g = d/2 (mod r); then NS = Z L with L^2 = 2g-2 carries rank-r sheaves
    with c1 = L, discriminant (d + 2r^2 - 2)/(2r^2), and their moduli
    space has dimension d. The irreducibility oracle confirms there is no
    destabilizing decomposition.
    """
    if r < 1:
        raise HypothesisViolation("rank must be >= 1")
    failures = []
    if d % 2 != 0:
        failures.append(f"d = {d} must be even")
    if not 0 <= d <= 2 * r - 2:
        failures.append(f"d = {d} must lie in [0, {2 * r - 2}]")
    g_cap = -(r ** 2 - 1) * (r - 1)
    if g > g_cap:
        failures.append(f"g = {g} must be <= {g_cap}")
    if d % 2 == 0 and (g - d // 2) % r != 0:
        failures.append(f"g = {g} must be congruent to d/2 = {d // 2} modulo {r}")
    if failures:
        return ExistenceVerdict(False, tuple(failures), r, d, g)

    xi_square = 2 * g - 2
    ns = Lattice(((xi_square,),), "ZL")
    xi = ns.basis_vector(0)
    delta = Fraction(d + 2 * r ** 2 - 2, 2 * r ** 2)
    c2 = r * delta + Fraction((r - 1) * xi_square, 2 * r)
    if c2.denominator != 1:
        raise HypothesisViolation(f"induced second Chern class {c2} is not integral")
    a = Fraction(xi_square, 2) + r - c2
    v = MukaiVector(Fraction(r), xi, a)
    if discriminant(v) != delta or discriminant_from_chern(topological_type(v)) != delta:
        raise HypothesisViolation("discriminant routes disagree for the induced vector")
    dim = mukai_square(v) + 2
    if dim != d:
        raise HypothesisViolation("induced dimension disagrees with d")
    oracle = irreducibility_oracle(r, xi_square, delta)
    return ExistenceVerdict(
        True, (), r, d, g,
        xi_square=xi_square, delta=delta, c2=int(c2), mukai=v, dim=int(dim),
        irreducibility=oracle,
    )


# -- The moduli report -----------------------------------------------------------


@dataclass(frozen=True)
class ModuliReport:
    valid: bool
    reasons: tuple[str, ...]
    mukai_square: Fraction
    dim: int | None
    n: int | None
    deformation_class: str | None
    b2: int | None
    rigid: bool
    genericity: bool | None
    projective_surface: bool
    projective_moduli: bool | None
    interpretation_notes: tuple[str, ...]


def moduli_report(m: K3Model, v: MukaiVector, omega: H11Class) -> ModuliReport:
    """Everything the lattice data says about the moduli space of v.

    Hypothesis violations are enumerated in ``reasons`` instead of raised,
    so a single run reports every defect of the input at once.
    """
    if v.lattice.gram != m.ns.gram:
        raise ValidationError("Mukai vector must live over the model's NS lattice")
    reasons: list[str] = []
    notes: list[str] = [COPRIMALITY_NOTE, RATIONAL_GENERICITY_NOTE]

    if not v.is_integral:
        reasons.append("Mukai vector must be integral")
    rank_ok = v.v0.denominator == 1 and v.v0 >= 2
    if not rank_ok:
        reasons.append(f"rank must be an integer >= 2, got {v.v0}")
    if v.is_integral and rank_ok and not coprime_rank_class(int(v.v0), v.v1):
        reasons.append("rank and first Chern class are not coprime")

    sq = mukai_square(v)
    if sq < -2:
        reasons.append(f"v^2 = {sq} < -2 admits no semistable sheaves")
    if sq.denominator == 1 and int(sq) % 2 != 0:
        reasons.append(f"v^2 = {sq} is odd; the pairing of a K3 model must be even")

    rigid = sq == -2
    dim = int(sq) + 2 if sq >= -2 and sq.denominator == 1 else None
    n = int(sq / 2 + 1) if sq >= 0 and (sq / 2).denominator == 1 else None
    b2 = None
    if sq > 0:
        b2 = 23
    elif sq == 0:
        b2 = 22
        notes.append("for isotropic v the moduli space is a K3 surface, so b2 = 22")

    genericity: bool | None = None
    if not is_polarization(m, omega):
        reasons.append("omega is not a polarization of the model")
    elif rank_ok and v.is_integral and sq >= -2:
        genericity = is_generic(m, v, omega)
        if not genericity:
            reasons.append("omega lies on a wall of v")

    projective_surface = is_projective_surface(m)
    projective_moduli: bool | None = None
    if rank_ok and v.is_integral and sq >= 0:
        projective_moduli = projectivity_check(m, v).projective_moduli

    deformation_class: str | None = None
    if rigid:
        notes.append(
            "v^2 = -2 is the rigid case: a zero-dimensional moduli problem "
            "outside the scope of the Hilbert-scheme statement"
        )
    valid = not reasons
    if valid and sq >= 0 and n is not None:
        deformation_class = f"Hilb^{n} of a projective K3"

    return ModuliReport(
        valid=valid,
        reasons=tuple(reasons),
        mukai_square=sq,
        dim=dim,
        n=n,
        deformation_class=deformation_class,
        b2=b2,
        rigid=rigid,
        genericity=genericity,
        projective_surface=projective_surface,
        projective_moduli=projective_moduli,
        interpretation_notes=tuple(notes),
    )
