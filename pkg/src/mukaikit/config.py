"""Config file parsing with field-precise error messages.

A config is a single JSON object; vectors of rationals accept ints and
"p/q" strings interchangeably. Every consistency requirement (dimensions,
lattice membership) is checked here before any computation runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import ValidationError
from .exactlin import IntMatrix
from .lattice import Lattice
from .mukai import MukaiVector
from .surface import H11Class, K3Model
from .twisted import TwistData
from .serialize import parse_int, parse_rational


def _expect_dict(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(f"{where}: expected an object")
    return value


def _expect_list(value, where: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(f"{where}: expected a list")
    return value


def _int_matrix(value, where: str) -> IntMatrix:
    rows = _expect_list(value, where)
    out = []
    for i, row in enumerate(rows):
        row = _expect_list(row, f"{where}[{i}]")
        out.append(tuple(parse_int(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)))
    widths = {len(r) for r in out}
    if len(widths) > 1:
        raise ValidationError(f"{where}: rows have inconsistent lengths")
    return tuple(out)


def _rational_vector(value, where: str) -> tuple[Fraction, ...]:
    items = _expect_list(value, where)
    return tuple(parse_rational(x, f"{where}[{i}]") for i, x in enumerate(items))


@dataclass(frozen=True)
class Config:
    model: K3Model
    mukai: MukaiVector | None
    omega: H11Class | None
    omega_prime: H11Class | None
    twist: TwistData | None
    embedding: IntMatrix | None
    existence: tuple[int, int, int] | None


def _parse_surface(raw: dict) -> K3Model:
    surf = _expect_dict(raw.get("surface"), "surface") if "surface" in raw else None
    if surf is None:
        raise ValidationError("surface: section is required")
    if "ns_gram" not in surf:
        raise ValidationError("surface.ns_gram: field is required")
    ns = Lattice(_int_matrix(surf["ns_gram"], "surface.ns_gram"), "NS")
    if "t11_gram" in surf and surf["t11_gram"] is not None:
        t11 = Lattice(_int_matrix(surf["t11_gram"], "surface.t11_gram"), "T11")
    else:
        t11 = Lattice(())
    curves = []
    for i, c in enumerate(surf.get("curve_classes", []) or []):
        coords = _rational_vector(c, f"surface.curve_classes[{i}]")
        if len(coords) != ns.rank:
            raise ValidationError(
                f"surface.curve_classes[{i}]: expected length {ns.rank}, got {len(coords)}"
            )
        curves.append(ns.vector(coords))
    if "reference_positive" not in surf:
        raise ValidationError("surface.reference_positive: field is required")
    ref = _rational_vector(surf["reference_positive"], "surface.reference_positive")
    if len(ref) != ns.rank + t11.rank:
        raise ValidationError(
            "surface.reference_positive: expected length "
            f"{ns.rank + t11.rank} (NS rank + transcendental rank), got {len(ref)}"
        )
    reference = H11Class(ns.vector(ref[: ns.rank]), t11.vector(ref[ns.rank:]))
    try:
        return K3Model(ns=ns, reference_positive=reference, t11=t11, curve_classes=tuple(curves))
    except ValidationError as exc:
        raise ValidationError(f"surface: {exc}") from exc


def _parse_h11(raw, model: K3Model, where: str) -> H11Class:
    body = _expect_dict(raw, where)
    ns_coords = _rational_vector(body.get("ns", []), f"{where}.ns")
    t_coords = _rational_vector(body.get("t", []), f"{where}.t")
    if len(ns_coords) != model.ns.rank:
        raise ValidationError(f"{where}.ns: expected length {model.ns.rank}, got {len(ns_coords)}")
    if len(t_coords) != model.t11.rank:
        raise ValidationError(f"{where}.t: expected length {model.t11.rank}, got {len(t_coords)}")
    return H11Class(model.ns.vector(ns_coords), model.t11.vector(t_coords))


def parse_config(raw: dict) -> Config:
    raw = _expect_dict(raw, "config")
    model = _parse_surface(raw)

    mukai = None
    if "mukai" in raw:
        body = _expect_dict(raw["mukai"], "mukai")
        for key in ("r", "xi", "a"):
            if key not in body:
                raise ValidationError(f"mukai.{key}: field is required")
        r = parse_rational(body["r"], "mukai.r")
        xi_coords = _rational_vector(body["xi"], "mukai.xi")
        if len(xi_coords) != model.ns.rank:
            raise ValidationError(
                f"mukai.xi: expected length {model.ns.rank}, got {len(xi_coords)}"
            )
        a = parse_rational(body["a"], "mukai.a")
        mukai = MukaiVector(r, model.ns.vector(xi_coords), a)

    omega = _parse_h11(raw["omega"], model, "omega") if "omega" in raw else None
    omega_prime = (
        _parse_h11(raw["omega_prime"], model, "omega_prime") if "omega_prime" in raw else None
    )

    twist = None
    if "twist" in raw:
        body = _expect_dict(raw["twist"], "twist")
        s = parse_int(body.get("s"), "twist.s")
        b = parse_rational(body.get("b", 0), "twist.b")
        b_field = None
        if body.get("b_field") is not None:
            coords = _rational_vector(body["b_field"], "twist.b_field")
            if len(coords) != model.ns.rank:
                raise ValidationError(
                    f"twist.b_field: expected length {model.ns.rank}, got {len(coords)}"
                )
            b_field = model.ns.vector(coords)
        try:
            twist = TwistData(s, b, b_field)
        except Exception as exc:
            raise ValidationError(f"twist: {exc}") from exc

    embedding = None
    if raw.get("embedding") is not None:
        embedding = _int_matrix(raw["embedding"], "embedding")

    existence = None
    if "existence" in raw:
        body = _expect_dict(raw["existence"], "existence")
        existence = (
            parse_int(body.get("r"), "existence.r"),
            parse_int(body.get("d"), "existence.d"),
            parse_int(body.get("g"), "existence.g"),
        )

    return Config(
        model=model,
        mukai=mukai,
        omega=omega,
        omega_prime=omega_prime,
        twist=twist,
        embedding=embedding,
        existence=existence,
    )


def load_config(path: str | Path) -> Config:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"config: cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config: invalid JSON in {path}: {exc}") from exc
    return parse_config(raw)
