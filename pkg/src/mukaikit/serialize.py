"""Canonical JSON forms: exact rationals, sorted keys, stable bytes.

Rationals are serialized as "p/q" strings (bare "p" when integral) and
never as floats; reparsing and re-serializing a report reproduces it
byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ValidationError
from .lattice import LatticeVector
from .mukai import MukaiVector

SCHEMA_VERSION = "1"


def rational_to_json(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ValidationError(f"{where}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"{where}: {value!r} is not a rational 'p/q' string") from exc
    if isinstance(value, float):
        raise ValidationError(f"{where}: floats are not accepted; use 'p/q' strings")
    raise ValidationError(f"{where}: expected a rational, got {type(value).__name__}")


def parse_int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValidationError(f"{where}: expected an integer, got {value!r}")
    return value


def vector_to_json(v: LatticeVector) -> list[str]:
    return [rational_to_json(c) for c in v.coords]


def coords_to_json(coords) -> list[str]:
    return [rational_to_json(c) for c in coords]


def mukai_to_json(v: MukaiVector) -> dict[str, Any]:
    return {
        "v0": rational_to_json(v.v0),
        "v1": vector_to_json(v.v1),
        "v2": rational_to_json(v.v2),
    }


def matrix_to_json(m) -> list[list]:
    out = []
    for row in m:
        out.append([rational_to_json(x) if isinstance(x, Fraction) else int(x) for x in row])
    return out


def canonical_dumps(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=True) + "\n"
