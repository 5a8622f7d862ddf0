"""Command-line front end.

Every verdict of the library is exposed as a subcommand over a JSON
config file, with text and canonical-JSON output. Exit codes: 0 success,
2 malformed input, 3 violated mathematical hypothesis, 64 unknown
subcommand.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Callable, TextIO

from . import moduli as moduli_mod
from . import twisted as twisted_mod
from . import walls as walls_mod
from .config import Config, load_config
from .errors import HypothesisViolation, MukaikitError, ValidationError
from .exactlin import mat_vec
from .mukai import discriminant, mukai_square, topological_type
from .moduli import (
    EmbeddedMukaiVector,
    bundle_existence_check,
    h2_lattice,
    moduli_report,
    projectivity_check,
    standard_ns_embedding,
)
from .serialize import (
    SCHEMA_VERSION,
    canonical_dumps,
    coords_to_json,
    matrix_to_json,
    mukai_to_json,
    rational_to_json,
    vector_to_json,
)
from .twisted import TwistedSheafData

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_HYPOTHESIS = 3
EXIT_UNKNOWN_COMMAND = 64


def _require(value, name: str):
    if value is None:
        raise ValidationError(f"config: section {name!r} is required for this subcommand")
    return value


def _wall_json(w: walls_mod.Wall) -> dict[str, Any]:
    return {
        "d": vector_to_json(w.d),
        "d_square": rational_to_json(w.d_square),
    }


def _cmd_pairing(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    sq = mukai_square(v)
    out: dict[str, Any] = {
        "mukai": mukai_to_json(v),
        "square": rational_to_json(sq),
        "integral": v.is_integral,
    }
    if v.v0 != 0:
        out["discriminant"] = rational_to_json(discriminant(v))
    return out


def _cmd_type(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    tau = topological_type(v)
    return {
        "r": tau.r,
        "c1": vector_to_json(tau.c1),
        "c2": tau.c2,
    }


def _cmd_walls(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    omega = _require(cfg.omega, "omega")
    found = walls_mod.walls_through_class(cfg.model, v, omega, workers=workers)
    out: dict[str, Any] = {
        "bound": rational_to_json(walls_mod.wall_bound(v)),
        "count": len(found),
        "walls": [_wall_json(w) for w in found],
    }
    if cfg.model.ns.rank == 2:
        # Coefficient pairs (a, b) of the wall lines a x1 + b x2 = 0 in the
        # NS plane, ready for external plotting.
        lines = []
        for w in found:
            form = mat_vec(cfg.model.ns.gram, w.d.coords)
            lines.append(coords_to_json(form))
        out["lines"] = lines
    return out


def _cmd_generic(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    omega = _require(cfg.omega, "omega")
    found = walls_mod.walls_through_class(cfg.model, v, omega, workers=workers)
    bound = walls_mod.wall_bound(v)
    out = {
        "generic": not found,
        "walls": [_wall_json(w) for w in found],
        "bound": rational_to_json(bound),
    }
    empty = walls_mod.wall_set_is_empty(cfg.model, v)
    if empty is not None:
        out["wall_set_empty"] = empty
    if empty:
        out["note"] = "generic for every polarization: the wall set is empty"
    return out


def _cmd_chamber(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    omega = _require(cfg.omega, "omega")
    omega_prime = _require(cfg.omega_prime, "omega_prime")
    same = walls_mod.same_chamber(cfg.model, v, omega, omega_prime, workers=workers)
    return {"same_chamber": same}


def _cmd_crossings(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    omega = _require(cfg.omega, "omega")
    omega_prime = _require(cfg.omega_prime, "omega_prime")
    seg = walls_mod.Segment(omega, omega_prime)
    found = walls_mod.walls_crossing_segment(cfg.model, v, seg, workers=workers)
    return {
        "count": len(found),
        "crossings": [
            {**_wall_json(c.wall), "t": rational_to_json(c.t)} for c in found
        ],
    }


def _cmd_twist(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    e = _require(cfg.twist, "twist")
    if v.v0.denominator != 1 or v.v0 < 1:
        raise HypothesisViolation("twist subcommand needs integer rank >= 1")
    f = TwistedSheafData(int(v.v0), v.v1, v.v2)
    che = twisted_mod.ch_E(f, e)
    ve = twisted_mod.v_E(f, e)
    out: dict[str, Any] = {
        "ch_E": mukai_to_json(che),
        "v_E": mukai_to_json(ve),
        "v_E_square": rational_to_json(mukai_square(ve)),
        "delta_E": rational_to_json(twisted_mod.delta_E(f, e)),
    }
    if v.is_integral:
        w = moduli_mod.transfer_image_of_v(v)
        back = twisted_mod.w_xi(w, v.v1, int(v.v0))
        out["self_twist_w"] = mukai_to_json(w)
        out["w_xi"] = mukai_to_json(back)
        out["w_xi_roundtrip_ok"] = back == v
    if e.b_field is not None:
        out["ch_B"] = mukai_to_json(twisted_mod.ch_B(che, e))
    return out


def _cmd_report(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    omega = _require(cfg.omega, "omega")
    rep = moduli_report(cfg.model, v, omega)
    return {
        "valid": rep.valid,
        "reasons": list(rep.reasons),
        "square": rational_to_json(rep.mukai_square),
        "dim": rep.dim,
        "n": rep.n,
        "deformation_class": rep.deformation_class,
        "b2": rep.b2,
        "rigid": rep.rigid,
        "generic": rep.genericity,
        "projective_surface": rep.projective_surface,
        "projective_moduli": rep.projective_moduli,
        "notes": list(rep.interpretation_notes),
    }


def _cmd_h2(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    emb = cfg.embedding if cfg.embedding is not None else standard_ns_embedding(cfg.model.ns)
    embedded = EmbeddedMukaiVector.from_algebraic(v, emb)
    res = h2_lattice(embedded)
    return {
        "square": rational_to_json(embedded.square()),
        "rank": res.lattice.rank,
        "signature": list(res.signature),
        "discriminant_group": list(res.discriminant),
        "quotient_by_v": res.quotient_by_v,
        "gram": matrix_to_json(res.lattice.gram),
    }


def _cmd_projective(cfg: Config, args, workers: int) -> dict[str, Any]:
    v = _require(cfg.mukai, "mukai")
    check = projectivity_check(cfg.model, v)
    lhs, rhs = check.isotropy_identity
    return {
        "projective_moduli": check.projective_moduli,
        "projective_surface": check.surface_projective,
        "verdicts_agree": check.projective_moduli == check.surface_projective,
        "signature": list(check.signature),
        "gram": matrix_to_json(check.gram),
        "twisted_isotropy_square": rational_to_json(lhs),
        "expected_isotropy_square": rational_to_json(rhs),
    }


def _cmd_exists(cfg: Config | None, args, workers: int) -> dict[str, Any]:
    if args.r is not None or args.d is not None or args.g is not None:
        if None in (args.r, args.d, args.g):
            raise ValidationError("exists: provide all of --r, --d, --g or none")
        triple = (args.r, args.d, args.g)
    elif cfg is not None and cfg.existence is not None:
        triple = cfg.existence
    else:
        raise ValidationError("exists: needs --r/--d/--g or an 'existence' config section")
    verdict = bundle_existence_check(*triple)
    out: dict[str, Any] = {
        "r": verdict.r,
        "d": verdict.d,
        "g": verdict.g,
        "accepted": verdict.accepted,
        "failures": list(verdict.failures),
    }
    if verdict.accepted:
        assert verdict.irreducibility is not None
        out.update(
            {
                "xi_square": verdict.xi_square,
                "delta": rational_to_json(verdict.delta),
                "c2": verdict.c2,
                "mukai": mukai_to_json(verdict.mukai),
                "dim": verdict.dim,
                "irreducible": verdict.irreducibility.irreducible,
            }
        )
        if verdict.irreducibility.min_lower_bound is not None:
            out["irreducibility_lower_bound"] = rational_to_json(
                verdict.irreducibility.min_lower_bound
            )
        if verdict.irreducibility.witness is not None:
            out["closest_decomposition"] = list(verdict.irreducibility.witness)
    return out


_COMMANDS: dict[str, tuple[Callable, bool]] = {
    # name -> (handler, requires config)
    "pairing": (_cmd_pairing, True),
    "type": (_cmd_type, True),
    "walls": (_cmd_walls, True),
    "generic": (_cmd_generic, True),
    "chamber": (_cmd_chamber, True),
    "crossings": (_cmd_crossings, True),
    "twist": (_cmd_twist, True),
    "report": (_cmd_report, True),
    "h2": (_cmd_h2, True),
    "projective": (_cmd_projective, True),
    "exists": (_cmd_exists, False),
}


def _render_text(payload: dict[str, Any], stream: TextIO, indent: str = "") -> None:
    for key in sorted(payload):
        value = payload[key]
        if isinstance(value, dict):
            stream.write(f"{indent}{key}:\n")
            _render_text(value, stream, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            stream.write(f"{indent}{key}:\n")
            for item in value:
                stream.write(f"{indent}  -\n")
                _render_text(item, stream, indent + "    ")
        else:
            stream.write(f"{indent}{key}: {value}\n")


def _build_parser(command: str) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=f"mukaikit {command}")
    parser.add_argument("--config", help="path to a JSON config file")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker count for wall enumeration")
    if command == "exists":
        parser.add_argument("--r", type=int, default=None)
        parser.add_argument("--d", type=int, default=None)
        parser.add_argument("--g", type=int, default=None)
    return parser


def _resolve_workers(args) -> int:
    if args.threads is not None:
        workers = args.threads
    else:
        env = os.environ.get("MUKAIKIT_THREADS")
        if env is not None:
            try:
                workers = int(env)
            except ValueError as exc:
                raise ValidationError(f"MUKAIKIT_THREADS={env!r} is not an integer") from exc
        else:
            workers = os.cpu_count() or 1
    if workers < 1:
        raise ValidationError("thread count must be >= 1")
    return workers


def run(argv: list[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    if not argv or argv[0] in ("-h", "--help"):
        stderr.write(
            "usage: mukaikit <subcommand> [--config PATH] [--format {text,json}]\n"
            f"subcommands: {', '.join(sorted(_COMMANDS))}\n"
        )
        return EXIT_OK if argv else EXIT_UNKNOWN_COMMAND
    command, rest = argv[0], argv[1:]
    if command not in _COMMANDS:
        stderr.write(f"mukaikit: unknown subcommand {command!r}\n")
        stderr.write(f"subcommands: {', '.join(sorted(_COMMANDS))}\n")
        return EXIT_UNKNOWN_COMMAND
    handler, needs_config = _COMMANDS[command]
    parser = _build_parser(command)
    try:
        args = parser.parse_args(rest)
    except SystemExit:
        return EXIT_VALIDATION
    try:
        workers = _resolve_workers(args)
        if args.config is not None:
            cfg = load_config(args.config)
        elif needs_config:
            raise ValidationError(f"{command}: --config is required")
        else:
            cfg = None
        result = handler(cfg, args, workers)
    except ValidationError as exc:
        stderr.write(f"mukaikit {command}: invalid input: {exc}\n")
        return EXIT_VALIDATION
    except HypothesisViolation as exc:
        stderr.write(f"mukaikit {command}: hypothesis violated: {exc}\n")
        return EXIT_HYPOTHESIS
    except MukaikitError as exc:
        stderr.write(f"mukaikit {command}: {exc}\n")
        return EXIT_VALIDATION
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "result": result,
    }
    if args.format == "json":
        stdout.write(canonical_dumps(payload))
    else:
        stdout.write(f"command: {command}\n")
        _render_text(result, stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run(sys.argv[1:]))
