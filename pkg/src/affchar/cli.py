"""Command line front end.

Every subcommand reads JSON, writes one JSON document (to ``--out`` or
stdout) and exits with

* ``0`` on success,
* ``1`` on unreadable or malformed input,
* ``2`` when a mathematical precondition fails (trivial or degenerate
  character, non-unitary character for the volume form),
* ``3`` when an internal tolerance or schema check fails.

With ``--out`` a run manifest line is appended to ``manifest.jsonl`` next to
the output file.  Summaries never contain timings, so a fixed seed gives a
byte-identical summary; timings live in the manifest only.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np

from . import __version__
from .characters import (AffineRepresentation, Character, classify_character,
                         classify_representation, handle_parameters)
from .dehn_twist import degenerate_factors, genus2_standard_twists, higher_genus_rep
from .dynamics import WalkConfig, nondiscreteness_hint, projective_walk, sp_walk
from .haupt import PeriodCharacter, haupt_check
from .rng import make_rng
from .twisted_cohomology import (CocycleError, DegenerateCharacterError, cocycle_dimensions,
                                 cohomology_basis, signature, volume_gram)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_MATH = 2
EXIT_TOLERANCE = 3


class CliError(Exception):
    def __init__(self, code: int, kind: str, message: str, **details):
        super().__init__(message)
        self.code = code
        self.kind = kind
        self.details = details


@dataclass
class RunManifest:
    command: str
    version: str
    seeds: list
    input_digests: dict
    output_paths: list
    wall_time: float = 0.0
    argv: list = field(default_factory=list)


# ---------------------------------------------------------------- helpers

def _cplx(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _matrix_json(M) -> list:
    return [[_cplx(z) for z in row] for row in np.asarray(M)]


def _read_json(path: str, digests: dict):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CliError(EXIT_INPUT, "input_error", f"cannot read {path}: {exc.strerror}")
    digests[path] = hashlib.sha256(raw).hexdigest()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, "parse_error", f"{path}: {exc.msg}", line=exc.lineno, column=exc.colno)


def _load_character(path: str, digests: dict, exact: bool) -> Character:
    data = _read_json(path, digests)
    try:
        jsonschema.validate(data, load_schema("character"))
    except jsonschema.ValidationError as exc:
        raise CliError(EXIT_INPUT, "invalid_character", exc.message)
    try:
        alpha = Character.from_json(data)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, "invalid_character", str(exc))
    if exact and alpha.exact is None:
        raise CliError(EXIT_INPUT, "invalid_character", "--exact needs an exact character")
    return alpha


def load_schema(name: str) -> dict:
    text = resources.files("affchar").joinpath(f"data/schemas/{name}.json").read_text()
    return json.loads(text)


def _validate(doc: dict, schema: str) -> None:
    try:
        jsonschema.validate(doc, load_schema(schema))
    except jsonschema.ValidationError as exc:
        raise CliError(EXIT_TOLERANCE, "schema_violation", exc.message)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------- commands

def cmd_cohomology(args, ctx) -> dict:
    alpha = _load_character(args.alpha, ctx["digests"], args.exact)
    try:
        basis = cohomology_basis(alpha)
    except DegenerateCharacterError as exc:
        raise CliError(EXIT_MATH, "trivial_character", str(exc))
    dims = cocycle_dimensions(alpha)
    g = alpha.genus
    if dims["Z1"] != 2 * g - 1 or dims["H1"] != 2 * g - 2:
        raise CliError(EXIT_TOLERANCE, "rank_failure", "numeric rank disagrees with the expected dimensions",
                       dims=dims)
    return {
        "genus": g,
        "dims": dims,
        "basis": [[_cplx(z) for z in r.values] for r in basis.representatives],
        "pivot": basis.pivot,
        "eliminated": basis.eliminated,
        "free": list(basis.free),
        "rank_certificate": basis.rank_certificate(),
    }


def cmd_twist(args, ctx) -> dict:
    alpha = _load_character(args.alpha, ctx["digests"], args.exact)
    if args.genus is not None and args.genus != alpha.genus:
        raise CliError(EXIT_INPUT, "genus_mismatch", f"character has genus {alpha.genus}, not {args.genus}")
    factors = degenerate_factors(alpha, tol=args.tol)
    if factors:
        raise CliError(EXIT_MATH, "degenerate_handle", "vanishing factor " + ", ".join(factors), factors=factors)
    try:
        if alpha.genus == 2:
            gens = list(genus2_standard_twists(alpha, tol=args.tol))
        else:
            gens = higher_genus_rep(alpha, tol=args.tol).generator_matrices
    except DegenerateCharacterError as exc:
        raise CliError(EXIT_MATH, "degenerate_handle", str(exc), factors=[])
    params = [handle_parameters(alpha, i) for i in range(1, alpha.genus)]
    return {
        "genus": alpha.genus,
        "generators": [_matrix_json(M) for M in gens],
        "handle_params": [{"t": _cplx(t), "s": _cplx(s)} for t, s in params],
        "jorgensen_hints": [nondiscreteness_hint(complex(s), complex(t)) for t, s in params],
    }


def _write_points(path: str, points: np.ndarray, ctx) -> None:
    P = np.asarray(points)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if np.iscomplexobj(P):
            w.writerow([f"{p}{k}" for k in range(P.shape[1]) for p in ("re", "im")])
            for row in P:
                w.writerow([repr(float(x)) for z in row for x in (z.real, z.imag)])
        else:
            w.writerow([f"x{k}" for k in range(P.shape[1])])
            for row in P:
                w.writerow([repr(float(x)) for x in row])
    ctx["outputs"].append(path)


def cmd_walk(args, ctx) -> dict:
    cfg = WalkConfig(args.seed, args.steps, burn_in=args.burn_in, record_every=args.record_every)
    start_rng = make_rng(args.seed, 1)
    if args.kind == "sp":
        g = args.genus
        if g is None or g < 1:
            raise CliError(EXIT_INPUT, "invalid_argument", "walk sp needs --genus >= 1")
        x, y = start_rng.random(2 * g), start_rng.random(2 * g)
        if args.exact:
            x = [Fraction(float(v)).limit_denominator(10 ** 6) for v in x]
            y = [Fraction(float(v)).limit_denominator(10 ** 6) for v in y]
        rec = sp_walk(x, y, cfg, exact=args.exact, genus=g)
        if args.exact and rec.stats["max_drift"] != "0":
            raise CliError(EXIT_TOLERANCE, "conservation_failure", "exact walk changed the symplectic pairing")
        if not args.exact and rec.stats["max_relative_drift"] > args.tol:
            raise CliError(EXIT_TOLERANCE, "conservation_failure",
                           f"relative drift {rec.stats['max_relative_drift']:.3g} exceeds {args.tol:g}")
    else:
        if args.alpha is None:
            raise CliError(EXIT_INPUT, "invalid_argument", "walk torelli needs --alpha")
        alpha = _load_character(args.alpha, ctx["digests"], False)
        factors = degenerate_factors(alpha, tol=args.tol)
        if factors:
            raise CliError(EXIT_MATH, "degenerate_handle", "vanishing factor " + ", ".join(factors),
                           factors=factors)
        if alpha.genus == 2:
            gens = list(genus2_standard_twists(alpha))
        else:
            gens = higher_genus_rep(alpha).generator_matrices
        n = gens[0].shape[0]
        start = start_rng.standard_normal(n) + 1j * start_rng.standard_normal(n)
        rec = projective_walk(gens, start, cfg)
    if args.points:
        _write_points(args.points, rec.points, ctx)
    return rec.summary()


def cmd_haupt(args, ctx) -> dict:
    data = _read_json(args.omega, ctx["digests"])
    try:
        omega = PeriodCharacter.from_json(data)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, "invalid_period", str(exc))
    if args.exact and omega.exact is None:
        raise CliError(EXIT_INPUT, "invalid_period", "--exact needs Gaussian-rational input")
    if omega.genus < 2:
        raise CliError(EXIT_MATH, "genus_out_of_scope", "genus out of scope: need g >= 2")
    return haupt_check(omega, tol=args.tol).to_json()


def cmd_classify(args, ctx) -> dict:
    alpha = _load_character(args.alpha, ctx["digests"], args.exact)
    flags = classify_character(alpha, tol=args.tol)
    out = {"genus": alpha.genus, "mode": alpha.mode, "trivial": flags.trivial, "unitary": flags.unitary,
           "real": flags.real, "almost_real": flags.almost_real}
    if args.translation:
        raw = _read_json(args.translation, ctx["digests"])
        try:
            lam = np.array([complex(float(v["re"]), float(v.get("im", 0.0))) for v in raw["values"]])
            rep = classify_representation(AffineRepresentation(alpha, lam), tol=args.tol)
        except CocycleError as exc:
            raise CliError(EXIT_MATH, "not_a_cocycle", str(exc))
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(EXIT_INPUT, "invalid_translation", str(exc))
        out["representation"] = asdict(rep)
    return out


def cmd_volume(args, ctx) -> dict:
    alpha = _load_character(args.alpha, ctx["digests"], args.exact)
    try:
        gram = volume_gram(alpha)
    except DegenerateCharacterError as exc:
        raise CliError(EXIT_MATH, "precondition", str(exc))
    defect = gram.hermitian_defect()
    if defect > args.tol:
        raise CliError(EXIT_TOLERANCE, "not_hermitian", f"Hermitian defect {defect:.3g}")
    pos, neg, zero = signature(gram)
    return {"genus": alpha.genus, "gram": _matrix_json(gram.matrix), "hermitian_defect": defect,
            "signature": {"positive": pos, "negative": neg, "zero": zero}}


COMMANDS = {
    "cohomology": (cmd_cohomology, "cohomology"),
    "twist": (cmd_twist, "twist"),
    "walk": (cmd_walk, "experiment_record"),
    "haupt": (cmd_haupt, "haupt"),
    "classify": (cmd_classify, "classify"),
    "volume": (cmd_volume, "volume"),
}


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # Subcommand copies of the flags carry no defaults so that a flag given
    # before the subcommand is not overwritten.
    def d(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=d(0), help="seed of the philox4x64-v1 streams")
    common.add_argument("--out", default=d(None), help="write the JSON result here and append to manifest.jsonl")
    common.add_argument("--tol", type=float, default=d(1e-9), help="numerical tolerance")
    common.add_argument("--exact", action="store_true", default=d(False), help="demand exact arithmetic")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = argparse.ArgumentParser(prog="affchar", parents=[_global_flags(suppress=False)],
                                description="Twisted cohomology, Torelli actions and period realizability.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cohomology", parents=[common], help="basis and dimensions of H^1 twisted by a character")
    c.add_argument("action", choices=["basis"])
    c.add_argument("--alpha", required=True)

    t = sub.add_parser("twist", parents=[common], help="Torelli generator matrices on cohomology")
    t.add_argument("action", choices=["matrices"])
    t.add_argument("--alpha", required=True)
    t.add_argument("--genus", type=int)

    w = sub.add_parser("walk", parents=[common], help="seeded random-walk experiments")
    w.add_argument("kind", choices=["sp", "torelli"])
    w.add_argument("--genus", type=int)
    w.add_argument("--alpha")
    w.add_argument("--steps", type=int, default=10000)
    w.add_argument("--burn-in", type=int, default=0)
    w.add_argument("--record-every", type=int, default=1)
    w.add_argument("--points", help="CSV file receiving one row per recorded point")

    h = sub.add_parser("haupt", parents=[common], help="realizability of a period character")
    h.add_argument("action", choices=["check"])
    h.add_argument("--omega", required=True)

    k = sub.add_parser("classify", parents=[common], help="flags of a character or affine representation")
    k.add_argument("--alpha", required=True)
    k.add_argument("--translation", help="JSON {\"values\": [...]} translation part")

    v = sub.add_parser("volume", parents=[common], help="Gram matrix and signature of the volume form")
    v.add_argument("--alpha", required=True)
    return p


def main(argv: Optional[list[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    handler, schema = COMMANDS[args.command]
    ctx = {"digests": {}, "outputs": []}
    t0 = time.perf_counter()
    try:
        doc = handler(args, ctx)
        _validate(doc, schema)
    except CliError as exc:
        err = {"error": exc.kind, "exit_code": exc.code, "message": str(exc), **exc.details}
        _validate(err, "error")
        stderr.write(_dump(err))
        return exc.code
    text = _dump(doc)
    if args.out:
        Path(args.out).write_text(text)
        ctx["outputs"].insert(0, args.out)
        manifest = RunManifest(command=args.command, version=__version__, seeds=[args.seed],
                               input_digests=ctx["digests"], output_paths=ctx["outputs"],
                               wall_time=time.perf_counter() - t0, argv=argv)
        with open(Path(args.out).parent / "manifest.jsonl", "a") as fh:
            fh.write(json.dumps(asdict(manifest), sort_keys=True) + "\n")
    else:
        stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
