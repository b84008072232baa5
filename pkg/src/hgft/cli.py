"""``hgft`` command line: JSON reports on stdout, CSV curve export.

Exit codes: 0 success or condition holds, 1 condition fails or non-member,
2 invalid input, 3 inconclusive.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import classes, extremal, hypergeo, radii
from .classes import INCONCLUSIVE, MEMBER
from .errors import HGFTError
from .harmonic import (
    ClassParams,
    HarmonicMapping,
    convolve,
    generate_member,
    identity,
    point_data,
    section,
)
from .series import PowerSeries

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2, 3
ANGLES_ENV = "HGFT_GRID_ANGLES"


class DocumentError(HGFTError):
    """Mapping document that cannot be parsed or violates an invariant."""


# --- documents ----------------------------------------------------------------

def _pairs(coeffs: np.ndarray) -> List[List[float]]:
    return [[float(c.real), float(c.imag)] for c in coeffs]


def mapping_to_document(f: HarmonicMapping, params: ClassParams) -> dict:
    return {"alpha": params.alpha, "beta": params.beta,
            "h": _pairs(f.h.coeffs), "g": _pairs(f.g.coeffs)}


def _series_field(doc: dict, name: str) -> PowerSeries:
    raw = doc.get(name)
    if not isinstance(raw, list) or not raw:
        raise DocumentError(f"field {name!r}: expected a non-empty list of [re, im] pairs")
    vals = []
    for k, pair in enumerate(raw):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise DocumentError(f"field {name!r}[{k}]: expected [re, im] numbers, got {pair!r}")
        vals.append(complex(pair[0], pair[1]))
    try:
        return PowerSeries(np.array(vals, dtype=np.complex128))
    except HGFTError as exc:
        raise DocumentError(f"field {name!r}: {exc}") from exc


def _number_field(doc: dict, name: str) -> float:
    v = doc.get(name)
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise DocumentError(f"field {name!r}: expected a number, got {v!r}")
    return float(v)


def document_to_mapping(doc) -> Tuple[HarmonicMapping, ClassParams]:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    try:
        params = ClassParams(_number_field(doc, "alpha"), _number_field(doc, "beta"))
    except DocumentError:
        raise
    except HGFTError as exc:
        raise DocumentError(f"class parameters: {exc}") from exc
    h, g = _series_field(doc, "h"), _series_field(doc, "g")
    try:
        f = HarmonicMapping(h, g)
    except HGFTError as exc:
        raise DocumentError(f"invariant violation: {exc}") from exc
    return f, params


def load_mapping(path: str) -> Tuple[HarmonicMapping, ClassParams]:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"parse error in {path} at line {exc.lineno} column {exc.colno}: "
                            f"{exc.msg}") from exc
    return document_to_mapping(doc)


def save_mapping(f: HarmonicMapping, params: ClassParams, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(mapping_to_document(f, params), fh)
        fh.write("\n")


def emit_curves(f: HarmonicMapping, rs: Sequence[float], samples: int, path: str) -> None:
    """Images of the circles |z| = r as CSV rows ordered by (r, theta)."""
    if samples < 16:
        raise DocumentError(f"samples must be >= 16, got {samples}")
    if not rs or any(not 0 < r < 1 for r in rs):
        raise DocumentError("radii must lie in (0, 1)")
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise DocumentError(f"cannot write {path}: {exc}") from exc
    with fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["r", "theta", "re_f", "im_f", "jacobian"])
        for r in sorted(rs):
            for k in range(samples):
                theta = 2 * np.pi * k / samples
                d = point_data(f, r * np.exp(1j * theta))
                w.writerow([repr(float(r)), repr(float(theta)), repr(d.value.real),
                            repr(d.value.imag), repr(d.jacobian)])


# --- report helpers -----------------------------------------------------------

def _c(z) -> Optional[List[float]]:
    return None if z is None else [float(complex(z).real), float(complex(z).imag)]


def _emit(report: dict) -> None:
    out = {"schema": SCHEMA}
    out.update(report)
    json.dump(out, sys.stdout, indent=2, allow_nan=True)
    sys.stdout.write("\n")


def _verdict_code(verdict: str) -> int:
    if verdict == MEMBER:
        return EXIT_OK
    if verdict == INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_FAIL


def _grid_angles() -> int:
    raw = os.environ.get(ANGLES_ENV)
    if raw is None:
        return classes.DEFAULT_ANGLES
    try:
        n = int(raw)
    except ValueError as exc:
        raise DocumentError(f"{ANGLES_ENV} must be a positive integer, got {raw!r}") from exc
    if n < 1:
        raise DocumentError(f"{ANGLES_ENV} must be a positive integer, got {raw!r}")
    return n


def _params(args) -> ClassParams:
    return ClassParams(args.alpha, args.beta)


def _membership_dict(rep) -> dict:
    return {"verdict": rep.verdict, "margin": rep.margin, "witness": _c(rep.witness),
            "method": rep.method, "note": rep.note}


# --- subcommands --------------------------------------------------------------

def cmd_check(args) -> int:
    f, params = load_mapping(args.input)
    grid = classes.grid_membership(f, params, angles=_grid_angles())
    report = {"command": "check", "grid": _membership_dict(grid)}
    if f.in_h0:
        report["sufficient"] = _membership_dict(classes.sufficient_membership(f, params))
    _emit(report)
    return _verdict_code(grid.verdict)


def cmd_bounds(args) -> int:
    f, params = load_mapping(args.input)
    rep = classes.coeff_bound_check(f, params)
    _emit({"command": "bounds", "ok": rep.ok, "n": [int(n) for n in rep.n],
           "slack_b": list(map(float, rep.slack_b)), "slack_sum": list(map(float, rep.slack_sum)),
           "slack_diff": list(map(float, rep.slack_diff)), "slack_a": list(map(float, rep.slack_a)),
           "violations": list(rep.violations)})
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_growth(args) -> int:
    if args.input:
        f, params = load_mapping(args.input)
    else:
        f, params = None, _params(args)
    env = [classes.growth_envelope(params, r, variant=args.variant) for r in args.radii]
    report = {"command": "growth", "variant": args.variant,
              "envelope": [{"r": e.r, "lower": e.lower, "upper": e.upper,
                            "tail_bound": e.tail_bound} for e in env]}
    code = EXIT_OK
    if f is not None:
        rep = classes.growth_check(f, params, radii=args.radii, angles=_grid_angles(),
                                   variant=args.variant)
        report["check"] = {"ok": rep.ok, "upper_slack": rep.upper_slack,
                           "lower_slack": rep.lower_slack,
                           "upper_witness": _c(rep.upper_witness),
                           "lower_witness": _c(rep.lower_witness)}
        code = EXIT_OK if rep.ok else EXIT_FAIL
    _emit(report)
    return code


def _radius_dict(res: radii.RadiusResult) -> dict:
    return {"value": res.value, "provenance": res.provenance, "bracket": list(res.bracket),
            "residual": res.residual, "case": res.case_tag, "whole_disk": res.whole_disk}


def cmd_radius(args) -> int:
    kind = args.kind
    if kind in ("r1", "r2"):
        res = radii.smallest_root(radii.radius_polynomial(kind, args.beta, args.variant))
    elif kind == "quarter":
        res = radii.radius_closed_form("quarter", _params(args), args.p, args.q)
    elif kind == "s22":
        res = radii.radius_closed_form("s22", _params(args))
    else:
        if not args.input or args.p is None or args.q is None:
            raise DocumentError("empirical radius needs --input, --p and --q")
        f, _ = load_mapping(args.input)
        res = radii.empirical_convexity_radius(f, args.p, args.q)
    _emit({"command": "radius", "kind": kind, **_radius_dict(res)})
    return EXIT_OK


def cmd_convolve(args) -> int:
    f, params = load_mapping(args.input)
    if args.hat:
        phi, _ = load_mapping(args.hat)
        out = convolve(f, phi.h, mode="hat")
    elif args.other:
        g, _ = load_mapping(args.other)
        out = convolve(f, g)
    else:
        raise DocumentError("convolve needs --other or --hat")
    grid = classes.grid_membership(out, params, angles=_grid_angles())
    _emit({"command": "convolve", "mapping": mapping_to_document(out, params),
           "grid": _membership_dict(grid)})
    return _verdict_code(grid.verdict)


def cmd_sections(args) -> int:
    f, params = load_mapping(args.input)
    s = section(f, args.p, args.q)
    report = {"command": "sections", "p": args.p, "q": args.q,
              "mapping": mapping_to_document(s, params)}
    try:
        report["known_radius"] = _radius_dict(radii.known_radius(args.p, args.q, params,
                                                                 args.variant))
    except HGFTError as exc:
        report["known_radius"] = None
        report["note"] = str(exc)
    _emit(report)
    return EXIT_OK


def cmd_extremal(args) -> int:
    params = _params(args)
    if args.n is not None:
        f = extremal.extremal_bn(args.n, params)
    else:
        f = extremal.extremal_full(params, args.order)
    _emit({"command": "extremal", "mapping": mapping_to_document(f, params)})
    return EXIT_OK


def cmd_generate(args) -> int:
    params = _params(args)
    f = generate_member(params, seed=args.seed, order=args.order)
    if args.out:
        save_mapping(f, params, args.out)
    _emit({"command": "generate", "seed": args.seed, "mapping": mapping_to_document(f, params)})
    return EXIT_OK


def cmd_hypergeo(args) -> int:
    op = args.op
    if op == "cond":
        cid = args.id
        cp = _params(args)
        if cid in hypergeo.CONDITIONS:
            rep = hypergeo.membership_condition(cid, hypergeo.HGParams(args.a, args.b, args.c), cp,
                                                form=args.form)
        else:
            rep = hypergeo.corollary_condition(cid, cp, m=args.m, c=args.c)
        _emit({"command": "hypergeo", "op": "cond", "id": rep.condition_id, "lhs": rep.lhs,
               "rhs": rep.rhs, "satisfied": rep.satisfied, "oracle_lhs": rep.oracle_lhs,
               "agrees": rep.agrees, "note": rep.note})
        return EXIT_OK if rep.satisfied else EXIT_FAIL
    hg = hypergeo.HGParams(args.a, args.b, args.c)
    report = {"command": "hypergeo", "op": op, "a": hg.a, "b": hg.b, "c": hg.c}
    if op == "coeffs":
        report["coeffs"] = [float(x.real) for x in hypergeo.f21_coeffs(hg, args.order).coeffs]
    elif op == "gauss":
        report["value"] = hypergeo.gauss_value(hg, args.method)
    elif op == "lemma":
        report["which"] = args.which
        report["closed"] = hypergeo.lemma61_sum(hg, args.which, "closed", args.form)
        report["series"] = hypergeo.lemma61_sum(hg, args.which, "series")
    elif op == "build":
        f = hypergeo.build_mapping(args.selector, hg, args.order)
        report["mapping"] = mapping_to_document(f, _params(args))
    _emit(report)
    return EXIT_OK


def cmd_plot_data(args) -> int:
    if args.input:
        f, _ = load_mapping(args.input)
    else:
        f = identity()
    emit_curves(f, args.radii, args.samples, args.out)
    _emit({"command": "plot-data", "out": args.out, "rows": len(args.radii) * args.samples})
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def _class_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=0.0)


def _radii_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad radius list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hgft", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="sampled class membership of a mapping document")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bounds", help="coefficient bounds of a mapping document")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("growth", help="growth envelope, optionally checked against a mapping")
    p.add_argument("--input")
    _class_args(p)
    p.add_argument("--radii", type=_radii_list, default=list(classes.DEFAULT_RADII))
    p.add_argument("--variant", choices=("corrected", "printed"), default="corrected")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("radius", help="convexity radius of sections")
    p.add_argument("--kind", required=True, choices=("quarter", "r1", "r2", "s22", "empirical"))
    _class_args(p)
    p.add_argument("--variant", choices=radii.R2_VARIANTS, default=radii.DEFAULT_R2_VARIANT)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--input")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("convolve", help="harmonic or hat convolution")
    p.add_argument("--input", required=True)
    p.add_argument("--other")
    p.add_argument("--hat", help="mapping document whose analytic part is phi")
    p.set_defaults(func=cmd_convolve)

    p = sub.add_parser("sections", help="partial sum s_{p,q} and its covering radius")
    p.add_argument("--input", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--variant", choices=radii.R2_VARIANTS, default=radii.DEFAULT_R2_VARIANT)
    p.set_defaults(func=cmd_sections)

    p = sub.add_parser("extremal", help="extremal mapping document")
    _class_args(p)
    p.add_argument("--n", type=int)
    p.add_argument("--order", type=int, default=64)
    p.set_defaults(func=cmd_extremal)

    p = sub.add_parser("generate", help="random member of the class")
    _class_args(p)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--order", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("hypergeo", help="hypergeometric tools")
    p.add_argument("op", choices=("coeffs", "gauss", "lemma", "build", "cond"))
    p.add_argument("--a", type=float, default=-2.0)
    p.add_argument("--b", type=float, default=-2.0)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--m", type=int, default=2)
    _class_args(p)
    p.add_argument("--order", type=int, default=16)
    p.add_argument("--method", choices=("gamma", "series"), default="gamma")
    p.add_argument("--which", choices=("i", "ii", "iii"), default="i")
    p.add_argument("--form", choices=("corrected", "printed"), default="corrected")
    p.add_argument("--selector", choices=("f1", "f2", "f3"), default="f1")
    p.add_argument("--id", choices=hypergeo.CONDITIONS + hypergeo.COROLLARIES, default="G3")
    p.set_defaults(func=cmd_hypergeo)

    p = sub.add_parser("plot-data", help="CSV images of concentric circles")
    p.add_argument("--input", help="mapping document (identity if omitted)")
    p.add_argument("--radii", type=_radii_list, default=[0.25, 0.5, 0.75])
    p.add_argument("--samples", type=int, default=360)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot_data)
    return parser


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except (HGFTError, ValueError, ArithmeticError) as exc:
        _emit({"command": args.command, "error": type(exc).__name__, "message": str(exc)})
        return EXIT_INVALID


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
