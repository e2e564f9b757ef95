"""Command-line interface: ``mcdeform <command> ...``.

Exit codes: 0 ok, 1 an input failed validation, 2 engine error, 3 parse error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from . import sparse
from .artin import ArtinianLocalDGA, validate_artinian
from .deform import classify_first_order, counterexample_demo
from .deligne import forms_host, gauge_path, nerve_member
from .dgla import DGLA, end_dgla, tensor_dgla, validate_dgla
from .errors import MCDeformError, ParseError
from .forms import DEFAULT_DEGREE_BOUND
from .graded import ChainComplex, validate_complex
from .mc import Found, curvature, gauge_act, gauge_equivalent, lift_mc, mc_solve_square_zero
from .schema import (SCHEMA, dumps_report, element_json, forms_element_json, forms_element_text,
                     load_document, parse_element_arg, parse_simplex_arg)

EXIT_OK, EXIT_INVALID, EXIT_ENGINE, EXIT_PARSE = 0, 1, 2, 3


class InvalidInput(Exception):
    def __init__(self, path, report):
        super().__init__(path)
        self.path = path
        self.report = report


def _validate(obj):
    if isinstance(obj, DGLA):
        return "dgla", validate_dgla(obj)
    if isinstance(obj, ArtinianLocalDGA):
        return "artinian", validate_artinian(obj)
    return "complex", validate_complex(obj)


def _report_json(report):
    return {"valid": report.valid, "axiom": report.axiom,
            "witness": [str(w) for w in report.witness], "detail": report.detail}


def _load_valid(path, want):
    obj = load_document(path)
    kind, report = _validate(obj)
    if kind not in want:
        raise ParseError(f"{path}: expected a document of kind {' or '.join(want)}, got {kind}")
    if not report:
        raise InvalidInput(path, report)
    return obj


def _host(args):
    g = _load_valid(args.g, ("dgla", "complex"))
    if isinstance(g, ChainComplex):
        g = end_dgla(g)
    R = _load_valid(args.R, ("artinian",))
    return tensor_dgla(R.maximal_ideal(), g)


# ---------------------------------------------------------------- commands

def cmd_validate(args):
    obj = load_document(args.file)
    kind, report = _validate(obj)
    payload = {"kind": kind, **_report_json(report)}
    return ("ok" if report else "fail"), payload


def cmd_mc(args):
    host = _host(args)
    if args.check is not None:
        z = parse_element_arg(args.check, host, "z")
        curv = curvature(host, z)
        return "ok", {"mode": "check", "is_mc": not curv, "curvature": element_json(host, curv)}
    if args.solve_square_zero:
        basis = mc_solve_square_zero(host)
        return "ok", {"mode": "solve-square-zero", "dimension": len(basis),
                      "basis": [element_json(host, v) for v in basis]}
    if args.start is None:
        raise MCDeformError("--lift-order needs a starting element via --from")
    z = parse_element_arg(args.start, host, "from")
    result = lift_mc(host, z, args.lift_order)
    steps = [{"order": s.order, "obstructed": s.obstructed, "closed": s.closed,
              "obstruction": element_json(host, s.obstruction),
              "correction": element_json(host, s.correction),
              "lifted": None if s.lifted is None else element_json(host, s.lifted)}
             for s in result.steps]
    return "ok", {"mode": "lift", "order": args.lift_order, "steps": steps,
                  "obstructed": result.obstructed, "element": element_json(host, result.element),
                  "is_mc": not curvature(host, result.element)}


def cmd_gauge(args):
    host = _host(args)
    z = parse_element_arg(args.z, host, "z")
    z2 = parse_element_arg(args.z2, host, "z'")
    for name, x in (("z", z), ("z'", z2)):
        if curvature(host, x):
            raise MCDeformError(f"{name} is not Maurer-Cartan")
    result = gauge_equivalent(host, z, z2)
    if isinstance(result, Found):
        image = gauge_act(host, result.gamma, z)
        return "ok", {"found": True, "gamma": element_json(host, result.gamma),
                      "verification": {"image": element_json(host, image),
                                       "matches": not sparse.sub(image, z2)}}
    return "ok", {"found": False, "not_found_at_order": result.order,
                  "complete": host.coeffs.is_square_zero()}


def cmd_nerve(args):
    h = _host(args)
    if args.path is not None:
        z = parse_element_arg(args.path[0], h, "z")
        gamma = parse_element_arg(args.path[1], h, "gamma")
        simplex = gauge_path(h, z, gamma, args.degree_bound)
        return "ok", {"mode": "path", "member": True, "degenerate": not gamma,
                      "simplex": forms_element_json(h, simplex.element, 1),
                      "simplex_text": forms_element_text(h, simplex.element, 1),
                      "face_0": element_json(h, _at_vertex(simplex.face(0))),
                      "face_1": element_json(h, _at_vertex(simplex.face(1)))}
    n, Z = parse_simplex_arg(args.member, h, "Z")
    host = forms_host(n, h, args.degree_bound)
    verdict = nerve_member(host, Z)
    witness = None
    if verdict.witness is not None:
        mono, lab, c = verdict.witness
        witness = {"monomial": mono, "component": lab, "coefficient": str(c)}
    return "ok", {"mode": "member", "n": n, "member": verdict.member, "witness": witness}


def _at_vertex(Z0):
    return {x: c for (_, x), c in Z0.items()}


def cmd_deform(args):
    if args.counterexample is not None:
        report = counterexample_demo(args.counterexample)
        return "ok", {"mode": "counterexample", **report.as_dict()}
    if args.A is None:
        raise ParseError("deform --classify needs a complex document")
    A = _load_valid(args.A, ("complex",))
    cls = classify_first_order(A)
    E = end_dgla(A)
    return "ok", {"mode": "classify", "dimension": cls.dimension, "h1_end": cls.h1_end,
                  "representatives": [element_json(E, r) for r in cls.representatives],
                  "statement": cls.statement}


# ---------------------------------------------------------------- driver

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS, help="write the report to this file")
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="include wall time (makes reports non-reproducible)")

    p = argparse.ArgumentParser(prog="mcdeform", description="Maurer-Cartan and deformation computations over Q")
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--timing", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check the axioms of an input document")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate, inputs=("file",))

    s = sub.add_parser("mc", parents=[common], help="Maurer-Cartan checks, square-zero solving, lifting")
    s.add_argument("g")
    s.add_argument("R")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check", metavar="Z")
    mode.add_argument("--solve-square-zero", action="store_true")
    mode.add_argument("--lift-order", type=int, metavar="K")
    s.add_argument("--from", dest="start", metavar="Z", help="starting element for --lift-order")
    s.set_defaults(func=cmd_mc, inputs=("g", "R"))

    s = sub.add_parser("gauge", parents=[common], help="search a gauge equivalence z -> z'")
    s.add_argument("g")
    s.add_argument("R")
    s.add_argument("z")
    s.add_argument("z2", metavar="z'")
    s.set_defaults(func=cmd_gauge, inputs=("g", "R"))

    s = sub.add_parser("nerve", parents=[common], help="gauge paths and nerve membership")
    s.add_argument("g")
    s.add_argument("R")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--path", nargs=2, metavar=("Z", "GAMMA"))
    mode.add_argument("--member", metavar="SIMPLEX")
    s.add_argument("--degree-bound", type=int, default=DEFAULT_DEGREE_BOUND)
    s.set_defaults(func=cmd_nerve, inputs=("g", "R"))

    s = sub.add_parser("deform", parents=[common], help="deformations of a complex")
    s.add_argument("A", nargs="?")
    mode = s.add_mutually_exclusive_group(required=True)
    mode.add_argument("--classify", action="store_true")
    mode.add_argument("--counterexample", type=int, metavar="N")
    s.set_defaults(func=cmd_deform, inputs=("A",))
    return p


def _echo(args):
    skip = {"func", "inputs", "command", "out", "format", "timing"}
    inputs = [os.path.basename(getattr(args, k)) for k in args.inputs if getattr(args, k, None)]
    options = {k: v for k, v in sorted(vars(args).items())
               if k not in skip and k not in args.inputs and v not in (None, False)}
    return {"name": args.command, "inputs": inputs, "options": options}


def run(argv=None):
    """Execute a command; returns (exit code, report dict, args)."""
    args = build_parser().parse_args(argv)
    report = {"schema": SCHEMA, "command": _echo(args)}
    start = time.perf_counter()
    try:
        status, payload = args.func(args)
        report.update(status=status, payload=payload)
        code = EXIT_OK if status == "ok" else EXIT_INVALID
    except ParseError as exc:
        report.update(status="error", error={"type": "ParseError", "message": exc.args[0],
                                             "line": exc.line, "column": exc.column})
        code = EXIT_PARSE
    except InvalidInput as exc:
        report.update(status="fail", error={"type": "InvalidInput", "input": os.path.basename(exc.path),
                                            **_report_json(exc.report)})
        code = EXIT_INVALID
    except (MCDeformError, ValueError) as exc:
        report.update(status="error", error={"type": type(exc).__name__, "message": str(exc)})
        code = EXIT_ENGINE
    if args.timing:
        report["wall_time_s"] = round(time.perf_counter() - start, 6)
    return code, report, args


def main(argv=None):
    code, report, args = run(argv)
    text = dumps_report(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
