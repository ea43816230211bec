"""Command line entry point: one subcommand per run, JSON reports on stdout (DOT for export-tree).

Exit codes: 0 success, 1 check failures, 2 input errors, 3 outcome dominated by Unknown."""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from . import serialization as ser
from .apartment import ValueSet, enclosure_trace
from .axioms import check_root_datum_axioms, check_valuation_axioms
from .decompositions import bruhat_birkhoff, iwasawa, rank1_decompose, verify_n_uniqueness
from .descent import (check_descended_valuation, check_descent_conditions, descend_valuation,
                      restrict_roots, validate_descent)
from .errors import HovelError, InputError
from .fixators import Membership, fixator_membership
from .parahoric import PARA_CONDITIONS, Equality, check_para_axioms, hovel_equal, parse_family
from .roots import enumerate_real_roots, is_finite_type
from .tits_cone import facet_dimension, geometric_name, is_spherical, project_facet
from .tree import export_tree

OK, FAILED, BAD_INPUT, UNKNOWN = 0, 1, 2, 3

A2_SWAP = {"cartan": [[2, -1], [-1, 2]], "generators": [{"perm": [1, 0], "omega": {"0": "0", "1": "0"}}]}


class Outcome:
    def __init__(self, body: dict, code: int = OK):
        self.body, self.code = body, code


def _load_doc(args) -> dict:
    if args.json is not None:
        text = args.json
    elif args.input is not None:
        text = sys.stdin.read() if args.input == "-" else Path(args.input).read_text()
    else:
        return {}
    try:
        doc = json.loads(text, parse_float=lambda s: float(s))
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise InputError("the input document must be a JSON object")
    return doc


def _group(args, doc: dict):
    tag = doc.get("group", args.group)
    p = doc.get("p", args.p)
    m = doc.get("m", args.m)
    return ser.group_from({"group": tag, "p": p, "m": m})


def _membership_code(values) -> int:
    values = list(values)
    if any(v is Membership.OUT for v in values):
        return FAILED
    if any(v is Membership.UNKNOWN for v in values):
        return UNKNOWN
    return OK


def cmd_roots(args, doc: dict) -> Outcome:
    rs = ser.root_system_from(doc)
    roots = enumerate_real_roots(rs, args.height)
    return Outcome({"rank": rs.rank, "finite_type": is_finite_type(rs, range(rs.rank)), "height_bound": args.height,
                    "count": len(roots), "roots": [ser.root_to(r) for r in roots]})


def cmd_facet(args, doc: dict) -> Outcome:
    rs = ser.root_system_from(doc)
    if "facet" not in doc:
        raise InputError("missing 'facet'")
    f = ser.facet_from(rs, doc["facet"])
    body = {"facet": ser.facet_to(f), "geometric": ser.facet_to(geometric_name(rs, f)),
            "spherical": is_spherical(rs, f), "dimension": facet_dimension(f, rs.rank)}
    if "project" in doc:
        g = ser.facet_from(rs, doc["project"])
        body["projection"] = ser.facet_to(project_facet(rs, f, g))
    return Outcome(body)


def cmd_enclose(args, doc: dict) -> Outcome:
    rs = ser.root_system_from(doc)
    pts = [ser.point_from(rs, x) for x in doc.get("points", [])]
    if not pts:
        raise InputError("'points' must be a nonempty list")
    target = ser.facet_from(rs, doc["target"]) if "target" in doc else pts[0].direction
    trace = enclosure_trace(pts, target, ValueSet(doc.get("m", args.m)), root_bound=args.root_bound)
    return Outcome({"target": ser.facet_to(trace.target), "empty": trace.empty, "exact": trace.exact,
                    "constraints": [ser.constraint_to(D) for D in trace.constraints]})


def cmd_decompose(args, doc: dict) -> Outcome:
    vrd = _group(args, doc)
    rs = vrd.rs
    g = ser.element_from(vrd, doc.get("g", []))
    F = ser.point_from(rs, doc["F"]) if "F" in doc else ser.point_from(rs, ["0"] * rs.rank)
    C = ser.facet_from(rs, doc["C"]) if "C" in doc else None
    if args.mode == "iwasawa":
        t = iwasawa(vrd, g, C, F, budget=args.budget)
        mem = fixator_membership(vrd, F, t.q)
        body = {"u": ser.element_to(t.u), "n": ser.element_to(t.n), "q": ser.element_to(t.q),
                "q_fixes_F": mem.value,
                "certificate": [{"rule": rule, "letter": letter} for rule, letter in t.certificate]}
        return Outcome(body, _membership_code([mem]))
    if args.mode == "rank1":
        u, n, q = rank1_decompose(vrd, g, F)
        mem = fixator_membership(vrd, F, q)
        return Outcome({"u": ser.element_to(u), "n": ser.element_to(n), "q": ser.element_to(q),
                        "q_fixes_F": mem.value}, _membership_code([mem]))
    if args.mode == "bruhat":
        F2 = ser.point_from(rs, doc["F2"]) if "F2" in doc else F
        q1, n, q2 = bruhat_birkhoff(vrd, g, F, F2)
        m1, m2 = fixator_membership(vrd, F, q1), fixator_membership(vrd, F2, q2)
        return Outcome({"q1": ser.element_to(q1), "n": ser.element_to(n), "q2": ser.element_to(q2),
                        "q1_fixes_F1": m1.value, "q2_fixes_F2": m2.value}, _membership_code([m1, m2]))
    rep = verify_n_uniqueness(vrd, g, C, F, trials=args.samples, seed=args.seed)
    return Outcome({"trials": rep.trials, "failures": rep.failures, "seed": rep.seed, "passed": rep.passed},
                   OK if rep.passed else FAILED)


def _report_outcome(reports: list) -> Outcome:
    body = {"reports": [r.to_dict() for r in reports]}
    return Outcome(body, OK if all(r.passed for r in reports) else FAILED)


def cmd_check_axioms(args, doc: dict) -> Outcome:
    if args.suite == "descent":
        dd = ser.descent_from(doc or A2_SWAP)
        validate_descent(dd)
        vrd = _group(args, {**doc, "group": doc.get("group", "SL3")})
        reports = [check_descent_conditions(dd),
                   check_descended_valuation(dd, vrd, samples=args.samples, seed=args.seed)]
        return _report_outcome(reports)
    vrd = _group(args, doc)
    if args.suite == "valuation":
        return _report_outcome([check_valuation_axioms(vrd, args.samples, args.seed)])
    if args.suite == "root-datum":
        return _report_outcome([check_root_datum_axioms(vrd, args.samples, args.seed)])
    which = tuple(w.strip() for w in args.which.split(",") if w.strip()) if args.which else PARA_CONDITIONS
    bad = [w for w in which if w not in PARA_CONDITIONS]
    if bad:
        raise InputError(f"unknown conditions {bad}; choose from {list(PARA_CONDITIONS)}")
    try:
        family = parse_family(args.family)
    except ValueError as e:
        raise InputError(str(e)) from e
    return _report_outcome([check_para_axioms(vrd, family, which, args.samples, args.seed)])


def cmd_hovel_eq(args, doc: dict) -> Outcome:
    vrd = _group(args, doc)
    if "x" not in doc or "y" not in doc:
        raise InputError("hovel-eq needs hovel points 'x' and 'y'")
    x, y = ser.hovel_point_from(vrd, doc["x"]), ser.hovel_point_from(vrd, doc["y"])
    try:
        family = parse_family(doc.get("family", args.family))
    except ValueError as e:
        raise InputError(str(e)) from e
    res = hovel_equal(vrd, x, y, family)
    body = {"verdict": res.verdict.value,
            "witness": ser.element_to(res.witness) if res.witness is not None else None}
    return Outcome(body, UNKNOWN if res.verdict is Equality.UNKNOWN else OK)


def cmd_descend(args, doc: dict) -> Outcome:
    dd = ser.descent_from(doc or A2_SWAP)
    rep = validate_descent(dd)
    rrs = restrict_roots(dd, args.root_bound)
    body = {"valid": rep.valid, "group_order": rep.group_order, "non_reduced": rrs.non_reduced,
            "provisional": rrs.provisional,
            "restricted_roots": [[ser.num(x) for x in r.vector] for r in rrs.roots]}
    if "u" in doc:
        if "root" not in doc:
            raise InputError("descending a value needs the restricted 'root'")
        vrd = _group(args, {**doc, "group": doc.get("group", "SL3")})
        a = tuple(ser.parse_num(x) for x in doc["root"])
        u = ser.element_from(vrd, doc["u"])
        body["value"] = ser.num(descend_valuation(dd, vrd, a, u))
    return Outcome(body)


COMMANDS = {"roots": cmd_roots, "facet": cmd_facet, "enclose": cmd_enclose, "decompose": cmd_decompose,
            "check-axioms": cmd_check_axioms, "hovel-eq": cmd_hovel_eq, "descend": cmd_descend}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hovels", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"hovels {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        src = p.add_mutually_exclusive_group()
        src.add_argument("--input", "-i", help="input document path ('-' for stdin)")
        src.add_argument("--json", help="inline input document")
        p.add_argument("--group", default="SL2", choices=["SL2", "SL3", "LoopSL2"])
        p.add_argument("--p", type=int, default=2, help="prime")
        p.add_argument("--m", type=int, default=1, help="value lattice (1/m)Z")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=100)
        p.add_argument("--budget", type=int, default=10000)
        p.add_argument("--root-bound", type=int, default=6)
        p.add_argument("--height", type=int, default=6, help="root height bound")

    for name in COMMANDS:
        p = sub.add_parser(name)
        common(p)
        if name == "decompose":
            p.add_argument("--mode", default="iwasawa", choices=["iwasawa", "bruhat", "rank1", "uniqueness"])
        if name == "check-axioms":
            p.add_argument("--suite", default="para", choices=["valuation", "root-datum", "para", "descent"])
            p.add_argument("--which", default=None, help="comma separated para conditions")
        if name in ("check-axioms", "hovel-eq"):
            p.add_argument("--family", default="minimal")
    p = sub.add_parser("export-tree")
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--output", "-o", help="write DOT here instead of stdout")
    return parser


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("json", "input")} | {
        "input": args.input, "inline": args.json is not None}


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return BAD_INPUT if e.code not in (0, None) else OK
    random.seed(0)
    if args.command == "export-tree":
        try:
            dot = export_tree(args.p, args.radius)
        except (HovelError, ValueError) as e:
            _emit({"version": __version__, "error": type(e).__name__, "message": str(e)})
            return BAD_INPUT
        header = f"// hovels {__version__} export-tree p={args.p} radius={args.radius}\n"
        if args.output:
            Path(args.output).write_text(header + dot)
        else:
            sys.stdout.write(header + dot)
        return OK
    try:
        doc = _load_doc(args)
        out = COMMANDS[args.command](args, doc)
    except (HovelError, KeyError, TypeError, ValueError, OSError) as e:
        _emit({"version": __version__, "command": args.command, "config": _config(args),
               "error": type(e).__name__, "message": str(e)})
        return BAD_INPUT
    _emit({"version": __version__, "command": args.command, "config": _config(args),
           "exit_code": out.code, "result": ser.jsonable(out.body)})
    return out.code


if __name__ == "__main__":
    sys.exit(main())
