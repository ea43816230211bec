"""JSON documents for root systems, facets, points, constraints, group elements and descent data.
All numbers travel as exact "p/q" strings."""
from __future__ import annotations

from fractions import Fraction
from typing import Any

from .apartment import ApartmentPoint, HalfApartment, origin_facet
from .descent import DescentData
from .errors import InputError
from .groups import GroupElement, RootLetter, TorusLetter, ValuedRootDatum, instantiate
from .numbers import INF, NEG_INF, Laurent, fmt, frac, parse_extended
from .parahoric import HovelPoint
from .roots import Root, RootSystem, WeylWord, build_root_system
from .tits_cone import Facet, canonical_facet


def num(x) -> str:
    return fmt(x)


def parse_num(x) -> Fraction:
    if isinstance(x, bool):
        raise InputError("booleans are not numbers")
    if isinstance(x, float):
        raise InputError("floating point input is not accepted; use 'p/q' strings")
    try:
        return frac(x)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError(f"bad number {x!r}") from e


def parse_level(x):
    try:
        return parse_extended(x)
    except (TypeError, ValueError) as e:
        raise InputError(f"bad level {x!r}") from e


def root_system_from(doc: dict) -> RootSystem:
    if "cartan" not in doc:
        raise InputError("missing 'cartan'")
    cartan = doc["cartan"]
    if not all(isinstance(x, int) and not isinstance(x, bool) for row in cartan for x in row):
        raise InputError("Cartan entries must be integers")
    return build_root_system(cartan)


def root_to(r: Root) -> list:
    return list(r.coords)


def facet_to(f: Facet) -> dict:
    return {"sign": "+" if f.sign > 0 else "-", "word": list(f.word.letters), "J": list(f.J)}


def facet_from(rs: RootSystem, doc) -> Facet:
    if doc is None:
        return origin_facet(rs)
    sign = doc.get("sign", "+")
    sign = {"+": 1, "-": -1, 1: 1, -1: -1}.get(sign)
    if sign is None:
        raise InputError("facet sign must be '+' or '-'")
    try:
        return canonical_facet(rs, sign, WeylWord(tuple(doc.get("word", []))), tuple(doc.get("J", [])))
    except ValueError as e:
        raise InputError(str(e)) from e


def point_to(a: ApartmentPoint) -> dict:
    return {"direction": facet_to(a.direction), "rep": [num(x) for x in a.rep]}


def point_from(rs: RootSystem, doc) -> ApartmentPoint:
    if isinstance(doc, list):
        doc = {"rep": doc}
    rep = [parse_num(x) for x in doc["rep"]]
    if len(rep) != rs.rank:
        raise InputError("point has the wrong number of coordinates")
    return ApartmentPoint(rs, facet_from(rs, doc.get("direction")), rep)


def constraint_to(D: HalfApartment) -> dict:
    return {"root": root_to(D.root), "level": num(D.level)}


def constraint_from(rs: RootSystem, doc) -> HalfApartment:
    return HalfApartment(rs.root(tuple(doc["root"])), parse_level(doc["level"]))


def group_from(doc: dict) -> ValuedRootDatum:
    tag = doc.get("group", "SL2")
    p = doc.get("p", 2)
    m = doc.get("m", 1)
    if tag not in ("SL2", "SL3", "LoopSL2"):
        raise InputError(f"unknown group {tag!r}")
    return instantiate(tag, p, m)


def letters_from(vrd: ValuedRootDatum, doc: list) -> list:
    out = []
    if not isinstance(doc, list):
        raise InputError("a group element is a list of letters")
    for item in doc:
        if "u" in item:
            u = item["u"]
            root = tuple(int(c) for c in u["root"])
            param = u["param"]
            if isinstance(param, dict):
                if not vrd.loop:
                    raise InputError("Laurent parameters need the loop group")
                a0, a1 = root
                step = a1 - a0
                for n, c in sorted(((int(k), parse_num(v)) for k, v in param["coeffs"].items())):
                    out.append(RootLetter((a0 + n, a0 + n + step), c))
            else:
                out.append(RootLetter(root, parse_num(param)))
        elif "t" in item:
            out.append(TorusLetter(tuple(parse_num(x) for x in item["t"]["diag"])))
        elif "matrix" in item:
            m = vrd.from_matrix([[_entry_from(vrd, x) for x in row] for row in item["matrix"]])
            out.extend(m.word)
        else:
            raise InputError(f"unknown letter {item!r}")
    return out


def _entry_from(vrd: ValuedRootDatum, x):
    if isinstance(x, dict):
        return Laurent({int(k): parse_num(v) for k, v in x["coeffs"].items()})
    return Laurent.const(parse_num(x)) if vrd.loop else parse_num(x)


def element_from(vrd: ValuedRootDatum, doc: list) -> GroupElement:
    try:
        return vrd.element(letters_from(vrd, doc))
    except (KeyError, TypeError) as e:
        raise InputError(f"bad group element: {e}") from e


def entry_to(x) -> Any:
    if isinstance(x, Laurent):
        return {"coeffs": {str(e): num(c) for e, c in x.items()}}
    return num(x)


def matrix_to(m: tuple) -> list:
    return [[entry_to(x) for x in row] for row in m]


def letter_to(l) -> dict:
    if isinstance(l, RootLetter):
        return {"u": {"root": list(l.root), "param": num(l.param)}}
    if isinstance(l, TorusLetter):
        return {"t": {"diag": [num(x) for x in l.diag]}}
    return {"matrix": matrix_to(l.matrix), "label": l.label}


def element_to(g: GroupElement) -> dict:
    return {"word": [letter_to(l) for l in g.word], "matrix": matrix_to(g.matrix)}


def hovel_point_from(vrd: ValuedRootDatum, doc: dict) -> HovelPoint:
    return HovelPoint(element_from(vrd, doc.get("g", [])), point_from(vrd.rs, doc["a"]))


def hovel_point_to(x: HovelPoint) -> dict:
    return {"g": [letter_to(l) for l in x.g.word], "a": point_to(x.a)}


def descent_from(doc: dict) -> DescentData:
    rs = root_system_from(doc)
    gens = []
    for g in doc.get("generators", []):
        omega = {int(k): parse_num(v) for k, v in g.get("omega", {}).items()}
        gens.append((g["perm"], [omega.get(i, Fraction(0)) for i in range(rs.rank)]))
    return DescentData.build(rs, gens)


def jsonable(x) -> Any:
    """Best-effort conversion of results to JSON values with exact numbers."""
    from enum import Enum
    if isinstance(x, bool) or isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return num(x)
    if x is INF or x is NEG_INF:
        return num(x)
    if isinstance(x, Enum):
        return x.value
    if isinstance(x, Root):
        return root_to(x)
    if isinstance(x, Facet):
        return facet_to(x)
    if isinstance(x, ApartmentPoint):
        return point_to(x)
    if isinstance(x, HalfApartment):
        return constraint_to(x)
    if isinstance(x, GroupElement):
        return element_to(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        return [jsonable(v) for v in x]
    if x is None or isinstance(x, (str, bool)):
        return x
    return repr(x)
