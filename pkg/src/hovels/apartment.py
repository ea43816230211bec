"""The bordered apartment: facade points, root evaluation with infinities, half-apartments,
enclosure traces, facet germs, the affine action and opposition."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import NotProjectable, NotTangentFacet
from .numbers import INF, NEG_INF, Extended, ceil_to_lattice, frac, parse_extended
from .roots import Root, RootSystem, WeylWord, enumerate_real_roots, is_finite_type
from .tits_cone import (Facet, act_facet, canonical_facet, enumerate_facets, geometric_name,
                        in_closure, is_spherical, levi_roots, opposite_facet, sign_on_roots,
                        span_contained)


def origin_facet(rs: RootSystem) -> Facet:
    return canonical_facet(rs, 1, (), range(rs.rank))


class ApartmentPoint:
    """A point [rep + direction] of the facade with the given direction."""

    __slots__ = ("rs", "direction", "rep", "_key")

    def __init__(self, rs: RootSystem, direction: Facet | None, rep: Sequence):
        self.rs = rs
        self.direction = direction if direction is not None else origin_facet(rs)
        self.rep = tuple(frac(x) for x in rep)
        if len(self.rep) != rs.rank:
            raise ValueError("rep has the wrong length")
        name = geometric_name(rs, self.direction)
        # coordinates on the quotient V / Vect(direction)
        vals = tuple(rs.root(rs.act_coords(name.word, rs.simple_root(j).coords))(self.rep)
                     for j in name.J)
        self._key = (name, vals)

    def __eq__(self, other):
        return isinstance(other, ApartmentPoint) and self.rs == other.rs and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"ApartmentPoint({self.direction}, {[str(x) for x in self.rep]})"

    def is_principal(self) -> bool:
        return len(self.direction.J) == self.rs.rank


def principal_point(rs: RootSystem, rep: Sequence) -> ApartmentPoint:
    return ApartmentPoint(rs, origin_facet(rs), rep)


def eval_root(alpha: Root, a: ApartmentPoint) -> Extended:
    s = sign_on_roots(a.rs, a.direction, alpha)
    if s > 0:
        return INF
    if s < 0:
        return NEG_INF
    return alpha(a.rep)


@dataclass(frozen=True)
class HalfApartment:
    """D(root, level) = {x : root(x) + level >= 0}; level INF means everything."""

    root: Root
    level: object

    def __repr__(self):
        return f"D({list(self.root.coords)}, {self.level})"


def contains(D: HalfApartment, a: ApartmentPoint) -> bool:
    if D.level is INF:
        return True
    v = eval_root(D.root, a)
    if v is INF:
        return True
    if v is NEG_INF or D.level is NEG_INF:
        return False
    return v + D.level >= 0


def project_point(a: ApartmentPoint, g: Facet) -> ApartmentPoint:
    if not span_contained(a.rs, a.direction, g):
        raise NotProjectable(f"Vect({a.direction}) is not inside Vect({g})")
    return ApartmentPoint(a.rs, g, a.rep)


# value sets

@dataclass(frozen=True)
class ValueSet:
    """Lambda = (1/m)Z, optionally clipped to the finite window {lo, ..., hi} (in Lambda units);
    m = None means all rationals."""

    m: Optional[int] = 1
    window: Optional[tuple] = None

    def level(self, need: Extended) -> Extended:
        """Least lambda in Lambda u {inf} with lambda >= need."""
        if need is INF:
            return INF
        if need is NEG_INF:
            return NEG_INF if self.window is None else frac(self.window[0])
        c = need if self.m is None else ceil_to_lattice(need, self.m)
        if self.window is not None:
            lo, hi = frac(self.window[0]), frac(self.window[1])
            if c > hi:
                return INF
            if c < lo:
                return lo
        return c

    def members(self) -> list:
        if self.window is None or self.m is None:
            raise ValueError("only windowed lattices are enumerable")
        lo, hi = frac(self.window[0]), frac(self.window[1])
        out, x = [], ceil_to_lattice(lo, self.m)
        while x <= hi:
            out.append(x)
            x += Fraction(1, self.m)
        return out


@dataclass(frozen=True)
class Cone:
    """The cone rep + direction, recorded symbolically inside a target facade."""

    rep: tuple
    direction: Facet


@dataclass(frozen=True)
class EnclosureTrace:
    target: Facet
    constraints: tuple
    empty: bool
    exact: bool
    points: tuple = field(default=())
    cones: tuple = field(default=())

    def contains(self, a: ApartmentPoint) -> bool:
        if self.empty or not same_facade(a.rs, a.direction, self.target):
            return False
        return all(contains(D, a) for D in self.constraints)


def same_facade(rs: RootSystem, f: Facet, g: Facet) -> bool:
    return geometric_name(rs, f) == geometric_name(rs, g)


def _item_need(rs: RootSystem, alpha: Root, item) -> Extended:
    """Lower bound on lambda forced by one accumulated point or cone."""
    if isinstance(item, ApartmentPoint):
        v = eval_root(alpha, item)
        if v is INF:
            return NEG_INF
        if v is NEG_INF:
            return INF
        return -v
    s = sign_on_roots(rs, item.direction, alpha)
    if s < 0:
        return INF
    if s > 0:
        # the preimage may be moved arbitrarily far along the cone direction
        return NEG_INF
    return -alpha(item.rep)


def enclosure_trace(omega: Iterable[ApartmentPoint], target: Facet, values: ValueSet | None = None,
                    root_bound: int = 6, word_bound: int = 6) -> EnclosureTrace:
    """Cl(Omega) intersected with the facade of direction target, as minimal half-apartments."""
    pts = list(omega)
    if not pts:
        raise ValueError("Omega must be nonempty")
    rs = pts[0].rs
    values = values or ValueSet()
    finite = is_finite_type(rs, range(rs.rank))
    roots = enumerate_real_roots(rs, root_bound)
    dirs = {geometric_name(rs, p.direction) for p in pts}
    # directional enclosure: roots >= 0 on every direction met by Omega
    vcons = [r for r in roots if all(sign_on_roots(rs, d, r) >= 0 for d in dirs)]
    dfacets = [h for h in enumerate_facets(rs, word_bound)
               if all(sign_on_roots(rs, h, r) >= 0 for r in vcons)]
    # operation 1: projections of Omega into the facades of the directional enclosure
    acc: list = list(pts)
    for b in pts:
        for h in dfacets:
            if span_contained(rs, b.direction, h):
                q = ApartmentPoint(rs, h, b.rep)
                if q not in acc:
                    acc.append(q)
    # operation 2: cones b + g into the target facade, canonical preimage rep = b.rep
    cones = []
    for b in acc:
        g = b.direction
        if span_contained(rs, target, g) and not same_facade(rs, g, target):
            c = Cone(b.rep, g)
            if c not in cones:
                cones.append(c)
    items = acc + cones
    empty = False
    constraints = []
    for alpha in roots:
        s = sign_on_roots(rs, target, alpha)
        if s > 0:
            continue
        need = max((_item_need(rs, alpha, it) for it in items if not isinstance(it, Cone) or s == 0),
                   default=NEG_INF)
        lam = values.level(need)
        if s < 0:
            # alpha is -inf on the target facade: any finite admissible level excludes it
            if lam is not INF:
                empty = True
            continue
        if lam is NEG_INF:
            empty = True
            continue
        if lam is not INF:
            constraints.append(HalfApartment(alpha, lam))
    exact = finite or (is_spherical(rs, target) and _levi_enumerated(rs, target, roots))
    in_target = tuple(p for p in acc if same_facade(rs, p.direction, target))
    return EnclosureTrace(target, tuple(constraints), empty, exact, in_target, tuple(cones))


def _levi_enumerated(rs: RootSystem, f: Facet, roots) -> bool:
    have = {r.coords for r in roots}
    return all(r.coords in have for r in levi_roots(rs, f))


# germs

@dataclass(frozen=True)
class FacetGerm:
    base: ApartmentPoint
    direction: Facet


def germ_facet(x: ApartmentPoint, F: Facet) -> FacetGerm:
    if not in_closure(x.rs, x.direction, F):
        raise NotTangentFacet(f"{F} does not contain the direction {x.direction} in its closure")
    return FacetGerm(x, F)


def germ_member(germ: FacetGerm, constraints: Iterable[HalfApartment]) -> bool:
    """True iff every constraint contains x + eps * (interior of F) for all small eps > 0."""
    x, F = germ.base, germ.direction
    for D in constraints:
        if D.level is INF:
            continue
        v = eval_root(D.root, x)
        if v is INF:
            continue
        if v is NEG_INF:
            return False
        t = v + D.level
        if t > 0:
            continue
        if t < 0 or sign_on_roots(x.rs, F, D.root) < 0:
            return False
    return True


# affine action

@dataclass(frozen=True)
class AffineAuto:
    """x -> linear . x + translation on the principal facade, extended to every facade."""

    linear: WeylWord
    translation: tuple

    def __repr__(self):
        return f"AffineAuto({list(self.linear.letters)}, {[str(x) for x in self.translation]})"


def reflection_word(rs: RootSystem, alpha: Root) -> WeylWord:
    """A word for r_alpha: conjugate of the simple reflection by the witness."""
    r = rs.root(alpha.coords)
    return r.witness * WeylWord((r.simple,)) * r.witness.inverse()


def identity_auto(rs: RootSystem) -> AffineAuto:
    return AffineAuto(WeylWord(), tuple(Fraction(0) for _ in range(rs.rank)))


def nu_reflection(rs: RootSystem, alpha: Root, lam) -> AffineAuto:
    lam = frac(lam)
    cv = rs.coroot(alpha)
    return AffineAuto(reflection_word(rs, alpha), tuple(-lam * c for c in cv))


def nu_translation(rs: RootSystem, v: Sequence) -> AffineAuto:
    return AffineAuto(WeylWord(), tuple(frac(x) for x in v))


def compose(rs: RootSystem, m1: AffineAuto, m2: AffineAuto) -> AffineAuto:
    """m1 o m2."""
    wt = rs.act_vector(m1.linear, m2.translation)
    return AffineAuto(m1.linear * m2.linear, tuple(a + b for a, b in zip(m1.translation, wt)))


def inverse_auto(rs: RootSystem, m: AffineAuto) -> AffineAuto:
    winv = m.linear.inverse()
    t = rs.act_vector(winv, m.translation)
    return AffineAuto(winv, tuple(-x for x in t))


def auto_equal(rs: RootSystem, m1: AffineAuto, m2: AffineAuto) -> bool:
    if tuple(m1.translation) != tuple(m2.translation):
        return False
    rho = tuple(Fraction(1) for _ in range(rs.rank))
    return rs.act_vector(m1.linear, rho) == rs.act_vector(m2.linear, rho)


def apply(m: AffineAuto, a: ApartmentPoint) -> ApartmentPoint:
    rs = a.rs
    rep = rs.act_vector(m.linear, a.rep)
    rep = tuple(x + t for x, t in zip(rep, m.translation))
    return ApartmentPoint(rs, act_facet(rs, m.linear, a.direction), rep)


def apply_half(rs: RootSystem, m: AffineAuto, D: HalfApartment) -> HalfApartment:
    """Image of D(alpha, lam) is D(w alpha, lam - (w alpha)(t))."""
    wa = rs.act_root(m.linear, D.root)
    wa = rs.root(wa.coords)
    if D.level is INF:
        return HalfApartment(wa, INF)
    return HalfApartment(wa, D.level - wa(m.translation))


def opposition(a: ApartmentPoint) -> ApartmentPoint:
    return ApartmentPoint(a.rs, opposite_facet(a.rs, a.direction), a.rep)


def parse_level(x) -> Extended:
    return parse_extended(x)
