"""Parahoric families, the hovel I(Q) = G x A / ~Q with point equality and projections, fixed sets
of unipotent elements, and sampled (para x) checks."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .apartment import (ApartmentPoint, HalfApartment, enclosure_trace, eval_root, identity_auto,
                        principal_point, project_point)
from .axioms import CheckResult, Report
from .errors import NotGrignotant, NotProjectable, RootBoundTooSmall, UnsupportedLetter
from .fixators import (Membership, _loop_pattern_ok, as_point, epsilon_coords, fixator_membership,
                       fixes_point_monomial, weyl_lift_letters)
from .groups import GroupElement, MatrixLetter, RootLetter, TorusLetter, ValuedRootDatum, is_monomial
from .numbers import INF, NEG_INF, ceil_to_lattice
from .roots import WeylWord, is_finite_type
from .tits_cone import (Facet, _parabolic_elements, canonical_facet, enumerate_facets, geometric_name,
                        in_closure, in_span, is_spherical, sample_point, sign_on_roots)


class FamilyTag(Enum):
    MINIMAL = "Minimal"
    R_FAMILY = "RFamily"
    MAXIMAL = "Maximal"


@dataclass(frozen=True)
class ParahoricFamily:
    tag: FamilyTag = FamilyTag.MINIMAL
    sign: int = 1  # chamber sign for the R family


MINIMAL = ParahoricFamily(FamilyTag.MINIMAL)
MAXIMAL = ParahoricFamily(FamilyTag.MAXIMAL)


def parse_family(name: str) -> ParahoricFamily:
    key = name.strip().lower()
    if key == "minimal":
        return MINIMAL
    if key == "maximal":
        return MAXIMAL
    if key in ("r", "rfamily", "r-family", "r+"):
        return ParahoricFamily(FamilyTag.R_FAMILY, 1)
    if key == "r-":
        return ParahoricFamily(FamilyTag.R_FAMILY, -1)
    raise ValueError(f"unknown family {name!r}")


# generators of the minimal family

@dataclass(frozen=True)
class Generator:
    kind: str  # "root", "root-group", "reflection", "torus"
    root: Optional[tuple]
    threshold: object  # least valuation allowed, NEG_INF for a whole root group
    element: GroupElement


def _unit(vrd: ValuedRootDatum) -> Fraction:
    return Fraction(1 + vrd.p)


def minimal_generators(vrd: ValuedRootDatum, a, root_bound: int = 2) -> list:
    """Generators of P(a) = <U(f_a), N(a), U_alpha(a)>."""
    if root_bound < 1:
        raise RootBoundTooSmall("root_bound must be at least 1")
    a = as_point(a)
    rs = vrd.rs
    p = vrd.p
    roots = vrd.roots(root_bound) if vrd.loop else vrd.roots()
    out = []
    for al in roots:
        v = eval_root(al, a)
        if v is NEG_INF:
            continue
        if v is INF:
            out.append(Generator("root-group", al.coords, NEG_INF, vrd.element([RootLetter(al.coords, 1)])))
            continue
        k = int(ceil_to_lattice(-v))
        out.append(Generator("root", al.coords, k, vrd.element([RootLetter(al.coords, Fraction(p) ** k)])))
        if -v == k:
            # the wall alpha + k = 0 passes through a
            n = vrd.n_of(vrd.element([RootLetter(al.coords, Fraction(p) ** k)]))[0]
            out.append(Generator("reflection", al.coords, k, n))
    u = _unit(vrd)
    diag = (u, 1 / u) if vrd.n == 2 else (u, Fraction(1), 1 / u)
    out.append(Generator("torus", None, 0, vrd.element([TorusLetter(diag)])))
    for t in torus_basis(vrd):
        if in_span(rs, a.direction, vrd.torus_translation(t)):
            out.append(Generator("torus", None, 0, t))
    return out


def torus_basis(vrd: ValuedRootDatum) -> list:
    """Torus elements whose translations span the translation lattice of T."""
    p = Fraction(vrd.p)
    if vrd.n == 2:
        return [vrd.element([TorusLetter((p, 1 / p))])]
    return [vrd.element([TorusLetter((p, 1 / p, Fraction(1)))]),
            vrd.element([TorusLetter((Fraction(1), p, 1 / p))])]


def sample_fixator_element(vrd: ValuedRootDatum, a, rng: random.Random, length: int = 4,
                           root_bound: int = 2) -> GroupElement:
    """A random product of generators of P(a), with root parameters of random unit and extra depth."""
    gens = minimal_generators(vrd, a, root_bound)
    letters = []
    for _ in range(length):
        g = rng.choice(gens)
        if g.kind in ("root", "root-group"):
            k = g.threshold if g.kind == "root" else rng.randint(-3, 1)
            k += rng.randint(0, 2)
            unit = Fraction(rng.choice([x for x in range(1, 2 * vrd.p + 2) if x % vrd.p]),
                            rng.choice([x for x in range(1, vrd.p + 2) if x % vrd.p]))
            letters.append(RootLetter(g.root, rng.choice((1, -1)) * unit * Fraction(vrd.p) ** k))
        else:
            letters.extend(g.element.word)
    return vrd.element(letters)


# vectorial parabolics

def in_vector_parabolic(vrd: ValuedRootDatum, f: Facet, g: GroupElement) -> bool:
    """g in P(f): coefficients on root groups negative on f vanish."""
    m = g.matrix
    if vrd.loop:
        return _loop_pattern_ok(vrd, ApartmentPoint(vrd.rs, f, [0] * vrd.rs.rank), m)
    s = epsilon_coords(sample_point(vrd.rs, f))
    return all(m[i][j] == 0 for i in range(vrd.n) for j in range(vrd.n) if i != j and s[i] < s[j])


# factorization g = u+ u- n

def _ldu(m: tuple):
    """m = L D U (unitriangular L, U); None if a leading minor vanishes."""
    n = len(m)
    a = [list(r) for r in m]
    L = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for k in range(n):
        if a[k][k] == 0:
            return None
        for i in range(k + 1, n):
            c = a[i][k] / a[k][k]
            L[i][k] = c
            for j in range(k, n):
                a[i][j] -= c * a[k][j]
    D = [[a[i][i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    U = [[a[i][j] / a[i][i] if j >= i else Fraction(0) for j in range(n)] for i in range(n)]
    tup = lambda x: tuple(tuple(r) for r in x)
    return tup(L), tup(D), tup(U)


def _flip(m: tuple) -> tuple:
    n = len(m)
    return tuple(tuple(m[n - 1 - i][n - 1 - j] for j in range(n)) for i in range(n))


def _udl(m: tuple):
    """m = U D L; obtained from the LDU factorization of the index-reversed matrix."""
    got = _ldu(_flip(m))
    if got is None:
        return None
    L, D, U = got
    return _flip(L), _flip(D), _flip(U)


def _as_element(vrd: ValuedRootDatum, m: tuple, label: str) -> GroupElement:
    return GroupElement(vrd, (MatrixLetter(m, label),), m)


def weyl_elements(rs, word_bound: int = 8) -> list:
    """Weyl group elements as words: the whole group in finite type, a length ball otherwise."""
    if is_finite_type(rs, range(rs.rank)):
        return _parabolic_elements(rs, tuple(range(rs.rank)))
    rho = tuple(Fraction(1) for _ in range(rs.rank))
    seen = {rho: WeylWord()}
    frontier = [rho]
    for _ in range(word_bound):
        nxt = []
        for y in frontier:
            for i in range(rs.rank):
                z = rs._ri_vector(i, y)
                if z not in seen:
                    seen[z] = WeylWord((i,)) * seen[y]
                    nxt.append(z)
        frontier = nxt
    return list(seen.values())


@dataclass
class PlusMinusFactorization:
    u_plus: GroupElement
    u_minus: GroupElement
    n: GroupElement


def plus_minus_factorizations(vrd: ValuedRootDatum, g: GroupElement, C: Facet):
    """All g = u+ u- n with u+ in U(C), u- in U(-C), n monomial (one per Weyl element; SL only)."""
    if vrd.loop:
        raise UnsupportedLetter("plus/minus factorization is implemented for SL_n")
    nC = vrd.element(weyl_lift_letters(vrd, C.word))
    sign = C.sign
    h = nC.inv() * g * nC
    for w in weyl_elements(vrd.rs):
        nw = vrd.element(weyl_lift_letters(vrd, w))
        M = (h * nw.inv()).matrix
        got = _udl(M) if sign > 0 else _ldu(M)
        if got is None:
            continue
        X, D, Y = got
        Xe, De, Ye = (_as_element(vrd, X, "u+"), _as_element(vrd, D, "t"), _as_element(vrd, Y, "u-"))
        up, um, n = Xe, De * Ye * De.inv(), De * nw
        up, um, n = nC * up * nC.inv(), nC * um * nC.inv(), nC * n * nC.inv()
        if (up * um * n).matrix != g.matrix:
            raise ArithmeticError("plus/minus reassembly failed")
        yield PlusMinusFactorization(up, um, n)


def _fixes(vrd: ValuedRootDatum, a, g: GroupElement) -> Membership:
    return fixator_membership(vrd, a, g)


def r_family_membership(vrd: ValuedRootDatum, a, C: Facet, g: GroupElement) -> Membership:
    """g in R(a) = (Q(a) n U(C)) (P(a) n U(-C)) N(a)."""
    a = as_point(a)
    if is_monomial(g.matrix):
        return Membership.IN if fixes_point_monomial(vrd, g, a) and _fixes(vrd, a, g) is Membership.IN \
            else Membership.OUT
    if vrd.loop:
        signs = []
        for l in g.word:
            if not isinstance(l, RootLetter):
                return Membership.UNKNOWN
            r = vrd.rs.root(l.root)
            if _fixes(vrd, a, vrd.element([l])) is not Membership.IN:
                return Membership.UNKNOWN
            signs.append(sign_on_roots(vrd.rs, C, r))
        # a word of fixing letters with all + letters before all - letters is already factored
        if signs == sorted(signs, reverse=True):
            return Membership.IN
        return Membership.UNKNOWN
    for fac in plus_minus_factorizations(vrd, g, C):
        if (_fixes(vrd, a, fac.u_plus) is Membership.IN and _fixes(vrd, a, fac.u_minus) is Membership.IN
                and fixes_point_monomial(vrd, fac.n, a) and _fixes(vrd, a, fac.n) is Membership.IN):
            return Membership.IN
    return Membership.OUT


def maximal_membership(vrd: ValuedRootDatum, a, g: GroupElement, root_bound: int = 6) -> Membership:
    """g in Q-bar(a): g in P(f_a) and g permutes the projections of a onto spherical facades."""
    a = as_point(a)
    rs = vrd.rs
    if not in_vector_parabolic(vrd, a.direction, g):
        return Membership.OUT
    if is_spherical(rs, a.direction):
        # f_a lies in its own star: the condition there is g.a = a, and it implies the others
        # by equivariance of projections
        return _fixes(vrd, a, g)
    verdict = Membership.IN
    for f in enumerate_facets(rs, root_bound):
        if not is_spherical(rs, f) or not in_closure(rs, a.direction, f):
            continue
        if not in_vector_parabolic(vrd, f, g):
            verdict = Membership.UNKNOWN
            continue
        m = _fixes(vrd, ApartmentPoint(rs, f, a.rep), g)
        if m is Membership.OUT:
            return Membership.OUT
        if m is Membership.UNKNOWN:
            verdict = Membership.UNKNOWN
    return verdict


def family_membership(vrd: ValuedRootDatum, family: ParahoricFamily, a, g: GroupElement,
                      C: Optional[Facet] = None) -> Membership:
    if family.tag is FamilyTag.MINIMAL:
        return fixator_membership(vrd, a, g)
    if family.tag is FamilyTag.MAXIMAL:
        return maximal_membership(vrd, a, g)
    C = C if C is not None else canonical_facet(vrd.rs, family.sign, (), ())
    return r_family_membership(vrd, a, C, g)


# the hovel

@dataclass(frozen=True)
class HovelPoint:
    g: GroupElement
    a: ApartmentPoint


class Equality(Enum):
    EQUAL = "Equal"
    NOT_EQUAL = "NotEqual"
    UNKNOWN = "Unknown"


@dataclass
class HovelComparison:
    verdict: Equality
    witness: Optional[GroupElement] = None

    def __bool__(self):
        return self.verdict is Equality.EQUAL


def hovel_act(h: GroupElement, x: HovelPoint) -> HovelPoint:
    return HovelPoint(h * x.g, x.a)


def transporters(vrd: ValuedRootDatum, a: ApartmentPoint, b: ApartmentPoint, word_bound: int = 8,
                 torus_bound: int = 4):
    """Monomial n with n.a = b: Weyl lifts followed by torus translations in a box."""
    rs = vrd.rs
    basis = torus_basis(vrd)
    target = geometric_name(rs, b.direction)
    for w in weyl_elements(rs, word_bound):
        lift = vrd.element(weyl_lift_letters(vrd, w))
        a1 = vrd.act(lift, a)
        if geometric_name(rs, a1.direction) != target:
            continue
        spread = max((abs(x) for x in list(a1.rep) + list(b.rep)), default=0)
        B = torus_bound + int(spread) + 1
        box = sorted(itertools.product(range(-B, B + 1), repeat=len(basis)), key=lambda e: sum(map(abs, e)))
        for e in box:
            t = vrd.identity_element()
            for k, ek in zip(basis, e):
                for _ in range(abs(ek)):
                    t = t * (k if ek > 0 else k.inv())
            n = t * lift
            if vrd.act(n, a) == b:
                yield n
                break


def hovel_equal(vrd: ValuedRootDatum, x: HovelPoint, y: HovelPoint, family: ParahoricFamily = MINIMAL,
                word_bound: int = 8, torus_bound: int = 4, budget: int = 4) -> HovelComparison:
    """[g, a] = [h, b] iff some n with n.a = b has g^-1 h n in Q(a)."""
    k = x.g.inv() * y.g
    finite = is_finite_type(vrd.rs, range(vrd.rs.rank))
    tried = 0
    for n in transporters(vrd, x.a, y.a, word_bound, torus_bound):
        m = family_membership(vrd, family, x.a, k * n)
        if m is Membership.IN:
            return HovelComparison(Equality.EQUAL, n)
        if m is Membership.OUT:
            # any other transporter differs by N(a), which lies in Q(a)
            return HovelComparison(Equality.NOT_EQUAL)
        tried += 1
        if tried >= budget:
            break
    if tried == 0 and finite:
        return HovelComparison(Equality.NOT_EQUAL)
    return HovelComparison(Equality.UNKNOWN)


def hovel_project(vrd: ValuedRootDatum, x: HovelPoint, f: Facet) -> HovelPoint:
    """[g, pr_f(a)] for a vectorial facet f of g's apartment whose closure contains f_a."""
    if not in_closure(vrd.rs, x.a.direction, f):
        raise NotProjectable(f"{x.a.direction} is not in the closure of {f}")
    return HovelPoint(x.g, project_point(x.a, f))


# fixed sets of unipotent elements

def _chambers(rs, word_bound: int) -> list:
    return [f for f in enumerate_facets(rs, word_bound) if not f.J]


def _is_wall_root(rs, C: Facet, alpha) -> bool:
    """alpha is a simple root of the chamber C (its wall carries a panel of C)."""
    beta = rs.act_root(C.word.inverse(), alpha)
    coords = tuple(C.sign * c for c in beta.coords)
    return sorted(coords) == [0] * (len(coords) - 1) + [1]


def is_grignotant(rs, roots: Sequence, word_bound: int = 6) -> bool:
    chambers = _chambers(rs, word_bound)
    for i, al in enumerate(roots):
        rest = roots[i:]
        if not any(_is_wall_root(rs, C, al) and all(sign_on_roots(rs, C, b) > 0 for b in rest)
                   for C in chambers):
            return False
    return True


def fixed_set_of_unipotent(vrd: ValuedRootDatum, u, word_bound: int = 6) -> list:
    """The fixed set in A of a product of root letters in grignotant order, as half-apartments."""
    letters = list(u.word) if isinstance(u, GroupElement) else list(u)
    letters = [l for l in letters if not (isinstance(l, RootLetter) and l.param == 0)]
    if any(not isinstance(l, RootLetter) for l in letters):
        raise UnsupportedLetter("expected root letters only")
    roots = [vrd.rs.root(l.root) for l in letters]
    if len(set(r.coords for r in roots)) != len(roots) or not is_grignotant(vrd.rs, roots, word_bound):
        raise NotGrignotant("letters are not in a grignotant order")
    return [HalfApartment(r, vrd.omega(l.param)) for r, l in zip(roots, letters)]


# sampled (para x) suites

PARA_CONDITIONS = ("inj", "sph", "2.1", "2.2", "dec", "5", "6")


def random_point(vrd: ValuedRootDatum, rng: random.Random, halves: int = 3) -> ApartmentPoint:
    return principal_point(vrd.rs, [Fraction(rng.randint(-halves, halves), 2) for _ in range(vrd.rs.rank)])


def sample_monomial(vrd: ValuedRootDatum, rng: random.Random, word_bound: int = 4) -> GroupElement:
    ws = weyl_elements(vrd.rs, word_bound)
    n = vrd.element(weyl_lift_letters(vrd, rng.choice(ws)))
    for t in torus_basis(vrd):
        e = rng.randint(-2, 2)
        for _ in range(abs(e)):
            n = (t if e > 0 else t.inv()) * n
    if rng.random() < 0.5:
        u = _unit(vrd)
        n = vrd.element([TorusLetter((u, 1 / u) if vrd.n == 2 else (u, Fraction(1), 1 / u))]) * n
    return n


def stabilizer_lifts(vrd: ValuedRootDatum, a: ApartmentPoint, limit: int = 200) -> list:
    """Representatives of N(a) modulo the fixator of the apartment: products of wall reflections at a.
    In affine type the group can be infinite, so the search stops at a small limit."""
    refl = [g.element for g in minimal_generators(vrd, a) if g.kind == "reflection"]
    rs = vrd.rs
    if vrd.loop:
        limit = min(limit, 16)
    rho = tuple(Fraction(1) for _ in range(rs.rank))

    def key(mu):
        return rs.act_vector(mu.linear, rho), tuple(mu.translation)

    seen = {key(identity_auto(rs))}
    out = [vrd.identity_element()]
    frontier = list(out)
    while frontier and len(out) < limit:
        nxt = []
        for n in frontier:
            for r in refl:
                m = n * r
                k = key(vrd.nu(m))
                if k not in seen:
                    seen.add(k)
                    out.append(m)
                    nxt.append(m)
        frontier = nxt
    return out[:limit]


def _spherical_targets(vrd: ValuedRootDatum, a: ApartmentPoint, word_bound: int = 4) -> list:
    rs = vrd.rs
    return [f for f in enumerate_facets(rs, word_bound)
            if is_spherical(rs, f) and in_closure(rs, a.direction, f)
            and geometric_name(rs, f) != geometric_name(rs, a.direction)]


def _in_N_times(vrd: ValuedRootDatum, x: GroupElement, points: Sequence[ApartmentPoint],
                torus_bound: int = 2) -> Optional[bool]:
    """Is x in N . Q(points)? Searches n = t . lift(w) in a box; None when undecided."""
    basis = torus_basis(vrd)
    undecided = False
    for w in weyl_elements(vrd.rs, 4):
        lift = vrd.element(weyl_lift_letters(vrd, w))
        for e in itertools.product(range(-torus_bound, torus_bound + 1), repeat=len(basis)):
            t = vrd.identity_element()
            for k, ek in zip(basis, e):
                for _ in range(abs(ek)):
                    t = t * (k if ek > 0 else k.inv())
            y = (t * lift).inv() * x
            ms = [fixator_membership(vrd, a, y) for a in points]
            if all(m is Membership.IN for m in ms):
                return True
            if any(m is Membership.UNKNOWN for m in ms):
                undecided = True
    return None if undecided or vrd.loop else False


def check_para_axioms(vrd: ValuedRootDatum, family: ParahoricFamily = MINIMAL,
                      which: Iterable[str] = ("inj", "sph", "2.1", "dec"), samples: int = 100,
                      seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report(f"{vrd!r} {family.tag.value}", seed)
    rs = vrd.rs
    mem = lambda a, g: family_membership(vrd, family, a, g)
    for cond in which:
        if cond not in PARA_CONDITIONS:
            raise ValueError(f"unknown condition {cond!r}")
        res = CheckResult(f"para {cond}")
        for _ in range(samples):
            a = random_point(vrd, rng)
            if cond == "inj":
                n = sample_monomial(vrd, rng) if rng.random() < 0.5 else \
                    rng.choice(stabilizer_lifts(vrd, a)) * sample_monomial(vrd, rng, 0)
                m = mem(a, n)
                if m is Membership.UNKNOWN:
                    continue
                res.samples += 1
                fixes = vrd.act(n, a) == a
                if (m is Membership.IN) != fixes:
                    res.fail({"n": repr(n), "a": repr(a), "membership": m.value, "fixes": fixes})
            elif cond == "sph":
                if not is_spherical(rs, a.direction):
                    continue
                g = sample_fixator_element(vrd, a, rng, rng.randint(1, 5))
                m = mem(a, g)
                res.samples += 1
                if m is not Membership.IN:
                    res.fail({"g": repr(g), "a": repr(a), "membership": m.value})
            elif cond == "2.1":
                targets = _spherical_targets(vrd, a)
                if not targets:
                    continue
                f = rng.choice(targets)
                b = ApartmentPoint(rs, f, a.rep)
                g = sample_fixator_element(vrd, a, rng, rng.randint(1, 5)) if rng.random() < 0.8 \
                    else vrd.random_element(rng, 3)
                ma = mem(a, g)
                mb = mem(b, g)
                if Membership.UNKNOWN in (ma, mb):
                    continue
                res.samples += 1
                lhs = ma is Membership.IN and in_vector_parabolic(vrd, f, g)
                rhs = ma is Membership.IN and mb is Membership.IN
                if lhs != rhs:
                    res.fail({"g": repr(g), "a": repr(a), "f": repr(f), "lhs": lhs, "rhs": rhs})
            elif cond == "2.2":
                targets = _spherical_targets(vrd, a)
                if not targets:
                    continue
                f = rng.choice(targets)
                b = ApartmentPoint(rs, f, a.rep)
                n = sample_monomial(vrd, rng)
                q = sample_fixator_element(vrd, a, rng, rng.randint(1, 4))
                x = n * q
                in_np = any(in_vector_parabolic(vrd, f, vrd.element(weyl_lift_letters(vrd, w)).inv() * x)
                            for w in weyl_elements(rs, 4))
                if not in_np:
                    continue
                ok = None
                for r in stabilizer_lifts(vrd, a):
                    y = (n * r).inv() * x
                    ms = (mem(a, y), mem(b, y))
                    if ms == (Membership.IN, Membership.IN):
                        ok = True
                        break
                    if Membership.UNKNOWN in ms:
                        ok = ok if ok is not None else None
                if ok is None and vrd.loop:
                    continue
                res.samples += 1
                if not ok:
                    res.fail({"x": repr(x), "a": repr(a), "f": repr(f)})
            elif cond == "dec":
                if vrd.loop:
                    continue
                C = canonical_facet(rs, rng.choice((1, -1)), rng.choice(weyl_elements(rs)), ())
                q = sample_fixator_element(vrd, a, rng, rng.randint(1, 5))
                if mem(a, q) is not Membership.IN:
                    continue
                res.samples += 1
                found = any(mem(a, fac.u_plus) is Membership.IN and mem(a, fac.u_minus) is Membership.IN
                            and vrd.act(fac.n, a) == a and mem(a, fac.n) is Membership.IN
                            for fac in plus_minus_factorizations(vrd, q, C))
                if not found:
                    res.fail({"q": repr(q), "a": repr(a), "C": repr(C)})
            elif cond in ("5", "6"):
                omega = [a] + [random_point(vrd, rng) for _ in range(rng.randint(1, 2))]
                if cond == "6":
                    g = _common_fixator_element(vrd, omega, rng)
                    if any(mem(b, g) is not Membership.IN for b in omega):
                        continue
                    trace = enclosure_trace(omega, omega[0].direction)
                    pts = _points_in(vrd, trace, omega, rng)
                    ms = [mem(c, g) for c in pts]
                    if any(m is Membership.UNKNOWN for m in ms):
                        continue
                    res.samples += 1
                    bad = [c for c, m in zip(pts, ms) if m is Membership.OUT]
                    if bad:
                        res.fail({"g": repr(g), "omega": [repr(b) for b in omega], "point": repr(bad[0])})
                else:
                    x = sample_monomial(vrd, rng) * _common_fixator_element(vrd, omega, rng) \
                        if rng.random() < 0.5 else vrd.random_element(rng, 3)
                    each = [_in_N_times(vrd, x, [b]) for b in omega]
                    if any(e is None for e in each):
                        continue
                    if not all(each):
                        continue
                    joint = _in_N_times(vrd, x, omega)
                    if joint is None:
                        continue
                    res.samples += 1
                    if not joint:
                        res.fail({"x": repr(x), "omega": [repr(b) for b in omega]})
        rep.results.append(res)
    return rep


def _common_fixator_element(vrd: ValuedRootDatum, omega: Sequence[ApartmentPoint], rng: random.Random,
                            length: int = 4) -> GroupElement:
    """Root letters at the largest threshold over omega, so each fixes every point."""
    letters = []
    roots = vrd.roots(2) if vrd.loop else vrd.roots()
    for _ in range(length):
        al = rng.choice(roots)
        vals = [eval_root(al, b) for b in omega]
        if any(v is NEG_INF for v in vals):
            continue
        finite = [v for v in vals if v is not INF]
        k = int(ceil_to_lattice(max(-v for v in finite))) if finite else rng.randint(-2, 0)
        letters.append(RootLetter(al.coords, Fraction(vrd.p) ** (k + rng.randint(0, 1))))
    return vrd.element(letters)


def _points_in(vrd: ValuedRootDatum, trace, omega, rng: random.Random, count: int = 6) -> list:
    """Points of the enclosure found among half-integer points of the bounding box of omega."""
    rank = vrd.rs.rank
    lo = [min(b.rep[i] for b in omega) - 1 for i in range(rank)]
    hi = [max(b.rep[i] for b in omega) + 1 for i in range(rank)]
    out = []
    for _ in range(count * 10):
        rep = [Fraction(rng.randint(int(2 * lo[i]), int(2 * hi[i])), 2) for i in range(rank)]
        c = ApartmentPoint(vrd.rs, omega[0].direction, rep)
        if trace.contains(c):
            out.append(c)
            if len(out) >= count:
                break
    return out
