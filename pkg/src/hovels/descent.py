"""Galois descent on the combinatorial side: diagram automorphisms with a valuation cocycle, their
action on the apartment, fixed apartments, restricted roots and descended valuations."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import sympy

from .apartment import ApartmentPoint, HalfApartment
from .axioms import CheckResult, Report
from .errors import InconsistentCocycle, InputError, NotDiagramAutomorphism, NotInUa
from .fixators import Membership, fixator_membership
from .groups import GroupElement, RootLetter, ValuedRootDatum, mat_mul
from .numbers import INF, frac
from .roots import Root, RootSystem, enumerate_real_roots, is_finite_type
from .tits_cone import canonical_facet


@dataclass(frozen=True)
class GaloisElement:
    """sigma: a permutation of simple indices with omega^sigma on simple roots."""

    perm: tuple
    omega: tuple

    def __repr__(self):
        return f"GaloisElement({list(self.perm)}, {[str(x) for x in self.omega]})"


@dataclass
class DescentData:
    rs: RootSystem
    generators: list

    @classmethod
    def build(cls, rs: RootSystem, generators: Sequence) -> "DescentData":
        gens = []
        for perm, omega in generators:
            perm = tuple(int(i) for i in perm)
            if isinstance(omega, dict):
                omega = [omega.get(i, omega.get(str(i), 0)) for i in range(rs.rank)]
            gens.append(GaloisElement(perm, tuple(frac(x) for x in omega)))
        return cls(rs, gens)


def _perm_coords(s: GaloisElement, c: Sequence) -> tuple:
    out = [0] * len(c)
    for i, x in enumerate(c):
        out[s.perm[i]] = x
    return tuple(out)


def act_root(s: GaloisElement, alpha: Sequence) -> tuple:
    return _perm_coords(s, tuple(alpha.coords if isinstance(alpha, Root) else alpha))


def act_vector(s: GaloisElement, x: Sequence) -> tuple:
    """Linear action on V: (sigma alpha)(sigma x) = alpha(x)."""
    return _perm_coords(s, tuple(frac(v) for v in x))


def omega_of(s: GaloisElement, alpha) -> Fraction:
    """omega^sigma_alpha, propagated from simple roots by the reflection rule (linear in alpha)."""
    c = alpha.coords if isinstance(alpha, Root) else alpha
    return sum((Fraction(ci) * w for ci, w in zip(c, s.omega)), Fraction(0))


def compose(s: GaloisElement, t: GaloisElement) -> GaloisElement:
    """s t, with omega^{st}_alpha = omega^t_alpha + omega^s_{t alpha}."""
    perm = tuple(s.perm[t.perm[i]] for i in range(len(t.perm)))
    om = []
    for i in range(len(t.perm)):
        e = [0] * len(t.perm)
        e[i] = 1
        om.append(t.omega[i] + omega_of(s, act_root(t, e)))
    return GaloisElement(perm, tuple(om))


def identity_element(rank: int) -> GaloisElement:
    return GaloisElement(tuple(range(rank)), tuple(Fraction(0) for _ in range(rank)))


def group_elements(dd: DescentData, limit: int = 10000) -> list:
    """The group generated, with cocycle tables; raises if one permutation gets two tables."""
    e = identity_element(dd.rs.rank)
    table = {e.perm: e}
    queue = [e]
    while queue:
        x = queue.pop()
        for s in dd.generators:
            y = compose(s, x)
            if y.perm in table:
                if table[y.perm].omega != y.omega:
                    raise InconsistentCocycle(
                        f"cocycle law fails: permutation {list(y.perm)} gets omega {list(map(str, table[y.perm].omega))} "
                        f"and {list(map(str, y.omega))}")
                continue
            table[y.perm] = y
            queue.append(y)
            if len(table) > limit:
                raise InputError("Galois group too large")
    return list(table.values())


@dataclass
class DescentReport:
    valid: bool
    group_order: int
    checked_roots: int
    notes: list = field(default_factory=list)


def validate_descent(dd: DescentData, height_bound: int = 6) -> DescentReport:
    rs = dd.rs
    A = rs.cartan
    for s in dd.generators:
        if sorted(s.perm) != list(range(rs.rank)):
            raise NotDiagramAutomorphism(f"{list(s.perm)} is not a permutation")
        for i in range(rs.rank):
            for j in range(rs.rank):
                if A[s.perm[i]][s.perm[j]] != A[i][j]:
                    raise NotDiagramAutomorphism(f"{list(s.perm)} does not preserve the Cartan matrix")
    elems = group_elements(dd)
    # propagation along reflections: omega_{r_s beta} = omega_beta - <alpha_s, beta> omega_{alpha_s}
    roots = enumerate_real_roots(rs, height_bound)
    checked = 0
    for s in dd.generators:
        for beta in roots:
            for k in range(rs.rank):
                img = rs.root(rs._ri_coords(k, beta.coords))
                pair = sum(beta.coords[j] * A[k][j] for j in range(rs.rank))
                want = omega_of(s, beta) - pair * s.omega[k]
                if omega_of(s, img) != want:
                    raise InconsistentCocycle(f"propagation fails at {list(beta.coords)}")
                checked += 1
    return DescentReport(True, len(elems), checked)


# action on the apartment

def _find(dd: DescentData, s: GaloisElement) -> GaloisElement:
    for x in group_elements(dd):
        if x.perm == s.perm:
            return x
    raise InputError("element not in the group")


def inverse(dd: DescentData, s: GaloisElement) -> GaloisElement:
    inv = [0] * len(s.perm)
    for i, j in enumerate(s.perm):
        inv[j] = i
    return _find(dd, GaloisElement(tuple(inv), s.omega))


def translation(dd: DescentData, s: GaloisElement) -> tuple:
    """v_sigma, defined by alpha_s(v_sigma) = omega^{sigma^-1}_{alpha_s}."""
    return tuple(inverse(dd, s).omega)


def galois_act(dd: DescentData, s: GaloisElement, x):
    rs = dd.rs
    if isinstance(x, HalfApartment):
        img = rs.root(act_root(s, x.root))
        if x.level is INF:
            return HalfApartment(img, INF)
        return HalfApartment(img, x.level + omega_of(s, x.root))
    if isinstance(x, ApartmentPoint):
        v = translation(dd, s)
        rep = tuple(a + b for a, b in zip(v, act_vector(s, x.rep)))
        d = x.direction
        return ApartmentPoint(rs, canonical_facet(rs, d.sign, _perm_word(s, d.word), _perm_set(s, d.J)), rep)
    raise TypeError("expected a point or a half-apartment")


def _perm_word(s: GaloisElement, w):
    from .roots import WeylWord
    return WeylWord(tuple(s.perm[i] for i in w.letters))


def _perm_set(s: GaloisElement, J) -> tuple:
    return tuple(sorted(s.perm[j] for j in J))


def fixed_space(dd: DescentData) -> list:
    """Basis of V^Gamma as rational vectors."""
    n = dd.rs.rank
    rows = []
    for s in dd.generators:
        for i in range(n):
            row = [0] * n
            row[s.perm[i]] += 1
            row[i] -= 1
            rows.append(row)
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    basis = sympy.Matrix(rows).nullspace()
    out = []
    for b in basis:
        den = sympy.ilcm(*[sympy.fraction(x)[1] for x in b]) if len(b) else 1
        out.append(tuple(Fraction(int(x * den)) for x in b))
    return out


def fixed_apartment(dd: DescentData) -> tuple:
    """(Gamma-fixed base point, basis of V^Gamma): the base point averages the orbit of o."""
    rs = dd.rs
    elems = group_elements(dd)
    o = ApartmentPoint(rs, None, [0] * rs.rank)
    pts = [galois_act(dd, s, o).rep for s in elems]
    base = tuple(sum(p[i] for p in pts) / len(pts) for i in range(rs.rank))
    return ApartmentPoint(rs, None, base), fixed_space(dd)


# restricted roots

@dataclass(frozen=True)
class RestrictedRoot:
    vector: tuple  # values on the basis of V^Gamma

    def __repr__(self):
        return f"RestrictedRoot({[str(x) for x in self.vector]})"


@dataclass
class RestrictedRootSystem:
    rs: RootSystem
    basis: list
    roots: list
    rays: dict  # ray generator -> list of (ambient root, ratio r with restriction = r * generator)
    non_reduced: bool
    provisional: bool

    def multiples(self, a: RestrictedRoot) -> list:
        return [r for r in self.roots if _ratio(r.vector, a.vector) is not None]


def restrict(basis: list, alpha: Root) -> tuple:
    return tuple(alpha(b) for b in basis)


def _ratio(v: tuple, a: tuple) -> Optional[Fraction]:
    """r > 0 with v = r a, else None."""
    r = None
    for x, y in zip(v, a):
        if y == 0:
            if x != 0:
                return None
            continue
        q = Fraction(x) / Fraction(y)
        if r is None:
            r = q
        elif q != r:
            return None
    return r if r is not None and r > 0 else None


def restrict_roots(dd: DescentData, root_bound: int = 6) -> RestrictedRootSystem:
    rs = dd.rs
    basis = fixed_space(dd)
    ambient = enumerate_real_roots(rs, root_bound)
    vecs = {}
    for al in ambient:
        v = restrict(basis, al)
        if any(x != 0 for x in v):
            vecs.setdefault(v, []).append(al)
    # rays: group restrictions by positive proportionality, generator = shortest
    rays = {}
    for v in sorted(vecs, key=lambda v: sum(abs(x) for x in v)):
        for g in rays:
            r = _ratio(v, g)
            if r is not None:
                rays[g].extend((al, r) for al in vecs[v])
                break
        else:
            rays[v] = [(al, Fraction(1)) for al in vecs[v]]
    roots = [RestrictedRoot(v) for v in sorted(vecs, key=lambda v: (sum(abs(x) for x in v), v))]
    non_reduced = any(tuple(2 * x for x in v) in vecs for v in vecs)
    provisional = not is_finite_type(rs, range(rs.rank))
    return RestrictedRootSystem(rs, basis, roots, {RestrictedRoot(g): m for g, m in rays.items()},
                                non_reduced, provisional)


def ray_of(rrs: RestrictedRootSystem, a) -> tuple:
    """(ray generator, ratio) containing the restricted root a."""
    v = a.vector if isinstance(a, RestrictedRoot) else tuple(frac(x) for x in a)
    for g in rrs.rays:
        r = _ratio(v, g.vector)
        if r is not None:
            return g, r
    raise NotInUa(f"{list(v)} is not a restricted root")


def phi_a(rrs: RestrictedRootSystem, a) -> list:
    """Ambient roots alpha with alpha| in R_{>0} a, with ratios alpha| = r a."""
    g, s = ray_of(rrs, a)
    return [(al, r / s) for al, r in rrs.rays[g]]


def descend_valuation(dd: DescentData, vrd: ValuedRootDatum, a, u) -> object:
    """phi^nat_a(u) = min_i phi_{alpha_i}(u_i) / r_i over an ordered product in U_a."""
    rrs = restrict_roots(dd)
    members = {al.coords: r for al, r in phi_a(rrs, a)}
    letters = list(u.word) if isinstance(u, GroupElement) else list(u)
    vals = []
    for l in letters:
        if not isinstance(l, RootLetter) or tuple(l.root) not in members:
            raise NotInUa(f"{l!r} is not a letter of U_a")
        if l.param == 0:
            continue
        vals.append(vrd.omega(l.param) / members[tuple(l.root)])
    return min(vals) if vals else INF


def descended_value_steps(dd: DescentData, a, m: int = 1) -> dict:
    """Combinatorial mode: each ratio r contributes the values (1/(m r)) Z; returns r -> step and the
    step of the group they generate."""
    rrs = restrict_roots(dd)
    steps = {}
    for _, r in phi_a(rrs, a):
        steps[r] = Fraction(1, m) / r
    from math import gcd
    num = 0
    den = 1
    for st in steps.values():
        den = den * st.denominator // gcd(den, st.denominator)
    for st in steps.values():
        num = gcd(num, st.numerator * (den // st.denominator))
    return {"steps": steps, "generated": Fraction(num, den)}


# checks

def check_descent_conditions(dd: DescentData, which: Sequence[str] = ("DSR", "DV2"), root_bound: int = 6,
                             m: int = 1) -> Report:
    rep = Report("descent", 0)
    rrs = restrict_roots(dd, root_bound)
    for cond in which:
        res = CheckResult(cond)
        if cond == "DSR":
            # base: restricted simple roots (restrictions of ambient simple roots, deduplicated)
            simple = []
            for i in range(dd.rs.rank):
                v = restrict(rrs.basis, dd.rs.simple_root(i))
                if any(x != 0 for x in v) and v not in simple:
                    simple.append(v)
            res.samples = len(simple)
            if simple and sympy.Matrix(simple).rank() != len(simple):
                res.fail({"base": [[str(x) for x in v] for v in simple]})
            for r in rrs.roots:
                res.samples += 1
                coeffs = sympy.Matrix(simple).T.solve_least_squares(sympy.Matrix(r.vector)) if simple else None
                if coeffs is None or sympy.Matrix(simple).T * coeffs != sympy.Matrix(r.vector):
                    res.fail({"root": [str(x) for x in r.vector]})
                    continue
                signs = {sympy.sign(c) for c in coeffs if c != 0}
                if len(signs) > 1 or any(c.q != 1 for c in coeffs):
                    res.fail({"root": [str(x) for x in r.vector], "coeffs": [str(c) for c in coeffs]})
        elif cond == "DV2":
            for g in rrs.rays:
                res.samples += 1
                # values are a nontrivial discrete subgroup: infinitely many
                if descended_value_steps(dd, g, m)["generated"] <= 0:
                    res.fail({"ray": [str(x) for x in g.vector]})
        else:
            raise ValueError(f"unknown condition {cond!r}")
        rep.results.append(res)
    return rep


def line_point(dd: DescentData, t) -> ApartmentPoint:
    """Point of the fixed apartment with coordinate t along the first fixed basis vector."""
    base, basis = fixed_apartment(dd)
    return ApartmentPoint(dd.rs, None, tuple(b + frac(t) * v for b, v in zip(base.rep, basis[0])))


def sample_ua_element(vrd: ValuedRootDatum, members: list, rng: random.Random) -> GroupElement:
    """A product over the ray's roots, in the order given (shortest restriction first)."""
    letters = []
    for al, _ in members:
        if rng.random() < 0.8:
            letters.append(RootLetter(al.coords, vrd.random_scalar(rng)))
    return vrd.element(letters)


def _ua_coordinates(vrd: ValuedRootDatum, members: list, m: tuple) -> list:
    """Letters of the element m of U_a in the order of members (SL3, ray {a, 2a} or {2a})."""
    letters = []
    cur = m
    for al, _ in members:
        i, j, _ = vrd.root_position(al.coords)
        c = cur[i][j]
        if c != 0:
            letters.append(RootLetter(al.coords, c))
            inv = vrd.element([RootLetter(al.coords, -c)]).matrix
            cur = mat_mul(inv, cur)
    if any(cur[i][j] != (1 if i == j else 0) for i in range(vrd.n) for j in range(vrd.n)):
        raise NotInUa("matrix is not in U_a")
    return letters


def fixed_ua_element(vrd: ValuedRootDatum, dd: DescentData, x) -> Optional[GroupElement]:
    """For SL3 with the swap: the element [[1, x, x^2/2], [0, 1, x], [0, 0, 1]] of U_a fixed by
    g -> J g^-T J (J antidiagonal with signs 1, -1, 1); None for other data."""
    if vrd.tag != "SL3" or [g.perm for g in dd.generators] != [(1, 0)]:
        return None
    x = frac(x)
    return vrd.element([RootLetter((1, 0), x), RootLetter((0, 1), x), RootLetter((1, 1), -x * x / 2)])


def check_descended_valuation(dd: DescentData, vrd: ValuedRootDatum, samples: int = 100,
                              seed: int = 0) -> Report:
    """(V0), (V1), (V2) for phi^nat on finite-type data, with the fixed-set identity
    Fix(u) n A^Gamma = D(a, phi^nat(u)) tested by the fixator oracle."""
    rng = random.Random(seed)
    rep = Report(f"descended {vrd!r}", seed)
    rrs = restrict_roots(dd)
    fixed = CheckResult("fixed-set")
    v0 = CheckResult("V0")
    v1 = CheckResult("V1")
    v2 = CheckResult("V2")
    base, basis = fixed_apartment(dd)
    for a in rrs.roots:
        mem_a = sorted(((al, r) for al, r in phi_a(rrs, a) if r >= 1), key=lambda t: (t[1], t[0].coords))
        values = set()
        for _ in range(samples):
            u = sample_ua_element(vrd, mem_a, rng)
            phi = descend_valuation(dd, vrd, a, u)
            values.add(phi)
            t = Fraction(rng.randint(-8, 8), 4)
            x = ApartmentPoint(dd.rs, None, tuple(b + t * v for b, v in zip(base.rep, basis[0])))
            inside = phi is INF or _restricted_value(a, mem_a, x) + phi >= 0
            got = fixator_membership(vrd, x, u)
            fixed.samples += 1
            if (got is Membership.IN) != inside:
                fixed.fail({"u": repr(u), "t": str(t), "phi": str(phi), "membership": got.value})
            w = sample_ua_element(vrd, mem_a, rng)
            uw = vrd.element(_ua_coordinates(vrd, mem_a, (u * w).matrix))
            uinv = vrd.element(_ua_coordinates(vrd, mem_a, u.inv().matrix))
            v1.samples += 1
            pw = descend_valuation(dd, vrd, a, w)
            if descend_valuation(dd, vrd, a, uw) < min(phi, pw) or descend_valuation(dd, vrd, a, uinv) != phi:
                v1.fail({"u": repr(u), "w": repr(w)})
            if any(r != 1 for _, r in mem_a) or len(mem_a) > 1:
                uf = fixed_ua_element(vrd, dd, vrd.random_scalar(rng))
                if a.vector[0] < 0 and uf is not None:
                    uf = vrd.element(_ua_coordinates(vrd, mem_a, tuple(zip(*uf.matrix))))
                if uf is not None:
                    res = _reflection_test(dd, vrd, a, mem_a, uf, x)
                    if res is not None:
                        v2.samples += 1
                        if not res:
                            v2.fail({"u": repr(uf)})
        v0.samples += 1
        if len(values) < 3:
            v0.fail({"root": [str(x) for x in a.vector], "values": sorted(map(str, values))})
    rep.results.extend([fixed, v0, v1, v2])
    return rep


def _restricted_value(a: RestrictedRoot, members: list, x: ApartmentPoint) -> Fraction:
    """a(x) from any ambient root of phi_a: alpha(x) = r a(x) on the fixed apartment."""
    al, r = members[0]
    return al(x.rep) / r


def _reflection_test(dd: DescentData, vrd: ValuedRootDatum, a: RestrictedRoot, members: list,
                     u: GroupElement, x: ApartmentPoint) -> Optional[bool]:
    """m = l1 u l2 monomial with l1, l2 in U_-a must act on the fixed apartment as the reflection
    through a + phi(u) = 0; None when u is outside the big cell."""
    from .apartment import apply
    from .groups import MatrixLetter
    from .parahoric import _flip, _ldu
    phi = descend_valuation(dd, vrd, a, u)
    n = vrd.n
    sign = 1 if a.vector[0] > 0 else -1
    J = tuple(tuple(Fraction(int(i + j == n - 1)) for j in range(n)) for i in range(n))
    m = u.matrix if sign > 0 else tuple(zip(*u.matrix))
    got = _ldu(_flip(mat_mul(J, m)))
    if got is None:
        return None
    # J m = U D L with U upper and L lower unitriangular, so m = (J U J)(J D) L
    D = _flip(got[1])
    M = mat_mul(J, D)
    if sign < 0:
        M = tuple(zip(*M))
    mg = GroupElement(vrd, (MatrixLetter(M, "m"),), M)
    y = apply(vrd.nu(mg), x)
    if y != galois_fixed_projection(dd, y):
        return False
    return _restricted_value(a, members, y) == -_restricted_value(a, members, x) - 2 * phi


def galois_fixed_projection(dd: DescentData, x: ApartmentPoint) -> ApartmentPoint:
    """Average of the Gamma-orbit of x."""
    elems = group_elements(dd)
    pts = [galois_act(dd, s, x).rep for s in elems]
    return ApartmentPoint(dd.rs, x.direction, tuple(sum(p[i] for p in pts) / len(pts) for i in range(dd.rs.rank)))
