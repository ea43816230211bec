"""Sampled checkers for the root-datum axioms (DR1)-(DR5) and valuation axioms (V0)-(V5)."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .groups import GroupElement, RootLetter, ValuedRootDatum, identity, is_diagonal, is_monomial, mat_mul
from .numbers import INF
from .roots import Tri, is_prenilpotent, pairing, reflect


@dataclass
class CheckResult:
    condition: str
    samples: int = 0
    failures: list = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, witness: str) -> None:
        if len(self.failures) < 20:
            self.failures.append(witness)
        else:
            self.failures[-1] = witness


@dataclass
class Report:
    subject: str
    seed: int
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def get(self, condition: str) -> CheckResult:
        for r in self.results:
            if r.condition == condition:
                return r
        raise KeyError(condition)

    def to_dict(self) -> dict:
        return {"subject": self.subject, "seed": self.seed, "passed": self.passed,
                "results": [{"condition": r.condition, "samples": r.samples, "passed": r.passed,
                             "failures": list(r.failures), "note": r.note} for r in self.results]}


def _sample_roots(vrd: ValuedRootDatum) -> list:
    return vrd.roots(2)


def _prenilpotent_pairs(vrd: ValuedRootDatum) -> list:
    roots = _sample_roots(vrd)
    out = []
    for a in roots:
        for b in roots:
            if a.coords == tuple(-x for x in b.coords):
                continue
            if is_prenilpotent(vrd.rs, a, b) is Tri.YES:
                out.append((a, b))
    return out


def _open_interval(vrd: ValuedRootDatum, a, b, bound: int = 6) -> list:
    out = []
    for s in range(2, bound + 1):
        for p in range(1, s):
            c = tuple(p * x + (s - p) * y for x, y in zip(a.coords, b.coords))
            if vrd.rs.is_real(c):
                out.append((vrd.rs.root(c), p, s - p))
    out.sort(key=lambda t: (abs(t[0].height), t[0].coords))
    return out


def _factor_over(vrd: ValuedRootDatum, m: tuple, interval: list) -> Optional[list]:
    """Write m as an ordered product of root elements over the interval roots, or None."""
    params = []
    acc = identity(vrd.n, vrd.one(), vrd.zero())
    rest = m
    for gamma, p, q in interval:
        i, j, e = vrd.root_position(gamma.coords)
        x = rest[i][j]
        k = x.coeff(e) if vrd.loop else x
        params.append((gamma, p, q, k))
        if k != 0:
            u = vrd.letter_matrix(RootLetter(gamma.coords, k))
            acc = mat_mul(acc, u)
            rest = mat_mul(vrd.letter_matrix(RootLetter(gamma.coords, -k)), rest)
    if acc != m:
        return None
    return params


def _commutator(g: GroupElement, h: GroupElement) -> GroupElement:
    return g * h * g.inv() * h.inv()


def check_valuation_axioms(vrd: ValuedRootDatum, sample_budget: int = 200, seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report(repr(vrd), seed)
    roots = _sample_roots(vrd)
    rs = vrd.rs

    # (V0): at least three values
    r0 = CheckResult("V0")
    for a in roots:
        r0.samples += 1
        vals = {vrd.phi(a, vrd.u(a, Fraction(vrd.p) ** e)) for e in (-1, 0, 1)}
        if len(vals) < 3:
            r0.fail(f"root {list(a.coords)} has values {sorted(vals)}")
    rep.results.append(r0)

    # (V1): level sets are subgroups, U_{alpha,inf} = {e}, phi(u) = phi(u^-1)
    r1 = CheckResult("V1")
    for _ in range(sample_budget):
        a = rng.choice(roots)
        u = vrd.u(a, vrd.random_scalar(rng))
        v = vrd.u(a, vrd.random_scalar(rng))
        r1.samples += 1
        lam = min(vrd.phi(a, u), vrd.phi(a, v))
        if vrd.phi(a, u * v.inv()) < lam:
            r1.fail(f"phi(uv^-1) < min at {u.word}, {v.word}")
        if vrd.phi(a, u) != vrd.phi(a, u.inv()):
            r1.fail(f"phi(u) != phi(u^-1) at {u.word}")
        if vrd.phi(a, u) is INF:
            r1.fail(f"nontrivial {u.word} has infinite valuation")
    if vrd.phi(roots[0], vrd.identity_element()) is not INF:
        r1.fail("phi(e) is finite")
    rep.results.append(r1)

    # (V2.1): phi_{r_a b}(m v m^-1) = phi_b(v) - <a,b> phi_a(u) for m = n(u)
    r21 = CheckResult("V2.1")
    for _ in range(sample_budget):
        a, b = rng.choice(roots), rng.choice(roots)
        u = vrd.u(a, vrd.random_scalar(rng))
        v = vrd.u(b, vrd.random_scalar(rng))
        m, _, _ = vrd.n_of(u)
        w = m * v * m.inv()
        r21.samples += 1
        target = reflect(rs, a, b)
        got = vrd.recognize_root_element(w.matrix)
        if got is None or got[0].coords != target.coords:
            r21.fail(f"n(u) v n(u)^-1 not in U_{list(target.coords)} for u={u.word}, v={v.word}")
            continue
        expected = vrd.phi(b, v) - pairing(rs, a, b) * vrd.phi(a, u)
        if vrd.omega(got[1]) != expected:
            r21.fail(f"value {vrd.omega(got[1])} != {expected} for u={u.word}, v={v.word}")
    rep.results.append(r21)

    # (V2.2): phi_a(v) - phi_a(t v t^-1) does not depend on v
    r22 = CheckResult("V2.2")
    for _ in range(sample_budget):
        a = rng.choice(roots)
        t = vrd.element([vrd.random_letter(rng, torus_prob=1.0)])
        diffs = set()
        for _ in range(3):
            v = vrd.u(a, vrd.random_scalar(rng))
            w = t * v * t.inv()
            diffs.add(vrd.phi(a, v) - vrd.phi(a, w))
        r22.samples += 1
        if len(diffs) != 1:
            r22.fail(f"torus {t.word} shifts root {list(a.coords)} non-uniformly: {sorted(diffs)}")
    rep.results.append(r22)

    # (V3): commutators of prenilpotent pairs land in the right filtration
    r3 = CheckResult("V3", note="prenilpotent pairs only")
    pairs = _prenilpotent_pairs(vrd)
    for _ in range(sample_budget):
        a, b = rng.choice(pairs)
        u = vrd.u(a, vrd.random_scalar(rng))
        v = vrd.u(b, vrd.random_scalar(rng))
        lam, mu = vrd.phi(a, u), vrd.phi(b, v)
        c = _commutator(u, v)
        r3.samples += 1
        interval = _open_interval(vrd, a, b)
        fac = _factor_over(vrd, c.matrix, interval)
        if fac is None:
            r3.fail(f"[{u.word}, {v.word}] does not factor over ]a,b[")
            continue
        for gamma, p, q, k in fac:
            if k != 0 and vrd.omega(k) < p * lam + q * mu:
                r3.fail(f"factor on {list(gamma.coords)} has value {vrd.omega(k)} < {p * lam + q * mu}")
    rep.results.append(r3)

    # (V4): only for non-reduced systems
    rep.results.append(CheckResult("V4", note="vacuous: the root system is reduced"))

    # (V5): u' u u'' in N forces phi_{-a}(u') = -phi_a(u)
    r5 = CheckResult("V5")
    for _ in range(sample_budget):
        a = rng.choice(roots)
        k = vrd.random_scalar(rng)
        u = vrd.u(a, k)
        n, up, upp = vrd.n_of(u)
        neg = tuple(-x for x in a.coords)
        r5.samples += 1
        if not is_monomial(n.matrix):
            r5.fail(f"n(u) not monomial for {u.word}")
        if vrd.phi(neg, up) != -vrd.phi(a, u) or vrd.phi(neg, upp) != -vrd.phi(a, u):
            r5.fail(f"phi_-a(u') != -phi_a(u) for {u.word}")
        # the remark: phi_{-a}(n u n^-1) = -phi_a(u)
        got = vrd.recognize_root_element((n * u * n.inv()).matrix)
        if got is None or got[0].coords != neg or vrd.omega(got[1]) != -vrd.phi(a, u):
            r5.fail(f"phi_-a(n u n^-1) != -phi_a(u) for {u.word}")
    rep.results.append(r5)
    return rep


def in_lower_unipotent(vrd: ValuedRootDatum, m: tuple) -> bool:
    """Membership in U^- (generated by the negative root groups)."""
    n = vrd.n
    for i in range(n):
        for j in range(n):
            x = m[i][j]
            if vrd.loop:
                if not x.is_zero() and x.degrees()[1] > 0:
                    return False
                c = x.coeff(0)
            else:
                c = x
            if i == j and c != 1:
                return False
            if i < j and c != 0:
                return False
    return True


def check_root_datum_axioms(vrd: ValuedRootDatum, sample_budget: int = 200, seed: int = 0) -> Report:
    rng = random.Random(seed)
    rep = Report(repr(vrd), seed)
    roots = _sample_roots(vrd)
    rs = vrd.rs
    pos = [a for a in roots if a.is_positive()]

    # (DR1): root groups nontrivial and normalized by T with the character alpha-bar
    d1 = CheckResult("DR1")
    for _ in range(sample_budget):
        a = rng.choice(roots)
        k = vrd.random_scalar(rng)
        u = vrd.u(a, k)
        tl = vrd.random_letter(rng, torus_prob=1.0)
        t = vrd.element([tl])
        d1.samples += 1
        if u.is_identity():
            d1.fail(f"u_{list(a.coords)}({k}) is trivial")
        if t * u * t.inv() != vrd.u(a, vrd.alpha_bar(a, tl.diag) * k):
            d1.fail(f"t u t^-1 != u(alpha(t) k) for {tl}, {u.word}")
    rep.results.append(d1)

    # (DR2): commutators of prenilpotent pairs in the group of the open interval
    d2 = CheckResult("DR2", note="prenilpotent pairs only")
    pairs = _prenilpotent_pairs(vrd)
    for _ in range(sample_budget):
        a, b = rng.choice(pairs)
        u = vrd.u(a, vrd.random_scalar(rng))
        v = vrd.u(b, vrd.random_scalar(rng))
        d2.samples += 1
        if _factor_over(vrd, _commutator(u, v).matrix, _open_interval(vrd, a, b)) is None:
            d2.fail(f"[{u.word}, {v.word}] not in U(]a,b[)")
    rep.results.append(d2)

    rep.results.append(CheckResult("DR3", note="vacuous: the root system is reduced"))

    # (DR4): n(u) conjugates U_b onto U_{r_a b}; n(u) T independent of u
    d4 = CheckResult("DR4")
    for _ in range(sample_budget):
        a, b = rng.choice(roots), rng.choice(roots)
        u1 = vrd.u(a, vrd.random_scalar(rng))
        u2 = vrd.u(a, vrd.random_scalar(rng))
        n1, _, _ = vrd.n_of(u1)
        n2, _, _ = vrd.n_of(u2)
        v = vrd.u(b, vrd.random_scalar(rng))
        d4.samples += 1
        got = vrd.recognize_root_element((n1 * v * n1.inv()).matrix)
        if got is None or got[0].coords != reflect(rs, a, b).coords:
            d4.fail(f"n({u1.word}) does not send U_{list(b.coords)} to U_r(b)")
        if not is_diagonal((n1.inv() * n2).matrix):
            d4.fail(f"n({u1.word}) T != n({u2.word}) T")
    rep.results.append(d4)

    # (DR5): T U^+ meets U^- only in e
    d5 = CheckResult("DR5")
    for _ in range(sample_budget):
        letters = [vrd.random_letter(rng, torus_prob=1.0)]
        for _ in range(rng.randint(0, 4)):
            letters.append(RootLetter(rng.choice(pos).coords, vrd.random_scalar(rng)))
        g = vrd.element(letters)
        d5.samples += 1
        if in_lower_unipotent(vrd, g.matrix) and not g.is_identity():
            d5.fail(f"{g.word} lies in T U^+ and U^-")
    # deterministic edge cases: the identity, and t U^+ with t = e
    e = vrd.identity_element()
    if not in_lower_unipotent(vrd, e.matrix):
        d5.fail("identity not recognized in U^-")
    for a in pos:
        u = vrd.u(a, 1)
        if in_lower_unipotent(vrd, u.matrix):
            d5.fail(f"positive root element {u.word} classified as lower")
    rep.results.append(d5)
    return rep
