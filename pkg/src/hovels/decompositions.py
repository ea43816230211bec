"""Iwasawa decomposition G = U(C) N G(F) by letter rewriting, Bruhat/Birkhoff decomposition
G = G(F1) N G(F2) by weighted elimination, and the uniqueness check for the N-factor."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .apartment import ApartmentPoint, eval_root
from .errors import (InputError, NeitherSpherical, NonterminatingRewrite, UnsupportedLetter,
                     ZeroParameter)
from .fixators import (Membership, as_point, epsilon_coords, expand_monomial, factor_matrix,
                       fixator_membership, weyl_lift_letters)
from .groups import GroupElement, MatrixLetter, RootLetter, TorusLetter, ValuedRootDatum, is_monomial, mat_mul
from .numbers import INF, NEG_INF, Laurent, frac, is_inf
from .roots import Root
from .tits_cone import Facet, canonical_facet, is_spherical

# rank-one identities in SL2 over the base field, with level s = gamma(F)


def _m2(a, b, c, d) -> tuple:
    return ((frac(a), frac(b)), (frac(c), frac(d)))


def _e12(x) -> tuple:
    return _m2(1, x, 0, 1)


def _e21(x) -> tuple:
    return _m2(1, 0, x, 1)


def _mul2(*ms) -> tuple:
    out = _m2(1, 0, 0, 1)
    for m in ms:
        out = mat_mul(out, m)
    return out


def rank1_matrices(x: tuple, s, p: int) -> tuple:
    """Split x in SL2(Q) as e12(y) . n . q with n monomial and q fixing the point of level s.
    q is returned as a list of (sign, param) meaning e12(param) for +1 and e21(param) for -1."""
    from .numbers import vp
    (a, b), (c, d) = x
    w = lambda z: vp(z, p)
    if c == 0 or (d != 0 and (s is NEG_INF or (s is not INF and w(d) <= w(c) - s))):
        # e12(b/d) diag(1/d, d) e21(c/d)
        return _e12(b / d), _m2(1 / d, 0, 0, d), [(-1, c / d)], "lower"
    if not is_inf(s) and frac(s).denominator == 1:
        ps = Fraction(p) ** int(s)
        n = _m2(-ps / c, 0, 0, -c / ps)
        # [[0, p^-s], [-p^s, 0]] = e12(p^-s) e21(-p^s) e12(p^-s)
        return _e12(a / c), n, [(1, 1 / ps), (-1, -ps), (1, 1 / ps), (1, d / c)], "wall"
    return _e12(a / c), _m2(0, -1 / c, c, 0), [(1, d / c)], "bruhat"


def rank1_decompose(vrd: ValuedRootDatum, v: GroupElement, F) -> tuple:
    """v = u_{-gamma}(c) a single lower letter; returns (u_plus, n, q) with v = u_plus n q."""
    if len(v.word) != 1 or not isinstance(v.word[0], RootLetter):
        raise InputError("rank1_decompose expects a single root letter")
    letter = v.word[0]
    if letter.param == 0:
        raise ZeroParameter("parameter must be nonzero")
    neg = vrd.rs.root(letter.root)
    gamma = -neg
    gamma = vrd.rs.root(gamma.coords)
    F = as_point(F)
    s = eval_root(gamma, F)
    emb = _Embedding(vrd, gamma)
    u2, n2, q2, _ = rank1_matrices(_e21(letter.param), s, vrd.p)
    u, n, q = emb.lift(u2, "u"), emb.lift(n2, "n"), emb.lift_letters(q2)
    if (u * n * q).matrix != v.matrix:
        raise ArithmeticError("rank-one identity failed")
    return u, n, q


class _Embedding:
    """SL2 -> G_gamma sending e12 to U_gamma and e21 to U_{-gamma}."""

    def __init__(self, vrd: ValuedRootDatum, gamma: Root):
        self.vrd = vrd
        self.gamma = gamma
        self.i, self.j, self.e = vrd.root_position(gamma.coords)

    def matrix(self, x: tuple) -> tuple:
        vrd, i, j, e = self.vrd, self.i, self.j, self.e
        n = vrd.n
        rows = [[vrd.one() if r == c else vrd.zero() for c in range(n)] for r in range(n)]
        (a, b), (c, d) = x
        if vrd.loop:
            rows[i][i], rows[i][j] = Laurent.const(a), Laurent.monomial(b, e)
            rows[j][i], rows[j][j] = Laurent.monomial(c, -e), Laurent.const(d)
        else:
            rows[i][i], rows[i][j], rows[j][i], rows[j][j] = a, b, c, d
        return tuple(tuple(r) for r in rows)

    def lift(self, x: tuple, label: str) -> GroupElement:
        (a, b), (c, d) = x
        g = self.gamma.coords
        ng = tuple(-t for t in g)
        # record elementary pieces as root letters when possible
        if a == 1 and d == 1 and c == 0:
            return self.vrd.element([RootLetter(g, b)] if b != 0 else [])
        if a == 1 and d == 1 and b == 0:
            return self.vrd.element([RootLetter(ng, c)] if c != 0 else [])
        m = self.matrix(x)
        return GroupElement(self.vrd, (MatrixLetter(m, label),), m)

    def lift_letters(self, pieces: list) -> GroupElement:
        g = self.gamma.coords
        ng = tuple(-t for t in g)
        return self.vrd.element([RootLetter(g if sg > 0 else ng, k) for sg, k in pieces if k != 0])

    def pull(self, m: tuple) -> tuple:
        """Inverse of matrix() on G_gamma."""
        vrd, i, j, e = self.vrd, self.i, self.j, self.e
        if vrd.loop:
            return ((m[i][i].coeff(0), m[i][j].coeff(e)), (m[j][i].coeff(-e), m[j][j].coeff(0)))
        return ((m[i][i], m[i][j]), (m[j][i], m[j][j]))


@dataclass
class IwasawaTriple:
    u: GroupElement
    n: GroupElement
    q: GroupElement
    certificate: list = field(default_factory=list)

    def product(self) -> GroupElement:
        return self.u * self.n * self.q


def _chamber_lift(vrd: ValuedRootDatum, C: Facet) -> tuple:
    """(n_C, sign) with U(C) = n_C U(sign C_0) n_C^-1."""
    if C.J:
        raise InputError("C must be a chamber")
    return vrd.element(weyl_lift_letters(vrd, C.word)), C.sign


def _normalize_letters(vrd: ValuedRootDatum, letters, sign: int) -> list:
    """Rewrite every letter as simple root letters (for the sign) and torus letters."""
    out = []
    for l in letters:
        if isinstance(l, TorusLetter):
            out.append(l)
        elif isinstance(l, RootLetter):
            if l.param == 0:
                continue
            r = vrd.rs.root(l.root)
            if sum(abs(c) for c in r.coords) == 1:
                out.append(l)
                continue
            # u_beta(k) = n_w u_{+-alpha_s}(k') n_w^-1 with beta = +- w alpha_s
            w = r.witness
            lift = vrd.element(weyl_lift_letters(vrd, w))
            inner = lift.inv() * vrd.element([l]) * lift
            got = vrd.recognize_root_element(inner.matrix)
            if got is None or sum(abs(c) for c in got[0].coords) != 1:
                raise UnsupportedLetter(f"cannot rewrite {l} through its witness")
            out.extend(weyl_lift_letters(vrd, w))
            out.append(RootLetter(got[0].coords, got[1]))
            out.extend(vrd.inverse_letter(x) for x in reversed(weyl_lift_letters(vrd, w)))
        elif isinstance(l, MatrixLetter):
            sub = expand_monomial(vrd, l.matrix) if is_monomial(l.matrix) else factor_matrix(vrd, l.matrix)
            out.extend(_normalize_letters(vrd, sub, sign))
        else:
            raise UnsupportedLetter(f"unknown letter {l!r}")
    return out


def iwasawa(vrd: ValuedRootDatum, g: GroupElement, C: Optional[Facet] = None, F=None,
            budget: int = 10000) -> IwasawaTriple:
    """g = u n q with u in U(C), n monomial and q fixing F."""
    rs = vrd.rs
    C = C if C is not None else canonical_facet(rs, 1, (), ())
    F = as_point(F) if F is not None else ApartmentPoint(rs, None, [0] * rs.rank)
    nC, sign = _chamber_lift(vrd, C)
    if is_monomial(g.matrix):
        ident = vrd.identity_element()
        return IwasawaTriple(ident, g, ident, [("monomial", repr(g))])
    if not C.word.letters:
        h = g
    else:
        h = nC.inv() * g
    # decompose h relative to the chamber sign*C_0, then conjugate u back
    trip = _iwasawa_standard(vrd, h, sign, F, budget)
    if C.word.letters:
        u = nC * trip.u * nC.inv()
        n = nC * trip.n
        trip = IwasawaTriple(u, n, trip.q, trip.certificate)
    if trip.product().matrix != g.matrix:
        raise ArithmeticError("Iwasawa reassembly failed")
    return trip


def _is_positive_for(root: Root, sign: int) -> bool:
    return sign * root.height > 0


def _iwasawa_standard(vrd: ValuedRootDatum, g: GroupElement, sign: int, F: ApartmentPoint,
                      budget: int) -> IwasawaTriple:
    letters = _normalize_letters(vrd, g.word, sign)
    ident = vrd.identity_element()
    u, n, q = ident, ident, ident
    cert = []
    steps = 0
    for l in reversed(letters):
        steps += 1
        if steps > budget:
            raise NonterminatingRewrite("rewrite budget exhausted")
        if isinstance(l, TorusLetter):
            t = vrd.element([l])
            u, n = t * u * t.inv(), t * n
            cert.append(("torus", repr(l)))
            continue
        r = vrd.rs.root(l.root)
        le = vrd.element([l])
        if _is_positive_for(r, sign):
            u = le * u
            cert.append(("absorb", repr(l)))
            continue
        beta = -r
        beta = vrd.rs.root(beta.coords)
        # split u = u_m . u_beta(x)
        i, j, e = vrd.root_position(beta.coords)
        x = u.matrix[i][j].coeff(e) if vrd.loop else u.matrix[i][j]
        ub = vrd.element([RootLetter(beta.coords, x)]) if x != 0 else ident
        um = u * ub.inv()
        um_conj = le * um * le.inv()
        # move l . u_beta(x) through n
        h = n.inv() * le * ub * n
        gamma_elt = n.inv() * vrd.element([RootLetter(beta.coords, Fraction(1))]) * n
        got = vrd.recognize_root_element(gamma_elt.matrix)
        if got is None:
            raise UnsupportedLetter("n does not conjugate the root group onto a root group")
        gamma = got[0]
        emb = _Embedding(vrd, gamma)
        s = eval_root(gamma, F)
        u2, n2, q2, rule = rank1_matrices(emb.pull(h.matrix), s, vrd.p)
        if emb.matrix(emb.pull(h.matrix)) != h.matrix:
            raise ArithmeticError("element left the rank-one subgroup")
        uu, nn, qq = emb.lift(u2, "u"), emb.lift(n2, "n"), emb.lift_letters(q2)
        u = um_conj * (n * uu * n.inv())
        n = n * nn
        q = qq * q
        cert.append((rule, repr(l)))
    return IwasawaTriple(u, n, q, cert)


def in_standard_unipotent(vrd: ValuedRootDatum, m: tuple, sign: int) -> bool:
    """Membership in U(sign C_0): unitriangular (upper for +, lower for -) at t = 0 or t = inf."""
    n = vrd.n
    for i in range(n):
        for j in range(n):
            x = m[i][j]
            if vrd.loop:
                if not x.is_zero():
                    lo, hi = x.degrees()
                    if (sign > 0 and lo < 0) or (sign < 0 and hi > 0):
                        return False
                c = x.coeff(0)
            else:
                c = x
            if i == j and c != 1:
                return False
            if sign * (j - i) < 0 and c != 0:
                return False
    return True


def in_chamber_unipotent(vrd: ValuedRootDatum, u: GroupElement, C: Facet) -> bool:
    nC, sign = _chamber_lift(vrd, C)
    return in_standard_unipotent(vrd, (nC.inv() * u * nC).matrix, sign)


def retract(vrd: ValuedRootDatum, g: GroupElement, a: ApartmentPoint, C: Optional[Facet] = None):
    """Image of [g, a] under the retraction centred at C: n . a from g = u n q."""
    trip = iwasawa(vrd, g, C, a)
    return vrd.act(trip.n, a)


# Bruhat / Birkhoff

def bruhat_birkhoff(vrd: ValuedRootDatum, g: GroupElement, F1, F2) -> tuple:
    """g = q1 n q2 with q_i fixing F_i and n monomial (principal points of SL_n)."""
    F1, F2 = as_point(F1), as_point(F2)
    sph1 = is_spherical(vrd.rs, F1.direction)
    sph2 = is_spherical(vrd.rs, F2.direction)
    if not (sph1 or sph2):
        raise NeitherSpherical("at least one point must lie in a spherical facade")
    if vrd.loop or not (F1.is_principal() and F2.is_principal()):
        raise UnsupportedLetter("weighted elimination needs principal points of SL_n")
    x, y = epsilon_coords(F1.rep), epsilon_coords(F2.rep)
    n = vrd.n
    m = [list(r) for r in g.matrix]
    left, right = [], []  # m_current = L_k..L_1 g R_1..R_k
    rows, cols = set(range(n)), set(range(n))
    w = lambda z: vrd.omega(z)
    while rows:
        best = None
        for i in rows:
            for j in cols:
                if m[i][j] != 0:
                    mu = w(m[i][j]) + x[i] - y[j]
                    if best is None or mu < best[0]:
                        best = (mu, i, j)
        _, i, j = best
        piv = m[i][j]
        for k in rows:
            if k != i and m[k][j] != 0:
                c = -m[k][j] / piv
                left.append(RootLetter(vrd.position_root(k, i).coords, c))
                m[k] = [a + c * b for a, b in zip(m[k], m[i])]
        for l in cols:
            if l != j and m[i][l] != 0:
                c = -m[i][l] / piv
                right.append(RootLetter(vrd.position_root(j, l).coords, c))
                for r in range(n):
                    m[r][l] = m[r][l] + c * m[r][j]
        rows.discard(i)
        cols.discard(j)
    mono = tuple(tuple(r) for r in m)
    nm = GroupElement(vrd, (MatrixLetter(mono, "n"),), mono)
    q1 = vrd.element([vrd.inverse_letter(l) for l in left])
    q2 = vrd.element([vrd.inverse_letter(l) for l in reversed(right)])
    if (q1 * nm * q2).matrix != g.matrix:
        raise ArithmeticError("Bruhat reassembly failed")
    return q1, nm, q2


# uniqueness of the N-factor

@dataclass
class UniquenessReport:
    trials: int
    failures: list
    seed: int

    @property
    def passed(self) -> bool:
        return not self.failures


def rewrite_word(vrd: ValuedRootDatum, g: GroupElement, rng: random.Random, moves: int = 3) -> GroupElement:
    """Same element, different word: insert cancelling pairs and split root letters."""
    word = list(g.word)
    for _ in range(moves):
        kind = rng.random()
        if kind < 0.5 or not word:
            l = vrd.random_letter(rng)
            pos = rng.randint(0, len(word))
            word[pos:pos] = [l, vrd.inverse_letter(l)]
        else:
            pos = rng.randrange(len(word))
            l = word[pos]
            if isinstance(l, RootLetter):
                k1 = vrd.random_scalar(rng)
                word[pos:pos + 1] = [RootLetter(l.root, k1), RootLetter(l.root, l.param - k1)]
            elif isinstance(l, TorusLetter):
                t1 = vrd.random_letter(rng, torus_prob=1.0)
                rest = TorusLetter(tuple(a / b for a, b in zip(l.diag, t1.diag)))
                word[pos:pos + 1] = [t1, rest]
    h = vrd.element(word)
    if h.matrix != g.matrix:
        raise ArithmeticError("rewrite changed the element")
    return h


def in_N_of_point(vrd: ValuedRootDatum, n: GroupElement, F) -> bool:
    F = as_point(F)
    return (is_monomial(n.matrix) and vrd.act(n, F) == F
            and fixator_membership(vrd, F, n) is Membership.IN)


def verify_n_uniqueness(vrd: ValuedRootDatum, g: GroupElement, C: Optional[Facet] = None, F=None,
                        trials: int = 10, seed: int = 0) -> UniquenessReport:
    rng = random.Random(seed)
    F = as_point(F) if F is not None else ApartmentPoint(vrd.rs, None, [0] * vrd.rs.rank)
    base = iwasawa(vrd, g, C, F)
    failures = []
    for _ in range(trials):
        h = rewrite_word(vrd, g, rng)
        other = iwasawa(vrd, h, C, F)
        if not in_N_of_point(vrd, base.n.inv() * other.n, F):
            failures.append({"word": [repr(l) for l in h.word]})
    return UniquenessReport(trials, failures, seed)
