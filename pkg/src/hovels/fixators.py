"""Membership oracles for the fixators Q(a) of apartment points, plus matrix factorization
into root letters."""
from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Optional

from .apartment import ApartmentPoint, FacetGerm, apply, eval_root
from .errors import InputError, UnsupportedLetter
from .groups import (GroupElement, MatrixLetter, RootLetter, TorusLetter, ValuedRootDatum, _is_zero,
                     is_diagonal, is_monomial, mat_mul)
from .numbers import INF, NEG_INF, Laurent, frac
from .roots import WeylWord
from .tits_cone import sample_point, sign_on_roots


class Membership(Enum):
    IN = "In"
    OUT = "Out"
    UNKNOWN = "Unknown"


def epsilon_coords(x) -> list:
    """SL_n coordinates a_i with alpha_ij(x) = a_i - a_j and a_{n-1} = 0."""
    n = len(x) + 1
    a = [Fraction(0)] * n
    for i in range(n - 2, -1, -1):
        a[i] = a[i + 1] + frac(x[i])
    return a


def germ_point(germ: FacetGerm) -> ApartmentPoint:
    """A point x + eps*y whose fixator equals the germ's: eps is below every wall gap at x."""
    x = germ.base
    if not x.is_principal():
        raise InputError("germs are supported at principal-facade base points")
    y = sample_point(x.rs, germ.direction)
    den = 1
    for c in x.rep:
        den = max(den, c.denominator)
    big = 1 + sum(abs(c) for c in y) * 4
    eps = Fraction(1, 4 * den * int(big + 1))
    return ApartmentPoint(x.rs, x.direction, tuple(a + eps * b for a, b in zip(x.rep, y)))


def as_point(F) -> ApartmentPoint:
    return germ_point(F) if isinstance(F, FacetGerm) else F


def _sl_fixes(vrd: ValuedRootDatum, a: ApartmentPoint, m: tuple) -> bool:
    n = vrd.n
    a = as_point(a)
    eps = epsilon_coords(a.rep)
    f = a.direction
    s = epsilon_coords(sample_point(vrd.rs, f))
    # blocks: indices with equal sample coordinate (alpha_ij vanishes on f)
    blocks = {}
    for i in range(n):
        blocks.setdefault(s[i], []).append(i)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if s[i] < s[j] and not _is_zero(m[i][j]):
                return False
    for B in blocks.values():
        sub = tuple(tuple(m[i][j] for j in B) for i in B)
        from .groups import det
        d = det(sub)
        if d == 0:
            return False
        shift = vrd.omega(d) / len(B)
        for i in B:
            for j in B:
                x = m[i][j]
                if x == 0:
                    continue
                if vrd.omega(x) < eps[j] - eps[i] + shift:
                    return False
    return True


def _loop_entry_ok(vrd: ValuedRootDatum, x: ApartmentPoint, m: tuple) -> Optional[bool]:
    """Necessary coefficient-wise condition at a principal point; None if not principal."""
    rep = x.rep
    delta = rep[0] + rep[1]
    for i in range(2):
        for j in range(2):
            for e, c in m[i][j].items():
                if i == j:
                    bound = -e * delta
                else:
                    bound = -vrd.position_root(i, j, e)(rep)
                if vrd.omega(c) < bound:
                    return False
    return True


def _loop_pattern_ok(vrd: ValuedRootDatum, a: ApartmentPoint, m: tuple) -> bool:
    """Membership in the vector parabolic P(f): coefficients on roots negative on f vanish."""
    f = a.direction
    rs = vrd.rs
    sp = sample_point(rs, f)
    dsign = (sp[0] + sp[1] > 0) - (sp[0] + sp[1] < 0)
    for i in range(2):
        for j in range(2):
            for e, _ in m[i][j].items():
                if i == j:
                    s = dsign * ((e > 0) - (e < 0))
                else:
                    s = sign_on_roots(rs, f, vrd.position_root(i, j, e))
                if s < 0:
                    return False
    return True


def fixes_point_monomial(vrd: ValuedRootDatum, n: GroupElement, a: ApartmentPoint) -> bool:
    return apply(vrd.nu(n), a) == a


def fixator_membership(vrd: ValuedRootDatum, a, g: GroupElement, degree_bound: int = 8) -> Membership:
    """Is g in the fixator Q(a)? Exact for SL2/SL3; one-sided for loop-SL2."""
    a = as_point(a)
    m = g.matrix
    if g.is_identity():
        return Membership.IN
    if not vrd.loop:
        return Membership.IN if _sl_fixes(vrd, a, m) else Membership.OUT
    if not _loop_pattern_ok(vrd, a, m):
        return Membership.OUT
    if a.is_principal():
        if not _loop_entry_ok(vrd, a, m):
            return Membership.OUT
    if is_monomial(m):
        return Membership.IN if fixes_point_monomial(vrd, g, a) else Membership.OUT
    if all(_word_letter_fixes(vrd, a, l) for l in g.word):
        return Membership.IN
    letters = _loop_certificate(vrd, a, m, degree_bound)
    if letters is not None:
        return Membership.IN
    return Membership.UNKNOWN


def _letter_fixes(vrd: ValuedRootDatum, a: ApartmentPoint, letter) -> bool:
    if isinstance(letter, RootLetter):
        r = vrd.rs.root(letter.root)
        v = eval_root(r, a)
        if v is INF:
            return True
        if v is NEG_INF:
            return letter.param == 0
        return letter.param == 0 or vrd.omega(letter.param) + v >= 0
    g = vrd.element([letter])
    return is_monomial(g.matrix) and fixes_point_monomial(vrd, g, a)


def _word_letter_fixes(vrd: ValuedRootDatum, a: ApartmentPoint, letter) -> bool:
    if isinstance(letter, MatrixLetter) and not is_monomial(letter.matrix):
        return False
    return _letter_fixes(vrd, a, letter)


def _loop_certificate(vrd: ValuedRootDatum, a: ApartmentPoint, m: tuple, degree_bound: int):
    """Factor m into letters each fixing a, by Euclid reduction with fixing letters only."""
    for x in (m[0][0], m[0][1], m[1][0], m[1][1]):
        if not x.is_zero():
            lo, hi = x.degrees()
            if hi > degree_bound or lo < -degree_bound:
                return None
    try:
        letters = factor_matrix(vrd, m)
    except (UnsupportedLetter, InputError):
        return None
    if all(_letter_fixes(vrd, a, l) for l in letters):
        return letters
    return None


# factorization of matrices into letters

def simple_reflection_letters(vrd: ValuedRootDatum, i: int) -> list:
    """Letters of n(u_{alpha_i}(1)) = u_{-a}(-1) u_a(1) u_{-a}(-1)."""
    a = vrd.rs.simple_root(i).coords
    na = tuple(-x for x in a)
    return [RootLetter(na, Fraction(-1)), RootLetter(a, Fraction(1)), RootLetter(na, Fraction(-1))]


def weyl_lift_letters(vrd: ValuedRootDatum, w: WeylWord) -> list:
    out = []
    for i in w.letters:
        out.extend(simple_reflection_letters(vrd, i))
    return out


def expand_monomial(vrd: ValuedRootDatum, m: tuple) -> list:
    """Write a monomial matrix as a lift of its Weyl part followed by a constant torus letter."""
    g = GroupElement(vrd, (MatrixLetter(m),), m)
    w = vrd.nu(g).linear
    lift = vrd.element(weyl_lift_letters(vrd, w))
    t = lift.inv() * g
    if not is_diagonal(t.matrix):
        raise UnsupportedLetter("monomial element does not reduce to the torus")
    diag = []
    for i in range(vrd.n):
        x = t.matrix[i][i]
        if vrd.loop:
            if not x.is_monomial() or 0 not in x.coeffs:
                raise UnsupportedLetter("non-constant torus part")
            x = x.coeff(0)
        diag.append(x)
    out = weyl_lift_letters(vrd, w)
    if any(d != 1 for d in diag):
        out.append(TorusLetter(tuple(diag)))
    return out


def _row_add(vrd: ValuedRootDatum, i: int, j: int, c) -> tuple:
    """Letters for the elementary matrix I + c E_ij (c a scalar or Laurent polynomial)."""
    if vrd.loop:
        return [RootLetter(vrd.position_root(i, j, e).coords, k) for e, k in c.items()]
    return [RootLetter(vrd.position_root(i, j).coords, c)] if c != 0 else []


def factor_matrix(vrd: ValuedRootDatum, m: tuple) -> list:
    """Letters whose product is m: row reduction to a monomial matrix, then expansion."""
    n = vrd.n
    ops = []  # left factors applied: m_current = E_k ... E_1 m
    cur = m

    def apply_row(i, j, c):
        nonlocal cur
        if _is_zero(c):
            return
        for l in _row_add(vrd, i, j, c):
            cur = mat_mul(vrd.letter_matrix(l), cur)
            ops.append(l)

    used = set()
    for col in range(n):
        while True:
            rows = [r for r in range(n) if r not in used and not _is_zero(cur[r][col])]
            if not rows:
                raise InputError("singular matrix")
            if len(rows) == 1:
                piv = rows[0]
                break
            if vrd.loop:
                rows.sort(key=lambda r: _spread(cur[r][col]))
                piv, other = rows[0], rows[1]
                q = _laurent_quotient(cur[other][col], cur[piv][col])
                apply_row(other, piv, -q)
            else:
                piv = rows[0]
                for r in rows[1:]:
                    apply_row(r, piv, -cur[r][col] / cur[piv][col])
                break
        # clear the pivot column in rows already used
        for r in used:
            if not _is_zero(cur[r][col]):
                if vrd.loop and not cur[piv][col].is_monomial():
                    raise InputError("pivot is not a unit")
                apply_row(r, piv, -cur[r][col] / cur[piv][col])
        used.add(piv)
    if not is_monomial(cur):
        # clear remaining off-pivot entries column by column from the right
        raise InputError("row reduction did not reach a monomial matrix")
    inv_ops = [vrd.inverse_letter(l) for l in ops]
    out = inv_ops + expand_monomial(vrd, cur)
    if vrd.element(out).matrix != m:
        raise InputError("factorization check failed")
    return out


def _spread(x: Laurent) -> int:
    lo, hi = x.degrees()
    return hi - lo


def _laurent_quotient(a: Laurent, b: Laurent) -> Laurent:
    """q with spread(a - q b) < spread(b) (or a - q b = 0)."""
    alo, _ = a.degrees()
    blo, _ = b.degrees()
    A = {e - alo: c for e, c in a.items()}
    B = {e - blo: c for e, c in b.items()}
    db = max(B)
    lead = B[db]
    q = {}
    while A and max(A) >= db:
        da = max(A)
        c = A[da] / lead
        q[da - db] = c
        for e, v in B.items():
            k = e + da - db
            A[k] = A.get(k, 0) - c * v
            if A[k] == 0:
                del A[k]
    shift = alo - blo
    return Laurent({e + shift: c for e, c in q.items()})
