"""Concrete groups with valued root data: SL2 and SL3 over Q with a p-adic valuation,
and loop-SL2 over Q[t, 1/t]."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .apartment import AffineAuto, ApartmentPoint, apply
from .errors import BadPrime, IdentityElement, InputError, NotInUa, NotReal, NotTorus
from .numbers import Laurent, frac, is_prime, vp
from .roots import Root, RootSystem, WeylWord, build_root_system

# matrices are tuples of row tuples over Fraction or Laurent


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> tuple:
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def mat_mul(a: tuple, b: tuple) -> tuple:
    n = len(a)
    return tuple(tuple(_dot(a[i], [b[k][j] for k in range(n)]) for j in range(n)) for i in range(n))


def _dot(r, c):
    acc = None
    for x, y in zip(r, c):
        if _is_zero(x) or _is_zero(y):
            continue
        t = x * y
        acc = t if acc is None else acc + t
    if acc is None:
        return r[0] * 0 if not isinstance(r[0], Laurent) else Laurent()
    return acc


def _is_zero(x) -> bool:
    return x.is_zero() if isinstance(x, Laurent) else x == 0


def det(m: tuple):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        minor = tuple(tuple(m[i][k] for k in range(n) if k != j) for i in range(1, n))
        t = m[0][j] * det(minor)
        if j % 2:
            t = -t
        total = t if total is None else total + t
    return total


def mat_inv_det1(m: tuple) -> tuple:
    """Inverse of a determinant-one matrix via the adjugate (no division needed)."""
    n = len(m)
    if n == 2:
        return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = tuple(tuple(m[r][c] for c in range(n) if c != j) for r in range(n) if r != i)
            d = det(minor)
            row.append(-d if (i + j) % 2 else d)
        cof.append(row)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def is_monomial(m: tuple) -> bool:
    n = len(m)
    rows = [sum(0 if _is_zero(x) else 1 for x in r) for r in m]
    cols = [sum(0 if _is_zero(m[i][j]) else 1 for i in range(n)) for j in range(n)]
    if any(r != 1 for r in rows) or any(c != 1 for c in cols):
        return False
    return all(_is_zero(x) or not isinstance(x, Laurent) or x.is_monomial() for r in m for x in r)


def is_diagonal(m: tuple) -> bool:
    return all(_is_zero(m[i][j]) for i in range(len(m)) for j in range(len(m)) if i != j)


# letters

@dataclass(frozen=True)
class RootLetter:
    root: tuple
    param: Fraction

    def __repr__(self):
        return f"u{list(self.root)}({self.param})"


@dataclass(frozen=True)
class TorusLetter:
    diag: tuple

    def __repr__(self):
        return f"t({', '.join(str(d) for d in self.diag)})"


@dataclass(frozen=True)
class MatrixLetter:
    """An explicit matrix factor (monomial elements of N, or recorded fixator pieces)."""

    matrix: tuple
    label: str = "m"

    def __repr__(self):
        return f"{self.label}{_fmt_matrix(self.matrix)}"


def _fmt_matrix(m) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in r) for r in m) + "]"


class ValuedRootDatum:
    """One of SL2(p), SL3(p), LoopSL2(p) with value group (1/m)Z."""

    def __init__(self, tag: str, p: int, m: int = 1):
        if not is_prime(p):
            raise BadPrime(f"{p} is not prime")
        if not isinstance(m, int) or m < 1:
            raise InputError("m must be a positive integer")
        self.tag, self.p, self.m = tag, p, m
        if tag == "SL2":
            self.n, self.loop = 2, False
            self.rs = build_root_system([[2]])
        elif tag == "SL3":
            self.n, self.loop = 3, False
            self.rs = build_root_system([[2, -1], [-1, 2]])
        elif tag == "LoopSL2":
            self.n, self.loop = 2, True
            self.rs = build_root_system([[2, -2], [-2, 2]])
        else:
            raise InputError(f"unknown instantiation {tag!r}")

    def __repr__(self):
        return f"{self.tag}({self.p}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, ValuedRootDatum) and (self.tag, self.p, self.m) == (other.tag, other.p, other.m)

    def __hash__(self):
        return hash((self.tag, self.p, self.m))

    # scalars
    def scalar(self, x):
        if self.loop:
            return x if isinstance(x, Laurent) else Laurent.const(x)
        return frac(x)

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def omega(self, x) -> object:
        return vp(x, self.p)

    # roots and their matrix positions
    def root_position(self, root: Sequence[int]) -> tuple:
        """(row, col, t-exponent) of the root group's off-diagonal entry."""
        c = tuple(int(x) for x in root)
        if self.tag == "SL2":
            if c == (1,):
                return 0, 1, 0
            if c == (-1,):
                return 1, 0, 0
        elif self.tag == "SL3":
            table = {(1, 0): (0, 1), (0, 1): (1, 2), (1, 1): (0, 2)}
            if c in table:
                i, j = table[c]
                return i, j, 0
            neg = tuple(-x for x in c)
            if neg in table:
                i, j = table[neg]
                return j, i, 0
        else:
            a0, a1 = c
            if a1 == a0 + 1:
                return 0, 1, a0
            if a1 == a0 - 1:
                return 1, 0, a0
        raise NotReal(f"{c} is not a root of {self.tag}")

    def position_root(self, i: int, j: int, e: int = 0) -> Root:
        if self.tag == "SL2":
            return self.rs.root((1,) if i < j else (-1,))
        if self.tag == "SL3":
            lo, hi = min(i, j), max(i, j)
            c = [0, 0]
            for k in range(lo, hi):
                c[k] = 1
            if i > j:
                c = [-x for x in c]
            return self.rs.root(tuple(c))
        return self.rs.root((e, e + 1) if (i, j) == (0, 1) else (e, e - 1))

    def roots(self, loop_bound: int = 3) -> list:
        if self.tag == "SL2":
            return [self.rs.root((1,)), self.rs.root((-1,))]
        if self.tag == "SL3":
            return [self.rs.root(c) for c in [(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)]]
        out = []
        for e in range(-loop_bound, loop_bound + 1):
            out.append(self.rs.root((e, e + 1)))
            out.append(self.rs.root((e, e - 1)))
        return out

    # matrices of letters
    def letter_matrix(self, letter) -> tuple:
        n = self.n
        if isinstance(letter, RootLetter):
            i, j, e = self.root_position(letter.root)
            entry = Laurent.monomial(letter.param, e) if self.loop else frac(letter.param)
            return tuple(tuple(self.one() if r == c else (entry if (r, c) == (i, j) else self.zero())
                               for c in range(n)) for r in range(n))
        if isinstance(letter, TorusLetter):
            return tuple(tuple(self.scalar(letter.diag[r]) if r == c else self.zero() for c in range(n))
                         for r in range(n))
        return letter.matrix

    def inverse_letter(self, letter):
        if isinstance(letter, RootLetter):
            return RootLetter(letter.root, -letter.param)
        if isinstance(letter, TorusLetter):
            return TorusLetter(tuple(1 / frac(d) for d in letter.diag))
        return MatrixLetter(mat_inv_det1(letter.matrix), letter.label)

    # constructors
    def element(self, letters: Iterable = ()) -> "GroupElement":
        letters = tuple(letters)
        m = identity(self.n, self.one(), self.zero())
        for l in letters:
            m = mat_mul(m, self.letter_matrix(l))
        if det(m) != self.one():
            raise InputError("element does not have determinant one")
        return GroupElement(self, letters, m)

    def identity_element(self) -> "GroupElement":
        return self.element(())

    def u(self, root, param) -> "GroupElement":
        c = root.coords if isinstance(root, Root) else tuple(root)
        self.root_position(c)
        return self.element([RootLetter(c, frac(param))])

    def t(self, diag: Sequence) -> "GroupElement":
        d = tuple(frac(x) for x in diag)
        if len(d) != self.n or any(x == 0 for x in d):
            raise NotTorus("torus element needs nonzero diagonal entries")
        return self.element([TorusLetter(d)])

    def from_matrix(self, m: Sequence[Sequence], label: str = "m") -> "GroupElement":
        mm = tuple(tuple(self.scalar(x) for x in r) for r in m)
        return self.element([MatrixLetter(mm, label)])

    def e(self, i: int, j: int, param, exp: int = 0) -> "GroupElement":
        """Elementary matrix I + param * t^exp * E_ij as a root letter."""
        return self.u(self.position_root(i, j, exp).coords, param)

    # root group readback
    def root_group_param(self, root, g: "GroupElement") -> Fraction:
        """k with g = u_root(k); raises NotInUa otherwise."""
        c = root.coords if isinstance(root, Root) else tuple(root)
        i, j, e = self.root_position(c)
        m = g.matrix
        for r in range(self.n):
            for s in range(self.n):
                x = m[r][s]
                if r == s:
                    if x != self.one():
                        raise NotInUa(f"{g} is not in U_{list(c)}")
                elif (r, s) != (i, j) and not _is_zero(x):
                    raise NotInUa(f"{g} is not in U_{list(c)}")
        x = m[i][j]
        if self.loop:
            if x.is_zero():
                return Fraction(0)
            if set(x.coeffs) != {e}:
                raise NotInUa(f"{g} is not in U_{list(c)}")
            return x.coeff(e)
        return x

    def phi(self, root, g: "GroupElement"):
        """phi_root(g) = omega(k) for g = u_root(k); INF at the identity."""
        return self.omega(self.root_group_param(root, g))

    def recognize_root_element(self, m: tuple) -> Optional[tuple]:
        """(root, k) if m is a single nontrivial root-group element."""
        off = [(r, s) for r in range(self.n) for s in range(self.n) if r != s and not _is_zero(m[r][s])]
        if len(off) != 1 or any(m[r][r] != self.one() for r in range(self.n)):
            return None
        r, s = off[0]
        x = m[r][s]
        if self.loop:
            if not x.is_monomial():
                return None
            (e, k), = x.coeffs.items()
            return self.position_root(r, s, e), k
        return self.position_root(r, s), x

    # torus
    def alpha_bar(self, root, diag: Sequence) -> Fraction:
        i, j, _ = self.root_position(root.coords if isinstance(root, Root) else root)
        return frac(diag[i]) / frac(diag[j])

    def torus_translation(self, t: "GroupElement") -> tuple:
        m = t.matrix
        if not is_diagonal(m):
            raise NotTorus("not diagonal")
        diag = []
        for r in range(self.n):
            x = m[r][r]
            if self.loop:
                if not x.is_monomial() or 0 not in x.coeffs:
                    raise NotTorus("diagonal entries must be constants in the torus")
                x = x.coeff(0)
            diag.append(x)
        return tuple(-self.omega(self.alpha_bar(a, diag)) for a in self.rs.simple_roots())

    # monomial elements and the apartment action
    def nu(self, n: "GroupElement") -> AffineAuto:
        """Affine action of a monomial element on the principal facade."""
        m = n.matrix
        if not is_monomial(m):
            raise InputError("not a monomial element")
        minv = mat_inv_det1(m)
        images, shifts = [], []
        for a in self.rs.simple_roots():
            u = self.letter_matrix(RootLetter(a.coords, Fraction(1)))
            conj = mat_mul(mat_mul(m, u), minv)
            got = self.recognize_root_element(conj)
            if got is None:
                raise InputError("monomial element does not permute root groups")
            beta, k = got
            images.append(beta.coords)
            shifts.append(-self.omega(k))
        w = _word_from_images(self.rs, images)
        t = self.rs.act_vector(w, shifts)
        return AffineAuto(w, t)

    def act(self, n: "GroupElement", a: ApartmentPoint) -> ApartmentPoint:
        return apply(self.nu(n), a)

    # n(u)
    def n_of(self, u: "GroupElement") -> tuple:
        got = self.recognize_root_element(u.matrix)
        if got is None:
            if u.matrix == identity(self.n, self.one(), self.zero()):
                raise IdentityElement("n(u) needs a nontrivial root element")
            raise InputError("not a single root-group element")
        alpha, k = got
        neg = tuple(-x for x in alpha.coords)
        up = self.element([RootLetter(neg, -1 / k)])
        return up * u * up, up, up

    # sampling
    def random_scalar(self, rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
        e = rng.randint(lo, hi)
        units = [x for x in range(1, 3 * self.p + 2) if x % self.p]
        num, den = rng.choice(units), rng.choice(units)
        s = rng.choice((1, -1))
        return s * Fraction(num, den) * Fraction(self.p) ** e

    def random_letter(self, rng: random.Random, roots: Optional[Sequence[Root]] = None,
                      torus_prob: float = 0.2, lo: int = -3, hi: int = 3):
        if rng.random() < torus_prob:
            c = self.random_scalar(rng, -2, 2)
            if self.n == 2:
                d = (c, 1 / c)
            else:
                d2 = self.random_scalar(rng, -1, 1)
                d = (c, d2, 1 / (c * d2))
            return TorusLetter(d)
        roots = roots or self.roots(2)
        r = rng.choice(list(roots))
        return RootLetter(r.coords, self.random_scalar(rng, lo, hi))

    def random_element(self, rng: random.Random, length: int, **kw) -> "GroupElement":
        return self.element([self.random_letter(rng, **kw) for _ in range(length)])


def _word_from_images(rs: RootSystem, images: list) -> WeylWord:
    """The Weyl element w with w(alpha_i) = images[i], as a word."""
    from .tits_cone import _descend
    n = rs.rank
    # solve beta_i(x) = 1 for x = w.rho
    M = [[Fraction(images[i][j]) for j in range(n)] + [Fraction(1)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    x = tuple(M[i][n] for i in range(n))
    _, w = _descend(rs, x)
    for i in range(n):
        if rs.act_coords(w, rs.simple_root(i).coords) != tuple(images[i]):
            raise InputError("images of simple roots do not come from a Weyl element")
    return w


class GroupElement:
    __slots__ = ("datum", "word", "matrix")

    def __init__(self, datum: ValuedRootDatum, word: tuple, matrix: tuple):
        self.datum, self.word, self.matrix = datum, word, matrix

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.datum, self.word + other.word, mat_mul(self.matrix, other.matrix))

    def inv(self) -> "GroupElement":
        d = self.datum
        return GroupElement(d, tuple(d.inverse_letter(l) for l in reversed(self.word)),
                            mat_inv_det1(self.matrix))

    def __eq__(self, other):
        return isinstance(other, GroupElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"GroupElement({_fmt_matrix(self.matrix)})"

    def is_identity(self) -> bool:
        return self.matrix == identity(self.datum.n, self.datum.one(), self.datum.zero())


def instantiate(tag: str, p: int, m: int = 1) -> ValuedRootDatum:
    return ValuedRootDatum(tag, p, m)


def mul(g: GroupElement, h: GroupElement) -> GroupElement:
    return g * h


def inv(g: GroupElement) -> GroupElement:
    return g.inv()


def eq(g: GroupElement, h: GroupElement) -> bool:
    return g == h


def n_of(u: GroupElement) -> tuple:
    return u.datum.n_of(u)


def torus_translation(t: GroupElement) -> tuple:
    return t.datum.torus_translation(t)
