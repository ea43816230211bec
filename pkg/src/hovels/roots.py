"""Generalized Cartan matrices, real roots, Weyl group action, intervals and prenilpotence."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .errors import NotGCM, NotReal, NotSymmetrizable
from .numbers import frac


class Tri(Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"


class Finiteness(Enum):
    FINITE = "Finite"
    INFINITE = "Infinite"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class WeylWord:
    """Word in simple reflections; (i1, ..., ik) acts as r_i1 o ... o r_ik."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(i) for i in self.letters))

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other: "WeylWord") -> "WeylWord":
        return WeylWord(self.letters + other.letters)

    def inverse(self) -> "WeylWord":
        return WeylWord(tuple(reversed(self.letters)))


@dataclass(frozen=True, eq=False)
class Root:
    """Real root in simple-root coordinates with a witness: coords = witness . alpha_simple."""

    coords: tuple
    witness: WeylWord = field(default_factory=WeylWord)
    simple: int = 0
    sign: int = 1

    def __eq__(self, other):
        return isinstance(other, Root) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coords), self.witness, self.simple, -self.sign)

    def __repr__(self):
        return f"Root{self.coords}"

    @property
    def height(self) -> int:
        return sum(self.coords)

    def is_positive(self) -> bool:
        return self.height > 0

    def __call__(self, x: Sequence) -> Fraction:
        """Evaluate on a vector given in fundamental-coweight coordinates."""
        return sum((c * frac(v) for c, v in zip(self.coords, x)), Fraction(0))


def _positive_definite(m: Sequence[Sequence]) -> bool:
    # LDL^T pivots; all must be positive
    n = len(m)
    a = [[frac(x) for x in row] for row in m]
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


class RootSystem:
    """Symmetrizable generalized Cartan matrix with its real roots and Weyl group."""

    def __init__(self, cartan: Sequence[Sequence[int]], symmetrizer: Sequence[Fraction]):
        self.cartan = tuple(tuple(int(x) for x in row) for row in cartan)
        self.rank = len(self.cartan)
        self.symmetrizer = tuple(symmetrizer)
        self._root_cache: dict = {}

    def __eq__(self, other):
        return isinstance(other, RootSystem) and self.cartan == other.cartan

    def __hash__(self):
        return hash(self.cartan)

    def __repr__(self):
        return f"RootSystem({[list(r) for r in self.cartan]})"

    # bilinear data
    def form(self, a: Sequence, b: Sequence) -> Fraction:
        """Invariant form (a, b) with (alpha_i, alpha_j) = d_i A_ij."""
        d, A = self.symmetrizer, self.cartan
        return sum((d[i] * A[i][j] * a[i] * b[j]
                    for i in range(self.rank) for j in range(self.rank)
                    if a[i] and b[j]), Fraction(0))

    def simple_root(self, i: int) -> Root:
        return Root(tuple(1 if j == i else 0 for j in range(self.rank)), WeylWord(), i, 1)

    def simple_roots(self) -> list:
        return [self.simple_root(i) for i in range(self.rank)]

    def coroot(self, alpha: Root) -> tuple:
        """alpha^vee in fundamental-coweight coordinates: its j-th entry is alpha_j(alpha^vee)."""
        return tuple(2 * self.form(alpha.coords, e.coords) / self.form(alpha.coords, alpha.coords)
                     for e in self.simple_roots())

    # simple reflections
    def _ri_coords(self, i: int, c: tuple) -> tuple:
        k = sum(c[j] * self.cartan[i][j] for j in range(self.rank))
        if k == 0:
            return c
        return tuple(c[j] - k if j == i else c[j] for j in range(self.rank))

    def _ri_vector(self, i: int, v: tuple) -> tuple:
        vi = v[i]
        if vi == 0:
            return v
        return tuple(v[j] - vi * self.cartan[i][j] for j in range(self.rank))

    def act_coords(self, word: WeylWord, c: tuple) -> tuple:
        for i in reversed(word.letters):
            c = self._ri_coords(i, c)
        return c

    def act_vector(self, word: WeylWord, v: Sequence) -> tuple:
        v = tuple(frac(x) for x in v)
        for i in reversed(word.letters):
            v = self._ri_vector(i, v)
        return v

    def act_root(self, word: WeylWord, alpha: Root) -> Root:
        coords = self.act_coords(word, alpha.coords)
        return Root(coords, word * alpha.witness, alpha.simple, alpha.sign)

    def root(self, coords: Sequence[int]) -> Root:
        """Certify coords as a real root, attaching a witnessing Weyl word."""
        key = tuple(int(c) for c in coords)
        hit = self._root_cache.get(key)
        if hit is not None:
            return hit
        r = self._certify(key)
        self._root_cache[key] = r
        return r

    def _certify(self, coords: tuple) -> Root:
        if len(coords) != self.rank or not any(coords):
            raise NotReal(f"{coords} is not a real root")
        sign = 1
        if all(c <= 0 for c in coords):
            sign = -1
            coords_p = tuple(-c for c in coords)
        elif all(c >= 0 for c in coords):
            coords_p = coords
        else:
            raise NotReal(f"{coords} has mixed signs")
        c = coords_p
        path = []
        while sum(c) > 1:
            for i in range(self.rank):
                k = sum(c[j] * self.cartan[i][j] for j in range(self.rank))
                if k > 0:
                    c = self._ri_coords(i, c)
                    path.append(i)
                    break
            else:
                raise NotReal(f"{coords} is not a real root")
            if any(x < 0 for x in c):
                raise NotReal(f"{coords} is not a real root")
        if sum(c) != 1:
            raise NotReal(f"{coords} is not a real root")
        simple = c.index(1)
        # coords_p = r_path[0] ... r_path[-1] alpha_simple
        return Root(coords, WeylWord(tuple(path)), simple, sign)

    def is_real(self, coords: Sequence[int]) -> bool:
        try:
            self.root(coords)
            return True
        except NotReal:
            return False


def _symmetrizer(A: tuple) -> tuple:
    n = len(A)
    d: list = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if i != j and A[i][j] != 0:
                    want = d[i] * A[i][j] / A[j][i]
                    if d[j] is None:
                        d[j] = want
                        comp.append(j)
                        queue.append(j)
                    elif d[j] != want:
                        raise NotSymmetrizable(f"cycle condition fails at ({i},{j})")
        # scale the component to coprime positive integers
        lcm = 1
        for i in comp:
            q = d[i].denominator
            lcm = lcm * q // _gcd(lcm, q)
        ints = [int(d[i] * lcm) for i in comp]
        g = 0
        for x in ints:
            g = _gcd(g, x)
        for i, x in zip(comp, ints):
            d[i] = Fraction(x, g)
    return tuple(d)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def build_root_system(cartan: Sequence[Sequence[int]]) -> RootSystem:
    """Validate a generalized Cartan matrix and compute its symmetrizer."""
    try:
        rows = [list(r) for r in cartan]
    except TypeError:
        raise NotGCM("cartan must be a square integer matrix")
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise NotGCM("cartan must be a nonempty square matrix")
    for r in rows:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, int):
                if isinstance(x, Fraction) and x.denominator == 1:
                    continue
                raise NotGCM(f"non-integer entry {x!r}")
    A = tuple(tuple(int(x) for x in r) for r in rows)
    for i in range(n):
        if A[i][i] != 2:
            raise NotGCM(f"diagonal entry A[{i}][{i}] = {A[i][i]} != 2")
        for j in range(n):
            if i != j:
                if A[i][j] > 0:
                    raise NotGCM(f"positive off-diagonal entry A[{i}][{j}]")
                if (A[i][j] == 0) != (A[j][i] == 0):
                    raise NotGCM(f"asymmetric zero pattern at ({i},{j})")
    return RootSystem(A, _symmetrizer(A))


def pairing(rs: RootSystem, alpha: Root, beta: Root) -> int:
    """<alpha, beta> = beta(alpha^vee) = 2(alpha, beta)/(alpha, alpha)."""
    v = 2 * rs.form(alpha.coords, beta.coords) / rs.form(alpha.coords, alpha.coords)
    if v.denominator != 1:
        raise NotReal(f"non-integral pairing between {alpha} and {beta}")
    return int(v)


def reflect(rs: RootSystem, alpha: Root, x):
    """r_alpha on a root (beta - <alpha,beta> alpha) or on a vector (v - alpha(v) alpha^vee)."""
    if isinstance(x, Root):
        k = pairing(rs, alpha, x)
        coords = tuple(b - k * a for a, b in zip(alpha.coords, x.coords))
        return rs.root(coords)
    v = tuple(frac(c) for c in x)
    av = alpha(v)
    cv = rs.coroot(alpha)
    return tuple(vi - av * ci for vi, ci in zip(v, cv))


def _sort_key(r: Root):
    h = r.height
    return (abs(h), h < 0, r.coords)


def enumerate_real_roots(rs: RootSystem, height_bound: int) -> list:
    """All real roots with |height| <= height_bound, ordered by height then lexicographically."""
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    return list(_enumerate_cached(rs, int(height_bound)))


@lru_cache(maxsize=64)
def _enumerate_cached(rs: RootSystem, height_bound: int) -> tuple:
    seen = {}
    queue = deque()
    for a in rs.simple_roots():
        seen[a.coords] = a
        queue.append(a)
    while queue:
        b = queue.popleft()
        for i in range(rs.rank):
            c = rs._ri_coords(i, b.coords)
            if c == b.coords or sum(c) <= 0 or sum(c) > height_bound or c in seen:
                continue
            r = Root(c, WeylWord((i,)) * b.witness, b.simple, 1)
            seen[c] = r
            queue.append(r)
    pos = list(seen.values())
    out = pos + [-r for r in pos]
    out.sort(key=_sort_key)
    return tuple(out)


@dataclass(frozen=True)
class IntervalResult:
    roots: tuple
    finiteness: Finiteness
    certificate: str = ""

    def __iter__(self):
        yield set(self.roots)
        yield self.finiteness


def _combo(a: tuple, b: tuple, p: int, q: int) -> tuple:
    return tuple(p * x + q * y for x, y in zip(a, b))


def _solve_nonneg(target: tuple, a: tuple, b: tuple):
    """Return (p, q) in N^2 with target = p a + q b if it exists (a, b independent)."""
    n = len(target)
    for i in range(n):
        for j in range(i + 1, n):
            det = a[i] * b[j] - a[j] * b[i]
            if det == 0:
                continue
            p = Fraction(target[i] * b[j] - target[j] * b[i], det)
            q = Fraction(a[i] * target[j] - a[j] * target[i], det)
            if p.denominator != 1 or q.denominator != 1 or p < 0 or q < 0:
                return None
            if _combo(a, b, int(p), int(q)) != target:
                return None
            return int(p), int(q)
    return None


def _inversion_set(rs: RootSystem, word: list) -> list:
    # word = [j1, ..., jm] means u = r_jm ... r_j1; returns {gamma > 0 : u gamma < 0}
    out = []
    acc: tuple = ()
    for j in word:
        # r_j1 ... r_j(k-1) alpha_jk, built from the left
        e = rs.simple_root(j).coords
        out.append(rs.act_coords(WeylWord(acc), e))
        acc = acc + (j,)
    return out


def _prenilpotence_witness(rs: RootSystem, a: tuple, b: tuple, word_bound: int):
    """Find u (as a left-multiplication path) with u a < 0 and u b < 0, starting from a, b > 0."""
    start = (a, b)
    seen = {start}
    queue = deque([(start, [])])
    while queue:
        (x, y), path = queue.popleft()
        if sum(x) < 0 and sum(y) < 0:
            return path
        if len(path) >= word_bound:
            continue
        for i in range(rs.rank):
            nx, ny = rs._ri_coords(i, x), rs._ri_coords(i, y)
            # once a root turns negative keep it there; leaving would only lengthen the walk
            if (sum(x) < 0 and sum(nx) > 0) or (sum(y) < 0 and sum(ny) > 0):
                continue
            key = (nx, ny)
            if key not in seen:
                seen.add(key)
                queue.append((key, path + [i]))
    return None


def _make_positive(rs: RootSystem, a: tuple, b: tuple, word_bound: int):
    """Find w with w a > 0 and w b > 0; returns the word (i1..ik), w = r_i1 ... r_ik."""
    start = (a, b)
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (x, y), word = queue.popleft()
        if sum(x) > 0 and sum(y) > 0:
            return WeylWord(word)
        if len(word) >= word_bound:
            continue
        for i in range(rs.rank):
            key = (rs._ri_coords(i, x), rs._ri_coords(i, y))
            if key not in seen:
                seen.add(key)
                queue.append((key, (i,) + word))
    return None


def interval(rs: RootSystem, alpha: Root, beta: Root, search_bound: int = 8,
             word_bound: int = 12) -> IntervalResult:
    """[alpha, beta] = {p alpha + q beta real : p, q >= 0} with a certified finiteness flag."""
    a, b = alpha.coords, beta.coords
    rs.root(a)
    rs.root(b)
    if a == b:
        return IntervalResult((alpha,), Finiteness.FINITE, "alpha = beta")
    if a == tuple(-x for x in b):
        return IntervalResult(tuple(sorted((alpha, beta), key=_sort_key)), Finiteness.FINITE,
                              "alpha = -beta: only +-alpha are real multiples")
    aa, bb, ab = rs.form(a, a), rs.form(b, b), rs.form(a, b)

    def collect(limit: int) -> tuple:
        out = []
        for s in range(1, limit + 1):
            for p in range(s + 1):
                c = _combo(a, b, p, s - p)
                if rs.is_real(c):
                    out.append(rs.root(c))
        return tuple(sorted(set(out), key=_sort_key))

    if aa * bb - ab * ab > 0:
        # positive definite plane: real roots have norm <= max 2 d_i, bounding p + q
        top = 2 * max(rs.symmetrizer)
        m = _segment_min(aa, bb, ab)
        s = 1
        while s * s * m <= top:
            s += 1
        return IntervalResult(collect(max(s, 1)), Finiteness.FINITE, "Gram matrix positive definite")
    if ab < 0:
        return IntervalResult(collect(search_bound), Finiteness.INFINITE,
                              "infinite dihedral pair: <a,b><b,a> >= 4 with (a,b) < 0")
    w = _make_positive(rs, a, b, word_bound)
    if w is not None:
        pa, pb = rs.act_coords(w, a), rs.act_coords(w, b)
        path = _prenilpotence_witness(rs, pa, pb, word_bound)
        if path is not None:
            found = []
            for g in _inversion_set(rs, path):
                if _solve_nonneg(g, pa, pb) is not None:
                    found.append(rs.root(rs.act_coords(w.inverse(), g)))
            return IntervalResult(tuple(sorted(set(found), key=_sort_key)), Finiteness.FINITE,
                                  "both roots in a common chamber pair; interval inside an inversion set")
    return IntervalResult(collect(search_bound), Finiteness.UNKNOWN, "bounded search inconclusive")


def _segment_min(aa, bb, ab) -> Fraction:
    # min over t in [0, 1] of Q(t, 1 - t) for Q(p, q) = aa p^2 + 2 ab p q + bb q^2
    A = aa - 2 * ab + bb
    B = 2 * ab - 2 * bb
    C = bb
    cands = [Fraction(0), Fraction(1)]
    if A != 0:
        t = Fraction(-B, 2 * A)
        if 0 < t < 1:
            cands.append(t)
    return min(A * t * t + B * t + C for t in cands)


def is_prenilpotent(rs: RootSystem, alpha: Root, beta: Root, search_bound: int = 8) -> Tri:
    if alpha.coords == tuple(-x for x in beta.coords):
        return Tri.NO
    res = interval(rs, alpha, beta, search_bound)
    if res.finiteness is Finiteness.FINITE:
        return Tri.YES
    if res.finiteness is Finiteness.INFINITE:
        return Tri.NO
    return Tri.UNKNOWN


def is_finite_type(rs: RootSystem, J: Iterable[int]) -> bool:
    return _finite_type_cached(rs, tuple(sorted(set(int(j) for j in J))))


@lru_cache(maxsize=1024)
def _finite_type_cached(rs: RootSystem, J: tuple) -> bool:
    if not J:
        return True
    d, A = rs.symmetrizer, rs.cartan
    sub = [[d[i] * A[i][j] for j in J] for i in J]
    return _positive_definite(sub)


@dataclass(frozen=True)
class RootSplit:
    unipotent: tuple
    levi: tuple
    rest: tuple
    levi_finite: bool

    def __iter__(self):
        yield self.unipotent
        yield self.levi
        yield self.rest


def split_roots_by_sign(rs: RootSystem, sign_fn: Callable[[Root], int],
                        roots: Iterable[Root]) -> RootSplit:
    """Partition into phi^u (sign > 0), phi^m (sign = 0) and the rest."""
    u, m, rest = [], [], []
    for r in roots:
        s = sign_fn(r)
        (u if s > 0 else m if s == 0 else rest).append(r)
    return RootSplit(tuple(u), tuple(m), tuple(rest), _levi_is_finite(rs, m))


def _levi_is_finite(rs: RootSystem, levi: list) -> bool:
    pos = [r for r in levi if r.is_positive()]
    if not pos:
        return True
    coords = {r.coords for r in pos}
    simple = []
    for r in pos:
        decomposable = any(
            tuple(x - y for x, y in zip(r.coords, s.coords)) in coords for s in pos if s != r)
        if not decomposable:
            simple.append(r)
    gram = [[rs.form(x.coords, y.coords) for y in simple] for x in simple]
    return _positive_definite(gram)
