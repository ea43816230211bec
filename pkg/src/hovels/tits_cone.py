"""Facets of the doubled Tits cone: canonical names, signs of roots, stars, projection and enclosure."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import NotSpherical, RootBoundTooSmall
from .numbers import frac
from .roots import Root, RootSystem, WeylWord, enumerate_real_roots, is_finite_type


def _sign_of(s) -> int:
    if s in ("+", 1, "+1"):
        return 1
    if s in ("-", "−", -1, "-1"):
        return -1
    raise ValueError(f"bad sign {s!r}")


@dataclass(frozen=True)
class Facet:
    """The cone sign * word * F_J, with word the minimal representative of word.W_J."""

    sign: int
    word: WeylWord
    J: tuple

    def __repr__(self):
        s = "+" if self.sign > 0 else "-"
        return f"Facet({s}, {list(self.word.letters)}, J={list(self.J)})"

    def is_chamber(self) -> bool:
        return not self.J


def _rho(rank: int, J: Iterable[int]) -> tuple:
    Js = set(J)
    return tuple(Fraction(0) if i in Js else Fraction(1) for i in range(rank))


def _descend(rs: RootSystem, y: tuple) -> tuple:
    """Move y into the closed fundamental chamber; returns (dominant point, word with y = word.dominant)."""
    letters = []
    steps = 0
    while True:
        for i in range(rs.rank):
            if y[i] < 0:
                y = rs._ri_vector(i, y)
                letters.append(i)
                break
        else:
            return y, WeylWord(tuple(letters))
        steps += 1
        if steps > 100000:
            raise RootBoundTooSmall("point is not in the Tits cone")


def canonical_facet(rs: RootSystem, sign, word: WeylWord | Sequence[int] = (), J: Iterable[int] = ()) -> Facet:
    if not isinstance(word, WeylWord):
        word = WeylWord(tuple(word))
    Js = tuple(sorted(set(int(j) for j in J)))
    for j in Js:
        if not 0 <= j < rs.rank:
            raise ValueError(f"index {j} out of range")
    for i in word.letters:
        if not 0 <= i < rs.rank:
            raise ValueError(f"index {i} out of range")
    eps = _sign_of(sign)
    if len(Js) == rs.rank:
        return Facet(1, WeylWord(), Js)
    y = rs.act_vector(word, _rho(rs.rank, Js))
    _, w = _descend(rs, y)
    return Facet(eps, w, Js)


def sample_point(rs: RootSystem, f: Facet) -> tuple:
    """A rational point in the relative interior of f."""
    y = rs.act_vector(f.word, _rho(rs.rank, f.J))
    return tuple(f.sign * c for c in y)


def is_spherical(rs: RootSystem, f: Facet) -> bool:
    return is_finite_type(rs, f.J)


def sign_on_roots(rs: RootSystem, f: Facet, alpha: Root) -> int:
    return _sign_cached(rs, f, alpha.coords)


@lru_cache(maxsize=1 << 16)
def _sign_cached(rs: RootSystem, f: Facet, coords: tuple) -> int:
    v = sum((c * x for c, x in zip(coords, sample_point(rs, f))), Fraction(0))
    return (v > 0) - (v < 0)


def in_span(rs: RootSystem, f: Facet, v: Sequence) -> bool:
    """v in Vect(f) = w . {x : x_j = 0 for j in J}."""
    z = rs.act_vector(f.word.inverse(), v)
    return all(z[j] == 0 for j in f.J)


def span_basis(rs: RootSystem, f: Facet) -> list:
    out = []
    for i in range(rs.rank):
        if i not in f.J:
            e = tuple(Fraction(1) if k == i else Fraction(0) for k in range(rs.rank))
            out.append(rs.act_vector(f.word, e))
    return out


def span_contained(rs: RootSystem, f: Facet, g: Facet) -> bool:
    return all(in_span(rs, g, v) for v in span_basis(rs, f))


def in_closure(rs: RootSystem, h: Facet, f: Facet) -> bool:
    """True iff h lies in the closure of f."""
    if len(h.J) == rs.rank:
        return True
    p = sample_point(rs, h)
    z = rs.act_vector(f.word.inverse(), tuple(f.sign * c for c in p))
    return all(z[j] == 0 for j in f.J) and all(z[i] >= 0 for i in range(rs.rank))


def _parabolic_elements(rs: RootSystem, J: tuple, limit: int = 100000) -> list:
    """Elements of the finite group W_J as words, found by BFS on the W_J-orbit of a regular point."""
    rho = _rho(rs.rank, ())
    seen = {rho: WeylWord()}
    queue = deque([rho])
    while queue:
        y = queue.popleft()
        for j in J:
            z = rs._ri_vector(j, y)
            if z not in seen:
                seen[z] = WeylWord((j,)) * seen[y]
                if len(seen) > limit:
                    raise NotSpherical("parabolic subgroup too large")
                queue.append(z)
    return list(seen.values())


def star(rs: RootSystem, f: Facet) -> list:
    """Facets whose closure contains f (f spherical)."""
    if not is_spherical(rs, f):
        raise NotSpherical(f"{f} is not spherical")
    out = set()
    for u in _parabolic_elements(rs, f.J):
        for k in range(len(f.J) + 1):
            for K in combinations(f.J, k):
                out.add(canonical_facet(rs, f.sign, f.word * u, K))
    return sorted(out, key=_facet_key)


def _facet_key(f: Facet):
    return (len(f.J), -f.sign, len(f.word), f.word.letters, f.J)


def opposite_facet(rs: RootSystem, f: Facet) -> Facet:
    return canonical_facet(rs, -f.sign, f.word, f.J)


def act_facet(rs: RootSystem, w: WeylWord, f: Facet) -> Facet:
    return canonical_facet(rs, f.sign, w * f.word, f.J)


def levi_roots(rs: RootSystem, f: Facet) -> list:
    """phi^m(f): the roots vanishing on f; finite when f is spherical."""
    if not is_spherical(rs, f):
        raise NotSpherical(f"{f} is not spherical")
    out = set()
    for u in _parabolic_elements(rs, f.J):
        for j in f.J:
            c = rs.act_coords(f.word * u, rs.simple_root(j).coords)
            out.add(rs.root(c))
            out.add(rs.root(tuple(-x for x in c)))
    return sorted(out, key=lambda r: (abs(r.height), r.height < 0, r.coords))


def project_facet(rs: RootSystem, f: Facet, g: Facet, root_bound: int | None = None) -> Facet:
    """pr_f(g): the facet of star(f) whose signs agree with f off phi^m(f) and with g on it."""
    if not is_spherical(rs, f):
        raise NotSpherical(f"{f} is not spherical")
    levi = levi_roots(rs, f)
    target = {r.coords: sign_on_roots(rs, g, r) for r in levi}
    for h in star(rs, f):
        if all(sign_on_roots(rs, h, r) == target[r.coords] for r in levi):
            return h
    raise RootBoundTooSmall("no facet of the star matches")  # unreachable for spherical f


def enumerate_facets(rs: RootSystem, word_bound: int) -> list:
    """All facets reachable from chambers of word length <= word_bound, both signs."""
    return list(_facets_cached(rs, word_bound))


@lru_cache(maxsize=64)
def _facets_cached(rs: RootSystem, word_bound: int) -> tuple:
    chambers = {WeylWord()}
    frontier = [WeylWord()]
    for _ in range(word_bound):
        nxt = []
        for w in frontier:
            for i in range(rs.rank):
                c = canonical_facet(rs, 1, WeylWord((i,)) * w, ()).word
                if c not in chambers:
                    chambers.add(c)
                    nxt.append(c)
        frontier = nxt
    out = set()
    for w in chambers:
        for k in range(rs.rank + 1):
            for K in combinations(range(rs.rank), k):
                for eps in (1, -1):
                    out.add(geometric_name(rs, canonical_facet(rs, eps, w, K)))
    return tuple(sorted(out, key=_facet_key))


@dataclass(frozen=True)
class VectorEnclosure:
    constraints: tuple
    facets: tuple
    truncated: bool


def vector_enclosure(rs: RootSystem, facets: Iterable[Facet], root_bound: int,
                     word_bound: int = 6) -> VectorEnclosure:
    fs = list(facets)
    if not fs:
        raise ValueError("need at least one facet")
    roots = enumerate_real_roots(rs, root_bound)
    cons = tuple(r for r in roots if all(sign_on_roots(rs, f, r) >= 0 for f in fs))
    members = tuple(h for h in enumerate_facets(rs, word_bound)
                    if all(sign_on_roots(rs, h, r) >= 0 for r in cons))
    finite = is_finite_type(rs, range(rs.rank))
    return VectorEnclosure(cons, members, not finite)


def facet_dimension(f: Facet, rank: int) -> int:
    return rank - len(f.J)


def as_vector(x: Sequence) -> tuple:
    return tuple(frac(c) for c in x)


def geometric_name(rs: RootSystem, f: Facet) -> Facet:
    """A name depending only on the cone: in finite type both signs name the same cones."""
    if f.sign > 0 or not is_finite_type(rs, range(rs.rank)):
        return f
    y, w = _descend(rs, sample_point(rs, f))
    K = tuple(i for i in range(rs.rank) if y[i] == 0)
    return canonical_facet(rs, 1, w, K)


def same_cone(rs: RootSystem, f: Facet, g: Facet) -> bool:
    return geometric_name(rs, f) == geometric_name(rs, g)
