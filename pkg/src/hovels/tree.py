"""The Bruhat-Tits tree of SL2 over Q_p as homothety classes of Z_p-lattices in Q_p^2, with a DOT
export of balls around the standard lattice."""
from __future__ import annotations

from collections import deque
from fractions import Fraction

from .errors import RadiusTooLarge
from .groups import det, mat_mul
from .numbers import fmt, vp

MAX_RADIUS = 6


def _mod_power(x: Fraction, p: int, d: int) -> Fraction:
    """Canonical representative of x modulo p^d Z_(p)."""
    if x == 0:
        return Fraction(0)
    e = vp(x, p)
    if e >= d:
        return Fraction(0)
    e = int(e)
    u = x / Fraction(p) ** e
    k = d - e
    mod = p ** k
    r = (u.numerator * pow(u.denominator, -1, mod)) % mod
    return Fraction(p) ** e * r


def lattice_key(M, p: int) -> tuple:
    """Key of the homothety class of the lattice spanned by the columns of M over Z_(p)."""
    (a, b), (c, d) = M
    c0, c1 = [a, c], [b, d]
    # pivot on the first row: the column of least valuation
    if a == 0 or (b != 0 and vp(b, p) < vp(a, p)):
        c0, c1 = c1, c0
    q = c1[0] / c0[0]
    c1 = [c1[0] - q * c0[0], c1[1] - q * c0[1]]
    # unit normalizations
    e0 = int(vp(c0[0], p))
    u0 = c0[0] / Fraction(p) ** e0
    c0 = [c0[0] / u0, c0[1] / u0]
    e1 = int(vp(c1[1], p))
    u1 = c1[1] / Fraction(p) ** e1
    # columns: (p^e0, y), (0, p^e1); scale by p^-e0
    s = Fraction(p) ** -e0
    y = c0[1] * s
    depth = e1 - e0
    return depth, _mod_power(y, p, depth)


def vertex_lattice(g, x: int, p: int) -> tuple:
    """Basis of g . L_x with L_x = Z_p + p^x Z_p."""
    return mat_mul(g, ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(p) ** x)))


def same_vertex(g, x: int, h, y: int, p: int) -> bool:
    return lattice_key(vertex_lattice(g, x, p), p) == lattice_key(vertex_lattice(h, y, p), p)


def neighbours(M, p: int) -> list:
    one, zero, P = Fraction(1), Fraction(0), Fraction(p)
    subs = [((P, zero), (zero, one))] + [((one, zero), (Fraction(k), P)) for k in range(p)]
    return [mat_mul(M, s) for s in subs]


def hovel_representative(M, p: int) -> tuple:
    """(g, x) with g in SL2(Q) and g . L_x in the class of M."""
    d = det(M)
    x = int(vp(d, p))
    u = d / Fraction(p) ** x
    g = mat_mul(M, ((Fraction(1), Fraction(0)), (Fraction(0), 1 / (u * Fraction(p) ** x))))
    return g, x


def tree_ball(p: int, radius: int) -> tuple:
    """(vertices, edges) of the ball around the class of Z_p^2; vertices map key -> basis matrix."""
    if radius > MAX_RADIUS:
        raise RadiusTooLarge(f"radius {radius} exceeds {MAX_RADIUS}")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    I = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    root = lattice_key(I, p)
    verts = {root: I}
    dist = {root: 0}
    edges = set()
    queue = deque([root])
    while queue:
        k = queue.popleft()
        if dist[k] == radius:
            continue
        for N in neighbours(verts[k], p):
            kn = lattice_key(N, p)
            edges.add(tuple(sorted((k, kn), key=repr)))
            if kn not in verts:
                verts[kn] = N
                dist[kn] = dist[k] + 1
                queue.append(kn)
    return verts, sorted(edges, key=repr), dist


def expected_ball_size(p: int, radius: int) -> int:
    return 1 + (p + 1) * (p ** radius - 1) // (p - 1)


def _label(key: tuple) -> str:
    return f"L({key[0]},{fmt(key[1])})"


def export_tree(p: int, radius: int) -> str:
    """DOT graph of the ball of the given radius; vertices carry hovel representatives [g, x]."""
    verts, edges, dist = tree_ball(p, radius)
    if len(verts) != expected_ball_size(p, radius):
        raise AssertionError("ball size does not match the (p+1)-regular tree")
    ids = {k: f"v{i}" for i, k in enumerate(sorted(verts, key=lambda k: (dist[k], repr(k))))}
    lines = [f"graph tree_p{p}_r{radius} {{"]
    for k, name in ids.items():
        g, x = hovel_representative(verts[k], p)
        rep = "[[" + "],[".join(",".join(fmt(e) for e in row) for row in g) + "]]"
        lines.append(f'  {name} [label="{_label(k)}\\n[{rep}, {x}]"];')
    for a, b in edges:
        lines.append(f"  {ids[a]} -- {ids[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
