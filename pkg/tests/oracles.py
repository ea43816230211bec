"""Independent reference computations shared by the tests: plain matrix arithmetic, integrality
criteria, brute-force enclosures, the lattice model of the SL2 tree and sampled projections."""
import math
from fractions import Fraction as F

from hovels.numbers import vp


def mm(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), F(0)) for j in range(n)) for i in range(n))


def upper_unipotent(m):
    n = len(m)
    return all(m[i][i] == 1 for i in range(n)) and all(m[i][j] == 0 for i in range(n) for j in range(i))


def monomial(m):
    return all(sum(1 for x in row if x != 0) == 1 for row in m) and all(
        sum(1 for row in m if row[j] != 0) == 1 for j in range(len(m)))


def integral(m, p=2):
    return all(x == 0 or vp(x, p) >= 0 for row in m for x in row)


def eps_coords(x):
    """Epsilon coordinates (summing to zero) of a point with simple-root coordinates x in SL_n."""
    n = len(x) + 1
    # e_i - e_{i+1} = x_i and sum e_i = 0
    e = [F(0)] * n
    for i in range(1, n):
        e[i] = e[i - 1] - x[i - 1]
    shift = sum(e) / n
    return tuple(v - shift for v in e)


def integral_fixes(m, e, p):
    """g fixes the point with epsilon coordinates e iff v(g_ij) >= e_j - e_i for all entries."""
    n = len(m)
    return all(m[i][j] == 0 or vp(m[i][j], p) >= e[j] - e[i] for i in range(n) for j in range(n))


def brute_force_levels(points, roots, lo=-4, hi=4):
    """Least lambda in {lo..hi} with root(x) + lambda >= 0 on every point; None when none works."""
    out = {}
    for r in roots:
        ok = [lam for lam in range(lo, hi + 1) if all(r(p.rep) + lam >= 0 for p in points)]
        out[r.coords] = min(ok) if ok else None
    return out


def lattice_class(M, p):
    """Homothety class of the Z_(p)-lattice spanned by the columns of the 2x2 matrix M, computed
    by Hermite normal form over Z_(p): columns (p^a, y), (0, p^b) scaled so that a = 0."""
    (a, b), (c, d) = M
    cols = [[a, c], [b, d]]
    if cols[0][0] == 0 or (cols[1][0] != 0 and vp(cols[1][0], p) < vp(cols[0][0], p)):
        cols.reverse()
    k = cols[1][0] / cols[0][0]
    cols[1] = [cols[1][0] - k * cols[0][0], cols[1][1] - k * cols[0][1]]
    top = cols[0][0]
    ea = int(vp(top, p))
    unit = top / F(p) ** ea
    y = cols[0][1] / unit / F(p) ** ea
    depth = int(vp(cols[1][1], p)) - ea
    # y is determined modulo p^depth
    if y == 0 or vp(y, p) >= depth:
        y = F(0)
    else:
        mod = F(p) ** depth
        # reduce y to a canonical representative: subtract integral multiples of p^depth
        e = int(vp(y, p))
        u = y / F(p) ** e
        m = p ** (depth - e)
        y = F(p) ** e * ((u.numerator * pow(u.denominator, -1, m)) % m)
    return depth, y


def vertex_class(g, x, p):
    return lattice_class(mm(g, ((F(1), F(0)), (F(0), F(p) ** x))), p)


def stabilizing_fixator_element(vrd, a, f, rng, letters=3):
    """A product of root letters u_r(c) with r >= 0 on f and r(a) + omega(c) >= 0."""
    from hovels.tits_cone import sign_on_roots
    q = vrd.identity_element()
    roots = [r for r in vrd.roots() if sign_on_roots(vrd.rs, f, r) >= 0]
    for _ in range(letters):
        r = rng.choice(roots)
        e = math.ceil(-r(a.rep)) + rng.randint(0, 1)
        q = q * vrd.u(r.coords, F(rng.choice([1, -1, 3])) * F(vrd.p) ** e)
    return q
