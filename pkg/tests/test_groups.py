import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from hovels.apartment import principal_point
from hovels.errors import BadPrime, IdentityElement, NotInUa, NotTorus
from hovels.groups import instantiate
from hovels.numbers import INF, Laurent


def mm(a, b):
    n = len(a)
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(n)), F(0)) for j in range(n)) for i in range(n))


def elem(n, i, j, c):
    return tuple(tuple(F(1) if r == s else (F(c) if (r, s) == (i, j) else F(0)) for s in range(n)) for r in range(n))


def diag(*d):
    n = len(d)
    return tuple(tuple(F(d[r]) if r == s else F(0) for s in range(n)) for r in range(n))


def test_bad_prime():
    with pytest.raises(BadPrime):
        instantiate("SL2", 4)


def test_root_group_matrices(sl2, sl3):
    assert sl2.u((1,), 3).matrix == elem(2, 0, 1, 3)
    assert sl2.u((-1,), 3).matrix == elem(2, 1, 0, 3)
    assert sl3.u((1, 1), F(1, 2)).matrix == elem(3, 0, 2, F(1, 2))
    assert sl3.u((0, -1), 5).matrix == elem(3, 2, 1, 5)


def test_valuation_values(sl2, loop):
    assert sl2.phi((1,), sl2.u((1,), 4)) == 2
    assert sl2.phi((1,), sl2.identity_element()) is INF
    # e12(t^3 / 2) lies in the root group of alpha + 3 delta
    g = loop.u((3, 4), F(1, 2))
    assert g.matrix[0][1] == Laurent.monomial(F(1, 2), 3)
    assert loop.phi((3, 4), g) == -1
    with pytest.raises(NotInUa):
        sl2.phi((1,), sl2.u((-1,), 1))


def test_group_law(sl2):
    rng = random.Random(3)
    for _ in range(20):
        g = sl2.random_element(rng, 5)
        assert (g * g.inv()).is_identity()
    assert sl2.u((1,), 1) * sl2.u((1,), 2) == sl2.u((1,), 3)
    t = sl2.t([2, F(1, 2)])
    assert t * sl2.u((1,), 1) * t.inv() == sl2.u((1,), 4)
    with pytest.raises(NotTorus):
        sl2.t([0, 1])


def test_words_multiply_like_matrices(sl3):
    rng = random.Random(7)
    for _ in range(30):
        g, h = sl3.random_element(rng, 4), sl3.random_element(rng, 4)
        assert (g * h).matrix == mm(g.matrix, h.matrix)


@pytest.mark.parametrize("k", [F(1), F(4), F(-1, 3)])
def test_n_of(sl2, k):
    nm = sl2.n_of(sl2.u((1,), k))[0].matrix
    want = mm(mm(elem(2, 1, 0, -1 / k), elem(2, 0, 1, k)), elem(2, 1, 0, -1 / k))
    assert nm == want == ((0, k), (-1 / k, 0))
    assert mm(nm, nm) == diag(-1, -1)


def test_n_of_identity(sl2):
    with pytest.raises(IdentityElement):
        sl2.n_of(sl2.identity_element())


def test_conjugation_by_n_swaps_valuations(sl2):
    u = sl2.u((1,), 4)
    n, up, _ = sl2.n_of(u)
    assert up.matrix == elem(2, 1, 0, F(-1, 4))
    assert sl2.phi((-1,), up) == -sl2.phi((1,), u) == -2


def test_torus_translation(sl2, loop):
    t = sl2.t([2, F(1, 2)])
    assert sl2.torus_translation(t) == (-2,)
    assert sl2.torus_translation(sl2.identity_element()) == (0,)
    lt = loop.t([2, F(1, 2)])
    v = loop.torus_translation(lt)
    delta = tuple(x + y for x, y in zip((1, 0), (0, 1)))
    assert sum(c * x for c, x in zip(delta, v)) == 0
    for n in range(-2, 3):
        root = (n, n + 1)
        assert sum(c * x for c, x in zip(root, v)) == -2


@settings(max_examples=40, deadline=None)
@given(k=st.fractions(max_denominator=16).filter(lambda v: v != 0), x=st.fractions(max_denominator=8))
def test_wall_reflection_action(k, x):
    sl2 = instantiate("SL2", 2)
    u = sl2.u((1,), k)
    n = sl2.n_of(u)[0]
    # n(u) acts as the reflection across alpha + omega(k) = 0
    a = principal_point(sl2.rs, [x])
    img = sl2.act(n, a)
    lam = sl2.omega(k)
    assert img.rep[0] + lam == -(x + lam)


def test_monomial_action_respects_root_groups(sl3):
    # n u_beta(c) n^-1 = u_{w beta}(c') with phi shifted by the translation part
    rng = random.Random(11)
    for _ in range(20):
        u = sl3.u((1, 0), F(rng.randint(1, 8), 2 ** rng.randint(0, 3)))
        n = sl3.n_of(u)[0]
        nu = sl3.nu(n)
        for beta in sl3.rs.simple_roots():
            g = sl3.u(beta.coords, 1)
            conj = n * g * n.inv()
            got = sl3.recognize_root_element(conj.matrix)
            assert got is not None
            image = sl3.rs.act_root(nu.linear, beta)
            assert got[0].coords == image.coords
