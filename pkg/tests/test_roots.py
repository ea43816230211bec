
import pytest
from hypothesis import given, settings, strategies as st

from hovels.errors import NotGCM, NotReal
from hovels.roots import (Finiteness, Tri, WeylWord, build_root_system, enumerate_real_roots, interval,
                          is_finite_type, is_prenilpotent, pairing, reflect)

from conftest import A2


def coords(roots):
    return {r.coords for r in roots}


def test_build_a2_symmetrizer(a2):
    assert a2.rank == 2
    assert tuple(a2.symmetrizer) == (1, 1)


def test_build_affine(aff):
    assert not is_finite_type(aff, (0, 1))


@pytest.mark.parametrize("bad", [[[2, 1], [1, 2]], [[2, -1], [0, 2]], [[1, 0], [0, 2]]])
def test_not_gcm(bad):
    with pytest.raises(NotGCM):
        build_root_system(bad)


def test_pairing(a2, aff):
    s0, s1 = a2.simple_roots()
    assert pairing(a2, s0, s0) == 2
    assert pairing(a2, s0, s1) == -1
    b0, b1 = aff.simple_roots()
    assert pairing(aff, b0, b1) == -2


def test_reflect(a2, aff):
    s0, s1 = a2.simple_roots()
    assert reflect(a2, s0, s1).coords == (1, 1)
    assert reflect(a2, s0, s0).coords == (-1, 0)
    b0, b1 = aff.simple_roots()
    assert reflect(aff, b1, b0).coords == (1, 2)


def test_enumerate_a2(a2):
    assert coords(enumerate_real_roots(a2, 2)) == {(1, 0), (0, 1), (1, 1), (-1, 0), (0, -1), (-1, -1)}


def test_enumerate_a1(a1):
    assert coords(enumerate_real_roots(a1, 10)) == {(1,), (-1,)}


def _affine_real_roots(bound):
    # real roots of the affine A1 system: +-alpha + k delta, i.e. |x - y| = 1 with x, y of one sign
    out = set()
    for x in range(-bound, bound + 1):
        for y in range(-bound, bound + 1):
            if abs(x - y) == 1 and x * y >= 0 and abs(x + y) <= bound:
                out.add((x, y))
    return out


@pytest.mark.parametrize("bound", [1, 3, 5, 7])
def test_enumerate_affine_matches_closed_form(aff, bound):
    assert coords(enumerate_real_roots(aff, bound)) == _affine_real_roots(bound)


def test_is_real(aff):
    assert aff.is_real((2, 1))
    assert not aff.is_real((1, 1))
    with pytest.raises(NotReal):
        aff.root((1, 1))


def test_interval_a2(a2):
    s0, s1 = a2.simple_roots()
    res = interval(a2, s0, s1)
    assert res.finiteness is Finiteness.FINITE
    assert coords(res.roots) == {(1, 0), (0, 1), (1, 1)}


def test_interval_affine_infinite(aff):
    b0, b1 = aff.simple_roots()
    res = interval(aff, b1, b0)
    assert res.finiteness is Finiteness.INFINITE


def test_interval_of_root_with_itself(a2, aff):
    for rs in (a2, aff):
        a = rs.simple_root(0)
        res = interval(rs, a, a)
        assert coords(res.roots) == {a.coords}
        assert res.finiteness is Finiteness.FINITE


def test_prenilpotent(a2, aff):
    a = a2.simple_root(0)
    assert is_prenilpotent(a2, a, -a) is Tri.NO
    b0, b1 = aff.simple_roots()
    assert is_prenilpotent(aff, b1, b0) is Tri.NO
    # alpha and alpha + 2 delta with alpha = alpha_1, delta = alpha_0 + alpha_1
    far = aff.root((2, 3))
    assert is_prenilpotent(aff, b1, far) is Tri.YES
    assert coords(interval(aff, b1, far).roots) == {(0, 1), (2, 3)}


def test_finite_type(a2, aff):
    assert is_finite_type(a2, (0, 1))
    assert not is_finite_type(aff, (0, 1))
    assert is_finite_type(aff, (1,))
    assert is_finite_type(aff, ())


words = st.lists(st.integers(0, 1), max_size=8).map(lambda l: WeylWord(tuple(l)))


@settings(max_examples=60, deadline=None)
@given(w=words, i=st.integers(0, 1))
def test_weyl_action_preserves_roots_and_form(w, i):
    for cartan in (A2, [[2, -2], [-2, 2]], [[2, -1], [-2, 2]]):
        rs = build_root_system(cartan)
        a = rs.simple_root(i)
        img = rs.act_root(w, a)
        assert rs.is_real(img.coords)
        assert rs.form(img.coords, img.coords) == rs.form(a.coords, a.coords)
        back = rs.act_coords(w.inverse(), img.coords)
        assert back == a.coords


@settings(max_examples=60, deadline=None)
@given(i=st.integers(0, 1), j=st.integers(0, 1), w=words)
def test_reflection_is_involution(i, j, w):
    rs = build_root_system([[2, -2], [-2, 2]])
    a = rs.act_root(w, rs.simple_root(i))
    b = rs.simple_root(j)
    assert reflect(rs, a, reflect(rs, a, b)).coords == b.coords
    assert reflect(rs, a, a).coords == tuple(-c for c in a.coords)
    assert pairing(rs, a, a) == 2
