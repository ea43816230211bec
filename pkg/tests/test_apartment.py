import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from hovels.apartment import (ApartmentPoint, HalfApartment, ValueSet, apply, apply_half, compose, contains,
                              enclosure_trace, eval_root, germ_facet, germ_member, identity_auto, auto_equal,
                              nu_reflection, nu_translation, opposition, origin_facet, principal_point,
                              project_point)
from hovels.errors import NotProjectable, NotTangentFacet
from hovels.numbers import INF, NEG_INF
from hovels.roots import enumerate_real_roots
from hovels.tits_cone import canonical_facet


def test_eval_root(a2):
    a1 = a2.simple_root(0)
    assert eval_root(a1, principal_point(a2, [F(3, 2), 0])) == F(3, 2)
    chamber = ApartmentPoint(a2, canonical_facet(a2, 1), [0, 0])
    for r in enumerate_real_roots(a2, 2):
        if r.is_positive():
            assert eval_root(r, chamber) is INF
        else:
            assert eval_root(r, chamber) is NEG_INF
    panel = ApartmentPoint(a2, canonical_facet(a2, 1, (), (0,)), [F(1, 3), 5])
    assert eval_root(a1, panel) == F(1, 3)


def test_contains(a2):
    a1 = a2.simple_root(0)
    neg = ApartmentPoint(a2, canonical_facet(a2, -1), [0, 0])
    assert contains(HalfApartment(a1, INF), neg)
    assert not contains(HalfApartment(a1, F(7)), neg)
    assert contains(HalfApartment(a1, 0), principal_point(a2, [F(1, 2), 0]))


def test_projection(a2):
    a = ApartmentPoint(a2, canonical_facet(a2, 1, (), (0,)), [1, 2])
    got = project_point(a, canonical_facet(a2, 1))
    assert got.rep == a.rep
    with pytest.raises(NotProjectable):
        project_point(a, canonical_facet(a2, 1, (), (1,)))
    p = principal_point(a2, [1, 2])
    f = canonical_facet(a2, 1, (), (0,))
    g = canonical_facet(a2, 1)
    assert project_point(project_point(p, f), g) == project_point(p, g)


def brute_force_levels(points, roots, lo=-4, hi=4):
    """Least lambda in {lo..hi} with root(x) + lambda >= 0 on every point; None when none works."""
    out = {}
    for r in roots:
        ok = [lam for lam in range(lo, hi + 1) if all(r(p.rep) + lam >= 0 for p in points)]
        out[r.coords] = min(ok) if ok else None
    return out


def test_enclosure_a1_half_point(a1):
    trace = enclosure_trace([principal_point(a1, [F(1, 2)])], origin_facet(a1))
    assert {(D.root.coords, D.level) for D in trace.constraints} == {((1,), 0), ((-1,), 1)}


def test_enclosure_of_origin(a2):
    trace = enclosure_trace([principal_point(a2, [0, 0])], origin_facet(a2))
    assert all(D.level == 0 for D in trace.constraints)
    assert len(trace.constraints) == 6


@pytest.mark.parametrize("seed", range(3))
def test_enclosure_matches_brute_force_a2(a2, seed):
    rng = random.Random(seed)
    vals = [F(k, 2) for k in range(-3, 4)]
    roots = enumerate_real_roots(a2, 6)
    for _ in range(40):
        k = rng.randint(1, 3)
        pts = [principal_point(a2, [rng.choice(vals), rng.choice(vals)]) for _ in range(k)]
        trace = enclosure_trace(pts, origin_facet(a2), ValueSet(1, (-4, 4)))
        got = {D.root.coords: D.level for D in trace.constraints}
        want = brute_force_levels(pts, roots)
        assert not trace.empty
        for r in roots:
            assert got.get(r.coords) == want[r.coords]


def test_enclosure_chamber_point_becomes_cone(a2):
    # the chamber point at infinity stretches the enclosure along the cone o + C
    pts = [principal_point(a2, [0, 0]), ApartmentPoint(a2, canonical_facet(a2, 1), [0, 0])]
    trace = enclosure_trace(pts, origin_facet(a2))
    got = {D.root.coords: D.level for D in trace.constraints}
    assert got == {(1, 0): 0, (0, 1): 0, (1, 1): 0}


def test_germs(a2):
    o = principal_point(a2, [0, 0])
    C = canonical_facet(a2, 1)
    a1 = a2.simple_root(0)
    germ = germ_facet(o, C)
    assert germ_member(germ, [HalfApartment(a1, 0)])
    assert not germ_member(germ, [HalfApartment(-a1, 0)])
    x = principal_point(a2, [1, 0])
    assert germ_member(germ_facet(x, canonical_facet(a2, -1)), [HalfApartment(a1, 0)])
    panel_point = ApartmentPoint(a2, canonical_facet(a2, 1, (), (0,)), [0, 0])
    with pytest.raises(NotTangentFacet):
        germ_facet(panel_point, canonical_facet(a2, 1, (1,), (0,)))


def test_reflections(a2):
    o = principal_point(a2, [0, 0])
    for r in enumerate_real_roots(a2, 2):
        assert apply(nu_reflection(a2, r, 0), o) == o
        for lam in (F(-1), F(1, 2), F(3)):
            m = nu_reflection(a2, r, lam)
            assert auto_equal(a2, compose(a2, m, m), identity_auto(a2))
            img = apply_half(a2, m, HalfApartment(r, lam))
            assert img.root.coords == tuple(-c for c in r.coords) and img.level == -lam


def test_reflection_fixes_its_wall_pointwise(a2):
    r = a2.root((1, 1))
    m = nu_reflection(a2, r, F(1))
    # points with (a1 + a2)(x) + 1 = 0
    for t in range(-3, 4):
        p = principal_point(a2, [F(t), F(-1 - t)])
        assert apply(m, p) == p


coord = st.integers(-6, 6).map(lambda k: F(k, 2))


@settings(max_examples=60, deadline=None)
@given(x=coord, y=coord, lam=coord, t0=coord, t1=coord, i=st.integers(0, 2), d=st.integers(0, 3))
def test_opposition_commutes_with_affine_maps(a2, x, y, lam, t0, t1, i, d):
    roots = [r for r in enumerate_real_roots(a2, 2) if r.is_positive()]
    m = compose(a2, nu_reflection(a2, roots[i], lam), nu_translation(a2, [t0, t1]))
    dirs = [origin_facet(a2), canonical_facet(a2, 1), canonical_facet(a2, 1, (0,), (1,)), canonical_facet(a2, -1, (1,))]
    a = ApartmentPoint(a2, dirs[d], [x, y])
    assert apply(m, opposition(a)) == opposition(apply(m, a))
    assert opposition(opposition(a)) == a
    # half-apartment transport is compatible with the point action
    D = HalfApartment(roots[i], lam)
    assert contains(D, a) == contains(apply_half(a2, m, D), apply(m, a))
