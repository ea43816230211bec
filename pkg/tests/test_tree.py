import random
import re
from fractions import Fraction as F

import pytest

from hovels.apartment import principal_point
from hovels.errors import RadiusTooLarge
from hovels.parahoric import Equality, HovelPoint, hovel_equal
from hovels.tree import expected_ball_size, export_tree, lattice_key, same_vertex, tree_ball

from oracles import lattice_class, mm, vertex_class

I2 = ((F(1), F(0)), (F(0), F(1)))


def independent_ball(p, r):
    """BFS on lattice classes using the reference classifier and the p+1 index-p sublattices."""
    P = F(p)
    subs = [((P, F(0)), (F(0), F(1)))] + [((F(1), F(0)), (F(k), P)) for k in range(p)]
    seen = {lattice_class(I2, p): I2}
    frontier = [I2]
    for _ in range(r):
        nxt = []
        for M in frontier:
            for s in subs:
                N = mm(M, s)
                k = lattice_class(N, p)
                if k not in seen:
                    seen[k] = N
                    nxt.append(N)
        frontier = nxt
    return seen


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("r", [0, 1, 2, 3, 4])
def test_ball_sizes(p, r):
    verts, edges, _ = tree_ball(p, r)
    assert len(verts) == 1 + (p + 1) * (p ** r - 1) // (p - 1) == expected_ball_size(p, r)
    assert len(edges) == len(verts) - 1
    assert len(independent_ball(p, r)) == len(verts)


def test_keys_match_reference_classifier():
    rng = random.Random(0)
    for p in (2, 3):
        mats = [M for M in independent_ball(p, 3).values()]
        for _ in range(400):
            A, B = rng.choice(mats), rng.choice(mats)
            c = F(rng.choice([1, 3, 5])) * F(p) ** rng.randint(-2, 2)
            B2 = tuple(tuple(c * x for x in row) for row in B)
            assert (lattice_key(A, p) == lattice_key(B2, p)) == (lattice_class(A, p) == lattice_class(B, p))


def test_dot_export():
    dot = export_tree(2, 1)
    assert len(re.findall(r"^\s+v\d+ \[", dot, re.M)) == 4
    assert len(re.findall(r" -- ", dot)) == 3
    assert len(re.findall(r"^\s+v\d+ \[", export_tree(2, 2), re.M)) == 10
    assert len(re.findall(r"^\s+v\d+ \[", export_tree(3, 1), re.M)) == 5


def test_radius_limit():
    with pytest.raises(RadiusTooLarge):
        export_tree(2, 7)


def test_hovel_equal_matches_tree(sl2):
    rng = random.Random(1)
    for _ in range(150):
        g, h = sl2.random_element(rng, rng.randint(0, 6)), sl2.random_element(rng, rng.randint(0, 6))
        x, y = rng.randint(-3, 3), rng.randint(-3, 3)
        want = vertex_class(g.matrix, x, 2) == vertex_class(h.matrix, y, 2)
        res = hovel_equal(sl2, HovelPoint(g, principal_point(sl2.rs, [x])), HovelPoint(h, principal_point(sl2.rs, [y])))
        assert res.verdict is (Equality.EQUAL if want else Equality.NOT_EQUAL)
        assert same_vertex(g.matrix, x, h.matrix, y, 2) == want
