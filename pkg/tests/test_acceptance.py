"""Acceptance criteria. Each criterion prints one PASS/FAIL line; run directly or through pytest."""
import random
import re
import sys
import time
from fractions import Fraction as F
from itertools import combinations
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hovels.apartment import ApartmentPoint, ValueSet, contains, enclosure_trace, origin_facet, principal_point
from hovels.axioms import check_root_datum_axioms, check_valuation_axioms
from hovels.decompositions import iwasawa, verify_n_uniqueness
from hovels.descent import DescentData, check_descended_valuation, restrict_roots, validate_descent
from hovels.errors import InconsistentCocycle
from hovels.fixators import Membership, fixator_membership
from hovels.groups import RootLetter, instantiate
from hovels.parahoric import (MAXIMAL, MINIMAL, Equality, HovelPoint, check_para_axioms, family_membership,
                              fixed_set_of_unipotent, hovel_act, hovel_equal, hovel_project, is_grignotant,
                              sample_monomial)
from hovels.roots import build_root_system, enumerate_real_roots
from hovels.tits_cone import act_facet, enumerate_facets
from hovels.tree import export_tree, hovel_representative, tree_ball

from oracles import (brute_force_levels, eps_coords, integral, integral_fixes, mm, monomial,
                     stabilizing_fixator_element, upper_unipotent, vertex_class)

SEED = 0
GROUPS = [("SL2", 2), ("SL2", 3), ("SL3", 2), ("LoopSL2", 2)]


def _failures(report):
    return sum(len(r.failures) for r in report.results)


def valuation_suite():
    t0 = time.time()
    bad, detail = 0, []
    for tag, p in GROUPS:
        rep = check_valuation_axioms(instantiate(tag, p), 200, SEED)
        bad += _failures(rep)
        detail.append(f"{tag}({p}) {'ok' if rep.passed else 'FAIL'}")
    dt = time.time() - t0
    return bad == 0 and dt < 30, f"{', '.join(detail)}; {dt:.1f}s (limit 30s)"


def root_datum_suite():
    bad, detail = 0, []
    for tag, p in GROUPS:
        rep = check_root_datum_axioms(instantiate(tag, p), 200, SEED)
        bad += _failures(rep)
        detail.append(f"{tag}({p}) {'ok' if rep.passed else 'FAIL'}")
    return bad == 0, ", ".join(detail)


def enclosure_oracle():
    t0 = time.time()
    vals = [F(k, 2) for k in range(-3, 4)]
    checked = mismatches = 0
    for cartan in ([[2]], [[2, -1], [-1, 2]]):
        rs = build_root_system(cartan)
        roots = enumerate_real_roots(rs, 6)
        grid = [()]
        for _ in range(rs.rank):
            grid = [g + (v,) for g in grid for v in vals]
        pts = [principal_point(rs, x) for x in grid]
        for k in (1, 2, 3):
            for omega in combinations(pts, k):
                trace = enclosure_trace(omega, origin_facet(rs), ValueSet(1, (-4, 4)))
                got = {D.root.coords: D.level for D in trace.constraints}
                want = brute_force_levels(omega, roots)
                checked += 1
                if trace.empty or any(got.get(r.coords) != want[r.coords] for r in roots):
                    mismatches += 1
    dt = time.time() - t0
    return mismatches == 0 and dt < 60, f"{checked} sets, {mismatches} mismatches, {dt:.1f}s (limit 60s)"


def iwasawa_reassembly():
    bad = 0
    for tag in ("SL2", "SL3"):
        vrd = instantiate(tag, 2)
        o = principal_point(vrd.rs, [0] * vrd.rs.rank)
        rng = random.Random(SEED)
        for _ in range(500):
            g = vrd.random_element(rng, rng.randint(0, 6))
            t = iwasawa(vrd, g, F=o)
            ok = (mm(mm(t.u.matrix, t.n.matrix), t.q.matrix) == g.matrix and upper_unipotent(t.u.matrix)
                  and monomial(t.n.matrix) and integral(t.q.matrix)
                  and fixator_membership(vrd, o, t.q) is Membership.IN)
            bad += not ok
    return bad == 0, f"1000 words, {bad} failures"


def n_uniqueness():
    bad, detail = 0, []
    for tag in ("SL2", "SL3"):
        vrd = instantiate(tag, 2)
        rng = random.Random(SEED)
        pairs = fails = 0
        for i in range(10):
            rep = verify_n_uniqueness(vrd, vrd.random_element(rng, rng.randint(1, 6)), trials=10, seed=i)
            pairs += rep.trials
            fails += len(rep.failures)
        bad += fails
        detail.append(f"{tag}: {pairs} pairs, {fails} failures")
    return bad == 0, "; ".join(detail)


def tree_oracle():
    vrd = instantiate("SL2", 2)
    verts, _, _ = tree_ball(2, 3)
    reps = [hovel_representative(M, 2) for M in verts.values()]
    pts = [HovelPoint(vrd.from_matrix(g), principal_point(vrd.rs, [x])) for g, x in reps]
    mismatches = pairs = 0
    for i, x in enumerate(pts):
        for j, y in enumerate(pts):
            res = hovel_equal(vrd, x, y)
            want = vertex_class(reps[i][0], reps[i][1], 2) == vertex_class(reps[j][0], reps[j][1], 2)
            pairs += 1
            mismatches += res.verdict is not (Equality.EQUAL if want else Equality.NOT_EQUAL)
    rng = random.Random(SEED)
    for _ in range(500):
        w = vrd.random_element(rng, rng.randint(0, 6))
        i, j = rng.randrange(len(pts)), rng.randrange(len(pts))
        moved = hovel_act(w, pts[i])
        want = vertex_class(mm(w.matrix, reps[i][0]), reps[i][1], 2) == vertex_class(reps[j][0], reps[j][1], 2)
        pairs += 1
        mismatches += hovel_equal(vrd, moved, pts[j]).verdict is not (Equality.EQUAL if want else Equality.NOT_EQUAL)
    counts_ok = True
    for p in (2, 3):
        for r in range(5):
            n = len(re.findall(r"^\s+v\d+ \[", export_tree(p, r), re.M))
            counts_ok &= n == 1 + (p + 1) * (p ** r - 1) // (p - 1)
    return mismatches == 0 and counts_ok, f"{pairs} pairs, {mismatches} mismatches; ball counts {'ok' if counts_ok else 'WRONG'}"


def fixed_set_identity():
    vrd = instantiate("SL3", 2)
    rng = random.Random(SEED)
    roots = vrd.roots()
    bad = letters = 0
    while letters < 100:
        r = rng.choice(roots)
        c = vrd.random_scalar(rng)
        if c == 0:
            continue
        letters += 1
        u = vrd.u(r.coords, c)
        for _ in range(8):
            x = principal_point(vrd.rs, [F(rng.randint(-8, 8), 2) for _ in range(2)])
            inside = r(x.rep) + vrd.omega(c) >= 0
            bad += fixator_membership(vrd, x, u) is not (Membership.IN if inside else Membership.OUT)
    products = 0
    while products < 100:
        chosen = rng.sample(roots, rng.randint(1, 3))
        if not is_grignotant(vrd.rs, chosen):
            continue
        products += 1
        u = vrd.element([RootLetter(r.coords, F(rng.choice([1, -1, 3])) * F(2) ** rng.randint(-2, 2)) for r in chosen])
        cons = fixed_set_of_unipotent(vrd, u)
        for _ in range(8):
            x = principal_point(vrd.rs, [F(rng.randint(-8, 8), 2) for _ in range(2)])
            inside = all(contains(D, x) for D in cons)
            bad += (fixator_membership(vrd, x, u) is Membership.IN) != inside
            bad += integral_fixes(u.matrix, eps_coords(x.rep), 2) != inside
    return bad == 0, f"100 letters and 100 grignotant products, {bad} failures"


def projection_equivariance():
    bad = total = 0
    for tag in ("SL2", "SL3"):
        vrd = instantiate(tag, 2)
        rs = vrd.rs
        rng = random.Random(SEED)
        facets = [f for f in enumerate_facets(rs, 3) if len(f.J) < rs.rank]
        for _ in range(200):
            a = principal_point(rs, [F(rng.randint(-3, 3), 2) for _ in range(rs.rank)])
            f = rng.choice(facets)
            g, h = vrd.random_element(rng, rng.randint(0, 4)), vrd.random_element(rng, rng.randint(0, 4))
            q = stabilizing_fixator_element(vrd, a, f, rng)
            n = sample_monomial(vrd, rng)
            lhs = hovel_act(h, hovel_project(vrd, HovelPoint(g, a), f))
            alt = HovelPoint(h * g * q * n, vrd.act(n.inv(), a))
            rhs = hovel_project(vrd, alt, act_facet(rs, vrd.nu(n).linear.inverse(), f))
            total += 1
            bad += hovel_equal(vrd, lhs, rhs).verdict is not Equality.EQUAL
    return bad == 0, f"{total} samples, {bad} failures"


def descent_checks():
    rs = build_root_system([[2, -1], [-1, 2]])
    notes = []
    ok = True
    for omega in ((0, 0), (1, -1)):
        try:
            ok &= validate_descent(DescentData.build(rs, [((1, 0), list(omega))])).valid
        except InconsistentCocycle:
            ok = False
            notes.append(f"rejected {omega}")
    try:
        validate_descent(DescentData.build(rs, [((1, 0), [1, 1])]))
        ok = False
        notes.append("accepted (1,1)")
    except InconsistentCocycle:
        pass
    dd = DescentData.build(rs, [((1, 0), [0, 0])])
    rrs = restrict_roots(dd)
    a = min(abs(r.vector[0]) for r in rrs.roots)
    shape = sorted(r.vector[0] / a for r in rrs.roots) == [-2, -1, 1, 2] and rrs.non_reduced
    ok &= shape
    rep = check_descended_valuation(dd, instantiate("SL3", 2), samples=100, seed=SEED)
    ok &= rep.passed
    counts = ", ".join(f"{r.condition}:{r.samples}/{len(r.failures)}" for r in rep.results)
    return ok, f"cocycles ok; restricted {{±a, ±2a}} {'ok' if shape else 'WRONG'}; samples/failures {counts} {' '.join(notes)}"


def para_suites():
    bad, detail = 0, []
    for tag in ("SL2", "SL3"):
        vrd = instantiate(tag, 2)
        rep = check_para_axioms(vrd, MINIMAL, ("inj", "sph", "dec", "2.1"), samples=100, seed=SEED)
        bad += _failures(rep)
        detail.append(f"{tag} {'ok' if rep.passed else 'FAIL'}")
        rng = random.Random(SEED)
        facets = enumerate_facets(vrd.rs, 3)
        for _ in range(100):
            d = rng.choice(facets)
            a = ApartmentPoint(vrd.rs, d, [F(rng.randint(-3, 3), 2) for _ in range(vrd.rs.rank)])
            g = vrd.random_element(rng, rng.randint(0, 5))
            bad += family_membership(vrd, MAXIMAL, a, g) is not family_membership(vrd, MINIMAL, a, g)
    return bad == 0, f"{', '.join(detail)}; maximal vs minimal on 200 spherical points"


CRITERIA = [
    ("1 valuation axioms", valuation_suite),
    ("2 root datum axioms", root_datum_suite),
    ("3 enclosure vs brute force", enclosure_oracle),
    ("4 Iwasawa reassembly", iwasawa_reassembly),
    ("5 uniqueness modulo N(a)", n_uniqueness),
    ("6 tree oracle", tree_oracle),
    ("7 fixed-set identity", fixed_set_identity),
    ("8 projection equivariance", projection_equivariance),
    ("9 descent", descent_checks),
    ("10 parahoric suites", para_suites),
]


def _line(name, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {name}: {detail}"


@pytest.mark.parametrize("name,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(name, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(name, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for name, fn in CRITERIA:
        ok, detail = fn()
        print(_line(name, ok, detail), flush=True)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
