"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` (or this file directly) to see the lines.
"""
import random
import sys
import time
from fractions import Fraction

import pytest

from oracles import Substitution, compose, log_one_plus_oracle
from tropscat import scattering
from tropscat.lie import LieElement, bch, bracket, derivation_apply, group_act, pairing
from tropscat.mc import HALF, PolyFormDgLa, mc_residual, obstruction, solve_fixed_point, solve_tree_sum
from tropscat.scattering import (Loop, complete, crossing_sequence, in_open_cone, is_consistent, log_seed,
                                 new_walls, path_ordered_product, sector_start_rays)
from tropscat.series import Series
from tropscat.trees import (ainfty_tree_product, area_constant, catalan, enumerate_trees,
                            label_edges, moduli_dimension, satisfies_vertex_rule)

from conftest import rand_lie, rand_series
from test_mc import rand_form


@pytest.fixture
def report(request):
    name = request.node.name

    def emit(ok, detail=""):
        print(f"\n{'PASS' if ok else 'FAIL'} {name}{': ' + detail if detail else ''}")
        return ok

    return emit


def mono(j, m, order):
    return Series({(j, m): 1}, nparams=2, rank=2, order=order)


def test_criterion_1_golden_example(report):
    start = time.perf_counter()
    seed = log_seed(6, (2, 2))
    done = complete(seed)
    elapsed = time.perf_counter() - start
    added = {w.mode: w for w in new_walls(done, seed)}
    u = mono((1, 1), (-1, -1), 6)
    v = mono((1, 2), (-1, -2), 6)
    w11 = LieElement.from_series(u.scale(4) + (u ** 2).scale(2) + (u ** 3).scale(Fraction(4, 3)), (-1, 1))
    ok = (set(added) == {(1, 1), (1, 2), (2, 1), (2, 3), (3, 2)}
          and added[(1, 1)].log_factor == w11
          and added[(1, 2)].log_factor.homogeneous_part(3) == LieElement.from_series(v.scale(2), (-2, 1))
          and elapsed < 10)
    assert report(ok, f"{len(added)} new walls in {elapsed:.2f}s")


def test_criterion_2_monodromy_free(report):
    ok = True
    for k in range(1, 7):
        done = complete(log_seed(k, (2, 2)))
        ok &= all(path_ordered_product(done, Loop(s)).is_zero() for s in sector_start_rays(done))
    # shape: T1^-1 T2 (prod) T1 T2^-1, factors applied leftmost first
    seed = log_seed(6, (2, 2))
    done = complete(seed)
    seq = crossing_sequence(seed, Loop((-1, -1)))
    ok &= [(i, -s) for i, s in seq] == [(1, -1), (0, 1), (1, 1), (0, -1)]
    f1, f2 = (w.log_factor for w in done.walls[:2])
    rays = sorted(new_walls(done, seed), key=lambda w: Fraction(w.mode[1], w.mode[0]), reverse=True)
    word = [-f1, f2] + [w.log_factor for w in rays] + [f1, -f2]
    for g in ((1, 0), (0, 1)):
        s = out = mono((0, 0), g, 6)
        for f in word:
            out = group_act(f, out)
        ok &= out == s
    assert report(ok, "orders 1..6, all base points, quoted word")


def test_criterion_3_pentagon(report):
    seed = log_seed(8, (1, 1))
    done = complete(seed)
    added = new_walls(done, seed)
    u = mono((1, 1), (-1, -1), 8)
    ok = len(added) == 1 and added[0].log_factor == LieElement.from_series(log_one_plus_oracle(u), (-1, 1))
    subs = {0: Substitution(mono((1, 0), (-1, 0), 8), (0, 1)),
            1: Substitution(mono((0, 1), (0, -1), 8), (-1, 0)),
            done.walls.index(added[0]): Substitution(u, (-1, 1))}
    seq = crossing_sequence(done, Loop((-1, -1)))
    autos = [subs[i] if s > 0 else subs[i].inverse() for i, s in seq]
    ok &= len(autos) == 5
    for g in ((1, 0), (0, 1)):
        s = mono((0, 0), g, 8)
        ok &= compose(autos, s) == s
    assert report(ok, "one new wall, five-fold substitution is the identity")


def test_criterion_4_cone_confinement(report, monkeypatch):
    inserted = []
    original = scattering.decompose_defect

    def recording(defect):
        parts = original(defect)
        inserted.extend(parts)
        return parts

    monkeypatch.setattr(scattering, "decompose_defect", recording)
    rng = random.Random(4)
    pairs = [((1, 0), (0, 1)), ((1, 0), (1, 2)), ((2, 1), (-1, 1)), ((1, -1), (1, 1))]
    ok = True
    total = 0
    for _ in range(40):
        inserted.clear()
        m1, m2 = rng.choice(pairs)
        order = rng.randint(1, 5)
        factors = []
        for i, m in enumerate((m1, m2)):
            terms = {}
            for k in range(1, rng.randint(1, 3) + 1):
                j = (k, 0) if i == 0 else (0, k)
                terms[(j, (-k * m[0], -k * m[1]))] = rng.randint(1, 4)
            factors.append(LieElement.from_series(Series(terms, nparams=2, rank=2, order=order),
                                                  (-m[1], m[0])))
        done = complete(scattering.seed_diagram(m1, m2, *factors))
        ok &= all(in_open_cone(a, m1, m2) for a in inserted)
        ok &= is_consistent(done)
        total += len(inserted)
    assert report(ok, f"{total} insertions over 40 random seeds")


def test_criterion_5_kuranishi(report):
    rng = random.Random(5)
    ok = True
    for _ in range(100):
        L = PolyFormDgLa(rng.choice((3, 4)), rng.choice((0, 2)))
        N = rng.randint(1, 5)
        pi = rand_form(rng, L, degree=1, max_order=N)
        ok &= solve_tree_sum(L, pi, N) == solve_fixed_point(L, pi, N)
    L = PolyFormDgLa(3)
    pi = L.element([((1, 2), (0, 0), ["dx1"], 1, 1), ((2, 3), (0, 0), ["dx2"], 1, 1)])
    phi = solve_fixed_point(L, pi, 5)
    expected = pi - L.element([((1, 3), (1, 0), ["dx2"], 1, 2), ((1, 3), (0, 1), ["dx1"], -1, 2)]) * HALF
    ok &= phi == expected and solve_tree_sum(L, pi, 5) == phi
    ok &= not mc_residual(L, phi) and not obstruction(L, phi)
    assert report(ok, "100 random inputs and the hand instance")


def test_criterion_6_algebra_properties(report):
    rng = random.Random(6)
    ok = True
    for _ in range(200):
        x, y, z = (rand_lie(rng, 4) for _ in range(3))
        ok &= (bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))).is_zero()
        ok &= all(pairing(t.monomial, t.direction) == 0 for t in bracket(x, y).terms())
        a, b = rand_series(rng, 4), rand_series(rng, 4)
        ok &= derivation_apply(x, a * b) == derivation_apply(x, a) * b + a * derivation_apply(x, b)
        ok &= group_act(x, a * b) == group_act(x, a) * group_act(x, b)
        ok &= group_act(bch(x, y), a) == group_act(x, group_act(y, a))
    for _ in range(200):
        L = PolyFormDgLa(3, rng.choice((0, 1)))
        f = rand_form(rng, L, max_poly=rng.randint(0, 6), size=5)
        ok &= L.d(L.homotopy(f)) + L.homotopy(L.d(f)) == f - L.include(L.project(f))
    assert report(ok, "200 instances per law")


def test_criterion_7_tree_combinatorics(report):
    ok = [len(enumerate_trees(d)) for d in range(1, 11)] == [catalan(d - 1) for d in range(1, 11)]
    ok &= [catalan(d - 1) for d in range(1, 7)] == [1, 1, 2, 5, 14, 42]
    ok &= len(enumerate_trees(3)) == 2
    ok &= all(satisfies_vertex_rule(label_edges(t)) for d in range(1, 7) for t in enumerate_trees(d))
    assert report(ok, "Catalan counts d<=10, vertex rule d<=6")


def test_criterion_8_morse_combinatorics(report):
    ok = moduli_dimension((1, 1, 1), 2, 3) == 0 and moduli_dimension((1,), 1, 1) == -1
    ok &= moduli_dimension((1, 1), 2, 2) == 0
    ok &= area_constant((5, 2, 3)) == 0 and area_constant((1, 0)) == 1
    ok &= area_constant((Fraction(7, 2), Fraction(1, 2), 1, 2)) == 0
    ops = (lambda p, q: f"({p}.{q})", lambda v, label: f"H{v}", lambda v, label: f"P{v}")
    parts = sorted(ainfty_tree_product(t, ["a", "b", "c"], *ops) for t in enumerate_trees(3))
    ok &= parts == ["P(H(c.b).a)", "P(c.H(b.a))"]
    assert report(ok, "dimension formula, area constant, m_3 skeleton")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-s", "-q"]))
