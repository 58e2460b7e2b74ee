import random
from fractions import Fraction

import pytest

from oracles import Substitution, compose, log_one_plus_oracle
from tropscat import scattering
from tropscat.lie import LieElement, LieTerm, bracket, rotate_ccw
from tropscat.scattering import (ConeViolation, Diagram, DiagramError, Loop, MonodromyError, Support, Wall,
                                 complete, crossing_sequence, cross, in_open_cone, is_consistent, log_seed,
                                 minimalize, new_walls, path_ordered_product, sector_start_rays, seed_diagram)
from tropscat.series import Series

EXAMPLE_WALLS = {(1, 1), (1, 2), (2, 1), (2, 3), (3, 2)}


def t_series(terms, order):
    return Series(terms, nparams=2, rank=2, order=order)


def u_power(j, m, order):
    return t_series({(j, m): 1}, order)


@pytest.fixture(scope="module")
def example():
    seed = log_seed(6, (2, 2))
    return seed, complete(seed)


@pytest.fixture(scope="module")
def pentagon():
    seed = log_seed(8, (1, 1))
    return seed, complete(seed)


def test_crossing_sequence_of_seed():
    seed = log_seed(3, (1, 1))
    assert crossing_sequence(seed, Loop((-1, -1))) == [(1, 1), (0, -1), (1, -1), (0, 1)]


def test_crossing_sequence_single_ray():
    f = LieElement.from_series(u_power((1, 0), (-1, 0), 3), (0, 1))
    d = Diagram((Wall.ray((1, 0), f),), 2, 3)
    assert crossing_sequence(d, Loop((0, 1))) == [(0, -1)]


def test_rotating_start_rotates_sequence():
    seed = log_seed(3, (1, 1))
    base = crossing_sequence(seed, Loop((-1, -1)))
    assert crossing_sequence(seed, Loop((1, -1))) == base[1:] + base[:1]
    assert crossing_sequence(seed, Loop((1, 1))) == base[2:] + base[:2]


def test_start_ray_on_support_rejected():
    with pytest.raises(DiagramError):
        crossing_sequence(log_seed(3, (1, 1)), Loop((2, 0)))


def test_empty_and_trivial_products():
    assert path_ordered_product(Diagram.empty(2, 4)).is_zero()
    single = Diagram(log_seed(4, (1, 1)).walls[:1], 2, 4)
    assert path_ordered_product(single).is_zero()


def test_uncompleted_defect_at_order_two(example):
    seed, done = example
    defect = path_ordered_product(seed.with_order(2))
    assert defect.monomials() == [(-1, -1)]
    u = u_power((1, 1), (0, 0), 2)
    assert defect == LieElement([LieTerm((-1, -1), (-1, 1), u.scale(4))], nparams=2, rank=2, order=2)
    # the (1,1) wall is crossed with exponent -1 and carries the same leading term
    wall = next(w for w in done.walls if w.mode == (1, 1))
    assert wall.log_factor.truncate(2) == defect
    assert crossing_sequence(done)[[i for i, _ in crossing_sequence(done)].index(done.walls.index(wall))][1] == -1


def test_golden_example(example):
    seed, done = example
    added = new_walls(done, seed)
    assert {w.mode for w in added} == EXAMPLE_WALLS
    assert all(w.support == Support("ray", w.mode) for w in added)
    u = u_power((1, 1), (-1, -1), 6)
    w11 = next(w for w in added if w.mode == (1, 1))
    expected = u.scale(4) + (u ** 2).scale(2) + (u ** 3).scale(Fraction(4, 3))
    assert w11.log_factor == LieElement.from_series(expected, (-1, 1))
    w12 = next(w for w in added if w.mode == (1, 2))
    v = u_power((1, 2), (-1, -2), 6)
    assert w12.log_factor.homogeneous_part(3) == LieElement.from_series(v.scale(2), (-2, 1))
    assert w12.log_factor == LieElement.from_series(log_one_plus_oracle(v).scale(2), (-2, 1))


def test_completed_example_is_monodromy_free(example):
    _, done = example
    for start in sector_start_rays(done):
        assert path_ordered_product(done, Loop(start)).is_zero()
    assert is_consistent(done)


def test_monodromy_free_at_each_order():
    for k in range(1, 7):
        done = complete(log_seed(k, (2, 2)))
        assert path_ordered_product(done).is_zero()


def test_product_shape_matches_word(example):
    """The word  T1^-1 T2 (prod T_a) T1 T2^-1, factors applied leftmost first."""
    seed, done = example
    seq = crossing_sequence(seed, Loop((-1, -1)))
    # walls 0, 1 are the seed lines on R(1,0) and R(0,1): T1, T2
    quoted = [(1, -1), (0, 1), (1, 1), (0, -1)]
    assert [(i, -s) for i, s in seq] == quoted
    f1, f2 = (w.log_factor for w in done.walls[:2])
    rays = sorted(new_walls(done, seed), key=lambda w: Fraction(w.mode[1], w.mode[0]), reverse=True)
    word = [-f1, f2] + [w.log_factor for w in rays] + [f1, -f2]
    from tropscat.lie import group_act
    for g in ((1, 0), (0, 1)):
        s = u_power((0, 0), g, 6)
        out = s
        for f in word:
            out = group_act(f, out)
        assert out == s


def test_pentagon(pentagon):
    seed, done = pentagon
    added = new_walls(done, seed)
    assert len(added) == 1
    u = u_power((1, 1), (-1, -1), 8)
    assert added[0].mode == (1, 1)
    assert added[0].log_factor == LieElement.from_series(log_one_plus_oracle(u), (-1, 1))
    # five-fold composition by substitution on the generators
    subs = {
        0: Substitution(u_power((1, 0), (-1, 0), 8), (0, 1)),
        1: Substitution(u_power((0, 1), (0, -1), 8), (-1, 0)),
    }
    index_new = done.walls.index(added[0])
    subs[index_new] = Substitution(u, (-1, 1))
    seq = crossing_sequence(done, Loop((-1, -1)))
    assert len(seq) == 5
    autos = [subs[i] if s > 0 else subs[i].inverse() for i, s in seq]
    for g in ((1, 0), (0, 1)):
        s = u_power((0, 0), g, 8)
        assert compose(autos, s) == s
    # and the same composition without the new wall is not the identity
    short = [a for (i, _), a in zip(seq, autos) if i != index_new]
    assert compose(short, u_power((0, 0), (1, 0), 8)) != u_power((0, 0), (1, 0), 8)


def test_single_wall_completes_to_itself():
    d = Diagram(log_seed(5, (1, 1)).walls[:1], 2, 5)
    assert complete(d) == d


def test_completion_is_idempotent(example):
    _, done = example
    assert complete(done) == done


def test_stage_centrality():
    done = complete(log_seed(5, (2, 2)), check_centrality=True)
    assert is_consistent(done)


def test_defect_is_central_on_random_seeds():
    rng = random.Random(5)
    for _ in range(5):
        seed = log_seed(4, (rng.randint(1, 3), rng.randint(1, 3)))
        complete(seed, check_centrality=True)


def _random_seed(rng, order):
    pairs = [((1, 0), (0, 1)), ((1, 0), (1, 2)), ((2, 1), (-1, 1)), ((1, -1), (1, 1)), ((0, 1), (-1, 0))]
    m1, m2 = rng.choice(pairs)
    factors = []
    for i, m in enumerate((m1, m2)):
        terms = {}
        for k in range(1, rng.randint(1, 3) + 1):
            j = (k, 0) if i == 0 else (0, k)
            terms[(j, (-k * m[0], -k * m[1]))] = rng.randint(1, 3)
        factors.append(LieElement.from_series(t_series(terms, order), rotate_ccw(m)))
    return seed_diagram(m1, m2, *factors), m1, m2


def test_cone_confinement(monkeypatch):
    seen = []
    original = scattering.decompose_defect

    def recording(defect):
        parts = original(defect)
        seen.extend(parts)
        return parts

    monkeypatch.setattr(scattering, "decompose_defect", recording)
    rng = random.Random(11)
    for _ in range(60):
        seen.clear()
        seed, m1, m2 = _random_seed(rng, rng.randint(2, 5))
        done = complete(seed)
        for a in seen:
            assert in_open_cone(a, m1, m2)
            assert cross(m1, a) * cross(a, m2) > 0
        for w in new_walls(done, seed):
            assert in_open_cone(w.mode, m1, m2)
        assert is_consistent(done)


def test_cone_violation_detected():
    seed = log_seed(3, (1, 1))
    f = LieElement.from_series(u_power((1, 0), (1, -1), 3), (1, 1))
    with pytest.raises(ConeViolation):
        complete(seed.add(Wall.ray((-1, 1), f)))


def test_convention_bug_is_reported(monkeypatch):
    original = scattering.decompose_defect
    monkeypatch.setattr(scattering, "decompose_defect",
                        lambda defect: {a: -p for a, p in original(defect).items()})
    with pytest.raises(MonodromyError):
        complete(log_seed(3, (1, 1)))


def test_products_at_other_base_points_are_conjugate(example):
    seed, _ = example
    starts = sector_start_rays(seed)
    assert len(starts) == 4
    products = [path_ordered_product(seed, Loop(s)) for s in starts]
    assert all(not p.is_zero() for p in products)
    # conjugating by the wall between neighbouring sectors relates them; the lowest order parts agree
    lows = {p.homogeneous_part(2) for p in products}
    assert len(lows) == 1


def test_minimalize_examples():
    order = 3
    f = LieElement.from_series(u_power((1, 0), (-1, 0), order), (0, 1))
    g = LieElement.from_series(u_power((2, 0), (-2, 0), order), (0, 1))
    zero = f.like_zero()
    w = Wall.ray((1, 0), f)
    assert minimalize(Diagram((Wall.ray((1, 0), zero),), 2, order)).walls == ()
    assert minimalize(Diagram((w, Wall.ray((1, 0), -f)), 2, order)).walls == ()
    merged = minimalize(Diagram((w, Wall.ray((1, 0), g)), 2, order))
    assert len(merged.walls) == 1
    assert bracket(f, g).is_zero()
    assert merged.walls[0].log_factor == f + g
    assert len(merged.walls[0].log_factor.terms()) == 2


def test_is_consistent_examples(example):
    seed, done = example
    assert is_consistent(Diagram.empty(2, 3))
    assert not is_consistent(seed.with_order(2))
    assert is_consistent(done)


def test_wall_validation():
    f = LieElement.from_series(u_power((1, 0), (-1, 0), 3), (0, 1))
    with pytest.raises(DiagramError):
        Wall.ray((0, 1), f)
    with pytest.raises(DiagramError):
        Wall.ray((2, 0), f)
    with pytest.raises(DiagramError):
        Wall((1, 0), Support("ray", (1, 0)), f, (1, 1))
    with pytest.raises(DiagramError):
        Support("segment", (1, 0))
    with pytest.raises(DiagramError):
        seed_diagram((1, 0), (2, 0), f, f)
