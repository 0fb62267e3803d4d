import math
import random

import pytest

from divtree.errors import BoundViolationError, BudgetExceededError, KTooLargeError, KTooSmallError
from divtree.generators import WorstCaseBasicConfig, gen_worstcase_basic
from divtree.metric import Point, PointSet, distance, diversity
from divtree.oracle import exact_diverse, check_ratio
from divtree.selection import gmm, ict_basic, seed_for_basic_subset

from conftest import build_tree, pset, random_points


def brute_force_d_star(pool, k):
    """Independent check: plain itertools enumeration, no pruning."""
    import itertools

    best = -math.inf
    for combo in itertools.combinations(list(pool), k):
        d = min(
            distance(pool.metric, a, b)
            for i, a in enumerate(combo)
            for b in combo[i + 1 :]
        )
        best = max(best, d)
    return best


def test_line_pair(line_0467):
    res = exact_diverse(line_0467, 2)
    assert res.optimal_set.ids() == (0, 3)
    assert res.d_star == 7.0
    assert res.instances_enumerated == 6


def test_pure_grid_k9_is_the_grid():
    grid = pset([(x, y) for x in range(3) for y in range(3)])
    res = exact_diverse(grid, 9)
    assert res.d_star == 1.0
    assert res.optimal_set.ids() == tuple(range(9))


def test_k_equals_pool():
    pool = random_points(7, 2, seed=1, scale=3.0)
    res = exact_diverse(pool, 7)
    assert res.optimal_set.ids() == tuple(range(7))
    assert res.d_star == diversity(pool.metric, pool)


def test_k_bounds():
    pool = random_points(5, 1, seed=2)
    with pytest.raises(KTooSmallError):
        exact_diverse(pool, 1)
    with pytest.raises(KTooLargeError):
        exact_diverse(pool, 6)


def test_budget_guard():
    pool = random_points(200, 1, seed=3)
    with pytest.raises(BudgetExceededError):
        exact_diverse(pool, 8)  # C(200, 8) far beyond 1e7


@pytest.mark.parametrize("k", [2, 3, 4])
def test_matches_independent_bruteforce(k):
    for seed in range(6):
        pool = random_points(9, 2, seed=100 + seed, scale=5.0)
        res = exact_diverse(pool, k)
        assert res.d_star == brute_force_d_star(pool, k)
        assert diversity(pool.metric, res.optimal_set) == res.d_star


def test_invariant_under_reordering_and_relabeling():
    pool = random_points(8, 2, seed=42, scale=4.0)
    res = exact_diverse(pool, 3)
    shuffled = list(pool)
    random.Random(0).shuffle(shuffled)
    relabeled = PointSet(
        pool.metric, [Point(i + 50, p.coords) for i, p in enumerate(shuffled)]
    )
    res2 = exact_diverse(relabeled, 3)
    assert res2.d_star == res.d_star
    assert sorted(pool.get(i).coords for i in res.optimal_set.ids()) == sorted(
        relabeled.get(i).coords for i in res2.optimal_set.ids()
    )


def test_check_ratio_on_line(line_0467):
    sel = gmm(line_0467, 2, init=line_0467.subset([0]))
    assert check_ratio(line_0467, 2, sel) == 1.0


def test_check_ratio_optimal_selection_is_one(line_0467):
    res = exact_diverse(line_0467, 2)
    sel = gmm(line_0467, 2, init=res.optimal_set)
    assert check_ratio(line_0467, 2, sel) == 1.0


def test_check_ratio_flags_violation_against_alpha(line_0467):
    # a deliberately bad "selection" dressed up as gmm output must be flagged
    from divtree.selection import DiverseSelection, SelectionMethod

    bad = line_0467.subset([2, 3])  # {6, 7}: diversity 1, ratio 7 > 2
    sel = DiverseSelection(
        SelectionMethod.GMM, bad, diversity(line_0467.metric, bad), None, None
    )
    with pytest.raises(BoundViolationError):
        check_ratio(line_0467, 2, sel)


def test_check_ratio_worstcase_basic_within_eight():
    inst = gen_worstcase_basic(WorstCaseBasicConfig(b=2.0, mu=0.1, eta=0.1))
    tree = build_tree(inst.pool, 2.0, inst.insertion_order)
    root_id = tree.root_id
    off_id = next(p.id for p in inst.pool if p.coords == (0.0, 2.1))
    seed = seed_for_basic_subset(tree, 2, [root_id, off_id])
    sel = ict_basic(tree, 2, seed=seed)
    ratio = check_ratio(inst.pool, 2, sel, b=2.0)
    assert ratio == pytest.approx(15.8 / 2.1, abs=1e-9)
    assert ratio <= 8.0
