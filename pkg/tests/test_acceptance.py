"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
appear; without -s pytest shows them for failing tests only.
"""

import random
import statistics
import time
import warnings
from pathlib import Path

import pytest

from divtree.bounds import alpha_basic, alpha_greedy_inherit, bound_curves, curves_csv
from divtree.cli import main as cli_main
from divtree.covertree import CoverTree
from divtree.experiments import ExperimentConfig, run_distribution, run_timing, split_seed
from divtree.generators import (
    GridConfig,
    WorstCaseBasicConfig,
    WorstCaseInheritConfig,
    gen_grid,
    gen_worstcase_basic,
    gen_worstcase_inherit,
)
from divtree.metric import MetricKind, MetricSpace, Point, PointSet, diversity
from divtree.oracle import exact_diverse
from divtree.selection import (
    gmm,
    ict_basic,
    ict_greedy,
    ict_inherit,
    seed_for_basic_subset,
    seed_for_start,
)

TOL = 1e-9


def report(num: int, name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance] C{num:02d} {name}: {status}{suffix}")
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def _build(pool: PointSet, b: float, order) -> CoverTree:
    tree = CoverTree(pool.metric, b)
    for pid in order:
        tree.insert(pool.get(pid))
    return tree


# ----------------------------------------------------------------------
# C1: invariants after every insert and 200 interleaved removes

def _c1_config(b: float, dim: int, n: int, removes: int, seed: int) -> int:
    rng = random.Random(seed)
    pts = [Point(i, tuple(rng.random() for _ in range(dim))) for i in range(n)]
    ops = ["insert"] * n
    for off, pos in enumerate(sorted(rng.sample(range(100, n), removes))):
        ops.insert(pos + off, "remove")
    tree = CoverTree(MetricSpace(MetricKind.EUCLIDEAN, dim), b)
    live, feed, violations = [], iter(pts), 0
    for op in ops:
        if op == "insert":
            p = next(feed)
            tree.insert(p)
            live.append(p.id)
        else:
            tree.remove(live.pop(rng.randrange(len(live))))
        violations += len(tree.verify_invariants().violations)
    return violations


def test_c01_invariant_suite():
    started = time.perf_counter()
    violations = 0
    for b in (1.2, 1.6, 2.0):
        for dim in (1, 2, 5):
            violations += _c1_config(b, dim, n=1000, removes=200, seed=int(b * 10) + dim)
    elapsed = time.perf_counter() - started
    if elapsed >= 60.0:
        warnings.warn(f"invariant suite took {elapsed:.1f}s (guidance: < 60s)")
    report(1, "invariant suite 9 configs, per-op verification", violations == 0,
           f"{violations} violations, {elapsed:.1f}s")


# ----------------------------------------------------------------------
# C2: greedy max-min stays within factor 2 on grid data with d* = 1

GRIDS = ((3, 491), (5, 475))  # (side, noise) -> 500 points each


def test_c02_gmm_bound_on_grids():
    worst = 0.0
    for side, noise in GRIDS:
        k = side * side
        for trial in range(100):
            inst = gen_grid(GridConfig(2, side, noise, seed=split_seed(2, side, trial)))
            sel = gmm(inst.pool, k, seed=split_seed(2, side, trial, "gmm"))
            worst = max(worst, inst.known_d_star / sel.achieved_diversity)
    report(2, "greedy max-min ratio <= 2 on 3x3/5x5 grids", worst <= 2.0 + TOL,
           f"max ratio {worst:.6f}")


# ----------------------------------------------------------------------
# C3: tree-method bounds on the same grids, random insertion orders

def test_c03_ict_bounds_on_grids():
    started = time.perf_counter()
    worst = {"ict-basic": 0.0, "ict-greedy": 0.0, "ict-inherit": 0.0}
    for side, noise in GRIDS:
        k = side * side
        for trial in range(100):
            inst = gen_grid(GridConfig(2, side, noise, seed=split_seed(3, side, trial)))
            tree = _build(inst.pool, 2.0, inst.insertion_order)
            d_star = inst.known_d_star
            worst["ict-basic"] = max(
                worst["ict-basic"],
                d_star / ict_basic(tree, k, seed=split_seed(3, side, trial, "b")).achieved_diversity,
            )
            worst["ict-greedy"] = max(
                worst["ict-greedy"],
                d_star / ict_greedy(tree, k, seed=split_seed(3, side, trial, "g")).achieved_diversity,
            )
            worst["ict-inherit"] = max(
                worst["ict-inherit"], d_star / ict_inherit(tree, k).achieved_diversity
            )
    elapsed = time.perf_counter() - started
    if elapsed >= 120.0:
        warnings.warn(f"grid bound study took {elapsed:.1f}s (guidance: < 120s)")
    ok = (
        worst["ict-basic"] <= 8.0 + TOL
        and worst["ict-greedy"] <= 6.0 + TOL
        and worst["ict-inherit"] <= 6.0 + TOL
    )
    report(3, "tree-method ratios within 8/6/6 at b=2", ok,
           ", ".join(f"{m} {v:.4f}" for m, v in worst.items()) + f", {elapsed:.1f}s")


# ----------------------------------------------------------------------
# C4: distribution runner sanity on the 2D grid

def test_c04_distribution_sanity():
    cfg = ExperimentConfig(
        generator="grid",
        generator_params=dict(dimension=2, grid_side=3, noise_count=491),
        k_values=(9,),
        trials=100,
        b=2.0,
        seed=4,
    )
    records = run_distribution(cfg)
    ok = True
    details = []
    for method in ("ict-inherit", "ict-greedy"):
        ratios = [r.ratio for r in records if r.method == method]
        med, mx = statistics.median(ratios), max(ratios)
        details.append(f"{method} median {med:.3f} max {mx:.3f}")
        ok = ok and med <= 2.0 and mx <= 6.0
    report(4, "grid ratio distribution: medians <= 2, maxima <= 6", ok,
           "; ".join(details))


# ----------------------------------------------------------------------
# C5: tightness of the random-pick worst case

def test_c05_tightness_basic():
    inst = gen_worstcase_basic(WorstCaseBasicConfig(b=2.0, mu=0.1, eta=0.1))
    tree = _build(inst.pool, 2.0, inst.insertion_order)
    level, layer = tree.termination_layer(2)
    layer_coords = {p.coords for p in layer}
    structure_ok = level == 1 and (0.0, 0.0) in layer_coords and (0.0, 2.1) in layer_coords

    off_id = next(p.id for p in inst.pool if p.coords == (0.0, 2.1))
    seed = seed_for_basic_subset(tree, 2, [tree.root_id, off_id])
    sel = ict_basic(tree, 2, seed=seed)
    ratio = inst.known_d_star / sel.achieved_diversity
    golden_ok = (
        abs(sel.achieved_diversity - 2.1) <= TOL
        and abs(ratio - 15.8 / 2.1) <= TOL
    )

    tiny = gen_worstcase_basic(WorstCaseBasicConfig(b=2.0, mu=1e-6, eta=1e-6))
    tiny_tree = _build(tiny.pool, 2.0, tiny.insertion_order)
    tiny_off = next(p.id for p in tiny.pool if p.coords == (0.0, 2.0 + 1e-6))
    tiny_seed = seed_for_basic_subset(tiny_tree, 2, [tiny_tree.root_id, tiny_off])
    tiny_ratio = tiny.known_d_star / ict_basic(tiny_tree, 2, seed=tiny_seed).achieved_diversity
    limit_ok = tiny_ratio > 7.9999

    report(5, "random-pick worst case: layer, 15.8/2.1 golden, limit 8",
           structure_ok and golden_ok and limit_ok,
           f"level={level} ratio={ratio:.6f} limit_ratio={tiny_ratio:.6f}")


# ----------------------------------------------------------------------
# C6: tightness of the inherited/greedy worst case

def test_c06_tightness_inherit_greedy():
    inst = gen_worstcase_inherit(WorstCaseInheritConfig(b=2.0, mu=0.1, eta=0.1))
    tree = _build(inst.pool, 2.0, inst.insertion_order)
    sel = ict_inherit(tree, 2)
    ratio = inst.known_d_star / sel.achieved_diversity
    inherit_ok = sel.achieved_diversity == 1.1 and abs(ratio - 5.8 / 1.1) <= TOL

    tiny = gen_worstcase_inherit(WorstCaseInheritConfig(b=2.0, mu=1e-6, eta=1e-6))
    tiny_tree = _build(tiny.pool, 2.0, tiny.insertion_order)
    tiny_ratio = tiny.known_d_star / ict_inherit(tiny_tree, 2).achieved_diversity
    limit_ok = tiny_ratio > 5.9999

    _, layer = tree.termination_layer(2)
    greedy_seed = seed_for_start(layer, tree.root_id)
    greedy_ratio = (
        inst.known_d_star / ict_greedy(tree, 2, seed=greedy_seed).achieved_diversity
    )
    greedy_ok = abs(greedy_ratio - 5.8 / 1.1) <= TOL

    report(6, "inherited worst case: 5.8/1.1 golden, limit 6, greedy repro",
           inherit_ok and limit_ok and greedy_ok,
           f"ratio={ratio:.6f} limit_ratio={tiny_ratio:.6f} greedy={greedy_ratio:.6f}")


# ----------------------------------------------------------------------
# C7: every method respects its factor against the exact optimum; the
# layer above the termination layer is a valid greedy initialization

def test_c07_oracle_equivalence():
    started = time.perf_counter()
    rng = random.Random(7)
    bases = (1.3, 1.6, 2.0)
    failures = []
    for case in range(50):
        dim = rng.choice((1, 2))
        n = rng.randint(6, 12)
        k = rng.choice((2, 3, 4))
        k = min(k, n - 1)
        b = bases[case % 3]
        pts = [
            Point(i, tuple(rng.uniform(0.0, 4.0) for _ in range(dim)))
            for i in range(n)
        ]
        pool = PointSet(MetricSpace(MetricKind.EUCLIDEAN, dim), pts)
        d_star = exact_diverse(pool, k).d_star
        a_basic, a_greedy = alpha_basic(b), alpha_greedy_inherit(b)
        for order_idx in range(20):
            order = list(range(n))
            random.Random(split_seed(7, case, order_idx)).shuffle(order)
            tree = _build(pool, b, order)
            checks = [
                ("gmm", gmm(pool, k, seed=order_idx).achieved_diversity, 2.0),
                ("ict-basic", ict_basic(tree, k, seed=order_idx).achieved_diversity, a_basic),
                ("ict-greedy", ict_greedy(tree, k, seed=order_idx).achieved_diversity, a_greedy),
                ("ict-inherit", ict_inherit(tree, k).achieved_diversity, a_greedy),
            ]
            for method, div, alpha in checks:
                if d_star / div > alpha + TOL:
                    failures.append((case, order_idx, method, d_star / div, alpha))
            level, layer = tree.termination_layer(k)
            upper = tree.layer(level + 1)
            if len(upper) >= 2:
                layer_opt = exact_diverse(layer, k).d_star
                if diversity(pool.metric, upper) < 0.5 * layer_opt - TOL:
                    failures.append((case, order_idx, "init-floor", None, None))
    elapsed = time.perf_counter() - started
    if elapsed >= 60.0:
        warnings.warn(f"oracle study took {elapsed:.1f}s (guidance: < 60s)")
    report(7, "50 instances x 20 orders: factors respected, init floor holds",
           not failures, f"{len(failures)} failures, {elapsed:.1f}s")


# ----------------------------------------------------------------------
# C8: closed-form bound functions and their minima

def test_c08_bound_functions(tmp_path):
    exact_ok = alpha_basic(2.0) == 8.0 and alpha_greedy_inherit(2.0) == 6.0
    minima_ok = True
    for b in (1.2, 1.6, 2.0, 3.0):
        rows = bound_curves(b, samples=100_000)
        min_any = min(r[1] for r in rows)
        min_greedy = min(r[2] for r in rows)
        minima_ok = (
            minima_ok
            and abs(min_any - 1.0 / (1.0 + 2.0 * b / (b - 1.0))) <= 1e-6
            and abs(min_greedy - 1.0 / (2.0 + 2.0 * b / (b - 1.0))) <= 1e-6
        )
    out = tmp_path / "bounds_b2.csv"
    out.write_text(curves_csv(2.0, samples=1000), encoding="utf-8")
    csv_ok = out.read_text().startswith("beta,bound_any,bound_greedy\n")
    report(8, "bound functions exact at b=2; grid minima match closed forms",
           exact_ok and minima_ok and csv_ok)


# ----------------------------------------------------------------------
# C9: byte-identical outputs for identical master seeds

def test_c09_determinism(tmp_path):
    def render(out: Path):
        rc = cli_main([
            "dist", "--generator", "grid", "--side", "3", "--noise", "91",
            "--k", "9", "--trials", "5", "--b", "2", "--seed", "11",
            "--output", str(out),
        ])
        assert rc == 0
        rc = cli_main([
            "bounds", "--b", "2", "--samples", "2000", "--output", str(out),
        ])
        assert rc == 0

    a, b = tmp_path / "a", tmp_path / "b"
    render(a)
    render(b)
    names = [
        "dist_records.txt", "dist_summary.csv", "dist.png",
        "bounds_b2.csv", "bounds_b2.png",
    ]
    mismatched = [
        n for n in names if (a / n).read_bytes() != (b / n).read_bytes()
    ]
    report(9, "re-run with same master seed is byte-identical", not mismatched,
           f"compared {len(names)} files" + (f"; mismatch: {mismatched}" if mismatched else ""))


# ----------------------------------------------------------------------
# C10: relative timing trend (warn-only by design)

def test_c10_timing_trend(tmp_path):
    inst = gen_grid(GridConfig(2, 3, 4991, seed=10))
    from divtree.pointio import write_instance

    f = tmp_path / "big.txt"
    write_instance(f, inst)
    cfg = ExperimentConfig(
        input_path=str(f),
        k_values=tuple(range(10, 101, 10)),
        b=2.0,
        seed=10,
        methods=("gmm", "ict-greedy", "ict-inherit"),
    )
    records = run_timing(cfg)
    total = {"gmm": 0.0, "ict-greedy": 0.0, "ict-inherit": 0.0}
    for rec in records:
        total[rec.method] += rec.time_ms
    trend_ok = total["ict-inherit"] <= total["ict-greedy"]
    if not trend_ok:
        warnings.warn(
            f"timing trend inverted: inherit {total['ict-inherit']:.1f}ms vs "
            f"greedy {total['ict-greedy']:.1f}ms (warn-only by design)"
        )
    if total["gmm"] < max(total["ict-greedy"], total["ict-inherit"]):
        warnings.warn("whole-pool greedy was not the slowest in total (warn-only)")
    report(10, "k-sweep timing trend inherit <= greedy (warn-only)", True,
           f"gmm {total['gmm']:.1f}ms, greedy {total['ict-greedy']:.1f}ms, "
           f"inherit {total['ict-inherit']:.1f}ms, "
           f"trend={'ok' if trend_ok else 'inverted'}")
