"""Diverse-subset selection: greedy max-min and the three cover-tree strategies.

All four return a `DiverseSelection`. Selections are read-only over an
immutable pool or tree snapshot; runs for different seeds or k may
proceed in parallel.

  gmm          greedy max-min over an arbitrary pool, random (seeded)
               start unless an initial set is given
  ict_basic    uniform random k-subset of the tree's termination layer
  ict_greedy   gmm restricted to the termination layer
  ict_inherit  deterministic: start from the layer above the termination
               layer, greedily fill from the termination layer

Ties in the greedy argmax are broken by lowest point id, which makes the
initialized variants fully deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .covertree import CoverTree
from .errors import (
    InvalidInitError,
    KTooLargeError,
    KTooSmallError,
    SeedNotFoundError,
)
from .metric import PointSet, dists_to, diversity


class SelectionMethod(Enum):
    GMM = "gmm"
    ICT_BASIC = "ict-basic"
    ICT_GREEDY = "ict-greedy"
    ICT_INHERIT = "ict-inherit"


@dataclass(frozen=True)
class DiverseSelection:
    method: SelectionMethod
    points: PointSet
    achieved_diversity: float
    termination_level: int | None
    seed: int | None

    @property
    def ids(self) -> tuple[int, ...]:
        return self.points.ids()


def _check_k(k: int, n: int) -> None:
    if k < 2:
        raise KTooSmallError(f"k must be >= 2, got {k}")
    if k > n:
        raise KTooLargeError(f"k={k} exceeds pool size {n}")


def _greedy_fill(pool: PointSet, k: int, start_ids: list[int]) -> list[int]:
    """Extend `start_ids` to k points by repeatedly adding the pool point
    with maximum distance to the current set (argmax ties -> lowest id)."""
    ordered = sorted(pool, key=lambda p: p.id)
    ids = [p.id for p in ordered]
    coords = np.array([p.coords for p in ordered], dtype=np.float64)
    pos = {pid: i for i, pid in enumerate(ids)}
    space = pool.metric

    chosen = list(start_ids)
    dists = np.full(len(ids), np.inf)
    for pid in chosen:
        dists = np.minimum(dists, dists_to(space, coords, coords[pos[pid]]))
        dists[pos[pid]] = -np.inf
    while len(chosen) < k:
        sel = int(np.argmax(dists))  # first max = lowest id (rows id-sorted)
        chosen.append(ids[sel])
        dists = np.minimum(dists, dists_to(space, coords, coords[sel]))
        dists[sel] = -np.inf
    return chosen


def _draw_start(rng: random.Random, n: int) -> int:
    return rng.randrange(n)


def gmm(
    pool: PointSet,
    k: int,
    seed: int | None = None,
    init: PointSet | None = None,
) -> DiverseSelection:
    """Greedy max-min: start from one uniformly chosen point (or `init`),
    then add the argmax of the min distance to the chosen set until |S|=k."""
    _check_k(k, len(pool))
    if init is not None and len(init) > 0:
        if len(init) > k:
            raise InvalidInitError(f"init has {len(init)} points, k={k}")
        for p in init:
            if p.id not in pool or pool.get(p.id).coords != p.coords:
                raise InvalidInitError(f"init point {p.id} not in pool")
        start_ids = sorted(p.id for p in init)
        used_seed = seed
    else:
        rng = random.Random(seed)
        ordered_ids = sorted(p.id for p in pool)
        start_ids = [ordered_ids[_draw_start(rng, len(ordered_ids))]]
        used_seed = seed
    chosen = _greedy_fill(pool, k, start_ids)
    sel = pool.subset(sorted(chosen))
    return DiverseSelection(
        SelectionMethod.GMM, sel, diversity(pool.metric, sel), None, used_seed
    )


def ict_basic(tree: CoverTree, k: int, seed: int | None = None) -> DiverseSelection:
    """Uniform random k-subset (without replacement) of the termination layer."""
    level, layer = tree.termination_layer(k)
    rng = random.Random(seed)
    ids = sorted(layer.ids())
    chosen = sorted(rng.sample(ids, k))
    sel = layer.subset(chosen)
    return DiverseSelection(
        SelectionMethod.ICT_BASIC, sel, diversity(tree.metric, sel), level, seed
    )


def ict_greedy(tree: CoverTree, k: int, seed: int | None = None) -> DiverseSelection:
    """Greedy max-min restricted to the termination layer."""
    level, layer = tree.termination_layer(k)
    inner = gmm(layer, k, seed=seed)
    return DiverseSelection(
        SelectionMethod.ICT_GREEDY,
        inner.points,
        inner.achieved_diversity,
        level,
        seed,
    )


def ict_inherit(tree: CoverTree, k: int) -> DiverseSelection:
    """Start from the layer above the termination layer and greedily fill
    from the termination layer. Deterministic for a given tree and k."""
    level, layer = tree.termination_layer(k)
    # members of the layer above = termination-layer members one level up
    upper_ids = sorted(
        p.id for p in layer if tree.top_level(p.id) >= level + 1
    )
    if len(upper_ids) >= k:
        raise AssertionError(
            "layer above the termination layer holds >= k nodes; "
            "termination_layer contract broken"
        )
    chosen = _greedy_fill(layer, k, upper_ids)
    sel = layer.subset(sorted(chosen))
    return DiverseSelection(
        SelectionMethod.ICT_INHERIT, sel, diversity(tree.metric, sel), level, None
    )


def select(
    method: SelectionMethod,
    tree: CoverTree | None,
    pool: PointSet | None,
    k: int,
    seed: int | None = None,
) -> DiverseSelection:
    """Dispatch a selection by method; gmm uses the pool, ICT methods the tree."""
    if method is SelectionMethod.GMM:
        if pool is None:
            pool = tree.point_set()
        return gmm(pool, k, seed=seed)
    if tree is None:
        raise ValueError(f"{method.value} needs a cover tree")
    if method is SelectionMethod.ICT_BASIC:
        return ict_basic(tree, k, seed=seed)
    if method is SelectionMethod.ICT_GREEDY:
        return ict_greedy(tree, k, seed=seed)
    return ict_inherit(tree, k)


# ----------------------------------------------------------------------
# adversarial-seed helpers for the worst-case golden tests

def seed_for_start(pool: PointSet, point_id: int, max_attempts: int = 10_000) -> int:
    """Smallest seed whose gmm run starts at `point_id`."""
    ordered_ids = sorted(p.id for p in pool)
    n = len(ordered_ids)
    for seed in range(max_attempts):
        if ordered_ids[_draw_start(random.Random(seed), n)] == point_id:
            return seed
    raise SeedNotFoundError(
        f"no seed in [0, {max_attempts}) starts gmm at point {point_id}"
    )


def seed_for_basic_subset(
    tree: CoverTree, k: int, target_ids, max_attempts: int = 10_000
) -> int:
    """Smallest seed making ict_basic pick exactly `target_ids`."""
    _, layer = tree.termination_layer(k)
    ids = sorted(layer.ids())
    want = sorted(target_ids)
    for seed in range(max_attempts):
        if sorted(random.Random(seed).sample(ids, k)) == want:
            return seed
    raise SeedNotFoundError(
        f"no seed in [0, {max_attempts}) makes ict_basic select {want}"
    )
