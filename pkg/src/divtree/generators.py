"""Deterministic dataset generators with known optima.

Three families:

  gen_grid              axis-aligned grid plus uniform interior noise;
                        for k = (points per axis)^dim the grid itself is
                        optimal with diversity = spacing
  gen_worstcase_basic   2D line of geometrically densifying points plus
                        one off-line point; an adversarial random layer
                        pick approaches the 2b^2/(b-1) worst case
  gen_worstcase_inherit 1D variant whose inherited selection approaches
                        the 2 + 2b/(b-1) worst case

The worst-case families carry a prescribed insertion order (by absolute
coordinate, origin first); built in that order they yield exactly the
layer structure the tightness arguments need. All generation is seeded
and pure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfigError
from .metric import MetricKind, MetricSpace, Point, PointSet


@dataclass(frozen=True)
class GridConfig:
    dimension: int
    grid_side: int  # points per axis; k_opt = grid_side ** dimension
    noise_count: int
    spacing: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.dimension < 1:
            raise InvalidConfigError("dimension must be >= 1")
        if self.grid_side < 2:
            raise InvalidConfigError("grid_side must be >= 2")
        if self.noise_count < 0:
            raise InvalidConfigError("noise_count must be >= 0")
        if not self.spacing > 0:
            raise InvalidConfigError("spacing must be positive")


@dataclass(frozen=True)
class WorstCaseBasicConfig:
    b: float = 2.0
    mu: float = 0.1
    eta: float = 0.1

    def __post_init__(self):
        if not self.b > 1.0:
            raise InvalidConfigError("b must be > 1")
        if not (0.0 < self.mu <= 0.5 and 0.0 < self.eta <= 0.5):
            raise InvalidConfigError("mu and eta must lie in (0, 0.5]")


@dataclass(frozen=True)
class WorstCaseInheritConfig:
    b: float = 2.0
    mu: float = 0.1
    eta: float = 0.1

    def __post_init__(self):
        if not self.b > 1.0:
            raise InvalidConfigError("b must be > 1")
        if not 0.0 < self.eta <= 0.5:
            raise InvalidConfigError("eta must lie in (0, 0.5]")
        # the termination layer must sit at level 0: b^0 < 1+mu <= b^1
        if not (0.0 < self.mu and 1.0 + self.mu <= self.b):
            raise InvalidConfigError("mu must satisfy 0 < mu <= b - 1")


@dataclass(frozen=True)
class GeneratedInstance:
    pool: PointSet
    insertion_order: tuple[int, ...]
    known_d_star: float | None
    optimal_k: int | None
    info: dict = field(default_factory=dict)


def _ordered_instance(coords, d_star, k_opt, info) -> GeneratedInstance:
    """Points id'd in prescribed insertion order: |x| ascending, then value."""
    def key(c):
        return (abs(c[0]), c[0]) + tuple(abs(v) for v in c[1:]) + tuple(c[1:])

    coords = sorted(coords, key=key)
    dim = len(coords[0])
    pts = [Point(i, c) for i, c in enumerate(coords)]
    pool = PointSet(MetricSpace(MetricKind.EUCLIDEAN, dim), pts)
    return GeneratedInstance(pool, tuple(range(len(pts))), d_star, k_opt, info)


def gen_grid(cfg: GridConfig) -> GeneratedInstance:
    """Grid of grid_side^dimension points at `spacing`, plus uniform noise
    drawn strictly inside the hull (margin spacing/2; spacing/4 when
    grid_side is 2, where the larger margin would collapse the noise box).
    The noise can tie but never beat the grid, so d* = spacing at
    k = grid_side^dimension."""
    g, d, s = cfg.grid_side, cfg.dimension, cfg.spacing
    pts: list[Point] = []
    for i, combo in enumerate(itertools.product(range(g), repeat=d)):
        pts.append(Point(i, tuple(float(c) * s for c in combo)))
    margin = s / 2.0 if g >= 3 else s / 4.0
    lo, hi = margin, (g - 1) * s - margin
    rng = np.random.default_rng(cfg.seed)
    noise = rng.uniform(lo, hi, size=(cfg.noise_count, d))
    for row in noise:
        pts.append(Point(len(pts), tuple(float(v) for v in row)))
    pool = PointSet(MetricSpace(MetricKind.EUCLIDEAN, d), pts)
    order = tuple(int(i) for i in rng.permutation(len(pts)))
    info = {
        "generator": "grid",
        "dimension": d,
        "grid_side": g,
        "noise_count": cfg.noise_count,
        "spacing": s,
        "noise_margin": margin,
        "seed": cfg.seed,
    }
    return GeneratedInstance(pool, order, s, g**d, info)


def gen_worstcase_basic(cfg: WorstCaseBasicConfig) -> GeneratedInstance:
    """Line points (v, 0) for v in +-{0, s_1..s_Jmax, b^3/(b-1) - eta} with
    s_J the partial sums of b^2 (1/b)^(j-1), plus the off-line point
    (0, b + mu). J_max is the smallest integer satisfying
    b^(3-J)/(b-1) - b^(i_min+1) <= eta with i_min = 2 - J - 1.
    Optimal pair: the two endpoints, d* = 2b^3/(b-1) - 2 eta."""
    b, mu, eta = cfg.b, cfg.mu, cfg.eta
    j_max = 1
    while b ** (3 - j_max) / (b - 1.0) - b ** (2 - j_max) > eta:
        j_max += 1
    sums = []
    acc = 0.0
    for j in range(1, j_max + 1):
        acc += b * b * (1.0 / b) ** (j - 1)
        sums.append(acc)
    end = b**3 / (b - 1.0) - eta
    if not sums[-1] < end:
        raise InvalidConfigError(
            f"degenerate tail: s_Jmax={sums[-1]!r} >= endpoint {end!r}"
        )
    xs = [0.0] + sums + [end]
    coords = [(x, 0.0) for x in xs] + [(-x, 0.0) for x in xs[1:]]
    coords.append((0.0, b + mu))
    d_star = 2.0 * b**3 / (b - 1.0) - 2.0 * eta
    info = {
        "generator": "worstcase-basic",
        "b": b,
        "mu": mu,
        "eta": eta,
        "j_max": j_max,
        "worst_pair_diversity": b + mu,
    }
    return _ordered_instance(coords, d_star, 2, info)


def gen_worstcase_inherit(cfg: WorstCaseInheritConfig) -> GeneratedInstance:
    """1D points +-{0, 1+mu, t_1..t_Jmax, b/(b-1) + 1 - eta} with t_J the
    partial sums 1 + sum_{j<=J} (1/b)^(j-1). J_max is the smallest integer
    with (1/b)^J <= eta. Optimal pair: the endpoints,
    d* = 2(b/(b-1) + 1) - 2 eta."""
    b, mu, eta = cfg.b, cfg.mu, cfg.eta
    j_max = 1
    while (1.0 / b) ** j_max > eta:
        j_max += 1
    sums = []
    acc = 1.0
    for j in range(1, j_max + 1):
        acc += (1.0 / b) ** (j - 1)
        sums.append(acc)
    end = b / (b - 1.0) + 1.0 - eta
    if not sums[-1] < end:
        raise InvalidConfigError(
            f"degenerate tail: t_Jmax={sums[-1]!r} >= endpoint {end!r}; "
            "pick eta at or slightly above a power of 1/b"
        )
    xs = [0.0, 1.0 + mu] + sums + [end]
    coords = [(x,) for x in xs] + [(-x,) for x in xs[1:]]
    d_star = 2.0 * (b / (b - 1.0) + 1.0) - 2.0 * eta
    info = {
        "generator": "worstcase-inherit",
        "b": b,
        "mu": mu,
        "eta": eta,
        "j_max": j_max,
        "worst_pair_diversity": 1.0 + mu,
    }
    return _ordered_instance(coords, d_star, 2, info)
