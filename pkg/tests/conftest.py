import random

import pytest
from hypothesis import settings

from divtree.covertree import CoverTree
from divtree.metric import MetricKind, MetricSpace, Point, PointSet

settings.register_profile("ci", max_examples=50, derandomize=True, deadline=None)
settings.load_profile("ci")


def space(dim: int, kind: MetricKind = MetricKind.EUCLIDEAN) -> MetricSpace:
    return MetricSpace(kind, dim)


def pset(coords_list, kind: MetricKind = MetricKind.EUCLIDEAN) -> PointSet:
    """Point set from raw coordinate tuples (scalars allowed for 1D)."""
    pts = []
    for i, c in enumerate(coords_list):
        if not isinstance(c, (tuple, list)):
            c = (c,)
        pts.append(Point(i, tuple(float(x) for x in c)))
    dim = len(pts[0].coords)
    return PointSet(MetricSpace(kind, dim), pts)


def build_tree(points: PointSet, b: float, order=None) -> CoverTree:
    tree = CoverTree(points.metric, b)
    ids = list(order) if order is not None else [p.id for p in points]
    for pid in ids:
        tree.insert(points.get(pid))
    return tree


def random_points(n: int, dim: int, seed: int, scale: float = 1.0) -> PointSet:
    rng = random.Random(seed)
    pts = [
        Point(i, tuple(rng.uniform(0.0, scale) for _ in range(dim)))
        for i in range(n)
    ]
    return PointSet(MetricSpace(MetricKind.EUCLIDEAN, dim), pts)


@pytest.fixture
def line_0467() -> PointSet:
    """The 1D golden pool {0, 4, 6, 7}."""
    return pset([0.0, 4.0, 6.0, 7.0])
