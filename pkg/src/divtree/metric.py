"""Points, distance functions, and the min-pairwise diversity objective.

Everything here is a pure function over immutable values and is safe to
call concurrently. The scalar `distance` below is the single source of
truth for distances; the vectorized helpers reproduce its arithmetic
(elementwise ops plus a left-to-right sum, which numpy matches exactly
for the small dimensions used here) so that exact comparisons made by
the cover tree are consistent across code paths.

Cosine distance is 1 - cosine similarity. It violates the triangle
inequality, so metric guarantees (and the theoretical bounds) are only
asserted under Euclidean; cosine exists for parity with real-data runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateVectorError, DimensionError, TooFewPointsError


class MetricKind(Enum):
    EUCLIDEAN = "euclidean"
    COSINE = "cosine"


@dataclass(frozen=True)
class MetricSpace:
    kind: MetricKind
    dimension: int

    def __post_init__(self):
        if self.dimension < 1:
            raise DimensionError(f"dimension must be >= 1, got {self.dimension}")


@dataclass(frozen=True)
class Point:
    """An identified vector. Ids are assigned by the ingestion layer."""

    id: int
    coords: tuple[float, ...]

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"point id must be non-negative, got {self.id}")
        if not all(math.isfinite(c) for c in self.coords):
            raise ValueError(f"point {self.id} has non-finite coordinates")


def make_space(kind: MetricKind | str, dimension: int) -> MetricSpace:
    if isinstance(kind, str):
        kind = MetricKind(kind)
    return MetricSpace(kind, dimension)


class PointSet:
    """A metric space plus points with distinct ids, all of one dimension."""

    __slots__ = ("metric", "points", "_by_id", "_coords", "_ids")

    def __init__(self, metric: MetricSpace, points):
        points = tuple(points)
        seen = set()
        for p in points:
            if len(p.coords) != metric.dimension:
                raise DimensionError(
                    f"point {p.id} has {len(p.coords)} coords, expected {metric.dimension}"
                )
            if p.id in seen:
                raise ValueError(f"duplicate point id {p.id}")
            seen.add(p.id)
        self.metric = metric
        self.points = points
        self._by_id = {p.id: p for p in points}
        self._coords = None
        self._ids = None

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __contains__(self, pid: int) -> bool:
        return pid in self._by_id

    def get(self, pid: int) -> Point:
        return self._by_id[pid]

    def ids(self) -> tuple[int, ...]:
        if self._ids is None:
            self._ids = tuple(p.id for p in self.points)
        return self._ids

    def coords_matrix(self) -> np.ndarray:
        """(n, d) float64 matrix in stored point order."""
        if self._coords is None:
            self._coords = np.array([p.coords for p in self.points], dtype=np.float64)
        return self._coords

    def sorted_by_id(self) -> "PointSet":
        return PointSet(self.metric, sorted(self.points, key=lambda p: p.id))

    def subset(self, ids) -> "PointSet":
        return PointSet(self.metric, [self._by_id[i] for i in ids])


def distance(space: MetricSpace, a: Point, b: Point) -> float:
    """Distance between two points. Symmetric; 0 iff coordinate-identical
    (Euclidean) or collinear same-direction (cosine)."""
    if len(a.coords) != space.dimension or len(b.coords) != space.dimension:
        raise DimensionError(
            f"points {a.id},{b.id}: dimensions {len(a.coords)},{len(b.coords)} "
            f"do not match space dimension {space.dimension}"
        )
    if space.kind is MetricKind.EUCLIDEAN:
        s = 0.0
        for x, y in zip(a.coords, b.coords):
            d = x - y
            s += d * d
        return math.sqrt(s)
    dot = 0.0
    na = 0.0
    nb = 0.0
    for x, y in zip(a.coords, b.coords):
        dot += x * y
        na += x * x
        nb += y * y
    if na == 0.0 or nb == 0.0:
        bad = a.id if na == 0.0 else b.id
        raise DegenerateVectorError(f"point {bad} has zero norm under cosine")
    return 1.0 - dot / (math.sqrt(na) * math.sqrt(nb))


def dists_to(space: MetricSpace, coords: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Distances from every row of `coords` to the single vector `target`.

    For Euclidean with small dimension this is bitwise-identical to the
    scalar `distance` loop. Cosine raises on any zero-norm row.
    """
    if space.kind is MetricKind.EUCLIDEAN:
        diff = coords - target
        return np.sqrt((diff * diff).sum(axis=1))
    norms = np.sqrt((coords * coords).sum(axis=1))
    nt = math.sqrt(float((target * target).sum()))
    if nt == 0.0 or (norms == 0.0).any():
        raise DegenerateVectorError("zero-norm vector under cosine")
    return 1.0 - (coords @ target) / (norms * nt)


def diversity(space: MetricSpace, s: PointSet | list[Point]) -> float:
    """Minimum distance over all unordered distinct pairs of the set."""
    pts = list(s)
    if len(pts) < 2:
        raise TooFewPointsError(f"diversity needs >= 2 points, got {len(pts)}")
    coords = (
        s.coords_matrix()
        if isinstance(s, PointSet)
        else np.array([p.coords for p in pts], dtype=np.float64)
    )
    if isinstance(s, PointSet) and s.metric.kind is not space.kind:
        raise ValueError("point set metric does not match the requested space")
    best = math.inf
    for j in range(1, len(pts)):
        d = dists_to(space, coords[:j], coords[j]).min()
        if d < best:
            best = float(d)
    return best
