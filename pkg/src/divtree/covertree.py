"""Incremental cover tree: leveled metric index with online insert/remove.

Layers: C_i is the set of points at level i. Invariants for every level
in [i_min, i_max]:

  nesting     C_i is a subset of C_{i-1}
  covering    every p in C_{i-1} has a parent q in C_i with d(p, q) <= b^i
  separation  all distinct p, q in C_i satisfy d(p, q) > b^i  (strict)

Representation is implicit: a node stores only its highest level
(`top`); it is a member of every layer at or below that, so self-child
chains are never materialized. A node's explicit parent link exists only
at its first appearance: the parent occupies level top+1 and must be
within b^(top+1). Comparisons against b^i are exact float comparisons,
no epsilon: d == b^i is covered-not-separated.

Concurrency: single writer, multiple readers. insert/remove need
exclusive access; layer/termination_layer/verify_invariants are
read-only between mutations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    DimensionError,
    EmptyTreeError,
    InvalidBaseError,
    KTooLargeError,
    KTooSmallError,
)
from .metric import MetricKind, MetricSpace, Point, PointSet, distance


class InsertKind(Enum):
    ROOT_CREATED = "root-created"
    INSERTED = "inserted"
    ROOT_RAISED = "root-raised"
    DUPLICATE_REJECTED = "duplicate-rejected"


@dataclass(frozen=True)
class InsertOutcome:
    kind: InsertKind
    level: int | None  # top level the point landed at (None for duplicates)


class RemoveOutcome(Enum):
    REMOVED = "removed"
    NOT_FOUND = "not-found"


@dataclass(frozen=True)
class Violation:
    kind: str  # "covering" | "separation" | "structure"
    level: int | None
    ids: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class InvariantReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


class _Node:
    __slots__ = ("point", "top", "parent", "children")

    def __init__(self, point: Point, top: int):
        self.point = point
        self.top = top
        self.parent: int | None = None  # parent occupies level top+1
        self.children: dict[int, list[int]] = {}  # child top level -> ids


_DUPLICATE = object()


class CoverTree:
    """Cover tree over a metric space with base b > 1."""

    def __init__(self, metric: MetricSpace, b: float):
        if not b > 1.0:
            raise InvalidBaseError(f"base must be > 1, got {b}")
        self.metric = metric
        self.b = float(b)
        self._nodes: dict[int, _Node] = {}
        self._root_id: int | None = None

    # ------------------------------------------------------------------
    # basic accessors

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, pid: int) -> bool:
        return pid in self._nodes

    @property
    def size(self) -> int:
        return len(self._nodes)

    @property
    def i_max(self) -> int:
        if self._root_id is None:
            raise EmptyTreeError("empty tree has no i_max")
        return self._nodes[self._root_id].top

    @property
    def i_min(self) -> int:
        if not self._nodes:
            raise EmptyTreeError("empty tree has no i_min")
        return min(n.top for n in self._nodes.values())

    @property
    def root_id(self) -> int | None:
        return self._root_id

    def top_level(self, pid: int) -> int:
        """Highest level at which the point appears."""
        return self._nodes[pid].top

    def points(self) -> list[Point]:
        return [self._nodes[i].point for i in sorted(self._nodes)]

    def point_set(self) -> PointSet:
        return PointSet(self.metric, self.points())

    # ------------------------------------------------------------------
    # insertion (incremental descent, then attach on the way back up)

    def insert(self, p: Point) -> InsertOutcome:
        if len(p.coords) != self.metric.dimension:
            raise DimensionError(
                f"point {p.id} has {len(p.coords)} coords, tree expects "
                f"{self.metric.dimension}"
            )
        if self._root_id is None:
            node = _Node(p, top=0)
            self._nodes[p.id] = node
            self._root_id = p.id
            return InsertOutcome(InsertKind.ROOT_CREATED, 0)
        if p.id in self._nodes:
            raise ValueError(f"point id {p.id} already present")

        placed = self._place(p)
        if placed is _DUPLICATE:
            return InsertOutcome(InsertKind.DUPLICATE_REJECTED, None)
        top, parent_id, raised = placed
        node = _Node(p, top=top)
        node.parent = parent_id
        self._nodes[p.id] = node
        self._attach_child(parent_id, p.id, top)
        kind = InsertKind.ROOT_RAISED if raised else InsertKind.INSERTED
        return InsertOutcome(kind, top)

    def _attach_child(self, parent_id: int, child_id: int, child_top: int) -> None:
        self._nodes[parent_id].children.setdefault(child_top, []).append(child_id)

    def _place(self, p: Point):
        """Find (top, parent_id, raised) for p, raising the root if needed.

        Runs the recursive insert as an explicit descent: starting from
        Q = {root} at i_max, each frame collects the candidate children
        C (self-children plus explicit children one level down), stops
        once p is separated from all of C at scale b^i, then walks back
        up and attaches at the first frame whose Q holds a node within
        b^i. If no frame qualifies, p was not coverable: raise i_max to
        the smallest level with d(p, root) <= b^i_max and rerun.
        """
        raised = False
        while True:
            res = self._descend(p)
            if res is _DUPLICATE:
                return _DUPLICATE
            if res is not None:
                top, parent_id = res
                return top, parent_id, raised
            # not insertable: d(p, root) > b^i_max
            root = self._nodes[self._root_id]
            d_root = distance(self.metric, p, root.point)
            level = root.top + 1
            while self.b**level < d_root:
                level += 1
            root.top = level
            raised = True

    def _descend(self, p: Point):
        b = self.b
        dist_cache: dict[int, float] = {}

        def d(pid: int) -> float:
            v = dist_cache.get(pid)
            if v is None:
                v = distance(self.metric, p, self._nodes[pid].point)
                dist_cache[pid] = v
            return v

        # Descend while any candidate sits within the filter radius
        # b^i/(b-1). Stopping already at separation distance b^i (the
        # literal recursion for b=2, where the two thresholds coincide)
        # is unsound for b < 2: a candidate's descendants reach up to
        # b^i/(b-1) > b^i away from it and could later end up closer than
        # the separation bound to the freshly attached point.
        fire_mult = max(1.0, 1.0 / (b - 1.0))
        i = self.i_max
        q_ids = [self._root_id]
        attachable: list[tuple[int, list[int]]] = []
        while q_ids:  # an emptied filter ends the descent like a fired frame
            # candidate children of Q at level i-1: self-children plus explicit
            cand: set[int] = set(q_ids)
            for qid in q_ids:
                cand.update(self._nodes[qid].children.get(i - 1, ()))
            c_ids = sorted(cand)
            dmin = min(d(c) for c in c_ids)
            if dmin == 0.0:
                return _DUPLICATE
            if dmin > b**i * fire_mult:
                break  # fired: separated below here; this frame never attaches
            attachable.append((i, q_ids))
            radius = b**i / (b - 1.0)
            q_ids = [c for c in c_ids if d(c) <= radius]
            i -= 1

        for i, q_ids in reversed(attachable):
            bi = b**i
            for qid in q_ids:  # q_ids sorted by id: deterministic parent choice
                if d(qid) <= bi:
                    return i - 1, qid
        return None

    # ------------------------------------------------------------------
    # removal: delete all occurrences, re-insert orphans from the root

    def remove(self, pid: int) -> RemoveOutcome:
        node = self._nodes.get(pid)
        if node is None:
            return RemoveOutcome.NOT_FOUND
        # Every point hanging below the removed occurrences is re-homed.
        # Re-inserting only the direct children is not enough: a freshly
        # placed orphan could end up closer than b^i to a descendant of a
        # sibling orphan that the descent cannot see yet. Detaching the
        # whole subtree and re-inserting point by point keeps each single
        # insertion inside a valid, fully visible tree.
        direct = [cid for kids in node.children.values() for cid in kids]
        subtree: list[int] = []
        stack = list(direct)
        while stack:
            cid = stack.pop()
            subtree.append(cid)
            for kids in self._nodes[cid].children.values():
                stack.extend(kids)
        del self._nodes[pid]
        if node.parent is not None:
            self._nodes[node.parent].children[node.top].remove(pid)

        keep: set[int] = set()
        if pid == self._root_id:
            if not self._nodes:
                self._root_id = None
                return RemoveOutcome.REMOVED
            # The max-top remaining points are exactly the old root's
            # children; promoting one of those (tie: lowest id) leaves
            # separation at the levels it newly occupies untouched. Its own
            # subtree stays attached and valid. Raise it far enough to
            # cover every remaining point.
            promoted = min(direct, key=lambda c: (-self._nodes[c].top, c))
            r = self._nodes[promoted]
            r.parent = None
            self._root_id = promoted
            keep.add(promoted)
            stack = [promoted]
            while stack:
                cid = stack.pop()
                for kids in self._nodes[cid].children.values():
                    keep.update(kids)
                    stack.extend(kids)
            far = 0.0
            for other in self._nodes.values():
                if other is not r:
                    far = max(far, distance(self.metric, r.point, other.point))
            if far > 0.0:
                level = r.top
                while self.b**level < far:
                    level += 1
                r.top = level

        moves = [cid for cid in subtree if cid not in keep]
        moved = {cid: self._nodes.pop(cid) for cid in moves}
        moves.sort(key=lambda c: (-moved[c].top, c))
        for cid in moves:
            point = moved[cid].point
            placed = self._place(point)
            assert placed is not _DUPLICATE, "re-inserted orphan collided"
            top, parent_id, _ = placed
            fresh = _Node(point, top)
            fresh.parent = parent_id
            self._nodes[cid] = fresh
            self._attach_child(parent_id, cid, top)
        return RemoveOutcome.REMOVED

    # ------------------------------------------------------------------
    # layers

    def layer(self, i: int) -> PointSet:
        """All points with top level >= i; above i_max this is the root alone."""
        if self._root_id is None:
            raise EmptyTreeError("layer() on empty tree")
        if i > self.i_max:
            members = [self._nodes[self._root_id].point]
        else:
            members = [n.point for n in self._nodes.values() if n.top >= i]
        return PointSet(self.metric, sorted(members, key=lambda p: p.id))

    def termination_layer(self, k: int) -> tuple[int, PointSet]:
        """Largest level i with |C_i| >= k; the layer above holds < k nodes."""
        if self._root_id is None:
            raise EmptyTreeError("termination_layer() on empty tree")
        if k < 2:
            raise KTooSmallError(f"k must be >= 2, got {k}")
        if k > len(self._nodes):
            raise KTooLargeError(f"k={k} exceeds tree size {len(self._nodes)}")
        tops = sorted((n.top for n in self._nodes.values()), reverse=True)
        level = tops[k - 1]  # |C_i| >= k  iff  i <= k-th largest top
        return level, self.layer(level)

    # ------------------------------------------------------------------
    # verification

    def verify_invariants(self) -> InvariantReport:
        """Exhaustive check of covering and separation over every level in
        [i_min, i_max] (nesting is structural under the implicit
        representation). All comparisons are exact; the vectorized
        separation screen only shortlists pairs, each suspect is
        re-checked with the scalar distance used at insert time.
        """
        out: list[Violation] = []
        if not self._nodes:
            return InvariantReport(())
        b = self.b
        root_id = self._root_id
        ids = sorted(self._nodes)
        nodes = [self._nodes[i] for i in ids]

        # structure: parent links and root uniqueness
        max_top = max(n.top for n in nodes)
        root = self._nodes.get(root_id)
        if root is None or root.parent is not None or root.top != max_top:
            out.append(
                Violation("structure", None, (root_id,) if root_id is not None else (),
                          "root missing, parented, or not at the maximum level")
            )
        for pid, n in zip(ids, nodes):
            if pid == root_id:
                continue
            if n.parent is None:
                out.append(Violation("structure", n.top, (pid,), "non-root without parent"))
                continue
            par = self._nodes.get(n.parent)
            if par is None:
                out.append(Violation("structure", n.top, (pid, n.parent), "dangling parent id"))
            elif par.top < n.top + 1:
                out.append(
                    Violation(
                        "covering", n.top + 1, (pid, n.parent),
                        f"parent {n.parent} absent from level {n.top + 1}",
                    )
                )

        # covering: every first appearance within b^(top+1) of its parent.
        # Vector math screens with a small relative band; anything near or
        # past the bound is re-decided with the scalar distance.
        coords = np.array([n.point.coords for n in nodes], dtype=np.float64)
        has_parent = [
            k for k, (pid, n) in enumerate(zip(ids, nodes))
            if pid != root_id and n.parent is not None and n.parent in self._nodes
        ]
        if has_parent:
            pos = {pid: k for k, pid in enumerate(ids)}
            rows = np.array(has_parent)
            par_rows = np.array([pos[nodes[k].parent] for k in has_parent])
            diff = coords[rows] - coords[par_rows]
            approx = np.sqrt((diff * diff).sum(axis=1))
            bounds = np.array([b ** (nodes[k].top + 1) for k in has_parent])
            for pos in np.nonzero(approx > bounds * (1.0 - 1e-9))[0]:
                k = has_parent[int(pos)]
                n = nodes[k]
                dval = distance(self.metric, n.point, self._nodes[n.parent].point)
                bound = b ** (n.top + 1)
                if not dval <= bound:
                    out.append(
                        Violation(
                            "covering", n.top + 1, (ids[k], n.parent),
                            f"d={dval!r} > b^{n.top + 1}={bound!r}",
                        )
                    )

        # separation: for every pair, d > b^(min of the two tops). This is
        # exactly "all pairs in each layer exceed b^i" for all layers at
        # once, because the binding layer is the pair's joint top level.
        # Rows sorted by descending top make the pair threshold a per-column
        # constant for the upper triangle; a cdist screen shortlists suspect
        # columns and the scalar distance makes the exact call.
        order = sorted(range(len(ids)), key=lambda k: (-nodes[k].top, ids[k]))
        snodes = [nodes[k] for k in order]
        sids = [ids[k] for k in order]
        dm = self._pairwise_screen(coords[np.array(order)])
        np.fill_diagonal(dm, np.inf)
        banded = np.array(
            [(b ** int(n.top)) * (1.0 + 1e-9) for n in snodes], dtype=np.float64
        )
        if self.metric.kind is MetricKind.EUCLIDEAN:
            banded = banded * banded  # screen space is squared distance
        col_hit = np.nonzero(dm.min(axis=0) <= banded)[0]
        for c in col_hit.tolist():
            for r in np.nonzero(dm[:, c] <= banded[c])[0].tolist():
                if r >= c:
                    continue  # (r, c) with r < c carries the pair's threshold
                pa, pc = snodes[r], snodes[c]
                lvl = min(pa.top, pc.top)
                dval = distance(self.metric, pa.point, pc.point)
                if not dval > b**lvl:
                    out.append(
                        Violation(
                            "separation", lvl, tuple(sorted((sids[r], sids[c]))),
                            f"d={dval!r} <= b^{lvl}={b ** lvl!r}",
                        )
                    )
        return InvariantReport(tuple(out))

    def _pairwise_screen(self, coords: np.ndarray) -> np.ndarray:
        """Approximate pairwise matrix used only to shortlist suspects:
        squared Euclidean distance, or plain cosine distance."""
        from scipy.spatial.distance import cdist

        if self.metric.kind is MetricKind.EUCLIDEAN:
            return cdist(coords, coords, "sqeuclidean")
        return cdist(coords, coords, "cosine")

    # ------------------------------------------------------------------
    # snapshot dump for golden comparisons

    def snapshot(self) -> str:
        """Plain-text dump: header `b i_max i_min N`, then one line per node
        `id top parent_id parent_level` sorted by id ('-' when absent)."""
        if not self._nodes:
            return f"{self.b!r} - - 0\n"
        lines = [f"{self.b!r} {self.i_max} {self.i_min} {len(self._nodes)}"]
        for pid in sorted(self._nodes):
            n = self._nodes[pid]
            if n.parent is None:
                lines.append(f"{pid} {n.top} - -")
            else:
                lines.append(f"{pid} {n.top} {n.parent} {n.top + 1}")
        return "\n".join(lines) + "\n"


def new_tree(metric: MetricSpace, b: float) -> CoverTree:
    """Empty cover tree; b must exceed 1."""
    return CoverTree(metric, b)
