"""Exact ground truth at desk scale: brute-force k-max-min diversification.

Enumerates k-subsets in lexicographic id order with branch-and-bound
pruning (a partial subset whose running min pairwise distance cannot
beat the incumbent is cut). Pruning never changes the result: the first
maximizer in lexicographic order is kept, and only strictly better
subsets replace it. Pure function; safe to run in parallel callers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundViolationError, BudgetExceededError, KTooLargeError, KTooSmallError
from .metric import PointSet, dists_to
from .bounds import alpha_for
from .selection import DiverseSelection, SelectionMethod

SUBSET_BUDGET = 10**7


@dataclass(frozen=True)
class OracleResult:
    optimal_set: PointSet
    d_star: float
    instances_enumerated: int


def exact_diverse(pool: PointSet, k: int) -> OracleResult:
    """Maximize min-pairwise distance over all k-subsets, exhaustively."""
    n = len(pool)
    if k < 2:
        raise KTooSmallError(f"k must be >= 2, got {k}")
    if k > n:
        raise KTooLargeError(f"k={k} exceeds pool size {n}")
    if math.comb(n, k) > SUBSET_BUDGET:
        raise BudgetExceededError(
            f"C({n},{k}) = {math.comb(n, k)} exceeds budget {SUBSET_BUDGET}"
        )

    ordered = sorted(pool, key=lambda p: p.id)
    ids = [p.id for p in ordered]
    coords = np.array([p.coords for p in ordered], dtype=np.float64)
    space = pool.metric

    if k == 2:
        best = -math.inf
        best_pair = (0, 1)
        count = 0
        for j in range(1, n):
            row = dists_to(space, coords[:j], coords[j])
            count += j
            i = int(np.argmax(row))
            if row[i] > best:
                best = float(row[i])
                best_pair = (i, j)
        # re-scan for the lexicographically smallest maximizing pair
        for j in range(1, n):
            row = dists_to(space, coords[:j], coords[j])
            hits = np.nonzero(row == best)[0]
            if hits.size:
                cand = (int(hits[0]), j)
                if cand < best_pair:
                    best_pair = cand
        chosen = [ids[best_pair[0]], ids[best_pair[1]]]
        return OracleResult(pool.subset(sorted(chosen)), best, count)

    dmat = np.empty((n, n), dtype=np.float64)
    for j in range(n):
        dmat[:, j] = dists_to(space, coords, coords[j])
    best_ids: list[int] = []
    best = -math.inf
    count = 0
    stack: list[int] = []

    def rec(start: int, cur_min: float) -> None:
        nonlocal best, best_ids, count
        if len(stack) == k:
            count += 1
            if cur_min > best:
                best = cur_min
                best_ids = [ids[i] for i in stack]
            return
        need = k - len(stack)
        for i in range(start, n - need + 1):
            if stack:
                m = min(cur_min, float(dmat[np.array(stack), i].min()))
                if m <= best:
                    continue  # cannot strictly improve; lex-first tie kept
            else:
                m = cur_min
            stack.append(i)
            rec(i + 1, m)
            stack.pop()

    rec(0, math.inf)
    return OracleResult(pool.subset(sorted(best_ids)), best, count)


def check_ratio(
    pool: PointSet,
    k: int,
    selection: DiverseSelection,
    b: float | None = None,
    tol: float = 1e-9,
) -> float:
    """Ratio d*/div(selection) against the exact optimum. Raises
    BoundViolationError when the ratio exceeds the method's proven
    approximation factor (needs b for the cover-tree methods)."""
    res = exact_diverse(pool, k)
    ratio = res.d_star / selection.achieved_diversity
    if ratio < 1.0 - 1e-12:
        raise AssertionError(
            f"selection beats the exact optimum ({ratio=}); oracle or metric bug"
        )
    alpha = None
    if selection.method is SelectionMethod.GMM:
        alpha = alpha_for(SelectionMethod.GMM.value)
    elif b is not None:
        alpha = alpha_for(selection.method.value, b)
    if alpha is not None and ratio > alpha + tol:
        raise BoundViolationError(
            f"{selection.method.value}: ratio {ratio} exceeds alpha {alpha}"
        )
    return ratio
