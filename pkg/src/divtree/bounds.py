"""Closed-form worst-case guarantees for the selection strategies.

The guarantees are parameterized by the tree base b and by beta, the
ratio between the optimal diversity and the termination layer's scale
b^i (so beta = d*/b^i and 1 <= beta < 2b^2/(b-1)). Bounds below are
normalized to d* = 1.

  alpha_basic(b)            2b^2/(b-1)      random layer subset
  alpha_greedy_inherit(b)   2 + 2b/(b-1)    greedy layer subsets
  diversity_bound(beta, b)  max(1/beta, 1 - 2b/(beta(b-1)))
  greedy_diversity_bound    max(1/beta, (1 - 2b/(beta(b-1)))/2)

The minimum of diversity_bound over beta is 1/(1 + 2b/(b-1)) (at
beta = 1 + 2b/(b-1)); for the greedy variant it is
1/(2 + 2b/(b-1)) (at beta = 2 + 2b/(b-1)). Pure functions.
"""

from __future__ import annotations

import csv
import io

from .errors import BetaRangeError, InvalidBaseError


def _check_base(b: float) -> None:
    if not b > 1.0:
        raise InvalidBaseError(f"base must be > 1, got {b}")


def alpha_basic(b: float) -> float:
    """Worst-case ratio d*/diversity for a random termination-layer subset."""
    _check_base(b)
    return 2.0 * b * b / (b - 1.0)


def alpha_greedy_inherit(b: float) -> float:
    """Worst-case ratio for the greedy / inherited layer selections."""
    _check_base(b)
    return 2.0 + 2.0 * b / (b - 1.0)


def alpha_for(method: str, b: float | None = None) -> float:
    """Approximation factor for a method name ('gmm', 'ict-basic', ...)."""
    if method == "gmm":
        return 2.0
    if b is None:
        raise InvalidBaseError(f"method {method!r} needs the tree base b")
    if method == "ict-basic":
        return alpha_basic(b)
    if method in ("ict-greedy", "ict-inherit"):
        return alpha_greedy_inherit(b)
    raise ValueError(f"unknown method {method!r}")


def beta_max(b: float) -> float:
    _check_base(b)
    return 2.0 * b * b / (b - 1.0)


def _check_beta(beta: float, b: float) -> None:
    _check_base(b)
    if not (1.0 <= beta < beta_max(b)):
        raise BetaRangeError(
            f"beta={beta} outside [1, {beta_max(b)}) for b={b}"
        )


def diversity_bound(beta: float, b: float) -> float:
    """Guaranteed diversity (relative to d*) of the best k-subset of the
    termination layer: the separation branch 1/beta against the covering
    branch 1 - 2b/(beta(b-1))."""
    _check_beta(beta, b)
    return max(1.0 / beta, 1.0 - (2.0 * b) / (beta * (b - 1.0)))


def greedy_diversity_bound(beta: float, b: float) -> float:
    """Same as diversity_bound with the covering branch halved (greedy
    selection loses at most a factor 2 against the layer's best subset)."""
    _check_beta(beta, b)
    return max(1.0 / beta, 0.5 * (1.0 - (2.0 * b) / (beta * (b - 1.0))))


def bound_curves(b: float, samples: int = 100_000) -> list[tuple[float, float, float]]:
    """(beta, bound_any, bound_greedy) rows over [1, beta_max) including the
    closed-form intercepts, for plotting and minima checks."""
    _check_base(b)
    hi = beta_max(b)
    betas = [1.0 + (hi - 1.0) * i / samples for i in range(samples)]
    betas.append(1.0 + 2.0 * b / (b - 1.0))  # intercept of the two branches
    betas.append(2.0 + 2.0 * b / (b - 1.0))  # intercept of the greedy pair
    betas = sorted(x for x in betas if 1.0 <= x < hi)
    return [(x, diversity_bound(x, b), greedy_diversity_bound(x, b)) for x in betas]


def curves_csv(b: float, samples: int = 100_000) -> str:
    """CSV text with header `beta,bound_any,bound_greedy`."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["beta", "bound_any", "bound_greedy"])
    for beta, any_, greedy in bound_curves(b, samples):
        writer.writerow([repr(beta), repr(any_), repr(greedy)])
    return buf.getvalue()
