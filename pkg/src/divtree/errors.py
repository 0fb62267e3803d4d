"""Exception types shared across the package."""


class DivtreeError(Exception):
    """Base class for all library errors."""


class DimensionError(DivtreeError):
    """Point dimension does not match the metric space."""


class DegenerateVectorError(DivtreeError):
    """Zero-norm vector under the cosine metric."""


class TooFewPointsError(DivtreeError):
    """Diversity asked for a set with fewer than two points."""


class InvalidBaseError(DivtreeError):
    """Cover tree / bound base must satisfy b > 1."""


class EmptyTreeError(DivtreeError):
    """Operation requires a non-empty tree."""


class KTooLargeError(DivtreeError):
    """Requested subset size exceeds the available points."""


class KTooSmallError(DivtreeError):
    """Requested subset size below 2."""


class InvalidInitError(DivtreeError):
    """Greedy initialization set is not a valid subset of the pool."""


class BudgetExceededError(DivtreeError):
    """Exact enumeration would exceed the combinatorial budget."""


class BetaRangeError(DivtreeError):
    """beta outside [1, 2b^2/(b-1))."""


class InvalidConfigError(DivtreeError):
    """Dataset generator configuration is out of range or degenerate."""


class FormatError(DivtreeError):
    """Malformed point file. Carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MissingGroundTruthError(DivtreeError):
    """No known optimum and the exact oracle is infeasible."""


class BoundViolationError(DivtreeError):
    """An observed ratio exceeded the method's proven approximation factor."""


class SeedNotFoundError(DivtreeError):
    """Seed search exhausted its attempt budget."""
