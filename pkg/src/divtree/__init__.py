"""divtree: dynamic max-min diversification over incremental cover trees."""

from .bounds import (
    alpha_basic,
    alpha_for,
    alpha_greedy_inherit,
    diversity_bound,
    greedy_diversity_bound,
)
from .covertree import (
    CoverTree,
    InsertKind,
    InsertOutcome,
    InvariantReport,
    RemoveOutcome,
    new_tree,
)
from .generators import (
    GeneratedInstance,
    GridConfig,
    WorstCaseBasicConfig,
    WorstCaseInheritConfig,
    gen_grid,
    gen_worstcase_basic,
    gen_worstcase_inherit,
)
from .metric import (
    MetricKind,
    MetricSpace,
    Point,
    PointSet,
    distance,
    diversity,
    make_space,
)
from .oracle import OracleResult, check_ratio, exact_diverse
from .selection import (
    DiverseSelection,
    SelectionMethod,
    gmm,
    ict_basic,
    ict_greedy,
    ict_inherit,
)

__all__ = [
    "CoverTree",
    "DiverseSelection",
    "GeneratedInstance",
    "GridConfig",
    "InsertKind",
    "InsertOutcome",
    "InvariantReport",
    "MetricKind",
    "MetricSpace",
    "OracleResult",
    "Point",
    "PointSet",
    "RemoveOutcome",
    "SelectionMethod",
    "WorstCaseBasicConfig",
    "WorstCaseInheritConfig",
    "alpha_basic",
    "alpha_for",
    "alpha_greedy_inherit",
    "check_ratio",
    "distance",
    "diversity",
    "diversity_bound",
    "exact_diverse",
    "gen_grid",
    "gen_worstcase_basic",
    "gen_worstcase_inherit",
    "gmm",
    "greedy_diversity_bound",
    "ict_basic",
    "ict_greedy",
    "ict_inherit",
    "make_space",
    "new_tree",
]

__version__ = "0.1.0"
