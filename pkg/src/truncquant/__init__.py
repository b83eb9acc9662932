"""Exact quantiles of truncation CDFs, optimal moment bounds on them, and the
measures that attain those bounds."""

from .bounds import (
    BoundReport,
    Branch,
    bound_report,
    chen_shao_bound,
    delta_star_family,
    high_branch_bound,
    low_branch_bound,
    optimal_bound,
    u_star,
)
from .errors import (
    AttainmentError,
    EmptyMeasureError,
    InvalidOrderError,
    InvalidQuantileLevelError,
    LogConvexityViolation,
    MassDeviationError,
    MomentInconsistencyError,
    NonpositiveArgumentError,
    NonpositiveAtomError,
    NonpositiveToleranceError,
    SchemaError,
    TruncQuantError,
)
from .extremal import (
    ExtremalSpec,
    extremal_high,
    extremal_low,
    extremal_measure,
)
from .measure import (
    DiscreteMeasure,
    MomentProfile,
    RVCollection,
    build_mu_xi,
    canonicalize,
    dirac,
    moment,
    moment_profile,
)
from .trunc_cdf import (
    QuantileResult,
    SolveMethod,
    eval_L,
    quantile,
    quantile_bisect,
)

__version__ = "0.1.0"

__all__ = [
    "AttainmentError",
    "BoundReport",
    "Branch",
    "DiscreteMeasure",
    "EmptyMeasureError",
    "ExtremalSpec",
    "InvalidOrderError",
    "InvalidQuantileLevelError",
    "LogConvexityViolation",
    "MassDeviationError",
    "MomentInconsistencyError",
    "MomentProfile",
    "NonpositiveArgumentError",
    "NonpositiveAtomError",
    "NonpositiveToleranceError",
    "QuantileResult",
    "RVCollection",
    "SchemaError",
    "SolveMethod",
    "TruncQuantError",
    "bound_report",
    "build_mu_xi",
    "canonicalize",
    "chen_shao_bound",
    "delta_star_family",
    "dirac",
    "eval_L",
    "extremal_high",
    "extremal_low",
    "extremal_measure",
    "high_branch_bound",
    "low_branch_bound",
    "moment",
    "moment_profile",
    "optimal_bound",
    "quantile",
    "quantile_bisect",
    "u_star",
]
