"""Closed-form least-squares fitting of analytic and harmonic functions on unit disks.

Sources sit strictly inside the unit disk (exterior fits) or strictly outside
it (interior fits); Gram matrices and moments come from closed-form kernels,
and the normal equations are solved in double-double arithmetic.
"""

from diskfit.errors import (
    AdmissibilityError,
    ConfigError,
    ContractError,
    DiskFitError,
    DomainError,
    EvaluationError,
    SingularityError,
    UnknownTargetError,
)
from diskfit.evaluate import EvalStats, RingSpec, error_stats, evaluate_approximant, target_summary
from diskfit.fitter import FitResult, fit
from diskfit.model import (
    BasisElement,
    BasisKind,
    FitProblem,
    Geometry,
    NormKind,
    TargetFunction,
    builtin_target,
    expression_target,
    ring_sources,
)
from diskfit.scalars import XComplex, XReal

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityError",
    "BasisElement",
    "BasisKind",
    "ConfigError",
    "ContractError",
    "DiskFitError",
    "DomainError",
    "EvalStats",
    "EvaluationError",
    "FitProblem",
    "FitResult",
    "Geometry",
    "NormKind",
    "RingSpec",
    "SingularityError",
    "TargetFunction",
    "UnknownTargetError",
    "XComplex",
    "XReal",
    "builtin_target",
    "error_stats",
    "evaluate_approximant",
    "expression_target",
    "fit",
    "ring_sources",
    "target_summary",
]
