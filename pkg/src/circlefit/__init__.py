"""Fast, numerically stable geometric circle fitting."""

from .baselines import BaselineConfig, StopRule, gauss_newton_fit, kasa_fit, lm_classic_fit
from .bigcircle import evaluate, evaluate_big_circle
from .errors import (
    AmbiguousValley,
    CenterOnDataPoint,
    CenterTooClose,
    CircleFitError,
    DegenerateInput,
    NoConvergence,
    SingularDamping,
)
from .geometry import (
    Circle,
    Line,
    NormalizationTransform,
    NormalizedPointSet,
    denormalize,
    full_objective,
    normalize,
    radius_for_center,
    reduced_objective,
)
from .solver import FitReport, SolverConfig, Termination, fit, fit_circle
from .standard import Evaluation, evaluate_standard

__version__ = "0.1.0"

__all__ = [
    "AmbiguousValley",
    "BaselineConfig",
    "CenterOnDataPoint",
    "CenterTooClose",
    "Circle",
    "CircleFitError",
    "DegenerateInput",
    "Evaluation",
    "FitReport",
    "Line",
    "NoConvergence",
    "NormalizationTransform",
    "NormalizedPointSet",
    "SingularDamping",
    "SolverConfig",
    "StopRule",
    "Termination",
    "denormalize",
    "evaluate",
    "evaluate_big_circle",
    "evaluate_standard",
    "fit",
    "fit_circle",
    "full_objective",
    "gauss_newton_fit",
    "kasa_fit",
    "lm_classic_fit",
    "normalize",
    "radius_for_center",
    "reduced_objective",
]
