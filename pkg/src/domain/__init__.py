"""Domain models, enums and errors."""
from .errors import (
    ConfigError,
    NoCandidateError,
    ParameterError,
    SimulationError,
    SingularDistanceError,
)
from .models import (
    AssociationPolicy,
    Deployment,
    LevelOptimum,
    MetricEstimate,
    MetricId,
    Objective,
    OptimumReport,
    PathLossMode,
    PathLossModel,
    PointEstimate,
    PowerMap,
    Region,
    RunManifest,
    ServingClass,
    SimParams,
    SweepResult,
    SweptParam,
    TrialOutcome,
)

__all__ = [
    "AssociationPolicy",
    "ConfigError",
    "Deployment",
    "LevelOptimum",
    "MetricEstimate",
    "MetricId",
    "NoCandidateError",
    "Objective",
    "OptimumReport",
    "ParameterError",
    "PathLossMode",
    "PathLossModel",
    "PointEstimate",
    "PowerMap",
    "Region",
    "RunManifest",
    "ServingClass",
    "SimParams",
    "SimulationError",
    "SingularDistanceError",
    "SweepResult",
    "SweptParam",
    "TrialOutcome",
]
