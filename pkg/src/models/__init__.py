"""Data models for the Kerr-seeded SU(1,1) interferometer engine."""
from .interferometer import (
    DetectionScheme,
    Engine,
    InterferometerConfig,
    InternalNumberStatsInputs,
    KerrVariant,
    MomentPath,
    OracleMethod,
    ResultSource,
)
from .moments import MomentSet, NumberStats
from .results import LossTrend, OptimumResult, OracleRun, SensitivityResult
from .sweep import (
    AxisSpec,
    ColumnSpec,
    ExperimentFile,
    FigureCatalog,
    FigureSpec,
    Quantity,
    SweepSpec,
)
from .report import (
    BoundCheck,
    ComparisonEntry,
    DiscrepancyEntry,
    PointEvaluation,
    VerificationReport,
)
from .state import VerificationState

__all__ = [
    "DetectionScheme",
    "Engine",
    "InterferometerConfig",
    "InternalNumberStatsInputs",
    "KerrVariant",
    "MomentPath",
    "OracleMethod",
    "ResultSource",
    "MomentSet",
    "NumberStats",
    "LossTrend",
    "OptimumResult",
    "OracleRun",
    "SensitivityResult",
    "AxisSpec",
    "ColumnSpec",
    "ExperimentFile",
    "FigureCatalog",
    "FigureSpec",
    "Quantity",
    "SweepSpec",
    "BoundCheck",
    "ComparisonEntry",
    "DiscrepancyEntry",
    "PointEvaluation",
    "VerificationReport",
    "VerificationState",
]
