"""LangGraph state definition for the verification workflow."""
from typing import TypedDict, Annotated
from operator import add
from .interferometer import InterferometerConfig
from .report import (
    BoundCheck,
    ComparisonEntry,
    DiscrepancyEntry,
    PointEvaluation,
    VerificationReport,
)


class VerificationState(TypedDict):
    """LangGraph state for the analytic-versus-oracle verification run."""

    # Input
    preset: str

    # Grid construction
    grid: list[InterferometerConfig]

    # Evaluation
    analytic_results: Annotated[list[PointEvaluation], add]
    oracle_results: Annotated[list[PointEvaluation], add]
    verbatim_results: Annotated[list[PointEvaluation], add]

    # Comparison
    comparisons: Annotated[list[ComparisonEntry], add]
    discrepancies: Annotated[list[DiscrepancyEntry], add]
    bound_checks: Annotated[list[BoundCheck], add]

    # Output
    report: VerificationReport | None
    output_path: str

    # Metadata
    errors: Annotated[list[str], add]
    step_count: int
