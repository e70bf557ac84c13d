"""Analytic-versus-oracle verification report."""
from pydantic import BaseModel, ConfigDict, Field
from .interferometer import InterferometerConfig
from .results import LossTrend

SIGNAL_ARM_BOUND = "qcrb_signal_arm"
SUM_PHASE_BOUND = "qcrb"


class PointEvaluation(BaseModel):
    """Named complex values computed at one grid point by one engine."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    point: int
    values: dict[str, complex]


class ComparisonEntry(BaseModel):
    """Analytic value against oracle value for one quantity at one point."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    point: int
    quantity: str
    analytic: complex
    oracle: complex
    rel_delta: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.rel_delta <= self.threshold


class DiscrepancyEntry(BaseModel):
    """Published closed form against its re-derived counterpart."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    point: int
    quantity: str
    verbatim: complex
    corrected: complex
    oracle: complex | None = None
    rel_delta: float


class BoundCheck(BaseModel):
    """A lossless sensitivity against one Cramér-Rao bound at one point."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    point: int
    quantity: str = Field(..., description="delta_phi_si or delta_phi_hd")
    bound: str = Field(..., description="qcrb (sum-phase) or qcrb_signal_arm")
    delta_phi: float
    value: float
    rtol: float

    @property
    def holds(self) -> bool:
        return self.delta_phi >= self.value * (1.0 - self.rtol)


class VerificationReport(BaseModel):
    """Outcome of a verification run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    preset: str
    grid: list[InterferometerConfig]
    comparisons: list[ComparisonEntry]
    discrepancies: list[DiscrepancyEntry] = Field(default_factory=list)
    bound_checks: list[BoundCheck] = Field(default_factory=list)
    loss_trends: list[LossTrend] = Field(default_factory=list)
    errors: list[str] = Field(default_factory=list, description="Unevaluable points")

    @property
    def worst_delta(self) -> float:
        return max((c.rel_delta for c in self.comparisons), default=0.0)

    @property
    def failures(self) -> list[ComparisonEntry]:
        return [c for c in self.comparisons if not c.passed]

    @property
    def bound_violations(self) -> list[BoundCheck]:
        """Sensitivities below the signal-arm bound; these fail the report."""
        return [b for b in self.bound_checks if b.bound == SIGNAL_ARM_BOUND and not b.holds]

    @property
    def sum_phase_exceedances(self) -> list[BoundCheck]:
        """Sensitivities below the sum-phase bound; reported, not failed."""
        return [b for b in self.bound_checks if b.bound == SUM_PHASE_BOUND and not b.holds]

    @property
    def passed(self) -> bool:
        return not self.failures and not self.errors and not self.bound_violations
