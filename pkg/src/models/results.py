"""Sensitivity, optimum and loss-trend results."""
import math
from pydantic import BaseModel, ConfigDict, Field, model_validator
from .interferometer import (
    DetectionScheme,
    KerrVariant,
    MomentPath,
    OracleMethod,
    ResultSource,
)
from .moments import MomentSet, NumberStats


class SensitivityResult(BaseModel):
    """A phase uncertainty obtained by error propagation."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    delta_phi: float = Field(..., ge=0.0, description="Phase uncertainty in radians")
    scheme: DetectionScheme
    derivative_mag: float = Field(..., ge=0.0, description="|d<A>/dphi|")
    std_dev: float = Field(..., ge=0.0, description="Standard deviation of the observable")
    source: ResultSource

    @model_validator(mode="after")
    def check_finite_iff_sloped(self) -> "SensitivityResult":
        if math.isfinite(self.delta_phi) != (self.derivative_mag > 0.0):
            raise ValueError("delta_phi must be finite exactly when the derivative is nonzero")
        return self


class OptimumResult(BaseModel):
    """Minimum of the sensitivity landscape over phi in [0, 2π)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    phi_star: float = Field(..., ge=0.0, lt=2 * math.pi)
    delta_phi_star: float = Field(..., gt=0.0)
    scheme: DetectionScheme
    grid_points: int
    stationary_points: int = Field(0, description="Grid points skipped as stationary")


class OracleRun(BaseModel):
    """Everything one Fock-space simulation produces."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    moments: MomentSet = Field(..., description="Moments of the detected output mode")
    stats: NumberStats = Field(..., description="Number statistics right after OPA-1")
    variant: KerrVariant
    method: OracleMethod
    n_max: int = Field(..., description="Seed (mode transfer) or per-mode truncation")


class LossTrend(BaseModel):
    """Lossy homodyne sensitivity along one swept field at fixed loss."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    field: str = Field(..., description="Swept configuration field, e.g. r2")
    loss_field: str = Field(..., description="mu or eta")
    loss: float
    path: MomentPath
    points: list[float]
    delta_phi: list[float | None] = Field(..., description="None at stationary points")

    @model_validator(mode="after")
    def check_aligned(self) -> "LossTrend":
        if len(self.points) != len(self.delta_phi) or not self.points:
            raise ValueError("points and delta_phi must be non-empty and aligned")
        return self

    def defined(self) -> list[tuple[float, float]]:
        """(point, delta phi) pairs without the stationary points."""
        return [(p, v) for p, v in zip(self.points, self.delta_phi) if v is not None]

    @property
    def argmin(self) -> float:
        """Swept value at the smallest delta phi."""
        return min(self.defined(), key=lambda pv: pv[1])[0]

    @property
    def increasing_steps(self) -> int:
        values = [v for _, v in self.defined()]
        return sum(1 for a, b in zip(values, values[1:]) if b > a)

    @property
    def non_increasing(self) -> bool:
        return self.increasing_steps == 0
