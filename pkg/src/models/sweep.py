"""Sweep, figure and experiment-file models."""
from enum import Enum
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from config.settings import get_settings
from .interferometer import Engine, InterferometerConfig

SWEEPABLE_FIELDS = tuple(InterferometerConfig.model_fields)


class Quantity(str, Enum):
    """Scalar quantities a sweep can tabulate."""

    DELTA_PHI_SI = "delta_phi_si"
    DELTA_PHI_SI_EXACT = "delta_phi_si_exact"
    DELTA_PHI_SI_LOSSY = "delta_phi_si_lossy"
    DELTA_PHI_HD = "delta_phi_hd"
    DELTA_PHI_HD_LOSSY = "delta_phi_hd_lossy"
    DELTA_PHI_HD_LOSSY_VERBATIM = "delta_phi_hd_lossy_verbatim"
    QCRB_KERR = "qcrb_kerr"
    QCRB_COHERENT = "qcrb_coherent"
    QCRB_SIGNAL_ARM = "qcrb_signal_arm"
    N_KERR = "n_kerr"
    N_CS = "n_cs"
    SNL = "snl"
    HL = "hl"

    @classmethod
    def from_string(cls, value: str) -> "Quantity":
        """Convert string to Quantity; hyphens are accepted in place of underscores."""
        return cls(value.lower().strip().replace("-", "_"))

    @property
    def can_be_stationary(self) -> bool:
        """Whether the quantity is undefined at stationary points of the fringe."""
        return self.value.startswith("delta_phi")

    @property
    def oracle_supported(self) -> bool:
        return self not in {Quantity.DELTA_PHI_SI_EXACT, Quantity.DELTA_PHI_HD_LOSSY_VERBATIM,
                            Quantity.QCRB_SIGNAL_ARM, Quantity.N_KERR, Quantity.N_CS,
                            Quantity.SNL, Quantity.HL}


class AxisSpec(BaseModel):
    """A linear grid over one configuration field."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    start: float
    stop: float
    count: int = Field(..., ge=2)
    endpoint: bool = Field(True, description="Include stop; false gives a half-open grid")

    @field_validator("name")
    @classmethod
    def validate_name(cls, v: str) -> str:
        if v not in SWEEPABLE_FIELDS:
            raise ValueError(f"unknown axis parameter {v!r}; expected one of {SWEEPABLE_FIELDS}")
        return v

    def values(self) -> list[float]:
        return [float(x) for x in np.linspace(self.start, self.stop, self.count,
                                              endpoint=self.endpoint)]


def _check_oracle_alpha(base: InterferometerConfig, axes: list[AxisSpec], engine: Engine) -> None:
    if not engine.is_oracle:
        return
    ceiling = get_settings().oracle_alpha_ceiling
    alphas = [base.alpha] + [max(a.start, a.stop) for a in axes if a.name == "alpha"]
    if max(alphas) > ceiling:
        raise ValueError(
            f"oracle engines are infeasible for alpha > {ceiling} (got {max(alphas)})"
        )


class SweepSpec(BaseModel):
    """A one- or two-axis sweep of a single quantity."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    base: InterferometerConfig
    axis1: AxisSpec
    axis2: AxisSpec | None = None
    quantity: Quantity
    engine: Engine = Engine.ANALYTIC

    @field_validator("quantity", mode="before")
    @classmethod
    def parse_quantity(cls, v: object) -> object:
        return Quantity.from_string(v) if isinstance(v, str) else v

    @field_validator("engine", mode="before")
    @classmethod
    def parse_engine(cls, v: object) -> object:
        return Engine.from_string(v) if isinstance(v, str) else v

    @model_validator(mode="after")
    def check_feasible(self) -> "SweepSpec":
        if self.axis2 is not None and self.axis2.name == self.axis1.name:
            raise ValueError("axis1 and axis2 must sweep different parameters")
        if self.engine.is_oracle and not self.quantity.oracle_supported:
            raise ValueError(f"{self.quantity.value} has no oracle evaluation")
        _check_oracle_alpha(self.base, self.axes, self.engine)
        return self

    @property
    def axes(self) -> list[AxisSpec]:
        return [self.axis1] if self.axis2 is None else [self.axis1, self.axis2]


class ColumnSpec(BaseModel):
    """One value column of a figure table."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    quantity: Quantity
    overrides: dict[str, float] = Field(default_factory=dict)

    @field_validator("quantity", mode="before")
    @classmethod
    def parse_quantity(cls, v: object) -> object:
        return Quantity.from_string(v) if isinstance(v, str) else v

    @field_validator("overrides")
    @classmethod
    def validate_overrides(cls, v: dict[str, float]) -> dict[str, float]:
        unknown = sorted(set(v) - set(SWEEPABLE_FIELDS))
        if unknown:
            raise ValueError(f"unknown override keys: {unknown}")
        return v


class FigureSpec(BaseModel):
    """Everything needed to regenerate one figure table."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    description: str
    base: InterferometerConfig
    axis1: AxisSpec
    axis2: AxisSpec | None = None
    columns: list[ColumnSpec] = Field(..., min_length=1)

    @property
    def axes(self) -> list[AxisSpec]:
        return [self.axis1] if self.axis2 is None else [self.axis1, self.axis2]


class SweepSection(BaseModel):
    """The ``sweep:`` section of an experiment file (base comes from ``interferometer:``)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    axis1: AxisSpec
    axis2: AxisSpec | None = None
    quantity: str
    engine: str = Engine.ANALYTIC.value


class ExperimentFile(BaseModel):
    """Top-level layout of a YAML experiment file."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    interferometer: InterferometerConfig
    sweep: SweepSection | None = None
    scheme: str | None = None

    def sweep_spec(self, engine: Engine | None = None) -> SweepSpec:
        """
        Combine the sections into a SweepSpec.

        Args:
            engine: Optional override of the file's engine

        Returns:
            Validated SweepSpec

        Raises:
            ValueError: If the file has no sweep section
        """
        if self.sweep is None:
            raise ValueError("experiment file has no 'sweep' section")
        return SweepSpec(
            base=self.interferometer,
            axis1=self.sweep.axis1,
            axis2=self.sweep.axis2,
            quantity=self.sweep.quantity,
            engine=engine if engine is not None else self.sweep.engine,
        )


class FigureCatalog(BaseModel):
    """The committed figure definitions."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    figures: dict[str, FigureSpec]
