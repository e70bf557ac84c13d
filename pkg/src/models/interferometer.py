"""Interferometer configuration and the enumerations shared across the engine."""
import math
from enum import Enum
from pydantic import BaseModel, ConfigDict, Field


class DetectionScheme(str, Enum):
    """Observable measured on the detected output mode."""

    SI = "si"  # single intensity, d†d
    HD = "hd"  # homodyne quadrature, d + d†

    @classmethod
    def from_string(cls, value: str) -> "DetectionScheme":
        """
        Convert string to DetectionScheme.

        Args:
            value: Scheme name, case-insensitive ("si", "intensity", "hd", "homodyne")

        Returns:
            Matching DetectionScheme

        Raises:
            ValueError: If the name is not recognised
        """
        value_lower = value.lower().strip()
        mapping = {
            "si": cls.SI,
            "intensity": cls.SI,
            "single-intensity": cls.SI,
            "hd": cls.HD,
            "homodyne": cls.HD,
        }
        if value_lower not in mapping:
            raise ValueError(f"Unknown detection scheme: {value}")
        return mapping[value_lower]


class KerrVariant(str, Enum):
    """How the Kerr medium acts on the seed mode."""

    EXACT = "exact"  # exp(-i γ n(n-1))
    LINEARIZED = "linearized"  # a -> (1 - 2iγn) a

    @classmethod
    def from_string(cls, value: str) -> "KerrVariant":
        """Convert string to KerrVariant, accepting "linear" as an alias."""
        value_lower = value.lower().strip()
        if value_lower in {"linear", "linearised"}:
            return cls.LINEARIZED
        return cls(value_lower)


class Engine(str, Enum):
    """Evaluation back-end for sweeps and single points."""

    ANALYTIC = "analytic"
    ORACLE_EXACT = "oracle-exact"
    ORACLE_LINEARIZED = "oracle-linearized"

    @classmethod
    def from_string(cls, value: str) -> "Engine":
        """
        Convert string to Engine; underscores and hyphens are interchangeable.

        Args:
            value: Engine name such as "analytic" or "oracle_exact"

        Returns:
            Matching Engine
        """
        return cls(value.lower().strip().replace("_", "-"))

    @property
    def is_oracle(self) -> bool:
        return self is not Engine.ANALYTIC

    @property
    def variant(self) -> KerrVariant:
        """Kerr variant the oracle engines simulate; the analytic engine is linearized."""
        return KerrVariant.EXACT if self is Engine.ORACLE_EXACT else KerrVariant.LINEARIZED


class MomentPath(str, Enum):
    """Which closed form of a moment to evaluate."""

    CORRECTED = "corrected"  # re-derived, oracle-validated
    VERBATIM = "verbatim"  # literal transcription of the published expression


class OracleMethod(str, Enum):
    """How the Fock-space oracle propagates the seed through the interferometer."""

    MODE_TRANSFER = "mode-transfer"  # Heisenberg picture with explicit vacuum ancillas
    STATE_EVOLUTION = "state-evolution"  # Schrödinger picture, exact Kerr only

    @classmethod
    def from_string(cls, value: str) -> "OracleMethod":
        return cls(value.lower().strip().replace("_", "-"))


class ResultSource(str, Enum):
    """Provenance of a computed sensitivity."""

    ANALYTIC = "analytic"
    ORACLE = "oracle"


ANGLE_FIELDS = ("theta1", "theta2", "phi")


class InterferometerConfig(BaseModel):
    """
    All physical parameters of one experiment point.

    Ranges are checked by ``validate_config`` so that every violation can be
    reported at once; construction only enforces types.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(..., description="Real coherent seed amplitude")
    gamma: float = Field(..., description="Kerr interaction coefficient")
    r1: float = Field(..., description="Squeezing amplitude of the first OPA")
    r2: float = Field(..., description="Squeezing amplitude of the second OPA")
    theta1: float = Field(..., description="Squeezing phase of the first OPA (rad)")
    theta2: float = Field(..., description="Squeezing phase of the second OPA (rad)")
    phi: float = Field(..., description="Phase to estimate (rad)")
    mu: float = Field(..., description="Internal transmissivity in (0, 1]")
    eta: float = Field(..., description="External transmissivity in (0, 1]")

    @property
    def is_lossless(self) -> bool:
        return self.mu == 1.0 and self.eta == 1.0

    @property
    def big_phi(self) -> float:
        """Relative interferometer phase theta1 - theta2 + phi."""
        return self.theta1 - self.theta2 + self.phi

    def with_updates(self, **changes: float) -> "InterferometerConfig":
        """Return a re-validated copy with some fields replaced."""
        return InterferometerConfig(**{**self.model_dump(), **changes})

    def canonical(self) -> "InterferometerConfig":
        """Copy with every angle reduced to [0, 2π)."""
        return self.with_updates(
            **{name: getattr(self, name) % (2 * math.pi) for name in ANGLE_FIELDS}
        )

    def canonically_equal(self, other: "InterferometerConfig") -> bool:
        """Compare two configurations with angles taken modulo 2π."""
        return self.canonical() == other.canonical()


class InternalNumberStatsInputs(BaseModel):
    """The only parameters the internal-mode number statistics depend on."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    alpha: float = Field(..., ge=0.0)
    gamma: float = Field(..., ge=0.0)
    r1: float = Field(..., ge=0.0)

    @classmethod
    def from_config(cls, cfg: InterferometerConfig) -> "InternalNumberStatsInputs":
        return cls(alpha=cfg.alpha, gamma=cfg.gamma, r1=cfg.r1)
