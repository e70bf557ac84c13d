"""Output-mode moments and internal-mode number statistics."""
from pydantic import BaseModel, ConfigDict, Field, model_validator

IMAG_TOLERANCE = 1e-10
VARIANCE_SLACK = 1e-10
COV_SLACK = 1e-10


class MomentSet(BaseModel):
    """The complex moments <d>, <d²>, <d†d>, <d†²d²> of one output mode."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    m1: complex = Field(..., description="<d>")
    m2: complex = Field(..., description="<d²>")
    n1: complex = Field(..., description="<d†d>, physically real")
    n2: complex = Field(..., description="<d†²d²>, physically real")

    @property
    def si_variance(self) -> float:
        """Variance of d†d from the normal-ordered moments."""
        return self.n2.real + self.n1.real - self.n1.real**2

    @property
    def hd_variance(self) -> float:
        """Variance of the unnormalized quadrature d + d†."""
        return 2.0 * self.m2.real + 2.0 * self.n1.real + 1.0 - (2.0 * self.m1.real) ** 2

    def physical_violations(self) -> list[str]:
        """
        List every physicality condition this moment set breaks.

        Returns:
            Human-readable diagnostics; empty when the set is physical
        """
        violations = []
        for name in ("n1", "n2"):
            value: complex = getattr(self, name)
            if abs(value.imag) > IMAG_TOLERANCE * (1.0 + abs(value.real)):
                violations.append(f"{name} has imaginary part {value.imag!r}")
            if value.real < 0.0:
                violations.append(f"{name} negative")
        if self.si_variance < -VARIANCE_SLACK:
            violations.append(f"intensity variance negative ({self.si_variance!r})")
        return violations

    def scaled(self, transmissivity: float, noise_photons: float = 0.0) -> "MomentSet":
        """
        Moments after mixing with an uncorrelated thermal mode.

        The output is sqrt(T)·d + w where w is a zero-mean, phase-insensitive
        Gaussian mode with <w†w> = noise_photons.

        Args:
            transmissivity: Overall amplitude transmissivity T applied to d
            noise_photons: Mean photon number of the admixed mode

        Returns:
            New MomentSet
        """
        t = transmissivity
        w = noise_photons
        return MomentSet(
            m1=t**0.5 * self.m1,
            m2=t * self.m2,
            n1=t * self.n1 + w,
            n2=t**2 * self.n2 + 4.0 * t * w * self.n1 + 2.0 * w**2,
        )


class NumberStats(BaseModel):
    """Photon-number variances and covariance of the two modes inside the interferometer."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    var1: float = Field(..., ge=0.0, description="Variance of the signal-mode number")
    var2: float = Field(..., ge=0.0, description="Variance of the idler-mode number")
    cov: float = Field(..., description="Covariance of the two numbers")

    @model_validator(mode="after")
    def check_covariance_bound(self) -> "NumberStats":
        bound = self.var1 * self.var2
        if self.cov**2 > bound + COV_SLACK * max(1.0, bound):
            raise ValueError(
                f"covariance {self.cov!r} violates cov² <= var1·var2 ({bound!r})"
            )
        return self
