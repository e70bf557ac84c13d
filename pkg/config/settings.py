"""Application settings loaded from environment variables."""
from pydantic_settings import BaseSettings
from pydantic import field_validator


class Settings(BaseSettings):
    """Numerical budgets and runtime knobs, overridable via SU11_* environment variables."""

    # Analytic validity region
    gamma_ceiling: float = 1e-3  # Linearized Kerr operator beyond this is not trusted
    r_ceiling: float = 10.0

    # Truncated Fock space
    truncation_budget: float = 1e-12
    poisson_tail: float = 1e-14
    max_photons_pure: int = 128
    max_photons_mixed: int = 24
    vacuum_levels: int = 3  # Loss/idler ancillas only ever need |0>,|1>,|2>
    convergence_tol: float = 1e-10
    convergence_attempts: int = 3
    oracle_alpha_ceiling: float = 3.0

    # Sensitivity
    fd_step: float = 1e-5
    optimum_grid: int = 2000
    optimum_tol: float = 1e-6

    # Verification thresholds
    moment_tolerance: float = 1e-8
    sensitivity_tolerance: float = 1e-6
    gamma_zero_tolerance: float = 1e-10
    bound_rtol: float = 1e-3  # Slack for the linearized seed against the signal-arm bound

    # Execution
    workers: int = 1

    # Output Configuration
    output_dir: str = "output"

    # Logging
    log_level: str = "INFO"
    log_file: str | None = None

    @field_validator(
        "truncation_budget", "poisson_tail", "convergence_tol", "fd_step", "bound_rtol"
    )
    @classmethod
    def validate_small_positive(cls, v: float, info) -> float:
        """Tolerances must be positive and well below one."""
        if not 0.0 < v < 1e-2:
            raise ValueError(f"{info.field_name} must lie in (0, 1e-2), got {v}")
        return v

    @field_validator("max_photons_pure", "max_photons_mixed", "vacuum_levels", "workers")
    @classmethod
    def validate_positive_int(cls, v: int, info) -> int:
        """Counts must be at least one."""
        if v < 1:
            raise ValueError(f"{info.field_name} must be >= 1, got {v}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Accept only the standard logging level names."""
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    class Config:
        env_prefix = "SU11_"
        env_file = ".env"
        env_file_encoding = "utf-8"


# Singleton instance
_settings: Settings | None = None


def get_settings() -> Settings:
    """Get application settings singleton."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings
