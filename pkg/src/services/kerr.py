"""Kerr-coefficient helper and configuration validation."""
import logging
import math
from config.settings import get_settings
from src.errors import AnalyticDomainError, ConfigValidationError, DomainError
from src.models.interferometer import InterferometerConfig

logger = logging.getLogger(__name__)


def kerr_gamma(chi3: float, length: float, velocity: float) -> float:
    """
    Kerr interaction coefficient accumulated over a medium.

    Args:
        chi3: Third-order susceptibility
        length: Medium length, > 0
        velocity: Propagation velocity, > 0

    Returns:
        chi3 · length / velocity

    Raises:
        DomainError: If length or velocity is not positive
    """
    if length <= 0.0:
        raise DomainError(f"length must be positive, got {length}")
    if velocity <= 0.0:
        raise DomainError(f"velocity must be positive, got {velocity}")
    return chi3 * length / velocity


def config_violations(cfg: InterferometerConfig) -> list[str]:
    """Every range violation of ``cfg``, in field order."""
    violations = []
    for name, value in cfg.model_dump().items():
        if not math.isfinite(value):
            violations.append(f"{name} not finite")
    if cfg.alpha < 0.0:
        violations.append("alpha negative")
    if cfg.gamma < 0.0:
        violations.append("gamma negative")
    for name in ("r1", "r2"):
        if getattr(cfg, name) < 0.0:
            violations.append(f"{name} negative")
    for name in ("mu", "eta"):
        value = getattr(cfg, name)
        if not 0.0 < value <= 1.0:
            violations.append(f"{name} out of (0,1]")
    return violations


def validate_config(cfg: InterferometerConfig) -> InterferometerConfig:
    """
    Check every configuration invariant.

    Args:
        cfg: Configuration to check

    Returns:
        The same configuration when valid

    Raises:
        ConfigValidationError: Listing all violations, not just the first
    """
    violations = config_violations(cfg)
    if violations:
        raise ConfigValidationError(violations)
    return cfg


def require_analytic_domain(cfg: InterferometerConfig) -> None:
    """
    Reject configurations the closed forms do not cover.

    Raises:
        ConfigValidationError: If the configuration is invalid
        AnalyticDomainError: If gamma or r exceeds its ceiling
    """
    validate_config(cfg)
    check_analytic_ranges(cfg.gamma, cfg.r1, cfg.r2)


def check_analytic_ranges(gamma: float, *squeezings: float) -> None:
    """Apply the gamma and squeezing ceilings of the linearized closed forms."""
    settings = get_settings()
    if gamma > settings.gamma_ceiling:
        raise AnalyticDomainError(
            f"gamma={gamma} exceeds the linearization ceiling {settings.gamma_ceiling}; "
            "use an oracle engine"
        )
    for r in squeezings:
        if r > settings.r_ceiling:
            raise AnalyticDomainError(f"squeezing r={r} exceeds ceiling {settings.r_ceiling}")
