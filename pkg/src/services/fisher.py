"""Quantum Fisher information and the Cramér-Rao bounds, sum-phase and signal-arm."""
import logging
import math
from src.errors import DegenerateStatisticsError, DomainError, WrongOperationError
from src.models.interferometer import (
    InterferometerConfig,
    InternalNumberStatsInputs,
    KerrVariant,
    MomentPath,
)
from src.models.moments import NumberStats
from src.services.analytic_moments import internal_number_stats
from src.services.kerr import validate_config

logger = logging.getLogger(__name__)

DEGENERACY_RTOL = 1e-12


def _check_nondegenerate(stats: NumberStats) -> tuple[float, float]:
    numerator = stats.var1 * stats.var2 - stats.cov**2
    denominator = stats.var1 + stats.var2 - 2.0 * stats.cov
    scale = max(stats.var1, stats.var2, abs(stats.cov))
    if scale == 0.0 or denominator <= DEGENERACY_RTOL * scale:
        raise DegenerateStatisticsError(
            f"degenerate statistics: var1 + var2 - 2cov = {denominator!r}"
        )
    if numerator <= DEGENERACY_RTOL * scale**2 and numerator != 0.0:
        raise DegenerateStatisticsError(
            f"degenerate statistics: var1·var2 - cov² = {numerator!r}"
        )
    return numerator, denominator


def qfi_from_number_stats(stats: NumberStats) -> float:
    """
    Sum-phase quantum Fisher information from internal number statistics.

    F_Q = 4(var1·var2 - cov²) / (var1 + var2 - 2cov)

    Args:
        stats: Variances and covariance of the two internal modes

    Returns:
        F_Q

    Raises:
        DegenerateStatisticsError: If var1 + var2 - 2cov vanishes
    """
    numerator, denominator = _check_nondegenerate(stats)
    return 4.0 * numerator / denominator


def qcrb(fq: float) -> float:
    """Quantum Cramér-Rao bound 1/sqrt(F_Q)."""
    if fq <= 0.0:
        raise DomainError(f"Fisher information must be positive, got {fq}")
    return 1.0 / math.sqrt(fq)


def qcrb_from_number_stats(stats: NumberStats) -> float:
    """
    Bound written directly in terms of the statistics.

    (1/2)·sqrt((var1 + var2 - 2cov) / (var1·var2 - cov²))

    Raises:
        DegenerateStatisticsError: If either combination vanishes
    """
    numerator, denominator = _check_nondegenerate(stats)
    if numerator == 0.0:
        raise DegenerateStatisticsError("degenerate statistics: var1·var2 - cov² = 0")
    return 0.5 * math.sqrt(denominator / numerator)


def qcrb_kerr_seed(
    alpha: float,
    gamma: float,
    r1: float,
    path: MomentPath = MomentPath.CORRECTED,
    variant: KerrVariant = KerrVariant.LINEARIZED,
) -> float:
    """
    Cramér-Rao bound of the Kerr-seeded interferometer.

    Args:
        alpha: Coherent seed amplitude
        gamma: Kerr interaction coefficient, <= 1e-3 for the linearized variant
        r1: Squeezing of the first OPA
        path: Statistics path passed to ``internal_number_stats``
        variant: Kerr operator used for the seed

    Returns:
        Delta phi_Q

    Raises:
        DegenerateStatisticsError: If the statistics carry no phase information
    """
    inputs = InternalNumberStatsInputs(alpha=alpha, gamma=gamma, r1=r1)
    stats = internal_number_stats(inputs, path, variant)
    return qcrb_from_number_stats(stats)


def qfi_signal_arm(stats: NumberStats) -> float:
    """
    Fisher information for a phase on the signal arm alone: 4·var1.

    The pump supplies the phase reference, so the generator is the signal-arm
    number operator. Any lossless single-arm estimator obeys the resulting bound.

    Raises:
        DegenerateStatisticsError: If the signal arm has no number fluctuations
    """
    if stats.var1 <= 0.0:
        raise DegenerateStatisticsError(f"signal-arm variance is {stats.var1!r}")
    return 4.0 * stats.var1


def qcrb_signal_arm(
    alpha: float,
    gamma: float,
    r1: float,
    variant: KerrVariant = KerrVariant.LINEARIZED,
) -> float:
    """
    Signal-arm bound 1/(2·sqrt(var1)).

    Unlike ``qcrb_kerr_seed`` this lower-bounds both lossless detection schemes
    everywhere. The sum-phase bound is exceeded by homodyne detection at small
    alpha, e.g. alpha = 2, r1 = r2 = 0.3, phi = 5.9.
    """
    inputs = InternalNumberStatsInputs(alpha=alpha, gamma=gamma, r1=r1)
    return qcrb(qfi_signal_arm(internal_number_stats(inputs, variant=variant)))


def qcrb_coherent(alpha: float, r1: float) -> float:
    """Cramér-Rao bound with a plain coherent seed (gamma = 0)."""
    return qcrb_kerr_seed(alpha, 0.0, r1)


def _require_lossless(cfg: InterferometerConfig) -> None:
    validate_config(cfg)
    if not cfg.is_lossless:
        raise WrongOperationError(
            f"the quantum Cramér-Rao bound is only computed for lossless configurations "
            f"(mu={cfg.mu}, eta={cfg.eta})"
        )


def qcrb_for_config(cfg: InterferometerConfig) -> float:
    """
    Sum-phase Cramér-Rao bound for a lossless configuration.

    Raises:
        WrongOperationError: If cfg has loss; no lossy bound is computed
    """
    _require_lossless(cfg)
    return qcrb_kerr_seed(cfg.alpha, cfg.gamma, cfg.r1)


def qcrb_signal_arm_for_config(cfg: InterferometerConfig) -> float:
    """Signal-arm bound for a lossless configuration."""
    _require_lossless(cfg)
    return qcrb_signal_arm(cfg.alpha, cfg.gamma, cfg.r1)
