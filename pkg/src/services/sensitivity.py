"""Phase sensitivities by error propagation, plus the SNL/HL reference lines."""
import logging
import math
from src.errors import DomainError, StationaryPointError
from src.models.interferometer import (
    DetectionScheme,
    InterferometerConfig,
    KerrVariant,
    MomentPath,
    ResultSource,
)
from src.models.moments import MomentSet
from src.models.results import LossTrend, SensitivityResult
from src.services.analytic_moments import (
    interferometer_gains,
    lossless_moments,
    loss_parameters,
    lossy_moments,
    seed_moments,
)

logger = logging.getLogger(__name__)

STATIONARY_RTOL = 1e-12


def error_propagation(std_dev_a: float, d_a_dphi: float) -> float:
    """
    Standard error-propagation formula.

    Args:
        std_dev_a: Standard deviation of the observable, >= 0
        d_a_dphi: Phase derivative of its mean

    Returns:
        std_dev_a / |d_a_dphi|

    Raises:
        DomainError: If std_dev_a is negative
        StationaryPointError: If the derivative vanishes relative to the noise
    """
    if std_dev_a < 0.0:
        raise DomainError(f"standard deviation must be non-negative, got {std_dev_a}")
    slope = abs(d_a_dphi)
    if slope == 0.0 or slope < STATIONARY_RTOL * std_dev_a:
        raise StationaryPointError()
    return std_dev_a / slope


def _std(variance: float) -> float:
    # Round-off can leave a tiny negative variance on noiseless observables.
    return math.sqrt(max(variance, 0.0))


def sensitivity_from_moments(
    moments: MomentSet,
    derivative: float,
    scheme: DetectionScheme,
    source: ResultSource,
    normalized: bool = False,
) -> SensitivityResult:
    """
    Combine output moments and a fringe slope into a SensitivityResult.

    Args:
        moments: Moments of the detected mode
        derivative: d<A>/dphi of the observable (unnormalized quadrature for HD)
        scheme: SI uses d†d, HD uses d + d†
        source: Provenance recorded on the result
        normalized: Use the (d + d†)/sqrt(2) quadrature; the ratio is unchanged

    Returns:
        SensitivityResult
    """
    if scheme is DetectionScheme.SI:
        variance = moments.si_variance
    else:
        variance = moments.hd_variance
        if normalized:
            variance /= 2.0
            derivative /= math.sqrt(2.0)
    std = _std(variance)
    delta_phi = error_propagation(std, derivative)
    return SensitivityResult(
        delta_phi=delta_phi,
        scheme=scheme,
        derivative_mag=abs(derivative),
        std_dev=std,
        source=source,
    )


def fringe_derivatives(
    cfg: InterferometerConfig, variant: KerrVariant = KerrVariant.LINEARIZED
) -> tuple[float, float]:
    """
    Closed-form phi-derivatives of the two observables' means, including loss.

    Returns:
        (d<f†f>/dphi, d(<f> + <f†>)/dphi)
    """
    gains = interferometer_gains(cfg)
    seed = seed_moments(cfg.alpha, cfg.gamma, variant)
    transmissivity, _ = loss_parameters(cfg)
    d_uu = 2.0 * (gains.u.conjugate() * gains.du).real
    d_vv = 2.0 * (gains.v.conjugate() * gains.dv).real
    d_number = transmissivity * (d_uu * seed.number + d_vv)
    d_quadrature = 2.0 * math.sqrt(transmissivity) * (gains.du * seed.mean).real
    return d_number, d_quadrature


def phase_sensitivity_si(
    cfg: InterferometerConfig, variant: KerrVariant = KerrVariant.LINEARIZED
) -> SensitivityResult:
    """
    Single-intensity sensitivity of the lossless interferometer.

    Args:
        cfg: Lossless configuration with gamma <= 1e-3
        variant: Kerr operator used for the seed

    Returns:
        SensitivityResult with source ANALYTIC

    Raises:
        WrongOperationError: If cfg has loss
        StationaryPointError: At a stationary point of the intensity fringe
    """
    moments = lossless_moments(cfg, variant)
    d_number, _ = fringe_derivatives(cfg, variant)
    return sensitivity_from_moments(moments, d_number, DetectionScheme.SI, ResultSource.ANALYTIC)


def phase_sensitivity_hd(
    cfg: InterferometerConfig,
    variant: KerrVariant = KerrVariant.LINEARIZED,
    normalized: bool = False,
) -> SensitivityResult:
    """
    Homodyne sensitivity of the lossless interferometer.

    Args:
        cfg: Lossless configuration with gamma <= 1e-3
        variant: Kerr operator used for the seed
        normalized: Measure (d + d†)/sqrt(2) instead of d + d†

    Returns:
        SensitivityResult with source ANALYTIC
    """
    moments = lossless_moments(cfg, variant)
    _, d_quadrature = fringe_derivatives(cfg, variant)
    return sensitivity_from_moments(
        moments, d_quadrature, DetectionScheme.HD, ResultSource.ANALYTIC, normalized
    )


def phase_sensitivity_hd_lossy(
    cfg: InterferometerConfig,
    path: MomentPath = MomentPath.CORRECTED,
    normalized: bool = False,
) -> SensitivityResult:
    """
    Homodyne sensitivity with internal and external loss.

    The slope is the same on both paths since the published first moment
    matches the re-derived one; only the quadrature variance differs.

    Args:
        cfg: Any valid configuration with gamma <= 1e-3
        path: CORRECTED moments, or VERBATIM published moments
        normalized: Measure (f + f†)/sqrt(2) instead of f + f†

    Returns:
        SensitivityResult with source ANALYTIC
    """
    moments = lossy_moments(cfg, path)
    _, d_quadrature = fringe_derivatives(cfg)
    return sensitivity_from_moments(
        moments, d_quadrature, DetectionScheme.HD, ResultSource.ANALYTIC, normalized
    )


def phase_sensitivity_si_lossy(cfg: InterferometerConfig) -> SensitivityResult:
    """Single-intensity sensitivity with internal and external loss."""
    moments = lossy_moments(cfg)
    d_number, _ = fringe_derivatives(cfg)
    return sensitivity_from_moments(moments, d_number, DetectionScheme.SI, ResultSource.ANALYTIC)


def hd_lossy_trend(
    cfg: InterferometerConfig,
    field: str,
    points: list[float],
    path: MomentPath = MomentPath.CORRECTED,
) -> LossTrend:
    """
    Lossy homodyne sensitivity of cfg with one field swept.

    With internal loss the corrected moments give a shallow minimum in r2 followed
    by a slow rise; the published moments decrease monotonically. Both are
    reported so the difference stays visible.

    Args:
        cfg: Configuration carrying the loss to hold fixed
        field: Configuration field to sweep
        points: Values of the field
        path: CORRECTED or VERBATIM lossy moments

    Returns:
        LossTrend; stationary points are None
    """
    values: list[float | None] = []
    for point in points:
        try:
            values.append(
                phase_sensitivity_hd_lossy(cfg.with_updates(**{field: point}), path).delta_phi
            )
        except StationaryPointError:
            values.append(None)
    loss_field, loss = ("mu", cfg.mu) if cfg.mu < 1.0 else ("eta", cfg.eta)
    return LossTrend(
        field=field, loss_field=loss_field, loss=loss, path=path, points=points, delta_phi=values
    )


def phase_sensitivity(cfg: InterferometerConfig, scheme: DetectionScheme) -> SensitivityResult:
    """Dispatch to the lossless or lossy analytic sensitivity for ``scheme``."""
    if scheme is DetectionScheme.SI:
        return phase_sensitivity_si(cfg) if cfg.is_lossless else phase_sensitivity_si_lossy(cfg)
    return phase_sensitivity_hd(cfg) if cfg.is_lossless else phase_sensitivity_hd_lossy(cfg)


def snl(n: float) -> float:
    """Shot-noise limit 1/sqrt(n)."""
    if n <= 0.0:
        raise DomainError(f"photon number must be positive, got {n}")
    return 1.0 / math.sqrt(n)


def hl(n: float) -> float:
    """Heisenberg limit 1/n."""
    if n <= 0.0:
        raise DomainError(f"photon number must be positive, got {n}")
    return 1.0 / n
