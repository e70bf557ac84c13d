"""
Closed-form expectation values of the Kerr-seeded SU(1,1) interferometer.

The detected output operator is d = u·A + v·a2†, where A is the Kerr-evolved
seed mode and a2 the vacuum idler. With loss, f = sqrt(ημ)·d + w, where w is a
phase-insensitive thermal mode carrying η(1-μ)·sinh²(r2) photons.

Seed expectations reduce to Poisson averages of polynomials in n, which are
evaluated exactly through raw Poisson moments (Touchard polynomials). Two
families of expressions live here: the re-derived forms (``MomentPath.CORRECTED``)
and literal transcriptions of the published forms (``MomentPath.VERBATIM``),
kept for discrepancy reports.
"""
import cmath
import logging
import math
from functools import lru_cache
from typing import NamedTuple
from numpy.polynomial import Polynomial
from src.errors import AnalyticDomainError, WrongOperationError
from src.models.interferometer import (
    InterferometerConfig,
    InternalNumberStatsInputs,
    KerrVariant,
    MomentPath,
)
from src.models.moments import MomentSet, NumberStats
from src.services.kerr import check_analytic_ranges, require_analytic_domain, validate_config

logger = logging.getLogger(__name__)

_N = Polynomial([0.0, 1.0])


# ---------------------------------------------------------------------------
# Poisson averages
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _stirling_second_kind(k: int) -> tuple[int, ...]:
    """Row S(k, 0..k) of Stirling numbers of the second kind."""
    row = [1]
    for i in range(1, k + 1):
        prev = row + [0]
        row = [0] + [j * prev[j] + prev[j - 1] for j in range(1, i + 1)]
    return tuple(row)


def poisson_raw_moment(k: int, lam: float) -> float:
    """E[n^k] for n ~ Poisson(lam)."""
    return float(Polynomial(_stirling_second_kind(k))(lam))


def poisson_expectation(poly: Polynomial, lam: float) -> complex:
    """
    Average a polynomial in the photon number over a Poisson distribution.

    Args:
        poly: Polynomial in n (complex coefficients allowed)
        lam: Poisson mean

    Returns:
        E[poly(n)]
    """
    return complex(sum(c * poisson_raw_moment(k, lam) for k, c in enumerate(poly.coef)))


# ---------------------------------------------------------------------------
# Seed mode
# ---------------------------------------------------------------------------


class SeedMoments(NamedTuple):
    """Expectation values of the Kerr-evolved seed operator A on a coherent state."""

    mean: complex  # <A>
    second: complex  # <A²>
    number: float  # <A†A>
    fourth: float  # <A†²A²>
    anti_number: float  # <A A†>
    anti_fourth: float  # <A² A†²>
    number_squared: float  # <(A†A)²>


def mean_photon_kerr(alpha: float, gamma: float) -> float:
    """Mean photon number α² + 4α⁴(1+α²)γ² of the linearized Kerr seed."""
    lam = alpha**2
    return lam + 4.0 * lam**2 * (1.0 + lam) * gamma**2


def mean_photon_coherent(alpha: float) -> float:
    return alpha**2


def seed_moments(
    alpha: float, gamma: float, variant: KerrVariant = KerrVariant.LINEARIZED
) -> SeedMoments:
    """
    Moments of the seed operator for a real coherent amplitude.

    The exact Kerr operator is A = exp(-2iγn)·a; the linearized one is
    A = (1 - 2iγn)·a. Photon statistics of the exact variant do not depend on γ.

    Args:
        alpha: Real coherent amplitude
        gamma: Kerr interaction coefficient
        variant: Exact or linearized Kerr operator

    Returns:
        SeedMoments
    """
    lam = alpha**2
    if variant is KerrVariant.EXACT:
        return SeedMoments(
            mean=alpha * cmath.exp(lam * (cmath.exp(-2j * gamma) - 1.0)),
            second=lam * cmath.exp(-2j * gamma) * cmath.exp(lam * (cmath.exp(-4j * gamma) - 1.0)),
            number=lam,
            fourth=lam**2,
            anti_number=lam + 1.0,
            anti_fourth=lam**2 + 4.0 * lam + 2.0,
            number_squared=lam**2 + lam,
        )

    g2 = 4.0 * gamma**2
    # A²: (1 - 2iγn)(1 - 2iγ(n+1)) a²
    second_factor = Polynomial([1.0, -2j * gamma]) * Polynomial([1.0 - 2j * gamma, -2j * gamma])
    # A†A = n(1 + 4γ²(n-1)²)
    number_op = _N * (1.0 + g2 * (_N - 1.0) ** 2)
    # A A† = (n+1)(1 + 4γ²n²)
    anti_number_op = (_N + 1.0) * (1.0 + g2 * _N**2)
    # A†²A² = λ² E[(1 + 4γ²m²)(1 + 4γ²(m+1)²)]
    fourth_avg = (1.0 + g2 * _N**2) * (1.0 + g2 * (_N + 1.0) ** 2)
    anti_fourth_op = (_N + 1.0) * (_N + 2.0) * (1.0 + g2 * _N**2) * (1.0 + g2 * (_N + 1.0) ** 2)

    return SeedMoments(
        mean=alpha * (1.0 - 2j * gamma * lam),
        second=lam * poisson_expectation(second_factor, lam),
        number=poisson_expectation(number_op, lam).real,
        fourth=lam**2 * poisson_expectation(fourth_avg, lam).real,
        anti_number=poisson_expectation(anti_number_op, lam).real,
        anti_fourth=poisson_expectation(anti_fourth_op, lam).real,
        number_squared=poisson_expectation(number_op**2, lam).real,
    )


# ---------------------------------------------------------------------------
# Interferometer gains
# ---------------------------------------------------------------------------


class Gains(NamedTuple):
    """Coefficients of d = u·A + v·a2† and their phi-derivatives."""

    u: complex
    v: complex
    du: complex
    dv: complex


def interferometer_gains(cfg: InterferometerConfig) -> Gains:
    """Compose OPA-1, the phase shift and OPA-2 into the output-mode coefficients."""
    c1, s1 = math.cosh(cfg.r1), math.sinh(cfg.r1)
    c2, s2 = math.cosh(cfg.r2), math.sinh(cfg.r2)
    e_phi = cmath.exp(1j * cfg.phi)
    u = e_phi * c1 * c2 + cmath.exp(1j * (cfg.theta2 - cfg.theta1)) * s1 * s2
    v = cmath.exp(1j * (cfg.theta1 + cfg.phi)) * s1 * c2 + cmath.exp(1j * cfg.theta2) * c1 * s2
    du = 1j * e_phi * c1 * c2
    dv = 1j * cmath.exp(1j * (cfg.theta1 + cfg.phi)) * s1 * c2
    return Gains(u=u, v=v, du=du, dv=dv)


def loss_parameters(cfg: InterferometerConfig) -> tuple[float, float]:
    """
    Transmissivity and admixed noise of the lossy output.

    Internal loss acts on both arms between the OPAs; external loss acts on
    the detected output.

    Returns:
        (ημ, η(1-μ)·sinh²(r2))
    """
    return cfg.eta * cfg.mu, cfg.eta * (1.0 - cfg.mu) * math.sinh(cfg.r2) ** 2


def _moments_from_seed(gains: Gains, seed: SeedMoments) -> MomentSet:
    uu = abs(gains.u) ** 2
    vv = abs(gains.v) ** 2
    return MomentSet(
        m1=gains.u * seed.mean,
        m2=gains.u**2 * seed.second,
        n1=complex(uu * seed.number + vv),
        n2=complex(uu**2 * seed.fourth + 4.0 * uu * vv * seed.number + 2.0 * vv**2),
    )


def _require_lossless(cfg: InterferometerConfig, lossy_name: str) -> None:
    if not cfg.is_lossless:
        raise WrongOperationError(
            f"configuration has loss (mu={cfg.mu}, eta={cfg.eta}); use {lossy_name}"
        )


def _check_domain(cfg: InterferometerConfig, variant: KerrVariant) -> None:
    if variant is KerrVariant.LINEARIZED:
        require_analytic_domain(cfg)
    else:
        validate_config(cfg)
        check_analytic_ranges(0.0, cfg.r1, cfg.r2)


# ---------------------------------------------------------------------------
# Literal transcriptions of the published closed forms
# ---------------------------------------------------------------------------


def _printed_gain_envelope(cfg: InterferometerConfig) -> complex:
    big_phi = cfg.big_phi
    return (
        math.cos(big_phi / 2) * math.cosh(cfg.r1 + cfg.r2)
        + 1j * math.cosh(cfg.r1 - cfg.r2) * math.sin(big_phi / 2)
    )


def _printed_first(cfg: InterferometerConfig) -> complex:
    a, g = cfg.alpha, cfg.gamma
    dtheta = cfg.theta1 - cfg.theta2
    return (
        a
        * (1 - 2j * a**2 * g)
        * (
            math.sinh(cfg.r1) * math.sinh(cfg.r2) * (math.cos(dtheta) - 1j * math.sin(dtheta))
            + math.cosh(cfg.r1) * math.cosh(cfg.r2) * (math.cos(cfg.phi) + 1j * math.sin(cfg.phi))
        )
    )


def _printed_lossless_second(cfg: InterferometerConfig) -> complex:
    a, g = cfg.alpha, cfg.gamma
    prefactor = -(1 / 8) * cmath.exp(-1j * (cfg.theta1 - cfg.theta2 - cfg.phi))
    core = -1 + 2j * g + 4 * a**2 * g * (1j + 2 * g + a**2 * g)
    return prefactor * (8 * a**2 * core * _printed_gain_envelope(cfg) ** 2)


def _printed_lossless_number(cfg: InterferometerConfig) -> float:
    # The published form carries cos(phi) where the composition gives cos(Phi).
    a, g = cfg.alpha, cfg.gamma
    k = (1 + a**2) * (1 + 4 * a**4 * g**2)
    ch2r1 = math.cosh(2 * cfg.r1)
    return 0.5 * (
        -1
        + a**2
        + 4 * a**4 * (1 + a**2) * g**2
        + (k * ch2r1) * math.cosh(cfg.r2) ** 2
        + (k * ch2r1) * math.sinh(cfg.r2) ** 2
        + k * math.cos(cfg.phi) * math.sinh(2 * cfg.r1) * math.sinh(2 * cfg.r2)
    )


def _printed_lossy_second(cfg: InterferometerConfig) -> complex:
    a, g, mu, eta = cfg.alpha, cfg.gamma, cfg.mu, cfg.eta
    prefactor = -(1 / 8) * eta * cmath.exp(-1j * (cfg.theta1 - cfg.theta2 - cfg.phi))
    core = -1 + 2j * g + 4 * a**2 * mu * g * (1j + (2 + a**2) * g)
    sh2r2 = math.sinh(2 * cfg.r2)
    extra = 4 * cmath.exp(1j * cfg.theta1) * (-1 + mu) * math.cos(cfg.phi) * sh2r2 + 4 * (
        -1 + mu
    ) * (-1j * math.cos(cfg.theta1) + math.sin(cfg.theta1)) * math.sin(cfg.phi) * sh2r2
    return prefactor * (8 * a**2 * core * _printed_gain_envelope(cfg) ** 2 + extra)


def _printed_lossy_number(cfg: InterferometerConfig) -> float:
    a, g, mu, eta = cfg.alpha, cfg.gamma, cfg.mu, cfg.eta
    k = (1 + a**2) * (1 + 4 * a**4 * g**2)
    inner = 1 - mu + k * mu * math.cosh(2 * cfg.r1)
    return 0.5 * eta * (
        -1
        + a**2 * mu
        + 4 * a**4 * (1 + a**2) * g**2 * mu
        + inner * math.cosh(cfg.r2) ** 2
        + inner * math.sinh(cfg.r2) ** 2
        + k * mu * math.cos(cfg.big_phi) * math.sinh(2 * cfg.r1) * math.sinh(2 * cfg.r2)
    )


def printed_internal_number_stats(inputs: InternalNumberStatsInputs) -> tuple[float, float, float]:
    """
    Literal published variances and the published "covariance squared" expression.

    Returns:
        (var1, var2, cov_expression)
    """
    a, g, r1 = inputs.alpha, inputs.gamma, inputs.r1
    var1 = 0.5 * math.cosh(r1) ** 2 * (
        -1
        + 4 * a**4 * g**2
        + 208 * a**8 * g**4
        + 96 * a**10 * g**4
        + 8 * a**6 * (g**2 + 8 * g**4)
        + (
            1
            + 2 * a**2
            + 12 * a**4 * g**2
            + 208 * a**8 * g**4
            + 96 * a**10 * g**4
            + 16 * a**6 * (g**2 + 4 * g**4)
        )
        * math.cosh(2 * r1)
    )
    var2 = math.sinh(r1) ** 2 * (
        1
        + 16 * a**4 * g**2
        + 4 * a**6 * g**2
        + a**2 * (1 + 8 * g**2)
        + (
            1
            + 8 * g**2
            + 1664 * a**8 * g**4
            + 192 * a**10 * g**4
            + 4 * a**4 * g**2 * (37 + 752 * g**2)
            + 40 * a**6 * (g**2 + 104 * g**4)
            + a**2 * (2 + 96 * g**2 + 384 * g**4)
        )
        * math.sinh(r1) ** 2
    )
    cov_expression = (
        1
        + 1280 * a**8 * g**4
        + 192 * a**10 * g**4
        + 4 * a**4 * g**2 * (25 + 272 * g**2)
        + 8 * a**6 * g**2 * (5 + 288 * g**2)
        + a**2 * (2 + 32 * g**2 + 64 * g**4)
    ) * (math.cosh(r1) ** 2 * math.sinh(r1) ** 2)
    return var1, var2, cov_expression


# ---------------------------------------------------------------------------
# Lossless output moments
# ---------------------------------------------------------------------------


def lossless_moments(
    cfg: InterferometerConfig, variant: KerrVariant = KerrVariant.LINEARIZED
) -> MomentSet:
    """
    All four output moments of the lossless interferometer.

    Args:
        cfg: Lossless configuration
        variant: Kerr operator used for the seed; the exact variant has no gamma ceiling

    Returns:
        MomentSet of the detected mode

    Raises:
        WrongOperationError: If cfg has loss
        AnalyticDomainError: If gamma or r is outside the trusted range
    """
    _require_lossless(cfg, "lossy_moments")
    _check_domain(cfg, variant)
    seed = seed_moments(cfg.alpha, cfg.gamma, variant)
    return _moments_from_seed(interferometer_gains(cfg), seed)


def lossless_first_moment(
    cfg: InterferometerConfig, path: MomentPath = MomentPath.CORRECTED
) -> complex:
    """
    <d> of the lossless interferometer.

    Args:
        cfg: Lossless configuration with gamma <= 1e-3
        path: Re-derived form or the literal published form (identical here)

    Returns:
        Complex first moment

    Raises:
        WrongOperationError: If cfg has loss; use lossy_first_moment
    """
    _require_lossless(cfg, "lossy_first_moment")
    require_analytic_domain(cfg)
    if path is MomentPath.VERBATIM:
        return _printed_first(cfg)
    return lossless_moments(cfg).m1


def lossless_second_moment(
    cfg: InterferometerConfig, path: MomentPath = MomentPath.CORRECTED
) -> complex:
    """<d²> of the lossless interferometer; see ``lossless_first_moment``."""
    _require_lossless(cfg, "lossy_second_moment")
    require_analytic_domain(cfg)
    if path is MomentPath.VERBATIM:
        return _printed_lossless_second(cfg)
    return lossless_moments(cfg).m2


def lossless_number_moment(
    cfg: InterferometerConfig, path: MomentPath = MomentPath.CORRECTED
) -> float:
    """
    <d†d> of the lossless interferometer.

    The verbatim path reproduces the published cos(phi) in the fringe term; the
    corrected path uses cos(theta1 - theta2 + phi).
    """
    _require_lossless(cfg, "lossy_number_moment")
    require_analytic_domain(cfg)
    if path is MomentPath.VERBATIM:
        return _printed_lossless_number(cfg)
    return lossless_moments(cfg).n1.real


def lossless_fourth_moment(cfg: InterferometerConfig) -> float:
    """<d†²d²> of the lossless interferometer under the linearized Kerr operator."""
    _require_lossless(cfg, "lossy_fourth_moment")
    return lossless_moments(cfg).n2.real


# ---------------------------------------------------------------------------
# Lossy output moments
# ---------------------------------------------------------------------------


def lossy_moments(
    cfg: InterferometerConfig,
    path: MomentPath = MomentPath.CORRECTED,
    variant: KerrVariant = KerrVariant.LINEARIZED,
) -> MomentSet:
    """
    Output moments with internal loss mu and external loss eta.

    Args:
        cfg: Any valid configuration; mu = eta = 1 reduces to the lossless moments
        path: CORRECTED, or VERBATIM to take <f>, <f²>, <f†f> from the published forms
        variant: Kerr operator used for the seed (corrected path only)

    Returns:
        MomentSet of the detected mode
    """
    _check_domain(cfg, variant)
    transmissivity, noise = loss_parameters(cfg)
    gains = interferometer_gains(cfg)
    moments = _moments_from_seed(gains, seed_moments(cfg.alpha, cfg.gamma, variant))
    moments = moments.scaled(transmissivity, noise)
    if path is MomentPath.VERBATIM:
        moments = MomentSet(
            m1=math.sqrt(cfg.eta * cfg.mu) * _printed_first(cfg),
            m2=_printed_lossy_second(cfg),
            n1=complex(_printed_lossy_number(cfg)),
            n2=moments.n2,
        )
    return moments


def lossy_first_moment(
    cfg: InterferometerConfig, path: MomentPath = MomentPath.CORRECTED
) -> complex:
    """<f> = sqrt(ημ)·<d>; the published form agrees with the re-derivation."""
    return lossy_moments(cfg, path).m1


def lossy_second_moment(
    cfg: InterferometerConfig, path: MomentPath = MomentPath.CORRECTED
) -> complex:
    """
    <f²> of the lossy interferometer.

    The corrected value is ημ·<d²>. The published expression lacks the mu factor
    on its main term and adds terms proportional to (mu - 1); it is available
    through ``MomentPath.VERBATIM`` for comparison only.
    """
    return lossy_moments(cfg, path).m2


def lossy_number_moment(
    cfg: InterferometerConfig, path: MomentPath = MomentPath.CORRECTED
) -> float:
    """<f†f> = η[μ<d†d> + (1-μ)sinh²(r2)]."""
    return lossy_moments(cfg, path).n1.real


def lossy_fourth_moment(cfg: InterferometerConfig) -> float:
    """<f†²f²> of the lossy interferometer."""
    return lossy_moments(cfg).n2.real


# ---------------------------------------------------------------------------
# Internal-mode number statistics
# ---------------------------------------------------------------------------


def internal_number_stats(
    inputs: InternalNumberStatsInputs,
    path: MomentPath = MomentPath.CORRECTED,
    variant: KerrVariant = KerrVariant.LINEARIZED,
) -> NumberStats:
    """
    Number variances and covariance of the two modes leaving OPA-1.

    The modes are c1 = cosh(r1)·A + e^{iθ1}sinh(r1)·a2† and
    b2 = cosh(r1)·a2 + e^{iθ1}sinh(r1)·A†. Variances use the normal-ordered
    convention <o†²o²> + <o†o> - <o†o>².

    Args:
        inputs: alpha, gamma and r1
        path: CORRECTED (re-derived) or VERBATIM (published variances, with the
            published "Cov²" expression read as the covariance itself)
        variant: Kerr operator used for the seed

    Returns:
        NumberStats

    Raises:
        AnalyticDomainError: If gamma is above the ceiling, or a published
            variance turns negative outside the linearization validity region
    """
    if variant is KerrVariant.LINEARIZED:
        check_analytic_ranges(inputs.gamma, inputs.r1)

    if path is MomentPath.VERBATIM:
        var1, var2, cov = printed_internal_number_stats(inputs)
        if var1 < 0.0 or var2 < 0.0:
            raise AnalyticDomainError(
                f"negative published variance at alpha={inputs.alpha}, gamma={inputs.gamma}: "
                "outside linearization validity"
            )
    else:
        seed = seed_moments(inputs.alpha, inputs.gamma, variant)
        c = math.cosh(inputs.r1) ** 2
        s = math.sinh(inputs.r1) ** 2
        big_n = seed.number
        var1 = c * (c * (seed.fourth - big_n**2) + big_n * math.cosh(2 * inputs.r1) + s)
        var2 = s * s * (seed.anti_fourth - seed.anti_number**2) + s * seed.anti_number
        cov = c * s * (seed.number_squared + 2.0 * big_n + 1.0 - big_n * seed.anti_number)

    try:
        return NumberStats(var1=var1, var2=var2, cov=cov)
    except ValueError as e:
        raise AnalyticDomainError(f"number statistics outside validity region: {e}") from e
