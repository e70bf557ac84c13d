"""Closed-form moments of the output mode and of the internal modes."""
import math
import numpy as np
import pytest
from numpy.polynomial import Polynomial
from src.errors import AnalyticDomainError, WrongOperationError
from src.models.interferometer import InternalNumberStatsInputs, KerrVariant, MomentPath
from src.services.analytic_moments import (
    internal_number_stats,
    interferometer_gains,
    lossless_first_moment,
    lossless_fourth_moment,
    lossless_moments,
    lossless_number_moment,
    lossless_second_moment,
    lossy_first_moment,
    lossy_moments,
    lossy_number_moment,
    lossy_second_moment,
    mean_photon_coherent,
    mean_photon_kerr,
    poisson_expectation,
    poisson_raw_moment,
    printed_internal_number_stats,
    seed_moments,
)
from tests.conftest import make_config


def rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


class TestPoissonAverages:
    @pytest.mark.parametrize("k, lam, expected", [
        (0, 3.0, 1.0),
        (1, 3.0, 3.0),
        (2, 3.0, 12.0),
        (3, 2.0, 22.0),
        (4, 1.0, 15.0),
    ])
    def test_raw_moments(self, k, lam, expected):
        assert poisson_raw_moment(k, lam) == pytest.approx(expected)

    def test_polynomial_expectation(self):
        # E[n(n-1)] = lam²
        assert poisson_expectation(Polynomial([0.0, -1.0, 1.0]), 2.5) == pytest.approx(6.25)


class TestSeed:
    def test_mean_photon_kerr_at_figure_scale(self):
        assert mean_photon_kerr(100.0, 1e-6) == pytest.approx(10004.0004, rel=1e-12)
        assert mean_photon_kerr(100.0, 1e-6) / mean_photon_coherent(100.0) - 1 == pytest.approx(
            4.0004e-4, rel=1e-9
        )

    def test_mean_photon_gamma_zero(self):
        assert mean_photon_kerr(3.0, 0.0) == mean_photon_coherent(3.0) == 9.0

    def test_variants_agree_at_gamma_zero(self):
        exact = seed_moments(1.3, 0.0, KerrVariant.EXACT)
        linear = seed_moments(1.3, 0.0, KerrVariant.LINEARIZED)
        for a, b in zip(exact, linear):
            assert a == pytest.approx(b, rel=1e-12)

    def test_exact_statistics_are_poissonian(self):
        seed = seed_moments(2.0, 1e-3, KerrVariant.EXACT)
        assert seed.number == pytest.approx(4.0)
        assert seed.fourth == pytest.approx(16.0)
        assert seed.number_squared == pytest.approx(20.0)

    def test_linearized_number_matches_mean_photon(self):
        seed = seed_moments(1.5, 1e-3)
        assert seed.number == pytest.approx(mean_photon_kerr(1.5, 1e-3), rel=1e-12)

    def test_linearization_error_is_second_order(self):
        deviations = []
        for gamma in (1e-4, 1e-3):
            exact = seed_moments(1.0, gamma, KerrVariant.EXACT).mean
            linear = seed_moments(1.0, gamma, KerrVariant.LINEARIZED).mean
            deviations.append(abs(exact - linear))
        assert 80.0 <= deviations[1] / deviations[0] <= 120.0


class TestLosslessMoments:
    def test_pass_through_coherent_state(self):
        cfg = make_config(alpha=2.0, gamma=0.0, r1=0.0, r2=0.0, phi=0.0)
        moments = lossless_moments(cfg)
        assert moments.m1 == pytest.approx(2.0)
        assert moments.m2 == pytest.approx(4.0)
        assert moments.n1 == pytest.approx(4.0)
        assert moments.n2 == pytest.approx(16.0)

    def test_balanced_opas_undo_each_other_on_vacuum(self):
        cfg = make_config(alpha=0.0, gamma=0.0, r1=2.0, r2=2.0, phi=0.0)
        assert abs(lossless_number_moment(cfg)) < 1e-9

    def test_gains_keep_commutator(self):
        gains = interferometer_gains(make_config(phi=1.1, theta1=0.4))
        assert abs(gains.u) ** 2 - abs(gains.v) ** 2 == pytest.approx(1.0, rel=1e-12)

    def test_published_first_and_second_moment_match(self, small_config):
        assert rel(
            lossless_first_moment(small_config, MomentPath.VERBATIM),
            lossless_first_moment(small_config),
        ) < 1e-12
        assert rel(
            lossless_second_moment(small_config, MomentPath.VERBATIM),
            lossless_second_moment(small_config),
        ) < 1e-10

    def test_published_number_moment_differs_when_theta_offset(self, small_config):
        verbatim = lossless_number_moment(small_config, MomentPath.VERBATIM)
        corrected = lossless_number_moment(small_config)
        assert rel(verbatim, corrected) > 1e-3

    def test_published_number_moment_agrees_when_phases_coincide(self):
        cfg = make_config(theta1=0.0, theta2=0.0)
        verbatim = lossless_number_moment(cfg, MomentPath.VERBATIM)
        assert verbatim == pytest.approx(lossless_number_moment(cfg), rel=1e-10)

    def test_fourth_moment_is_real_and_physical(self, small_config):
        moments = lossless_moments(small_config)
        assert lossless_fourth_moment(small_config) == pytest.approx(moments.n2.real)
        assert moments.physical_violations() == []

    def test_lossy_config_rejected(self):
        with pytest.raises(WrongOperationError):
            lossless_moments(make_config(mu=0.8))

    def test_gamma_ceiling(self):
        with pytest.raises(AnalyticDomainError):
            lossless_moments(make_config(gamma=5e-3))

    def test_exact_variant_allowed_beyond_ceiling(self):
        moments = lossless_moments(make_config(gamma=5e-3), KerrVariant.EXACT)
        assert moments.physical_violations() == []


class TestLossyMoments:
    def test_reduces_to_lossless(self, small_config):
        lossy = lossy_moments(small_config)
        lossless = lossless_moments(small_config)
        for name in ("m1", "m2", "n1", "n2"):
            assert rel(getattr(lossy, name), getattr(lossless, name)) < 1e-12

    def test_number_moment_formula(self, small_config):
        cfg = small_config.with_updates(mu=0.7, eta=0.8)
        expected = 0.8 * (
            0.7 * lossless_number_moment(small_config) + 0.3 * math.sinh(cfg.r2) ** 2
        )
        assert lossy_number_moment(cfg) == pytest.approx(expected, rel=1e-12)

    def test_corrected_second_moment_scales_with_transmissivity(self, small_config):
        cfg = small_config.with_updates(mu=0.7, eta=0.8)
        expected = 0.56 * lossless_second_moment(small_config)
        assert rel(lossy_second_moment(cfg), expected) < 1e-12

    def test_first_moment_paths_agree(self, small_config):
        cfg = small_config.with_updates(mu=0.7, eta=0.9)
        verbatim = lossy_first_moment(cfg, MomentPath.VERBATIM)
        assert rel(verbatim, lossy_first_moment(cfg)) < 1e-12

    def test_published_second_moment_differs_under_internal_loss(self, small_config):
        cfg = small_config.with_updates(mu=0.7)
        verbatim = lossy_second_moment(cfg, MomentPath.VERBATIM)
        assert rel(verbatim, lossy_second_moment(cfg)) > 1e-3

    def test_published_second_moment_agrees_without_internal_loss(self, small_config):
        cfg = small_config.with_updates(eta=0.7)
        verbatim = lossy_second_moment(cfg, MomentPath.VERBATIM)
        assert rel(verbatim, lossy_second_moment(cfg)) < 1e-10

    def test_intensity_variance_non_negative(self, small_config):
        for mu, eta in [(0.5, 1.0), (1.0, 0.5), (0.3, 0.3)]:
            moments = lossy_moments(small_config.with_updates(mu=mu, eta=eta))
            assert moments.physical_violations() == []


class TestInternalNumberStats:
    @pytest.mark.parametrize("r1", [0.3, 0.5, 1.0])
    def test_squeezed_vacuum(self, r1):
        stats = internal_number_stats(InternalNumberStatsInputs(alpha=0.0, gamma=0.0, r1=r1))
        expected = math.cosh(r1) ** 2 * math.sinh(r1) ** 2
        assert stats.var1 == pytest.approx(expected, rel=1e-12)
        assert stats.var2 == pytest.approx(expected, rel=1e-12)
        assert stats.cov == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    def test_published_forms_agree_at_gamma_zero(self, alpha):
        inputs = InternalNumberStatsInputs(alpha=alpha, gamma=0.0, r1=0.8)
        printed = printed_internal_number_stats(inputs)
        corrected = internal_number_stats(inputs)
        np.testing.assert_allclose(printed, (corrected.var1, corrected.var2, corrected.cov),
                                   rtol=1e-12)

    def test_verbatim_path(self):
        inputs = InternalNumberStatsInputs(alpha=1.0, gamma=1e-4, r1=0.5)
        stats = internal_number_stats(inputs, MomentPath.VERBATIM)
        assert (stats.var1, stats.var2, stats.cov) == printed_internal_number_stats(inputs)

    def test_covariance_bound(self):
        stats = internal_number_stats(InternalNumberStatsInputs(alpha=1.0, gamma=1e-4, r1=0.8))
        assert stats.cov**2 <= stats.var1 * stats.var2

    def test_gamma_ceiling(self):
        with pytest.raises(AnalyticDomainError):
            internal_number_stats(InternalNumberStatsInputs(alpha=1.0, gamma=1e-2, r1=0.5))

    def test_exact_variant_is_gamma_independent(self):
        base = internal_number_stats(
            InternalNumberStatsInputs(alpha=1.0, gamma=0.0, r1=0.5), variant=KerrVariant.EXACT
        )
        kerr = internal_number_stats(
            InternalNumberStatsInputs(alpha=1.0, gamma=1e-2, r1=0.5), variant=KerrVariant.EXACT
        )
        assert kerr.var1 == pytest.approx(base.var1, rel=1e-12)
        assert kerr.var2 == pytest.approx(base.var2, rel=1e-12)
        assert kerr.cov == pytest.approx(base.cov, rel=1e-12)
