"""Error-propagation sensitivities and the reference limits."""
import math
import pytest
from src.errors import DomainError, StationaryPointError, WrongOperationError
from src.models.interferometer import DetectionScheme, KerrVariant, MomentPath, ResultSource
from src.models.sweep import AxisSpec
from src.services.fisher import qcrb_for_config, qcrb_signal_arm, qcrb_signal_arm_for_config
from src.services.optimizer import find_optimum
from src.services.sensitivity import (
    error_propagation,
    hd_lossy_trend,
    hl,
    phase_sensitivity,
    phase_sensitivity_hd,
    phase_sensitivity_hd_lossy,
    phase_sensitivity_si,
    phase_sensitivity_si_lossy,
    snl,
)
from tests.conftest import figure_config, make_config


R2_POINTS = AxisSpec(name="r2", start=2.0, stop=3.0, count=50).values()


@pytest.fixture(scope="module")
def figure_optimum():
    return find_optimum(figure_config(), DetectionScheme.HD)


class TestLimits:
    def test_snl(self):
        assert snl(10000.0) == pytest.approx(0.01)

    def test_hl(self):
        assert hl(100.0) == pytest.approx(0.01)

    @pytest.mark.parametrize("limit", [snl, hl])
    def test_non_positive_photon_number(self, limit):
        with pytest.raises(DomainError):
            limit(0.0)


class TestErrorPropagation:
    def test_ratio(self):
        assert error_propagation(2.0, -4.0) == pytest.approx(0.5)

    def test_negative_std(self):
        with pytest.raises(DomainError):
            error_propagation(-1.0, 1.0)

    def test_zero_slope(self):
        with pytest.raises(StationaryPointError):
            error_propagation(1.0, 0.0)

    def test_noiseless_observable(self):
        assert error_propagation(0.0, 3.0) == 0.0


class TestSingleIntensity:
    def test_result_fields(self, small_config):
        result = phase_sensitivity_si(small_config)
        assert result.scheme is DetectionScheme.SI
        assert result.source is ResultSource.ANALYTIC
        assert result.delta_phi == pytest.approx(result.std_dev / result.derivative_mag)

    def test_no_squeezing_is_stationary(self):
        with pytest.raises(StationaryPointError):
            phase_sensitivity_si(make_config(r1=0.0, r2=0.0))

    def test_lossy_config_rejected(self):
        with pytest.raises(WrongOperationError):
            phase_sensitivity_si(make_config(eta=0.9))

    @pytest.mark.parametrize("phi", [0.5, 2.0, 4.0, 6.15])
    def test_kerr_barely_changes_intensity_sensitivity(self, phi):
        kerr = phase_sensitivity_si(figure_config(phi=phi)).delta_phi
        coherent = phase_sensitivity_si(figure_config(phi=phi, gamma=0.0)).delta_phi
        assert abs(kerr / coherent - 1.0) <= 1e-3

    def test_lossy_reduces_to_lossless(self, small_config):
        lossy = phase_sensitivity_si_lossy(small_config).delta_phi
        assert lossy == pytest.approx(phase_sensitivity_si(small_config).delta_phi, rel=1e-12)


class TestHomodyne:
    def test_kerr_seed_beats_coherent_seed(self, figure_cfg):
        kerr = phase_sensitivity_hd(figure_cfg).delta_phi
        coherent = phase_sensitivity_hd(figure_cfg.with_updates(gamma=0.0)).delta_phi
        assert kerr < coherent

    def test_decreasing_in_gamma(self):
        values = [
            phase_sensitivity_hd(figure_config(gamma=gamma)).delta_phi
            for gamma in (0.0, 2.5e-7, 5e-7, 7.5e-7, 1e-6)
        ]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_below_shot_noise(self, figure_cfg):
        assert phase_sensitivity_hd(figure_cfg).delta_phi < snl(figure_cfg.alpha**2)

    def test_not_below_cramer_rao_bound(self, figure_cfg):
        assert phase_sensitivity_hd(figure_cfg).delta_phi >= qcrb_for_config(figure_cfg)

    def test_beats_sum_phase_bound_at_small_alpha(self):
        cfg = make_config(alpha=2.0, gamma=0.0, r1=0.3, r2=0.3, phi=5.9)
        delta_phi = phase_sensitivity_hd(cfg).delta_phi
        assert delta_phi == pytest.approx(0.62085, rel=1e-3)
        assert qcrb_for_config(cfg) == pytest.approx(0.70244, rel=1e-3)
        assert delta_phi < qcrb_for_config(cfg)
        assert delta_phi > qcrb_signal_arm_for_config(cfg)

    def test_normalized_quadrature_gives_same_ratio(self, small_config):
        plain = phase_sensitivity_hd(small_config)
        normalized = phase_sensitivity_hd(small_config, normalized=True)
        assert normalized.delta_phi == pytest.approx(plain.delta_phi, rel=1e-12)
        assert normalized.std_dev == pytest.approx(plain.std_dev / math.sqrt(2.0))


class TestCramerRaoOrdering:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("gamma", [0.0, 1e-4, 1e-3])
    @pytest.mark.parametrize("r", [0.3, 0.8])
    def test_signal_arm_bound_holds(self, alpha, gamma, r):
        base = make_config(alpha=alpha, gamma=gamma, r1=r, r2=r)
        bound = qcrb_signal_arm_for_config(base)
        checked = 0
        for phi in (0.1, 2.0, 4.0, 5.9):
            cfg = base.with_updates(phi=phi)
            for scheme in DetectionScheme:
                try:
                    delta_phi = phase_sensitivity(cfg, scheme).delta_phi
                except StationaryPointError:
                    continue
                assert delta_phi >= bound * (1.0 - 1e-3), (phi, scheme)
                checked += 1
        assert checked > 0

    @pytest.mark.parametrize("alpha", [0.5, 2.0])
    @pytest.mark.parametrize("gamma", [1e-3, 1e-2])
    def test_signal_arm_bound_holds_for_exact_kerr(self, alpha, gamma):
        bound = qcrb_signal_arm(alpha, gamma, 0.8, KerrVariant.EXACT)
        for phi in (0.1, 2.0, 4.0, 5.9):
            cfg = make_config(alpha=alpha, gamma=gamma, r1=0.8, r2=0.8, phi=phi)
            for evaluate in (phase_sensitivity_si, phase_sensitivity_hd):
                try:
                    delta_phi = evaluate(cfg, KerrVariant.EXACT).delta_phi
                except StationaryPointError:
                    continue
                assert delta_phi >= bound * (1.0 - 1e-9)

    def test_signal_arm_bound_is_lossless_only(self):
        with pytest.raises(WrongOperationError):
            qcrb_signal_arm_for_config(make_config(mu=0.9))


class TestLossyHomodyne:
    def test_reduces_to_lossless(self, small_config):
        lossy = phase_sensitivity_hd_lossy(small_config).delta_phi
        assert lossy == pytest.approx(phase_sensitivity_hd(small_config).delta_phi, rel=1e-10)

    @pytest.mark.parametrize("field", ["mu", "eta"])
    def test_loss_degrades_sensitivity(self, figure_cfg, field):
        lossless = phase_sensitivity_hd(figure_cfg).delta_phi
        lossy = phase_sensitivity_hd_lossy(figure_cfg.with_updates(**{field: 0.7})).delta_phi
        assert lossy > lossless

    @pytest.mark.parametrize("field", ["mu", "eta"])
    def test_loss_degrades_sensitivity_at_optimal_phase(self, figure_optimum, field):
        lossless = figure_optimum.delta_phi_star
        at_lossless_optimum = figure_config(phi=figure_optimum.phi_star, **{field: 0.7})
        assert phase_sensitivity_hd_lossy(at_lossless_optimum).delta_phi > lossless
        lossy_optimum = find_optimum(figure_config(**{field: 0.7}), DetectionScheme.HD)
        assert lossy_optimum.delta_phi_star > lossless

    def test_published_path_agrees_without_internal_loss(self, small_config):
        cfg = small_config.with_updates(eta=0.8)
        verbatim = phase_sensitivity_hd_lossy(cfg, MomentPath.VERBATIM).delta_phi
        assert verbatim == pytest.approx(phase_sensitivity_hd_lossy(cfg).delta_phi, rel=1e-8)

    def test_dispatch(self, small_config):
        cfg = small_config.with_updates(mu=0.9)
        assert phase_sensitivity(cfg, DetectionScheme.HD) == phase_sensitivity_hd_lossy(cfg)
        assert phase_sensitivity(small_config, DetectionScheme.SI) == phase_sensitivity_si(
            small_config
        )


class TestLossTrendInR2:
    @pytest.mark.parametrize("path", list(MomentPath))
    def test_external_loss_non_increasing(self, path):
        trend = hd_lossy_trend(figure_config(eta=0.7), "r2", R2_POINTS, path)
        assert trend.loss_field == "eta"
        assert trend.non_increasing

    def test_internal_loss_published_forms_non_increasing(self):
        trend = hd_lossy_trend(figure_config(mu=0.7), "r2", R2_POINTS, MomentPath.VERBATIM)
        assert trend.non_increasing

    def test_internal_loss_corrected_forms_have_shallow_minimum(self):
        trend = hd_lossy_trend(figure_config(mu=0.7), "r2", R2_POINTS)
        assert trend.loss_field == "mu"
        assert trend.delta_phi[0] == pytest.approx(0.0101359, rel=1e-3)
        assert trend.delta_phi[-1] == pytest.approx(0.0101809, rel=1e-3)
        assert min(trend.delta_phi) == pytest.approx(0.0101284, rel=1e-3)
        assert 2.05 < trend.argmin < 2.25
        assert trend.increasing_steps >= 40
        assert trend.delta_phi[-1] > trend.delta_phi[0]
