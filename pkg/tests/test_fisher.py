"""Quantum Fisher information and the Cramér-Rao bound."""
import math
import pytest
from src.errors import DegenerateStatisticsError, DomainError, WrongOperationError
from src.models.interferometer import InternalNumberStatsInputs, KerrVariant
from src.models.moments import NumberStats
from src.services.analytic_moments import internal_number_stats
from src.services.fisher import (
    qcrb,
    qcrb_coherent,
    qcrb_for_config,
    qcrb_from_number_stats,
    qcrb_kerr_seed,
    qcrb_signal_arm,
    qfi_from_number_stats,
    qfi_signal_arm,
)
from tests.conftest import figure_config


class TestFromStatistics:
    def test_fisher_information(self):
        stats = NumberStats(var1=2.0, var2=3.0, cov=1.0)
        assert qfi_from_number_stats(stats) == pytest.approx(20.0 / 3.0)

    def test_bound_forms_agree(self):
        stats = NumberStats(var1=2.0, var2=3.0, cov=1.0)
        assert qcrb_from_number_stats(stats) == pytest.approx(qcrb(qfi_from_number_stats(stats)))
        assert qcrb_from_number_stats(stats) == pytest.approx(0.5 * math.sqrt(3.0 / 5.0))

    def test_non_positive_information(self):
        with pytest.raises(DomainError):
            qcrb(0.0)

    def test_small_statistics_are_not_degenerate(self):
        stats = NumberStats(var1=1e-7, var2=1e-7, cov=0.0)
        assert qfi_from_number_stats(stats) == pytest.approx(2e-7, rel=1e-12)

    def test_all_zero_statistics_are_degenerate(self):
        with pytest.raises(DegenerateStatisticsError):
            qfi_from_number_stats(NumberStats(var1=0.0, var2=0.0, cov=0.0))

    def test_squeezed_vacuum_is_degenerate(self):
        stats = internal_number_stats(InternalNumberStatsInputs(alpha=0.0, gamma=0.0, r1=0.5))
        with pytest.raises(DegenerateStatisticsError):
            qfi_from_number_stats(stats)
        with pytest.raises(DegenerateStatisticsError):
            qcrb_from_number_stats(stats)

    def test_covariance_bound_enforced(self):
        with pytest.raises(ValueError):
            NumberStats(var1=1.0, var2=1.0, cov=2.0)


class TestSeededBound:
    @pytest.mark.parametrize("alpha, r1", [(1.0, 0.5), (3.0, 1.0), (100.0, 2.0)])
    def test_coherent_seed_closed_form(self, alpha, r1):
        expected = 1.0 / (math.sinh(2.0 * r1) * math.sqrt(alpha**2 + 1.0))
        assert qcrb_coherent(alpha, r1) == pytest.approx(expected, rel=1e-9)

    def test_kerr_seed_beats_coherent_seed(self):
        assert qcrb_kerr_seed(100.0, 1e-6, 2.0) < qcrb_coherent(100.0, 2.0)

    def test_exact_kerr_statistics_leave_bound_unchanged(self):
        exact = qcrb_kerr_seed(1.0, 1e-2, 0.5, variant=KerrVariant.EXACT)
        assert exact == pytest.approx(qcrb_coherent(1.0, 0.5), rel=1e-12)

    def test_for_config(self, figure_cfg):
        assert qcrb_for_config(figure_cfg) == qcrb_kerr_seed(100.0, 1e-6, 2.0)

    def test_lossy_config_rejected(self):
        with pytest.raises(WrongOperationError):
            qcrb_for_config(figure_config(mu=0.9))


class TestSignalArm:
    def test_fisher_information(self):
        assert qfi_signal_arm(NumberStats(var1=2.0, var2=3.0, cov=1.0)) == 8.0

    def test_no_fluctuations(self):
        with pytest.raises(DegenerateStatisticsError):
            qfi_signal_arm(NumberStats(var1=0.0, var2=1.0, cov=0.0))

    @pytest.mark.parametrize("alpha, r1", [(0.5, 0.3), (2.0, 0.3), (100.0, 2.0)])
    def test_coherent_seed_closed_form(self, alpha, r1):
        var1 = math.cosh(r1) ** 2 * (alpha**2 * math.cosh(2 * r1) + math.sinh(r1) ** 2)
        expected = 1.0 / (2.0 * math.sqrt(var1))
        assert qcrb_signal_arm(alpha, 0.0, r1) == pytest.approx(expected, rel=1e-12)

    def test_below_sum_phase_bound_at_small_alpha(self):
        assert qcrb_signal_arm(2.0, 0.0, 0.3) == pytest.approx(0.21754, rel=1e-4)
        assert qcrb_signal_arm(2.0, 0.0, 0.3) < qcrb_kerr_seed(2.0, 0.0, 0.3)
