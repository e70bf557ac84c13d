"""Optimal-phase search."""
import math
import pytest
from src.errors import OptimumError
from src.models.interferometer import DetectionScheme
from src.models.sweep import Quantity
from src.services.optimizer import find_optimum, sensitivity_quantity
from src.services.sensitivity import phase_sensitivity_hd
from tests.conftest import make_config


def test_quantity_follows_loss(small_config):
    assert sensitivity_quantity(small_config, DetectionScheme.SI) is Quantity.DELTA_PHI_SI
    lossy = small_config.with_updates(eta=0.9)
    assert sensitivity_quantity(lossy, DetectionScheme.HD) is Quantity.DELTA_PHI_HD_LOSSY


def test_homodyne_optimum_near_figure_phase(figure_cfg):
    result = find_optimum(figure_cfg, DetectionScheme.HD)
    assert 5.9 <= result.phi_star <= 6.19
    assert result.delta_phi_star <= phase_sensitivity_hd(figure_cfg).delta_phi
    assert result.grid_points == 2000


def test_result_range(small_config):
    result = find_optimum(small_config, DetectionScheme.SI, grid_size=200)
    assert 0.0 <= result.phi_star < 2 * math.pi
    assert result.delta_phi_star > 0.0


def test_refinement_not_worse_than_grid(small_config):
    coarse = find_optimum(small_config, DetectionScheme.HD, grid_size=50)
    for phi in [2 * math.pi * k / 50 for k in range(50)]:
        value = phase_sensitivity_hd(small_config.with_updates(phi=phi)).delta_phi
        assert coarse.delta_phi_star <= value * (1 + 1e-12)


def test_ignores_configured_phase(small_config):
    a = find_optimum(small_config, DetectionScheme.HD, grid_size=100)
    b = find_optimum(small_config.with_updates(phi=4.0), DetectionScheme.HD, grid_size=100)
    assert a == b


def test_all_stationary():
    with pytest.raises(OptimumError):
        find_optimum(make_config(r1=0.0, r2=0.0), DetectionScheme.SI, grid_size=32)
