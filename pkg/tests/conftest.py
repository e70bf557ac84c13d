"""Shared fixtures."""
import math
import pytest
from src.models.interferometer import InterferometerConfig

FIGURE_BASE = {
    "alpha": 100.0,
    "gamma": 1e-6,
    "r1": 2.0,
    "r2": 2.0,
    "theta1": 0.0,
    "theta2": math.pi,
    "phi": 6.15,
    "mu": 1.0,
    "eta": 1.0,
}

SMALL_BASE = {
    "alpha": 1.0,
    "gamma": 1e-4,
    "r1": 0.5,
    "r2": 0.5,
    "theta1": 0.0,
    "theta2": math.pi,
    "phi": 0.3,
    "mu": 1.0,
    "eta": 1.0,
}


def make_config(**changes: float) -> InterferometerConfig:
    """Small oracle-reachable configuration with selected fields replaced."""
    return InterferometerConfig(**{**SMALL_BASE, **changes})


def figure_config(**changes: float) -> InterferometerConfig:
    """The configuration the published figures use, with selected fields replaced."""
    return InterferometerConfig(**{**FIGURE_BASE, **changes})


@pytest.fixture
def small_config() -> InterferometerConfig:
    return make_config()


@pytest.fixture
def figure_cfg() -> InterferometerConfig:
    return figure_config()
