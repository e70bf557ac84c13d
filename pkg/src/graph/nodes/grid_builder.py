"""Grid construction node for the verification workflow."""
import itertools
import logging
import math
from typing import Any
from src.models.interferometer import InterferometerConfig
from src.models.state import VerificationState
from src.utils.state_utils import increment_step_count

logger = logging.getLogger(__name__)

LOSSLESS = [(1.0, 1.0)]
LOSS_PAIRS = [(1.0, 1.0), (0.7, 1.0), (1.0, 0.7), (0.7, 0.7)]

PRESETS: dict[str, dict[str, list[Any]]] = {
    "small": {
        "alpha": [0.5, 1.0],
        "gamma": [0.0, 1e-4],
        "r": [0.3, 0.8],
        "phi": [0.1, 5.9],
        "loss": LOSSLESS,
    },
    "full": {
        "alpha": [0.5, 1.0, 2.0],
        "gamma": [0.0, 1e-4, 1e-3],
        "r": [0.3, 0.8],
        "phi": [0.1, 5.9],
        "loss": LOSS_PAIRS,
    },
}


def build_grid(preset: str) -> list[InterferometerConfig]:
    """
    Expand a preset into configurations with r1 = r2, theta1 = 0 and theta2 = π.

    Args:
        preset: ``small`` or ``full``

    Returns:
        Configurations in a fixed order

    Raises:
        ValueError: If the preset is unknown
    """
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; expected one of {sorted(PRESETS)}")
    axes = PRESETS[preset]
    return [
        InterferometerConfig(
            alpha=alpha, gamma=gamma, r1=r, r2=r, theta1=0.0, theta2=math.pi,
            phi=phi, mu=mu, eta=eta,
        )
        for alpha, gamma, r, phi, (mu, eta) in itertools.product(
            axes["alpha"], axes["gamma"], axes["r"], axes["phi"], axes["loss"]
        )
    ]


def create_grid_builder_node():
    """
    Create the grid construction node function.

    Returns:
        Node function that fills ``grid`` from ``preset``
    """

    def build_grid_node(state: VerificationState) -> dict[str, Any]:
        grid = build_grid(state["preset"])
        logger.info(f"Verification preset {state['preset']!r}: {len(grid)} grid points")
        return {"grid": grid, "step_count": increment_step_count(state)}

    return build_grid_node
