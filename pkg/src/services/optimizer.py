"""Search for the phase that minimizes the sensitivity."""
import logging
import math
import numpy as np
from scipy.optimize import minimize_scalar
from config.settings import get_settings
from src.errors import OptimumError
from src.models.interferometer import DetectionScheme, Engine, InterferometerConfig
from src.models.results import OptimumResult
from src.models.sweep import Quantity
from src.services.kerr import validate_config
from src.services.sweep_runner import evaluate_many, evaluate_quantity

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi


def sensitivity_quantity(cfg: InterferometerConfig, scheme: DetectionScheme) -> Quantity:
    """Lossless or lossy sensitivity quantity matching cfg."""
    if scheme is DetectionScheme.SI:
        return Quantity.DELTA_PHI_SI if cfg.is_lossless else Quantity.DELTA_PHI_SI_LOSSY
    return Quantity.DELTA_PHI_HD if cfg.is_lossless else Quantity.DELTA_PHI_HD_LOSSY


def find_optimum(
    cfg: InterferometerConfig,
    scheme: DetectionScheme,
    engine: Engine = Engine.ANALYTIC,
    grid_size: int | None = None,
    workers: int | None = None,
) -> OptimumResult:
    """
    Minimize delta phi over phi in [0, 2π).

    A uniform grid locates the best cell, then a golden-section search refines
    it inside the bracket formed by the neighbouring grid points. cfg.phi is
    ignored.

    Args:
        cfg: Configuration; lossy configs use the lossy sensitivity
        scheme: SI or HD
        engine: Analytic or oracle evaluation
        grid_size: Number of grid points; defaults to the configured size
        workers: Process count for the grid scan

    Returns:
        OptimumResult with phi_star reduced into [0, 2π)

    Raises:
        OptimumError: If every grid point is stationary or the landscape is flat
    """
    validate_config(cfg)
    settings = get_settings()
    grid_size = settings.optimum_grid if grid_size is None else grid_size
    quantity = sensitivity_quantity(cfg, scheme)
    grid = np.linspace(0.0, TWO_PI, grid_size, endpoint=False)

    tasks = [(cfg.with_updates(phi=float(p)), quantity, engine) for p in grid]
    raw = evaluate_many(tasks, workers)
    values = np.array([math.inf if v is None else v for v in raw])
    stationary = int(np.sum(~np.isfinite(values)))
    if stationary == grid_size:
        raise OptimumError(f"every phi is a stationary point for {quantity.value}")

    finite = values[np.isfinite(values)]
    if finite.max() - finite.min() <= settings.optimum_tol * finite.min():
        raise OptimumError(f"flat landscape: {quantity.value} does not depend on phi")

    best = int(np.argmin(values))
    phi_best, value_best = float(grid[best]), float(values[best])
    step = TWO_PI / grid_size
    neighbours = values[(best - 1) % grid_size], values[(best + 1) % grid_size]

    def objective(phi: float) -> float:
        value = evaluate_quantity(cfg.with_updates(phi=phi), quantity, engine)
        return math.inf if value is None else value

    if all(np.isfinite(neighbours)):
        try:
            refined = minimize_scalar(
                objective,
                bracket=(phi_best - step, phi_best, phi_best + step),
                method="golden",
                options={"xtol": settings.optimum_tol},
            )
            if refined.fun < value_best:
                phi_best, value_best = float(refined.x), float(refined.fun)
        except ValueError as e:
            logger.debug(f"Golden refinement skipped: {e}")

    phi_star = phi_best % TWO_PI
    if phi_star >= TWO_PI:
        phi_star = 0.0
    logger.info(f"Optimum {quantity.value}: phi*={phi_star:.6f}, delta_phi*={value_best:.6e}")
    return OptimumResult(
        phi_star=phi_star,
        delta_phi_star=value_best,
        scheme=scheme,
        grid_points=grid_size,
        stationary_points=stationary,
    )
