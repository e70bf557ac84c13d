"""Fock-space oracle evaluation node for the verification workflow."""
import logging
from typing import Any
from src.errors import DegenerateStatisticsError, StationaryPointError, Su11Error
from src.models.interferometer import (
    DetectionScheme,
    InterferometerConfig,
    KerrVariant,
    ResultSource,
)
from src.models.report import PointEvaluation
from src.models.state import VerificationState
from src.services.fisher import qcrb, qcrb_from_number_stats, qfi_signal_arm
from src.services.fock_oracle import fringe_runs, simulate
from src.services.sensitivity import sensitivity_from_moments
from src.services.sweep_runner import map_points
from src.utils.state_utils import increment_step_count

logger = logging.getLogger(__name__)

EXACT_PREFIX = "exact_"


def oracle_values(cfg: InterferometerConfig) -> dict[str, complex]:
    """
    Linearized-oracle counterparts of ``analytic_values``.

    At gamma = 0 the exact-Kerr oracle moments are added under ``exact_*`` keys.
    """
    runs = fringe_runs(cfg, KerrVariant.LINEARIZED)
    moments, stats = runs.centre.moments, runs.centre.stats
    values: dict[str, complex] = {
        "m1": moments.m1, "m2": moments.m2, "n1": moments.n1, "n2": moments.n2,
    }
    for scheme in DetectionScheme:
        try:
            result = sensitivity_from_moments(
                moments, runs.derivative(scheme), scheme, ResultSource.ORACLE
            )
            values[f"delta_phi_{scheme.value}"] = result.delta_phi
        except StationaryPointError:
            pass
    values.update(var1=stats.var1, var2=stats.var2, cov=stats.cov)
    try:
        values["qcrb"] = qcrb_from_number_stats(stats)
    except DegenerateStatisticsError:
        pass
    try:
        values["qcrb_signal_arm"] = qcrb(qfi_signal_arm(stats))
    except DegenerateStatisticsError:
        pass

    if cfg.gamma == 0.0:
        exact = simulate(cfg, KerrVariant.EXACT).moments
        for name in ("m1", "m2", "n1", "n2"):
            values[EXACT_PREFIX + name] = getattr(exact, name)
    return values


def _evaluate_point(cfg: InterferometerConfig) -> dict[str, complex] | str:
    try:
        return oracle_values(cfg)
    except Su11Error as e:
        return f"oracle evaluation failed at {cfg!r}: {e}"


def create_oracle_evaluator_node(workers: int | None = None):
    """
    Create the oracle evaluation node function.

    Args:
        workers: Process count for the grid

    Returns:
        Node function filling ``oracle_results``
    """

    def evaluate_oracle_node(state: VerificationState) -> dict[str, Any]:
        logger.info(f"Running the Fock-space oracle on {len(state['grid'])} points")
        results: list[PointEvaluation] = []
        errors: list[str] = []
        for index, outcome in enumerate(map_points(_evaluate_point, state["grid"], workers)):
            if isinstance(outcome, str):
                logger.error(outcome)
                errors.append(outcome)
                continue
            results.append(PointEvaluation(point=index, values=outcome))
        return {
            "oracle_results": results,
            "errors": errors,
            "step_count": increment_step_count(state),
        }

    return evaluate_oracle_node
