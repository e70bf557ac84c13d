"""Closed-form evaluation node for the verification workflow."""
import logging
from typing import Any
from src.errors import DegenerateStatisticsError, StationaryPointError, Su11Error
from src.models.interferometer import (
    DetectionScheme,
    InterferometerConfig,
    InternalNumberStatsInputs,
    MomentPath,
)
from src.models.report import PointEvaluation
from src.models.state import VerificationState
from src.services.analytic_moments import (
    internal_number_stats,
    lossless_first_moment,
    lossless_moments,
    lossless_number_moment,
    lossless_second_moment,
    lossy_moments,
    printed_internal_number_stats,
)
from src.services.fisher import qcrb, qcrb_from_number_stats, qfi_signal_arm
from src.services.sensitivity import phase_sensitivity
from src.services.sweep_runner import map_points
from src.utils.state_utils import increment_step_count

logger = logging.getLogger(__name__)

PointValues = tuple[dict[str, complex], dict[str, complex]] | str


def analytic_values(cfg: InterferometerConfig) -> dict[str, complex]:
    """Moments, sensitivities, internal statistics and bound from the re-derived forms."""
    moments = lossless_moments(cfg) if cfg.is_lossless else lossy_moments(cfg)
    values: dict[str, complex] = {
        "m1": moments.m1, "m2": moments.m2, "n1": moments.n1, "n2": moments.n2,
    }
    for scheme in DetectionScheme:
        try:
            values[f"delta_phi_{scheme.value}"] = phase_sensitivity(cfg, scheme).delta_phi
        except StationaryPointError:
            pass
    stats = internal_number_stats(InternalNumberStatsInputs.from_config(cfg))
    values.update(var1=stats.var1, var2=stats.var2, cov=stats.cov)
    try:
        values["qcrb"] = qcrb_from_number_stats(stats)
    except DegenerateStatisticsError:
        pass
    try:
        values["qcrb_signal_arm"] = qcrb(qfi_signal_arm(stats))
    except DegenerateStatisticsError:
        pass
    return values


def verbatim_values(cfg: InterferometerConfig) -> dict[str, complex]:
    """The published closed forms evaluated literally."""
    if cfg.is_lossless:
        values: dict[str, complex] = {
            "m1": lossless_first_moment(cfg, MomentPath.VERBATIM),
            "m2": lossless_second_moment(cfg, MomentPath.VERBATIM),
            "n1": lossless_number_moment(cfg, MomentPath.VERBATIM),
        }
    else:
        moments = lossy_moments(cfg, MomentPath.VERBATIM)
        values = {"m1": moments.m1, "m2": moments.m2, "n1": moments.n1}
    var1, var2, cov = printed_internal_number_stats(InternalNumberStatsInputs.from_config(cfg))
    values.update(var1=var1, var2=var2, cov=cov)
    return values


def _evaluate_point(cfg: InterferometerConfig) -> PointValues:
    try:
        return analytic_values(cfg), verbatim_values(cfg)
    except Su11Error as e:
        return f"analytic evaluation failed at {cfg!r}: {e}"


def create_analytic_evaluator_node(workers: int | None = None):
    """
    Create the closed-form evaluation node function.

    Args:
        workers: Process count for the grid

    Returns:
        Node function filling ``analytic_results`` and ``verbatim_results``
    """

    def evaluate_analytic_node(state: VerificationState) -> dict[str, Any]:
        logger.info(f"Evaluating closed forms on {len(state['grid'])} points")
        analytic: list[PointEvaluation] = []
        verbatim: list[PointEvaluation] = []
        errors: list[str] = []
        for index, outcome in enumerate(map_points(_evaluate_point, state["grid"], workers)):
            if isinstance(outcome, str):
                logger.error(outcome)
                errors.append(outcome)
                continue
            analytic.append(PointEvaluation(point=index, values=outcome[0]))
            verbatim.append(PointEvaluation(point=index, values=outcome[1]))
        return {
            "analytic_results": analytic,
            "verbatim_results": verbatim,
            "errors": errors,
            "step_count": increment_step_count(state),
        }

    return evaluate_analytic_node
