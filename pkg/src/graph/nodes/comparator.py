"""Comparison node for the verification workflow."""
import logging
from typing import Any
from config.settings import get_settings
from src.models.interferometer import DetectionScheme, InterferometerConfig
from src.models.report import (
    SIGNAL_ARM_BOUND,
    SUM_PHASE_BOUND,
    BoundCheck,
    ComparisonEntry,
    DiscrepancyEntry,
    PointEvaluation,
)
from src.models.state import VerificationState
from src.utils.state_utils import increment_step_count
from .oracle_evaluator import EXACT_PREFIX

logger = logging.getLogger(__name__)

RELATIVE_FLOOR = 1e-12
MOMENT_QUANTITIES = ("m1", "m2", "n1", "n2", "var1", "var2", "cov")


def relative_delta(value: complex, reference: complex) -> float:
    """|value - reference| / max(|reference|, 1e-12)."""
    return abs(value - reference) / max(abs(reference), RELATIVE_FLOOR)


def _by_point(results: list[PointEvaluation]) -> dict[int, dict[str, complex]]:
    return {result.point: result.values for result in results}


def compare_point(
    point: int, analytic: dict[str, complex], oracle: dict[str, complex]
) -> list[ComparisonEntry]:
    """
    Compare every quantity both engines produced at one point.

    Moments and statistics use the moment tolerance, sensitivities and the
    bound the sensitivity tolerance. ``exact_*`` oracle values are compared
    with the linearized oracle at the gamma-zero tolerance.
    """
    settings = get_settings()
    entries = []
    for quantity in sorted(set(analytic) & set(oracle)):
        threshold = (
            settings.moment_tolerance
            if quantity in MOMENT_QUANTITIES
            else settings.sensitivity_tolerance
        )
        entries.append(ComparisonEntry(
            point=point,
            quantity=quantity,
            analytic=analytic[quantity],
            oracle=oracle[quantity],
            rel_delta=relative_delta(analytic[quantity], oracle[quantity]),
            threshold=threshold,
        ))
    for quantity in sorted(q for q in oracle if q.startswith(EXACT_PREFIX)):
        linearized = oracle[quantity.removeprefix(EXACT_PREFIX)]
        entries.append(ComparisonEntry(
            point=point,
            quantity=quantity,
            analytic=linearized,
            oracle=oracle[quantity],
            rel_delta=relative_delta(linearized, oracle[quantity]),
            threshold=settings.gamma_zero_tolerance,
        ))
    return entries


def check_bounds(
    point: int, cfg: InterferometerConfig, analytic: dict[str, complex]
) -> list[BoundCheck]:
    """
    Lossless sensitivities against the sum-phase and signal-arm bounds.

    Lossy points carry no bound and give no checks.
    """
    if not cfg.is_lossless:
        return []
    rtol = get_settings().bound_rtol
    checks = []
    for scheme in DetectionScheme:
        quantity = f"delta_phi_{scheme.value}"
        if quantity not in analytic:
            continue
        for bound in (SUM_PHASE_BOUND, SIGNAL_ARM_BOUND):
            if bound in analytic:
                checks.append(BoundCheck(
                    point=point,
                    quantity=quantity,
                    bound=bound,
                    delta_phi=analytic[quantity].real,
                    value=analytic[bound].real,
                    rtol=rtol,
                ))
    return checks


def create_comparator_node():
    """
    Create the comparison node function.

    Returns:
        Node function filling ``comparisons``, ``discrepancies`` and ``bound_checks``
    """

    def compare_node(state: VerificationState) -> dict[str, Any]:
        analytic = _by_point(state["analytic_results"])
        oracle = _by_point(state["oracle_results"])
        verbatim = _by_point(state["verbatim_results"])

        comparisons: list[ComparisonEntry] = []
        for point in sorted(set(analytic) & set(oracle)):
            comparisons.extend(compare_point(point, analytic[point], oracle[point]))

        discrepancies: list[DiscrepancyEntry] = []
        for point in sorted(set(verbatim) & set(analytic)):
            for quantity, printed in sorted(verbatim[point].items()):
                corrected = analytic[point][quantity]
                discrepancies.append(DiscrepancyEntry(
                    point=point,
                    quantity=quantity,
                    verbatim=printed,
                    corrected=corrected,
                    oracle=oracle.get(point, {}).get(quantity),
                    rel_delta=relative_delta(printed, corrected),
                ))

        bound_checks: list[BoundCheck] = []
        for point in sorted(analytic):
            bound_checks.extend(check_bounds(point, state["grid"][point], analytic[point]))

        failed = sum(1 for c in comparisons if not c.passed)
        logger.info(f"Compared {len(comparisons)} values, {failed} above threshold")
        threshold = get_settings().moment_tolerance
        flagged = sum(1 for d in discrepancies if d.rel_delta > threshold)
        if flagged:
            logger.warning(
                f"{flagged} published closed-form values differ from the re-derived ones"
            )
        below = sum(1 for b in bound_checks if not b.holds and b.bound == SUM_PHASE_BOUND)
        if below:
            logger.warning(f"{below} sensitivities fall below the sum-phase bound")
        violations = sum(1 for b in bound_checks if not b.holds and b.bound == SIGNAL_ARM_BOUND)
        if violations:
            logger.error(f"{violations} sensitivities fall below the signal-arm bound")
        return {
            "comparisons": comparisons,
            "discrepancies": discrepancies,
            "bound_checks": bound_checks,
            "step_count": increment_step_count(state),
        }

    return compare_node
