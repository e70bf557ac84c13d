"""Report writing node for the verification workflow."""
import logging
from pathlib import Path
from typing import Any
from src.errors import OutputError
from src.models.interferometer import InterferometerConfig
from src.models.report import SIGNAL_ARM_BOUND, SUM_PHASE_BOUND, VerificationReport
from src.models.state import VerificationState
from src.services.figures import loss_compensation_trends
from src.utils.csv_utils import write_csv
from src.utils.state_utils import increment_step_count

logger = logging.getLogger(__name__)

CONFIG_COLUMNS = list(InterferometerConfig.model_fields)


def report_paths(output_path: Path) -> tuple[Path, Path, Path]:
    """Comparison CSV, discrepancy CSV and markdown summary for one report."""
    stem = output_path.with_suffix("")
    return (
        output_path,
        stem.with_name(f"{stem.name}_discrepancies.csv"),
        output_path.with_suffix(".md"),
    )


def _config_cells(grid: list[InterferometerConfig], point: int) -> list[object]:
    cfg = grid[point]
    return [getattr(cfg, name) for name in CONFIG_COLUMNS]


def _bound_lines(report: VerificationReport) -> list[str]:
    lines = [
        "## Cramér-Rao ordering",
        "",
        "Lossless sensitivities against the sum-phase bound and the signal-arm bound",
        "1/(2·sqrt(var1)). Only the signal-arm bound is required to hold.",
        "",
        "| bound | checks | below bound |",
        "|---|---|---|",
    ]
    for bound, below in (
        (SUM_PHASE_BOUND, report.sum_phase_exceedances),
        (SIGNAL_ARM_BOUND, report.bound_violations),
    ):
        total = sum(1 for b in report.bound_checks if b.bound == bound)
        lines.append(f"| {bound} | {total} | {len(below)} |")
    lines.append("")
    for b in report.sum_phase_exceedances:
        lines.append(
            f"- point {b.point}: {b.quantity} = {b.delta_phi!r} < {b.bound} = {b.value!r}"
        )
    if report.sum_phase_exceedances:
        lines.append("")
    return lines


def _trend_lines(report: VerificationReport) -> list[str]:
    lines = [
        "## Lossy homodyne trend in r2",
        "",
        "| loss | path | first | minimum at | last | increasing steps |",
        "|---|---|---|---|---|---|",
    ]
    for t in report.loss_trends:
        defined = t.defined()
        if not defined:
            continue
        lines.append(
            f"| {t.loss_field}={t.loss:g} | {t.path.value} | {defined[0][1]!r} | "
            f"{t.field}={t.argmin:.4f} | {defined[-1][1]!r} | {t.increasing_steps} |"
        )
    lines.append("")
    return lines


def render_summary(report: VerificationReport) -> str:
    """Markdown summary of a report; contains no timestamps."""
    verdict = "PASS" if report.passed else "FAIL"
    lines = [
        f"# Verification report: {report.preset}",
        "",
        f"- Verdict: **{verdict}**",
        f"- Grid points: {len(report.grid)}",
        f"- Comparisons: {len(report.comparisons)}",
        f"- Worst relative delta: {report.worst_delta!r}",
        f"- Failures: {len(report.failures)}",
        f"- Signal-arm bound violations: {len(report.bound_violations)}",
        "",
    ]
    if report.failures:
        lines.extend(["## Failures", "", "| point | quantity | rel. delta | threshold |",
                      "|---|---|---|---|"])
        lines.extend(
            f"| {c.point} | {c.quantity} | {c.rel_delta!r} | {c.threshold!r} |"
            for c in report.failures
        )
        lines.append("")
    if report.errors:
        lines.extend(["## Errors", ""])
        lines.extend(f"- {e}" for e in report.errors)
        lines.append("")
    if report.bound_checks:
        lines.extend(_bound_lines(report))
    if report.loss_trends:
        lines.extend(_trend_lines(report))
    if report.discrepancies:
        worst: dict[str, float] = {}
        for d in report.discrepancies:
            worst[d.quantity] = max(worst.get(d.quantity, 0.0), d.rel_delta)
        lines.extend([
            "## Published closed forms",
            "",
            "Largest relative difference between each literal published expression and",
            "its re-derived counterpart over the grid.",
            "",
            "| quantity | worst rel. delta |",
            "|---|---|",
        ])
        lines.extend(f"| {q} | {worst[q]!r} |" for q in sorted(worst))
        lines.append("")
    return "\n".join(lines)


def write_report(report: VerificationReport, output_path: Path) -> Path:
    """
    Write the comparison CSV, the discrepancy CSV and the markdown summary.

    Args:
        report: Finished report
        output_path: Path of the comparison CSV

    Returns:
        output_path

    Raises:
        OutputError: If any file cannot be written
    """
    comparisons_path, discrepancies_path, summary_path = report_paths(output_path)
    write_csv(
        comparisons_path,
        ["point", *CONFIG_COLUMNS, "quantity", "analytic", "oracle", "rel_delta", "threshold",
         "passed"],
        (
            [c.point, *_config_cells(report.grid, c.point), c.quantity, c.analytic, c.oracle,
             c.rel_delta, c.threshold, c.passed]
            for c in report.comparisons
        ),
    )
    write_csv(
        discrepancies_path,
        ["point", *CONFIG_COLUMNS, "quantity", "verbatim", "corrected", "oracle", "rel_delta"],
        (
            [d.point, *_config_cells(report.grid, d.point), d.quantity, d.verbatim,
             d.corrected, d.oracle, d.rel_delta]
            for d in report.discrepancies
        ),
    )
    try:
        summary_path.write_text(render_summary(report), encoding="utf-8")
    except OSError as e:
        raise OutputError(f"cannot write {summary_path}: {e}") from e
    return output_path


def create_report_writer_node(output_path: str):
    """
    Create the report writing node function.

    Args:
        output_path: Path of the comparison CSV

    Returns:
        Node function producing ``report`` and ``output_path``
    """

    def write_report_node(state: VerificationState) -> dict[str, Any]:
        report = VerificationReport(
            preset=state["preset"],
            grid=state["grid"],
            comparisons=state["comparisons"],
            discrepancies=state["discrepancies"],
            bound_checks=state["bound_checks"],
            loss_trends=loss_compensation_trends(),
            errors=state["errors"],
        )
        path = write_report(report, Path(output_path))
        verdict = "PASS" if report.passed else "FAIL"
        logger.info(
            f"Verification {verdict}: worst relative delta {report.worst_delta:.3e} "
            f"over {len(report.comparisons)} comparisons"
        )
        return {
            "report": report,
            "output_path": str(path),
            "step_count": increment_step_count(state),
        }

    return write_report_node
