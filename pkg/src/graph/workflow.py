"""LangGraph workflow orchestration for the verification report."""
from langgraph.graph import StateGraph, END
import logging
from ..models.state import VerificationState
from .nodes.grid_builder import create_grid_builder_node
from .nodes.analytic_evaluator import create_analytic_evaluator_node
from .nodes.oracle_evaluator import create_oracle_evaluator_node
from .nodes.comparator import create_comparator_node
from .nodes.report_writer import create_report_writer_node

logger = logging.getLogger(__name__)


def create_verification_workflow(output_path: str, workers: int | None = None):
    """
    Create the LangGraph workflow for analytic-versus-oracle verification.

    Workflow:
    1. build_grid -> Expand the preset into configurations
    2. evaluate_analytic -> Closed forms, re-derived and published
    3. evaluate_oracle -> Fock-space oracle (linearized, plus exact at gamma = 0)
    4. compare -> Relative deltas against thresholds; published-form discrepancies
    5. write_report -> CSVs and markdown summary

    Args:
        output_path: Path of the comparison CSV
        workers: Process count for the evaluation nodes

    Returns:
        Compiled LangGraph workflow
    """
    grid_builder = create_grid_builder_node()
    analytic_evaluator = create_analytic_evaluator_node(workers)
    oracle_evaluator = create_oracle_evaluator_node(workers)
    comparator = create_comparator_node()
    report_writer = create_report_writer_node(output_path)

    workflow = StateGraph(VerificationState)

    workflow.add_node("build_grid", grid_builder)
    workflow.add_node("evaluate_analytic", analytic_evaluator)
    workflow.add_node("evaluate_oracle", oracle_evaluator)
    workflow.add_node("compare", comparator)
    workflow.add_node("write_report", report_writer)

    workflow.set_entry_point("build_grid")

    workflow.add_edge("build_grid", "evaluate_analytic")
    workflow.add_edge("evaluate_analytic", "evaluate_oracle")
    workflow.add_edge("evaluate_oracle", "compare")
    workflow.add_edge("compare", "write_report")
    workflow.add_edge("write_report", END)

    logger.info("Verification workflow created successfully")

    return workflow.compile()


def initial_state(preset: str) -> VerificationState:
    """Empty state for ``preset``."""
    return {
        "preset": preset,
        "grid": [],
        "analytic_results": [],
        "oracle_results": [],
        "verbatim_results": [],
        "comparisons": [],
        "discrepancies": [],
        "bound_checks": [],
        "report": None,
        "output_path": "",
        "errors": [],
        "step_count": 0,
    }
