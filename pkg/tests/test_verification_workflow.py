"""Analytic-versus-oracle verification workflow."""
import math
import pytest
from src.graph.nodes.comparator import check_bounds, compare_point, relative_delta
from src.graph.nodes.grid_builder import build_grid
from src.graph.nodes.report_writer import render_summary, report_paths
from src.graph.workflow import create_verification_workflow, initial_state
from src.models.report import BoundCheck, ComparisonEntry, VerificationReport
from tests.conftest import make_config
from src.utils.csv_utils import read_csv


class TestGrid:
    def test_small_preset(self):
        grid = build_grid("small")
        assert len(grid) == 16
        assert all(cfg.is_lossless and cfg.r1 == cfg.r2 for cfg in grid)
        assert all(cfg.theta2 == math.pi for cfg in grid)

    def test_full_preset_has_loss(self):
        grid = build_grid("full")
        assert len(grid) == 3 * 3 * 2 * 2 * 4
        assert any(not cfg.is_lossless for cfg in grid)

    def test_unknown_preset(self):
        with pytest.raises(ValueError):
            build_grid("huge")


class TestComparison:
    def test_relative_delta_floor(self):
        assert relative_delta(1e-13, 0.0) == pytest.approx(0.1)

    def test_thresholds(self):
        entries = compare_point(
            0,
            {"m1": 1.0, "delta_phi_hd": 2.0, "only_analytic": 1.0},
            {"m1": 1.0 + 1e-9, "delta_phi_hd": 2.0 + 1e-5, "exact_m1": 1.0},
        )
        by_name = {e.quantity: e for e in entries}
        assert set(by_name) == {"m1", "delta_phi_hd", "exact_m1"}
        assert by_name["m1"].passed
        assert not by_name["delta_phi_hd"].passed
        assert by_name["exact_m1"].threshold == 1e-10

    def test_report_verdict(self):
        good = ComparisonEntry(point=0, quantity="m1", analytic=1.0, oracle=1.0,
                               rel_delta=0.0, threshold=1e-8)
        report = VerificationReport(preset="small", grid=[], comparisons=[good])
        assert report.passed
        assert not report.model_copy(update={"errors": ["boom"]}).passed
        assert "**PASS**" in render_summary(report)


class TestBounds:
    def test_checks_both_bounds(self):
        analytic = {"delta_phi_hd": 0.5, "qcrb": 0.7, "qcrb_signal_arm": 0.2, "m1": 1.0}
        checks = check_bounds(3, make_config(), analytic)
        by_bound = {c.bound: c for c in checks}
        assert set(by_bound) == {"qcrb", "qcrb_signal_arm"}
        assert all(c.point == 3 and c.quantity == "delta_phi_hd" for c in checks)
        assert not by_bound["qcrb"].holds
        assert by_bound["qcrb_signal_arm"].holds

    def test_lossy_points_unchecked(self):
        analytic = {"delta_phi_hd": 0.5, "qcrb": 0.7, "qcrb_signal_arm": 0.2}
        assert check_bounds(0, make_config(mu=0.9), analytic) == []

    def test_signal_arm_violation_fails_report(self):
        below_sum = BoundCheck(point=0, quantity="delta_phi_hd", bound="qcrb",
                               delta_phi=0.5, value=0.7, rtol=1e-3)
        report = VerificationReport(preset="small", grid=[], comparisons=[],
                                    bound_checks=[below_sum])
        assert report.passed
        assert report.sum_phase_exceedances == [below_sum]
        assert "Cramér-Rao ordering" in render_summary(report)

        below_arm = below_sum.model_copy(update={"bound": "qcrb_signal_arm"})
        failing = report.model_copy(update={"bound_checks": [below_sum, below_arm]})
        assert failing.bound_violations == [below_arm]
        assert not failing.passed


class TestWorkflow:
    def test_small_preset_passes(self, tmp_path):
        out = tmp_path / "verify_small.csv"
        workflow = create_verification_workflow(str(out))
        state = workflow.invoke(initial_state("small"))
        report: VerificationReport = state["report"]

        assert state["step_count"] == 5
        assert state["errors"] == []
        assert report.passed, [f"{c.point}:{c.quantity}" for c in report.failures]

        comparisons, discrepancies, summary = report_paths(out)
        assert len(read_csv(comparisons)) == len(report.comparisons)
        assert discrepancies.name == "verify_small_discrepancies.csv"
        assert discrepancies.exists()
        assert "**PASS**" in summary.read_text(encoding="utf-8")

        assert report.bound_checks
        assert report.bound_violations == []
        assert [t.non_increasing for t in report.loss_trends] == [False, True, True, True]
        assert "Lossy homodyne trend in r2" in summary.read_text(encoding="utf-8")

    def test_published_number_moment_flagged(self, tmp_path):
        workflow = create_verification_workflow(str(tmp_path / "v.csv"))
        report: VerificationReport = workflow.invoke(initial_state("small"))["report"]
        n1 = [d for d in report.discrepancies if d.quantity == "n1"]
        assert n1
        assert max(d.rel_delta for d in n1) > 1e-3
        m1 = [d for d in report.discrepancies if d.quantity == "m1"]
        assert max(d.rel_delta for d in m1) < 1e-10
