"""Sweep specifications and grid evaluation."""
import math
import pytest
from pydantic import ValidationError
from src.errors import WrongOperationError
from src.models.interferometer import Engine
from src.models.sweep import AxisSpec, ExperimentFile, Quantity, SweepSpec
from src.services.sensitivity import phase_sensitivity_hd
from src.services.sweep_runner import (
    evaluate_quantity,
    grid_points,
    map_points,
    run_sweep,
    sweep_table,
)
from tests.conftest import make_config


def phi_axis(count: int = 5) -> AxisSpec:
    return AxisSpec(name="phi", start=0.1, stop=0.5, count=count)


def square(x: int) -> int:
    return x * x


class TestAxes:
    def test_half_open_grid(self):
        axis = AxisSpec(name="phi", start=0.0, stop=2 * math.pi, count=4, endpoint=False)
        assert axis.values() == pytest.approx([0.0, math.pi / 2, math.pi, 3 * math.pi / 2])

    def test_unknown_parameter(self):
        with pytest.raises(ValidationError):
            AxisSpec(name="omega", start=0.0, stop=1.0, count=3)

    def test_single_point_rejected(self):
        with pytest.raises(ValidationError):
            AxisSpec(name="phi", start=0.0, stop=1.0, count=1)

    def test_lexicographic_order(self):
        axes = [
            AxisSpec(name="mu", start=0.5, stop=1.0, count=2),
            AxisSpec(name="phi", start=0.0, stop=2.0, count=3),
        ]
        points = grid_points(axes)
        assert [(p["mu"], p["phi"]) for p in points] == [
            (0.5, 0.0), (0.5, 1.0), (0.5, 2.0), (1.0, 0.0), (1.0, 1.0), (1.0, 2.0),
        ]


class TestSweepSpec:
    def test_quantity_and_engine_parsing(self, small_config):
        spec = SweepSpec(base=small_config, axis1=phi_axis(), quantity="delta-phi-hd",
                         engine="oracle_linearized")
        assert spec.quantity is Quantity.DELTA_PHI_HD
        assert spec.engine is Engine.ORACLE_LINEARIZED

    def test_same_axis_twice(self, small_config):
        with pytest.raises(ValidationError):
            SweepSpec(base=small_config, axis1=phi_axis(), axis2=phi_axis(), quantity="snl")

    def test_oracle_amplitude_ceiling(self, figure_cfg):
        with pytest.raises(ValidationError):
            SweepSpec(base=figure_cfg, axis1=phi_axis(), quantity="delta_phi_hd",
                      engine="oracle-exact")

    def test_oracle_needs_supported_quantity(self, small_config):
        with pytest.raises(ValidationError):
            SweepSpec(base=small_config, axis1=phi_axis(), quantity="n_kerr",
                      engine="oracle-exact")

    def test_experiment_without_sweep(self, small_config):
        with pytest.raises(ValueError):
            ExperimentFile(interferometer=small_config).sweep_spec()


class TestEvaluation:
    def test_stationary_point_gives_none(self):
        cfg = make_config(r1=0.0, r2=0.0)
        assert evaluate_quantity(cfg, Quantity.DELTA_PHI_SI) is None

    def test_oracle_lossless_only(self):
        with pytest.raises(WrongOperationError):
            evaluate_quantity(make_config(mu=0.9), Quantity.DELTA_PHI_SI, Engine.ORACLE_EXACT)

    def test_reference_lines(self, figure_cfg):
        assert evaluate_quantity(figure_cfg, Quantity.N_CS) == pytest.approx(1e4)
        assert evaluate_quantity(figure_cfg, Quantity.SNL) == pytest.approx(
            1.0 / math.sqrt(10004.0004)
        )

    @pytest.mark.parametrize("workers", [2, 8])
    def test_map_points_serial_and_parallel(self, workers):
        items = list(range(10))
        assert map_points(square, items, workers=1) == map_points(square, items, workers=workers)


class TestRunSweep:
    def test_rows_match_direct_evaluation(self, small_config):
        spec = SweepSpec(base=small_config, axis1=phi_axis(), quantity="delta_phi_hd")
        rows = run_sweep(spec)
        assert [row.point["phi"] for row in rows] == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])
        for row in rows:
            expected = phase_sensitivity_hd(small_config.with_updates(phi=row.point["phi"]))
            assert row.value == expected.delta_phi

    @pytest.mark.parametrize("workers", [2, 8])
    def test_worker_count_does_not_change_results(self, small_config, workers):
        spec = SweepSpec(
            base=small_config,
            axis1=phi_axis(),
            axis2=AxisSpec(name="r2", start=0.3, stop=0.6, count=3),
            quantity="delta_phi_si",
        )
        assert run_sweep(spec, workers=1) == run_sweep(spec, workers=workers)

    def test_oracle_engine_close_to_analytic(self, small_config):
        axis = phi_axis(3)
        analytic = run_sweep(SweepSpec(base=small_config, axis1=axis, quantity="delta_phi_si"))
        oracle = run_sweep(SweepSpec(base=small_config, axis1=axis, quantity="delta_phi_si",
                                     engine="oracle-linearized"))
        for a, o in zip(analytic, oracle):
            assert o.value == pytest.approx(a.value, rel=1e-6)

    def test_table_flags_stationary_points(self):
        spec = SweepSpec(base=make_config(r1=0.0, r2=0.0), axis1=phi_axis(2),
                         quantity="delta_phi_si")
        header, body = sweep_table(spec, run_sweep(spec))
        assert header == ["phi", "delta_phi_si", "engine", "stationary"]
        assert body[0][1:] == [None, "analytic", True]
