"""Command-line entry point for the SU(1,1) sensitivity engine."""
import argparse
import logging
import sys
from pathlib import Path
from pydantic import ValidationError
from config.settings import get_settings
from src.errors import ConfigValidationError, OutputError, Su11Error
from src.graph.workflow import create_verification_workflow, initial_state
from src.graph.nodes.grid_builder import PRESETS
from src.models.interferometer import (
    DetectionScheme,
    Engine,
    InternalNumberStatsInputs,
    OracleMethod,
)
from src.models.report import VerificationReport
from src.models.results import OptimumResult
from src.models.sweep import ExperimentFile, SweepSpec
from src.services.analytic_moments import internal_number_stats, lossless_moments, lossy_moments
from src.services.figures import run_figure
from src.services.fock_oracle import simulate
from src.services.kerr import validate_config
from src.services.optimizer import find_optimum
from src.services.sweep_runner import run_sweep as evaluate_sweep, sweep_table
from src.utils.config_loader import load_experiment, load_figure_catalog
from src.utils.csv_utils import write_csv
from src.utils.logging_config import setup_logging
from src.utils.svg_utils import heatmap, line_plot

logger = logging.getLogger(__name__)


def _sweep_spec(experiment: ExperimentFile, engine: Engine | None) -> SweepSpec:
    try:
        return experiment.sweep_spec(engine)
    except ValidationError as e:
        raise ConfigValidationError([str(item["msg"]) for item in e.errors()]) from e
    except ValueError as e:
        raise ConfigValidationError([str(e)]) from e


def run_figures(
    names: list[str], out_dir: Path, svg: bool = False, workers: int | None = None
) -> list[Path]:
    """
    Regenerate catalogued figure tables.

    Args:
        names: Figure keys; ``all`` expands to every catalogued figure
        out_dir: Output directory
        svg: Also render SVG plots
        workers: Process count

    Returns:
        Paths of the written CSV files
    """
    catalog = load_figure_catalog()
    if names == ["all"]:
        names = list(catalog.figures)
    return [run_figure(name, out_dir, svg, catalog, workers) for name in names]


def run_sweep(
    config_path: Path,
    out_path: Path,
    engine: Engine | None = None,
    svg: bool = False,
    workers: int | None = None,
) -> Path:
    """
    Evaluate the ``sweep:`` section of an experiment file and write its CSV.

    Returns:
        Path of the CSV file

    Raises:
        ConfigValidationError: If the file or the sweep is invalid
    """
    spec = _sweep_spec(load_experiment(config_path), engine)
    validate_config(spec.base)
    rows = evaluate_sweep(spec, workers)
    path = write_csv(out_path, *sweep_table(spec, rows))

    if svg:
        svg_path = out_path.with_suffix(".svg")
        if spec.axis2 is None:
            line_plot(svg_path, spec.axis1.name, spec.axis1.values(),
                      {spec.quantity.value: [row.value for row in rows]})
        else:
            width = spec.axis2.count
            grid = [[row.value for row in rows[i:i + width]] for i in range(0, len(rows), width)]
            heatmap(svg_path, spec.axis1.name, spec.axis2.name, spec.axis1.values(),
                    spec.axis2.values(), grid, title=spec.quantity.value)
    return path


def run_verify(preset: str, out_path: Path, workers: int | None = None) -> VerificationReport:
    """
    Run the analytic-versus-oracle verification workflow.

    Args:
        preset: ``small`` or ``full``
        out_path: Path of the comparison CSV
        workers: Process count for the evaluation nodes

    Returns:
        The finished VerificationReport
    """
    logger.info(f"Starting verification with preset {preset!r}")
    workflow = create_verification_workflow(str(out_path), workers)
    final_state = workflow.invoke(initial_state(preset))
    logger.info(f"Verification completed in {final_state['step_count']} steps")

    if final_state["errors"]:
        logger.warning(f"Encountered {len(final_state['errors'])} errors:")
        for error in final_state["errors"]:
            logger.warning(f"  - {error}")

    report: VerificationReport = final_state["report"]
    return report


def run_optimum(
    config_path: Path,
    scheme: DetectionScheme | None = None,
    engine: Engine = Engine.ANALYTIC,
    grid_size: int | None = None,
    workers: int | None = None,
) -> OptimumResult:
    """
    Find the optimal phase for the configuration in an experiment file.

    The scheme defaults to the file's ``scheme:`` entry, then to homodyne.
    """
    experiment = load_experiment(config_path)
    if scheme is None:
        scheme = DetectionScheme.from_string(experiment.scheme or "hd")
    return find_optimum(experiment.interferometer, scheme, engine, grid_size, workers)


def run_moments(
    config_path: Path,
    engine: Engine = Engine.ANALYTIC,
    method: OracleMethod = OracleMethod.MODE_TRANSFER,
) -> dict[str, complex]:
    """
    Output moments and internal number statistics for one configuration.

    Returns:
        Ordered mapping m1, m2, n1, n2, var1, var2, cov
    """
    cfg = validate_config(load_experiment(config_path).interferometer)
    if engine.is_oracle:
        run = simulate(cfg, engine.variant, method)
        moments, stats = run.moments, run.stats
        logger.info(f"Oracle {method.value} run at n_max={run.n_max}")
    else:
        moments = lossless_moments(cfg) if cfg.is_lossless else lossy_moments(cfg)
        stats = internal_number_stats(InternalNumberStatsInputs.from_config(cfg))
    return {
        "m1": moments.m1,
        "m2": moments.m2,
        "n1": moments.n1,
        "n2": moments.n2,
        "var1": stats.var1,
        "var2": stats.var2,
        "cov": stats.cov,
    }


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the figure, sweep, verify, optimum and moments verbs."""
    parser = argparse.ArgumentParser(
        prog="su11", description="Phase sensitivity of a Kerr-seeded SU(1,1) interferometer"
    )
    parser.add_argument("--log-level", type=str, default=None, help="Override SU11_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    engine_help = "analytic | oracle-exact | oracle-linearized"
    workers_help = "Worker processes (results do not depend on it)"

    figure = sub.add_parser("figure", help="Regenerate a published figure table")
    figure.add_argument("names", nargs="+", help="Figure keys (fig2 ... fig12) or all")
    figure.add_argument("--out", type=Path, default=None, help="Output directory")
    figure.add_argument("--svg", action="store_true", help="Also write an SVG plot")
    figure.add_argument("--workers", type=int, default=None, help=workers_help)

    sweep = sub.add_parser("sweep", help="Evaluate the sweep section of an experiment file")
    sweep.add_argument("--config", type=Path, required=True, help="Experiment YAML file")
    sweep.add_argument("--engine", type=str, default=None, help=engine_help)
    sweep.add_argument("--out", type=Path, default=None, help="Output CSV path")
    sweep.add_argument("--svg", action="store_true", help="Also write an SVG plot")
    sweep.add_argument("--workers", type=int, default=None, help=workers_help)

    verify = sub.add_parser("verify", help="Check the closed forms against the Fock-space oracle")
    verify.add_argument("--preset", choices=sorted(PRESETS), default="small")
    verify.add_argument("--out", type=Path, default=None, help="Output CSV path")
    verify.add_argument("--workers", type=int, default=None, help=workers_help)

    optimum = sub.add_parser("optimum", help="Find the phase minimizing the sensitivity")
    optimum.add_argument("--config", type=Path, required=True, help="Experiment YAML file")
    optimum.add_argument("--scheme", type=str, default=None, help="si | hd")
    optimum.add_argument("--engine", type=str, default="analytic", help=engine_help)
    optimum.add_argument("--grid", type=int, default=None, help="Grid points over [0, 2π)")
    optimum.add_argument("--workers", type=int, default=None, help=workers_help)

    moments = sub.add_parser("moments", help="Dump output moments and internal statistics")
    moments.add_argument("--config", type=Path, required=True, help="Experiment YAML file")
    moments.add_argument("--engine", type=str, default="analytic", help=engine_help)
    moments.add_argument("--method", type=str, default="mode-transfer",
                         help="mode-transfer | state-evolution (oracle engines)")
    moments.add_argument("--out", type=Path, default=None, help="Optional CSV path")
    return parser


def _dispatch(args: argparse.Namespace) -> int:
    settings = get_settings()
    output_dir = Path(settings.output_dir)

    if args.command == "figure":
        for path in run_figures(args.names, args.out or output_dir, args.svg, args.workers):
            print(path)
        return 0

    if args.command == "sweep":
        engine = Engine.from_string(args.engine) if args.engine else None
        out = args.out or output_dir / f"{args.config.stem}.csv"
        print(run_sweep(args.config, out, engine, args.svg, args.workers))
        return 0

    if args.command == "verify":
        out = args.out or output_dir / f"verify_{args.preset}.csv"
        report = run_verify(args.preset, out, args.workers)
        print(f"{'PASS' if report.passed else 'FAIL'} worst_rel_delta={report.worst_delta!r}")
        print(out)
        return 0 if report.passed else 1

    if args.command == "optimum":
        scheme = DetectionScheme.from_string(args.scheme) if args.scheme else None
        result = run_optimum(args.config, scheme, Engine.from_string(args.engine),
                             args.grid, args.workers)
        print(f"phi_star={result.phi_star!r}")
        print(f"delta_phi_star={result.delta_phi_star!r}")
        return 0

    values = run_moments(args.config, Engine.from_string(args.engine),
                         OracleMethod.from_string(args.method))
    if args.out:
        write_csv(args.out, ["quantity", "value"], ([k, v] for k, v in values.items()))
    for name, value in values.items():
        print(f"{name}={value!r}")
    return 0


def main(argv: list[str] | None = None) -> int:
    """CLI entry point; returns the process exit status."""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_logging(args.log_level or settings.log_level, settings.log_file)

    try:
        return _dispatch(args)
    except Su11Error as e:
        logger.error(str(e))
        return e.exit_code
    except ValidationError as e:
        logger.error(f"invalid input: {e}")
        return ConfigValidationError.exit_code
    except ValueError as e:
        # Unrecognised enum names from the command line
        logger.error(str(e))
        return ConfigValidationError.exit_code
    except OSError as e:
        error = OutputError(str(e))
        logger.error(str(error))
        return error.exit_code


if __name__ == "__main__":
    sys.exit(main())
