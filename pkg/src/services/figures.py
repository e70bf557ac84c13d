"""Reproduction of the published figure tables from the committed catalog."""
import logging
from pathlib import Path
from src.errors import DomainError
from src.models.interferometer import Engine, MomentPath
from src.models.results import LossTrend
from src.models.sweep import FigureCatalog, FigureSpec
from src.services.sensitivity import hd_lossy_trend
from src.services.sweep_runner import evaluate_many, grid_points
from src.utils.config_loader import load_figure_catalog
from src.utils.csv_utils import write_csv
from src.utils.svg_utils import heatmap, line_plot

logger = logging.getLogger(__name__)

HEATMAP_MIN_COUNT = 10
LOSS_FIELDS = ("mu", "eta")

FigureTable = tuple[list[str], list[list[object]]]


def figure_table(spec: FigureSpec, workers: int | None = None) -> FigureTable:
    """
    Evaluate every column of a figure over its grid.

    Column overrides are applied on top of the axis values, so a column may pin
    a swept parameter (the coherent-seed reference pins gamma to 0).

    Args:
        spec: Figure definition
        workers: Process count for the evaluation

    Returns:
        (header, rows): axis columns, then each value column followed by a
        ``<name>_stationary`` flag when the quantity can be undefined
    """
    points = grid_points(spec.axes)
    tasks = [
        (spec.base.with_updates(**{**point, **column.overrides}), column.quantity, Engine.ANALYTIC)
        for column in spec.columns
        for point in points
    ]
    values = evaluate_many(tasks, workers)
    per_column = [values[i * len(points):(i + 1) * len(points)] for i in range(len(spec.columns))]

    header = [axis.name for axis in spec.axes]
    for column in spec.columns:
        header.append(column.name)
        if column.quantity.can_be_stationary:
            header.append(f"{column.name}_stationary")

    rows: list[list[object]] = []
    for index, point in enumerate(points):
        row: list[object] = [point[axis.name] for axis in spec.axes]
        for column, column_values in zip(spec.columns, per_column):
            value = column_values[index]
            row.append(value)
            if column.quantity.can_be_stationary:
                row.append(value is None)
        rows.append(row)
    return header, rows


def _render_svg(name: str, spec: FigureSpec, table: FigureTable, path: Path) -> Path:
    header, rows = table
    columns = {column.name: header.index(column.name) for column in spec.columns}
    axis1 = spec.axis1
    x = axis1.values()

    if spec.axis2 is None:
        series = {col: [row[i] for row in rows] for col, i in columns.items()}
        return line_plot(path, axis1.name, x, series, title=name)  # type: ignore[arg-type]

    axis2 = spec.axis2
    y = axis2.values()
    if axis2.count >= HEATMAP_MIN_COUNT:
        # First column in <name>.svg, the others in <name>_<column>.svg
        for k, (col, i) in enumerate(columns.items()):
            grid = [[rows[a * len(y) + b][i] for b in range(len(y))] for a in range(len(x))]
            target = path if k == 0 else path.with_name(f"{name}_{col}.svg")
            heatmap(
                target, axis1.name, axis2.name, x, y, grid, title=col  # type: ignore[arg-type]
            )
        return path

    # One curve per column and axis2 value
    series: dict[str, list[object]] = {}
    for col, i in columns.items():
        for b, level in enumerate(y):
            label = f"{col} {axis2.name}={level:g}"
            series[label] = [rows[a * len(y) + b][i] for a in range(len(x))]
    return line_plot(path, axis1.name, x, series, title=name)  # type: ignore[arg-type]


def run_figure(
    name: str,
    out_dir: Path,
    svg: bool = False,
    catalog: FigureCatalog | None = None,
    workers: int | None = None,
) -> Path:
    """
    Write the CSV (and optionally an SVG) for one catalogued figure.

    Args:
        name: Figure key, e.g. ``fig3a``
        out_dir: Output directory
        svg: Also render ``<name>.svg``
        catalog: Figure definitions; defaults to config/figures.yaml
        workers: Process count for the evaluation

    Returns:
        Path of the CSV file

    Raises:
        DomainError: If the figure name is unknown
        OutputError: If a file cannot be written
    """
    catalog = load_figure_catalog() if catalog is None else catalog
    if name not in catalog.figures:
        raise DomainError(f"unknown figure {name!r}; expected one of {sorted(catalog.figures)}")
    spec = catalog.figures[name]
    logger.info(f"Generating {name}: {spec.description}")

    table = figure_table(spec, workers)
    csv_path = write_csv(out_dir / f"{name}.csv", *table)
    if svg:
        _render_svg(name, spec, table, out_dir / f"{name}.svg")
    return csv_path


def loss_compensation_trends(catalog: FigureCatalog | None = None) -> list[LossTrend]:
    """
    Corrected and published lossy homodyne trends of the catalogued r2 sweeps.

    Every figure sweeping r2 against mu or eta is evaluated at its strongest
    loss, on both moment paths.

    Args:
        catalog: Figure definitions; defaults to config/figures.yaml

    Returns:
        Trends in catalog order, corrected path first
    """
    catalog = load_figure_catalog() if catalog is None else catalog
    trends: list[LossTrend] = []
    for name, spec in catalog.figures.items():
        axis2 = spec.axis2
        if spec.axis1.name != "r2" or axis2 is None or axis2.name not in LOSS_FIELDS:
            continue
        cfg = spec.base.with_updates(**{axis2.name: min(axis2.values())})
        for path in MomentPath:
            trend = hd_lossy_trend(cfg, "r2", spec.axis1.values(), path)
            logger.debug(
                f"{name} {path.value}: minimum at r2={trend.argmin:.4f}, "
                f"{trend.increasing_steps} increasing steps"
            )
            trends.append(trend)
    return trends
