"""Optional SVG rendering of figure tables (line plots and heatmaps)."""
import logging
from pathlib import Path
from typing import Any
import numpy as np
from src.errors import OutputError

logger = logging.getLogger(__name__)


def _pyplot() -> Any:
    try:
        import matplotlib
    except ImportError as e:
        raise OutputError("SVG output needs matplotlib (pip install 'kerr-su11[plot]')") from e
    matplotlib.use("Agg")
    # Fixed element ids so repeated renders are byte-identical
    matplotlib.rcParams["svg.hashsalt"] = "su11"
    import matplotlib.pyplot as plt

    return plt


def _save(fig: Any, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {path}")
    return path


def line_plot(
    path: Path,
    x_label: str,
    x: list[float],
    series: dict[str, list[float | None]],
    title: str = "",
    log_y: bool = False,
) -> Path:
    """
    Plot one or more columns against a single axis.

    Args:
        path: Target .svg file
        x_label: Axis name
        x: Axis values
        series: Column name -> values; None entries are left as gaps
        title: Plot title
        log_y: Logarithmic value axis

    Returns:
        The written path
    """
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for name, values in series.items():
        y = np.array([np.nan if v is None else v for v in values], dtype=float)
        ax.plot(x, y, label=name)
    ax.set_xlabel(x_label)
    if log_y:
        ax.set_yscale("log")
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)


def heatmap(
    path: Path,
    x_label: str,
    y_label: str,
    x: list[float],
    y: list[float],
    values: list[list[float | None]],
    title: str = "",
) -> Path:
    """
    Render a 2-D grid as a colour map; values[i][j] belongs to (x[i], y[j]).

    Stationary points (None) are drawn blank and the colour scale is
    logarithmic in the value.
    """
    plt = _pyplot()
    grid = np.array([[np.nan if v is None else v for v in row] for row in values], dtype=float)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    mesh = ax.pcolormesh(y, x, np.log10(grid), shading="auto")
    fig.colorbar(mesh, ax=ax, label=f"log10 {title}" if title else "log10 value")
    ax.set_xlabel(y_label)
    ax.set_ylabel(x_label)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    try:
        return _save(fig, path)
    finally:
        plt.close(fig)
