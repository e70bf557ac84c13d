"""Deterministic CSV output."""
import csv
import logging
from pathlib import Path
from typing import Iterable, Sequence
from src.errors import OutputError

logger = logging.getLogger(__name__)


def format_cell(value: object) -> str:
    """
    Render one cell.

    Floats use the shortest round-trip representation, None becomes an empty
    cell and booleans are written lower-case.

    Args:
        value: Cell value

    Returns:
        Cell text
    """
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(float(value))
    if isinstance(value, complex):
        value = complex(value)
        return f"{value.real!r}{value.imag:+}j"
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> Path:
    """
    Write a header and rows with fixed formatting and '\\n' line endings.

    Args:
        path: Target file; parent directories are created
        header: Column names
        rows: Row values in column order

    Returns:
        The written path

    Raises:
        OutputError: If the file cannot be written
    """
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(header)
            count = 0
            for row in rows:
                writer.writerow([format_cell(value) for value in row])
                count += 1
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e}") from e
    logger.info(f"Wrote {count} rows to {path}")
    return path


def read_csv(path: Path) -> list[dict[str, str]]:
    """Read a CSV written by ``write_csv`` back as header-keyed rows."""
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
