"""YAML experiment files parsed into validated models."""
import logging
from pathlib import Path
from typing import Any, TypeVar
import yaml
from pydantic import BaseModel, ValidationError
from src.errors import ConfigValidationError
from src.models.sweep import ExperimentFile, FigureCatalog

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)

DEFAULT_FIGURES_PATH = Path(__file__).resolve().parents[2] / "config" / "figures.yaml"


def _violations(error: ValidationError) -> list[str]:
    return [
        f"{'.'.join(str(part) for part in item['loc']) or '<root>'}: {item['msg']}"
        for item in error.errors()
    ]


def _read_yaml(path: Path) -> Any:
    try:
        with open(path, encoding="utf-8") as f:
            return yaml.safe_load(f)
    except OSError as e:
        raise ConfigValidationError([f"cannot read {path}: {e}"]) from e
    except yaml.YAMLError as e:
        raise ConfigValidationError([f"{path} is not valid YAML: {e}"]) from e


def parse_document(data: Any, model: type[ModelT], source: str = "<memory>") -> ModelT:
    """
    Validate already-parsed YAML against a model.

    Args:
        data: Mapping produced by yaml.safe_load
        model: Target model class
        source: Name used in diagnostics

    Returns:
        Validated model instance

    Raises:
        ConfigValidationError: Listing every validation failure, unknown keys included
    """
    if not isinstance(data, dict):
        raise ConfigValidationError([f"{source}: top level must be a mapping"])
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigValidationError([f"{source}: {v}" for v in _violations(e)]) from e


def load_experiment(path: Path) -> ExperimentFile:
    """Load an experiment file with ``interferometer:`` and optional ``sweep:`` sections."""
    logger.info(f"Loading experiment file {path}")
    return parse_document(_read_yaml(path), ExperimentFile, str(path))


def load_figure_catalog(path: Path | None = None) -> FigureCatalog:
    """Load the committed figure definitions (config/figures.yaml by default)."""
    path = DEFAULT_FIGURES_PATH if path is None else path
    logger.debug(f"Loading figure catalog {path}")
    return parse_document(_read_yaml(path), FigureCatalog, str(path))
