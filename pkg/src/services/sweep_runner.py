"""Grid evaluation of sweep quantities, serially or on a process pool."""
import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, NamedTuple, Sequence, TypeVar
from config.settings import get_settings
from src.errors import StationaryPointError, WrongOperationError
from src.models.interferometer import (
    DetectionScheme,
    Engine,
    InterferometerConfig,
    InternalNumberStatsInputs,
    KerrVariant,
    MomentPath,
)
from src.models.sweep import AxisSpec, Quantity, SweepSpec
from src.services.analytic_moments import mean_photon_coherent, mean_photon_kerr
from src.services.fisher import qcrb_coherent, qcrb_for_config, qcrb_signal_arm_for_config
from src.services.fock_oracle import oracle_phase_sensitivity, oracle_qcrb
from src.services.sensitivity import (
    hl,
    phase_sensitivity_hd,
    phase_sensitivity_hd_lossy,
    phase_sensitivity_si,
    phase_sensitivity_si_lossy,
    snl,
)

logger = logging.getLogger(__name__)

TaskT = TypeVar("TaskT")
ResultT = TypeVar("ResultT")

_SCHEMES = {
    Quantity.DELTA_PHI_SI: DetectionScheme.SI,
    Quantity.DELTA_PHI_SI_LOSSY: DetectionScheme.SI,
    Quantity.DELTA_PHI_HD: DetectionScheme.HD,
    Quantity.DELTA_PHI_HD_LOSSY: DetectionScheme.HD,
}


class SweepRow(NamedTuple):
    """One evaluated grid point; ``value`` is None at stationary points."""

    point: dict[str, float]
    value: float | None


def _analytic_value(cfg: InterferometerConfig, quantity: Quantity) -> float:
    if quantity is Quantity.DELTA_PHI_SI:
        return phase_sensitivity_si(cfg).delta_phi
    if quantity is Quantity.DELTA_PHI_SI_EXACT:
        return phase_sensitivity_si(cfg, KerrVariant.EXACT).delta_phi
    if quantity is Quantity.DELTA_PHI_SI_LOSSY:
        return phase_sensitivity_si_lossy(cfg).delta_phi
    if quantity is Quantity.DELTA_PHI_HD:
        return phase_sensitivity_hd(cfg).delta_phi
    if quantity is Quantity.DELTA_PHI_HD_LOSSY:
        return phase_sensitivity_hd_lossy(cfg).delta_phi
    if quantity is Quantity.DELTA_PHI_HD_LOSSY_VERBATIM:
        return phase_sensitivity_hd_lossy(cfg, MomentPath.VERBATIM).delta_phi
    if quantity is Quantity.QCRB_KERR:
        return qcrb_for_config(cfg)
    if quantity is Quantity.QCRB_COHERENT:
        return qcrb_coherent(cfg.alpha, cfg.r1)
    if quantity is Quantity.QCRB_SIGNAL_ARM:
        return qcrb_signal_arm_for_config(cfg)
    if quantity is Quantity.N_KERR:
        return mean_photon_kerr(cfg.alpha, cfg.gamma)
    if quantity is Quantity.N_CS:
        return mean_photon_coherent(cfg.alpha)
    if quantity is Quantity.SNL:
        return snl(mean_photon_kerr(cfg.alpha, cfg.gamma))
    return hl(mean_photon_kerr(cfg.alpha, cfg.gamma))


def _oracle_value(cfg: InterferometerConfig, quantity: Quantity, engine: Engine) -> float:
    if quantity in _SCHEMES:
        lossless_only = quantity in (Quantity.DELTA_PHI_SI, Quantity.DELTA_PHI_HD)
        if lossless_only and not cfg.is_lossless:
            raise WrongOperationError(f"{quantity.value} needs a lossless configuration")
        return oracle_phase_sensitivity(cfg, _SCHEMES[quantity], engine.variant).delta_phi
    if quantity in (Quantity.QCRB_KERR, Quantity.QCRB_COHERENT):
        if not cfg.is_lossless:
            raise WrongOperationError("the Cramér-Rao bound needs a lossless configuration")
        gamma = cfg.gamma if quantity is Quantity.QCRB_KERR else 0.0
        inputs = InternalNumberStatsInputs(alpha=cfg.alpha, gamma=gamma, r1=cfg.r1)
        return oracle_qcrb(inputs, engine.variant)
    raise WrongOperationError(f"{quantity.value} has no oracle evaluation")


def evaluate_quantity(
    cfg: InterferometerConfig, quantity: Quantity, engine: Engine = Engine.ANALYTIC
) -> float | None:
    """
    Evaluate one sweep quantity at one configuration.

    Args:
        cfg: Configuration of the grid point
        quantity: Quantity to evaluate
        engine: Analytic formulas or one of the oracle variants

    Returns:
        The value, or None where the sensitivity is undefined (stationary point)

    Raises:
        Su11Error: Any validation, domain or truncation failure other than a
            stationary point
    """
    try:
        if engine.is_oracle:
            return _oracle_value(cfg, quantity, engine)
        return _analytic_value(cfg, quantity)
    except StationaryPointError:
        return None


def _evaluate_task(task: tuple[InterferometerConfig, Quantity, Engine]) -> float | None:
    return evaluate_quantity(*task)


def grid_points(axes: list[AxisSpec]) -> list[dict[str, float]]:
    """Axis assignments in lexicographic order of the axis indices."""
    values = [axis.values() for axis in axes]
    return [
        {axis.name: value for axis, value in zip(axes, combo)}
        for combo in itertools.product(*values)
    ]


def map_points(
    func: Callable[[TaskT], ResultT], items: Sequence[TaskT], workers: int | None = None
) -> list[ResultT]:
    """
    Apply ``func`` to every item, preserving input order.

    Args:
        func: Module-level (picklable) function
        items: Independent tasks
        workers: Process count; defaults to the configured worker count

    Returns:
        Results aligned with ``items``
    """
    workers = get_settings().workers if workers is None else workers
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    logger.debug(f"Evaluating {len(items)} points on {workers} workers")
    chunksize = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunksize))


def evaluate_many(
    tasks: list[tuple[InterferometerConfig, Quantity, Engine]], workers: int | None = None
) -> list[float | None]:
    """Evaluate (config, quantity, engine) triples in input order."""
    return map_points(_evaluate_task, tasks, workers)


def run_sweep(spec: SweepSpec, workers: int | None = None) -> list[SweepRow]:
    """
    Evaluate a sweep over its full grid.

    Args:
        spec: Validated sweep specification
        workers: Process count; results do not depend on it

    Returns:
        Rows sorted by axis indices
    """
    points = grid_points(spec.axes)
    logger.info(
        f"Sweeping {spec.quantity.value} over {len(points)} points "
        f"({', '.join(a.name for a in spec.axes)}) with engine {spec.engine.value}"
    )
    tasks = [(spec.base.with_updates(**point), spec.quantity, spec.engine) for point in points]
    values = evaluate_many(tasks, workers)
    rows = [SweepRow(point=point, value=value) for point, value in zip(points, values)]

    stationary = sum(1 for row in rows if row.value is None)
    if stationary:
        logger.warning(f"{stationary} of {len(rows)} points are stationary (left empty)")
    return rows


def sweep_table(spec: SweepSpec, rows: list[SweepRow]) -> tuple[list[str], list[list[object]]]:
    """Header and rows of the sweep CSV: axes, quantity, engine, stationary flag."""
    header = [axis.name for axis in spec.axes] + [spec.quantity.value, "engine", "stationary"]
    body: list[list[object]] = [
        [row.point[axis.name] for axis in spec.axes]
        + [row.value, spec.engine.value, row.value is None]
        for row in rows
    ]
    return header, body
