"""
Brute-force Fock-space ground truth for the interferometer.

Two independent propagation methods are available:

* mode transfer: the output annihilator is composed element by element in the
  Heisenberg picture as a linear combination of the seed mode, the idler and
  three vacuum loss ancillas. The seed annihilator is then replaced by the exact
  (exp(-2iγN)·a) or linearized ((1 - 2iγN)·a) Kerr mode and all moments are
  evaluated against |α>|0000> on a truncated product space. Vacuum modes only
  ever receive two photons, so three levels represent them exactly.
* state evolution: the Kerr state is built in a truncated two-mode space and
  pushed through squeezers, phase shift and loss channels (density matrices
  once loss is present). Exact Kerr only.
"""
import logging
import math
from typing import NamedTuple, cast
import numpy as np
import scipy.sparse as sp
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt
from config.settings import get_settings
from src.errors import DomainError, TruncationError
from src.models.interferometer import (
    DetectionScheme,
    InterferometerConfig,
    InternalNumberStatsInputs,
    KerrVariant,
    OracleMethod,
    ResultSource,
)
from src.models.moments import MomentSet, NumberStats
from src.models.results import OracleRun, SensitivityResult
from src.services.fisher import qcrb, qfi_from_number_stats
from src.services.fock_space import (
    TruncatedDensityMatrix,
    TruncatedState,
    annihilation,
    apply_kerr,
    coherent_state,
    embed,
    kerr_mode_operator,
    linearized_mode_operator,
    loss_channel,
    phase_shift,
    poisson_cutoff,
    two_mode_squeeze,
    vacuum,
)
from src.services.kerr import validate_config
from src.services.sensitivity import sensitivity_from_moments

logger = logging.getLogger(__name__)

SEED, IDLER, LOSS_SIGNAL, LOSS_IDLER, LOSS_OUTPUT = range(5)
MODE_COUNT = 5
SEED_HEADROOM = 4
FD_STEP_RANGE = (1e-7, 1e-3)


# ---------------------------------------------------------------------------
# Mode transfer
# ---------------------------------------------------------------------------


class LinearMode(NamedTuple):
    """Operator sum_k ann[k]·m_k + cre[k]·m_k† over the five input modes."""

    ann: np.ndarray
    cre: np.ndarray

    @classmethod
    def of(cls, mode: int) -> "LinearMode":
        ann = np.zeros(MODE_COUNT, dtype=complex)
        ann[mode] = 1.0
        return cls(ann=ann, cre=np.zeros(MODE_COUNT, dtype=complex))


class ModeMap(NamedTuple):
    """Element acting as m_j -> sum_k P[j,k]·m_k + Q[j,k]·m_k†."""

    p: np.ndarray
    q: np.ndarray

    @classmethod
    def identity(cls) -> "ModeMap":
        return cls(p=np.eye(MODE_COUNT, dtype=complex),
                   q=np.zeros((MODE_COUNT, MODE_COUNT), dtype=complex))


def opa_map(r: float, theta: float) -> ModeMap:
    """Two-mode squeezer on (SEED, IDLER)."""
    element = ModeMap.identity()
    ch, sh = math.cosh(r), math.sinh(r)
    element.p[SEED, SEED] = ch
    element.p[IDLER, IDLER] = ch
    element.q[SEED, IDLER] = np.exp(1j * theta) * sh
    element.q[IDLER, SEED] = np.exp(1j * theta) * sh
    return element


def phase_map(phi: float) -> ModeMap:
    element = ModeMap.identity()
    element.p[SEED, SEED] = np.exp(1j * phi)
    return element


def loss_map(transmissivity: float, mode: int, ancilla: int) -> ModeMap:
    """Beam splitter mixing ``mode`` with a vacuum ancilla."""
    element = ModeMap.identity()
    element.p[mode, mode] = math.sqrt(transmissivity)
    element.p[mode, ancilla] = math.sqrt(1.0 - transmissivity)
    return element


def substitute(op: LinearMode, element: ModeMap) -> LinearMode:
    """Rewrite an operator given on the element's outputs in terms of its inputs."""
    return LinearMode(
        ann=op.ann @ element.p + op.cre @ element.q.conj(),
        cre=op.ann @ element.q + op.cre @ element.p.conj(),
    )


def interferometer_elements(cfg: InterferometerConfig) -> list[ModeMap]:
    """Optical elements in propagation order."""
    return [
        opa_map(cfg.r1, cfg.theta1),
        loss_map(cfg.mu, SEED, LOSS_SIGNAL),
        loss_map(cfg.mu, IDLER, LOSS_IDLER),
        phase_map(cfg.phi),
        opa_map(cfg.r2, cfg.theta2),
        loss_map(cfg.eta, SEED, LOSS_OUTPUT),
    ]


def compose(elements: list[ModeMap], output_mode: int = SEED) -> LinearMode:
    """Heisenberg-picture output operator of ``output_mode`` after ``elements``."""
    op = LinearMode.of(output_mode)
    for element in reversed(elements):
        op = substitute(op, element)
    return op


class ModeTransferSpace:
    """Truncated product space |seed> x |idler> x three loss ancillas."""

    def __init__(self, alpha: float, gamma: float, variant: KerrVariant):
        settings = get_settings()
        self.seed_n_max = poisson_cutoff(alpha) + SEED_HEADROOM
        self.dims = [self.seed_n_max + 1] + [settings.vacuum_levels] * (MODE_COUNT - 1)

        if variant is KerrVariant.EXACT:
            seed_mode = kerr_mode_operator(gamma, self.seed_n_max)
        else:
            seed_mode = linearized_mode_operator(gamma, self.seed_n_max)
        self.modes = [embed(seed_mode, SEED, self.dims)] + [
            embed(annihilation(d), k, self.dims) for k, d in enumerate(self.dims) if k != SEED
        ]

        psi = coherent_state(alpha, self.seed_n_max)
        for _ in range(MODE_COUNT - 1):
            psi = np.kron(psi, vacuum(settings.vacuum_levels - 1))
        self.psi = psi

    def operator(self, op: LinearMode) -> sp.csc_matrix:
        """Sparse matrix of a linear mode combination."""
        result = sp.csc_matrix(self.modes[0].shape, dtype=complex)
        for k, mode in enumerate(self.modes):
            if op.ann[k] != 0.0:
                result = result + op.ann[k] * mode
            if op.cre[k] != 0.0:
                result = result + op.cre[k] * mode.conj().T
        return result.tocsc()

    def moments(self, op: LinearMode) -> MomentSet:
        f = self.operator(op)
        f_psi = f @ self.psi
        f2_psi = f @ f_psi
        return MomentSet(
            m1=np.vdot(self.psi, f_psi),
            m2=np.vdot(self.psi, f2_psi),
            n1=complex(np.vdot(f_psi, f_psi).real),
            n2=complex(np.vdot(f2_psi, f2_psi).real),
        )

    def number_stats(self, signal: LinearMode, idler: LinearMode) -> NumberStats:
        c = self.operator(signal)
        b = self.operator(idler)
        c_psi = c @ self.psi
        b_psi = b @ self.psi
        n_c = float(np.vdot(c_psi, c_psi).real)
        n_b = float(np.vdot(b_psi, b_psi).real)
        cc_psi = c @ c_psi
        bb_psi = b @ b_psi
        bc_psi = b @ c_psi
        return NumberStats(
            var1=max(float(np.vdot(cc_psi, cc_psi).real) + n_c - n_c**2, 0.0),
            var2=max(float(np.vdot(bb_psi, bb_psi).real) + n_b - n_b**2, 0.0),
            cov=float(np.vdot(bc_psi, bc_psi).real) - n_c * n_b,
        )


def _simulate_mode_transfer(cfg: InterferometerConfig, variant: KerrVariant) -> OracleRun:
    space = ModeTransferSpace(cfg.alpha, cfg.gamma, variant)
    output = compose(interferometer_elements(cfg))
    first_opa = [opa_map(cfg.r1, cfg.theta1)]
    stats = space.number_stats(compose(first_opa, SEED), compose(first_opa, IDLER))
    return OracleRun(
        moments=space.moments(output),
        stats=stats,
        variant=variant,
        method=OracleMethod.MODE_TRANSFER,
        n_max=space.seed_n_max,
    )


# ---------------------------------------------------------------------------
# State evolution
# ---------------------------------------------------------------------------


def auto_n_max(cfg: InterferometerConfig, cap: int) -> int:
    """
    Per-mode truncation for state evolution.

    Seed Poisson cutoff plus ceil(10·exp(2(r1 + r2))) photons of squeezing
    headroom, capped at ``cap``.

    Raises:
        TruncationError: If the seed alone does not fit under the cap
    """
    seed = poisson_cutoff(cfg.alpha)
    if seed > cap:
        raise TruncationError(f"seed alpha={cfg.alpha} needs n_max={seed} > cap {cap}", seed)
    return min(cap, seed + math.ceil(10.0 * math.exp(2.0 * (cfg.r1 + cfg.r2))))


def _two_mode_moments(state: TruncatedState | TruncatedDensityMatrix) -> MomentSet:
    dims = [state.dim, state.dim]
    a = embed(annihilation(state.dim), 0, dims)
    a2 = a @ a
    if isinstance(state, TruncatedState):
        psi = state.vector
        a_psi = a @ psi
        a2_psi = a2 @ psi
        return MomentSet(
            m1=np.vdot(psi, a_psi),
            m2=np.vdot(psi, a2_psi),
            n1=complex(np.vdot(a_psi, a_psi).real),
            n2=complex(np.vdot(a2_psi, a2_psi).real),
        )
    rho = state.entries
    return MomentSet(
        m1=complex((a @ rho).trace()),
        m2=complex((a2 @ rho).trace()),
        n1=complex((a.conj().T @ (a @ rho)).trace()),
        n2=complex((a2.conj().T @ (a2 @ rho)).trace()),
    )


def _state_number_stats(state: TruncatedState) -> NumberStats:
    populations = state.populations() / state.norm
    n = np.arange(state.dim, dtype=float)
    p1 = populations.sum(axis=1)
    p2 = populations.sum(axis=0)
    mean1, mean2 = float(p1 @ n), float(p2 @ n)
    return NumberStats(
        var1=max(float(p1 @ n**2) - mean1**2, 0.0),
        var2=max(float(p2 @ n**2) - mean2**2, 0.0),
        cov=float(n @ populations @ n) - mean1 * mean2,
    )


def _evolve(cfg: InterferometerConfig, n_max: int) -> OracleRun:
    state = TruncatedState.product(coherent_state(cfg.alpha, n_max), vacuum(n_max))
    state = apply_kerr(state, cfg.gamma, mode=0)
    squeezed = cast(TruncatedState, two_mode_squeeze(state, cfg.r1, cfg.theta1))
    stats = _state_number_stats(squeezed)

    current: TruncatedState | TruncatedDensityMatrix = squeezed
    if cfg.mu != 1.0:
        current = loss_channel(current, cfg.mu, mode=0)
        current = loss_channel(current, cfg.mu, mode=1)
    current = phase_shift(current, cfg.phi, mode=0)
    current = two_mode_squeeze(current, cfg.r2, cfg.theta2)
    if cfg.eta != 1.0:
        current = loss_channel(current, cfg.eta, mode=0)

    return OracleRun(
        moments=_two_mode_moments(current),
        stats=stats,
        variant=KerrVariant.EXACT,
        method=OracleMethod.STATE_EVOLUTION,
        n_max=n_max,
    )


def _moment_change(a: MomentSet, b: MomentSet) -> float:
    return max(
        abs(getattr(a, name) - getattr(b, name)) / max(1.0, abs(getattr(b, name)))
        for name in ("m1", "m2", "n1", "n2")
    )


def _simulate_state_evolution(cfg: InterferometerConfig) -> OracleRun:
    settings = get_settings()
    cap = settings.max_photons_pure if cfg.is_lossless else settings.max_photons_mixed
    start = auto_n_max(cfg, cap)

    retrying = Retrying(
        stop=stop_after_attempt(settings.convergence_attempts),
        retry=retry_if_exception_type(TruncationError),
        reraise=True,
    )
    seed_cutoff = poisson_cutoff(cfg.alpha)
    for attempt in retrying:
        with attempt:
            grown = min(cap, math.ceil(start * 1.25 ** (attempt.retry_state.attempt_number - 1)))
            fine = min(cap, math.ceil(1.25 * grown))
            coarse = max(seed_cutoff, min(grown, math.floor(fine / 1.25)))
            logger.debug(f"State evolution at n_max={fine}, checked against {coarse}")
            run = _evolve(cfg, fine)
            if coarse < fine:
                change = _moment_change(_evolve(cfg, coarse).moments, run.moments)
                if change >= settings.convergence_tol:
                    raise TruncationError(
                        f"moments changed by {change:.3e} between n_max={coarse} and {fine}",
                        suggested_n_max=math.ceil(1.25 * fine),
                    )
    return run


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def simulate(
    cfg: InterferometerConfig,
    variant: KerrVariant = KerrVariant.LINEARIZED,
    method: OracleMethod = OracleMethod.MODE_TRANSFER,
) -> OracleRun:
    """
    Simulate the interferometer in a truncated Fock space.

    Args:
        cfg: Valid configuration
        variant: Exact or linearized Kerr operator
        method: Mode transfer (both variants) or state evolution (exact only)

    Returns:
        OracleRun with the detected-mode moments and the post-OPA-1 statistics

    Raises:
        ConfigValidationError: If cfg is invalid
        DomainError: If state evolution is asked for the linearized variant
        TruncationError: If no admissible truncation converges
    """
    validate_config(cfg)
    if method is OracleMethod.MODE_TRANSFER:
        return _simulate_mode_transfer(cfg, variant)
    if variant is not KerrVariant.EXACT:
        raise DomainError("state evolution needs the unitary (exact) Kerr operator")
    return _simulate_state_evolution(cfg)


def _observable_mean(moments: MomentSet, scheme: DetectionScheme) -> float:
    if scheme is DetectionScheme.SI:
        return moments.n1.real
    return 2.0 * moments.m1.real


class FringeRuns(NamedTuple):
    """Oracle moments at phi and phi ± h."""

    centre: OracleRun
    plus: MomentSet
    minus: MomentSet
    h: float

    def derivative(self, scheme: DetectionScheme) -> float:
        rise = _observable_mean(self.plus, scheme) - _observable_mean(self.minus, scheme)
        return rise / (2.0 * self.h)


def fringe_runs(
    cfg: InterferometerConfig,
    variant: KerrVariant = KerrVariant.LINEARIZED,
    h: float | None = None,
    method: OracleMethod = OracleMethod.MODE_TRANSFER,
) -> FringeRuns:
    """
    Simulate at phi and at phi ± h.

    Raises:
        DomainError: If h is outside [1e-7, 1e-3]
    """
    h = get_settings().fd_step if h is None else h
    if not FD_STEP_RANGE[0] <= h <= FD_STEP_RANGE[1]:
        raise DomainError(f"finite-difference step {h} outside {FD_STEP_RANGE}")
    return FringeRuns(
        centre=simulate(cfg, variant, method),
        plus=simulate(cfg.with_updates(phi=cfg.phi + h), variant, method).moments,
        minus=simulate(cfg.with_updates(phi=cfg.phi - h), variant, method).moments,
        h=h,
    )


def oracle_phase_sensitivity(
    cfg: InterferometerConfig,
    scheme: DetectionScheme,
    variant: KerrVariant = KerrVariant.LINEARIZED,
    h: float | None = None,
    method: OracleMethod = OracleMethod.MODE_TRANSFER,
) -> SensitivityResult:
    """
    Sensitivity from oracle moments with a centered-difference slope.

    Args:
        cfg: Valid configuration (lossy allowed)
        scheme: SI or HD
        variant: Kerr operator
        h: Phase step in [1e-7, 1e-3] rad; defaults to the configured step
        method: Oracle propagation method

    Returns:
        SensitivityResult with source ORACLE

    Raises:
        DomainError: If h is outside its range
        StationaryPointError: If the slope vanishes
    """
    runs = fringe_runs(cfg, variant, h, method)
    return sensitivity_from_moments(
        runs.centre.moments, runs.derivative(scheme), scheme, ResultSource.ORACLE
    )


def _stats_config(inputs: InternalNumberStatsInputs) -> InterferometerConfig:
    return InterferometerConfig(
        alpha=inputs.alpha, gamma=inputs.gamma, r1=inputs.r1, r2=0.0,
        theta1=0.0, theta2=0.0, phi=0.0, mu=1.0, eta=1.0,
    )


def oracle_number_stats(
    inputs: InternalNumberStatsInputs,
    variant: KerrVariant = KerrVariant.LINEARIZED,
    method: OracleMethod = OracleMethod.MODE_TRANSFER,
) -> NumberStats:
    """Number statistics of the two modes leaving OPA-1, from the oracle."""
    return simulate(_stats_config(inputs), variant, method).stats


def oracle_qcrb(
    inputs: InternalNumberStatsInputs,
    variant: KerrVariant = KerrVariant.LINEARIZED,
    method: OracleMethod = OracleMethod.MODE_TRANSFER,
) -> float:
    """Cramér-Rao bound computed from oracle number statistics."""
    return qcrb(qfi_from_number_stats(oracle_number_stats(inputs, variant, method)))
