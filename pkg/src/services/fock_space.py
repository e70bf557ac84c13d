"""Truncated two-mode Fock-space states, channels and operators."""
import logging
import math
from typing import cast
import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field
from scipy.sparse.linalg import expm_multiply
from scipy.special import comb, gammaln
from scipy.stats import poisson
from config.settings import get_settings
from src.errors import DomainError, TruncationError

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Single-mode operators
# ---------------------------------------------------------------------------


def annihilation(dim: int) -> sp.csc_matrix:
    """Annihilation operator on levels 0..dim-1."""
    data = np.sqrt(np.arange(dim, dtype=float))
    return sp.spdiags(data=data, diags=[1], m=dim, n=dim).tocsc().astype(complex)


def number_levels(dim: int) -> np.ndarray:
    return np.arange(dim, dtype=float)


def kerr_mode_operator(gamma: float, n_max: int) -> sp.csc_matrix:
    """Heisenberg-picture Kerr mode exp(-2iγN)·A; unitarily equivalent to A."""
    phases = np.exp(-2j * gamma * number_levels(n_max + 1))
    return (sp.diags(phases) @ annihilation(n_max + 1)).tocsc()


def linearized_mode_operator(gamma: float, n_max: int) -> sp.csc_matrix:
    """
    First-order Kerr mode (I - 2iγN)·A.

    Not unitary; only meaningful inside expectation values against the
    coherent seed.
    """
    factor = 1.0 - 2j * gamma * number_levels(n_max + 1)
    return (sp.diags(factor) @ annihilation(n_max + 1)).tocsc()


def embed(op: sp.spmatrix, mode: int, dims: list[int]) -> sp.csc_matrix:
    """Kronecker-embed a single-mode operator into a multimode space."""
    factors = [op if k == mode else sp.identity(d, dtype=complex, format="csc")
               for k, d in enumerate(dims)]
    result = factors[0]
    for factor in factors[1:]:
        result = sp.kron(result, factor, format="csc")
    return result.tocsc()


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------


class TruncatedState(BaseModel):
    """Two-mode pure state with amplitudes indexed (n1, n2), 0 <= n_i <= n_max."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    amplitudes: np.ndarray
    n_max: int = Field(..., ge=0)

    @classmethod
    def product(cls, first: np.ndarray, second: np.ndarray) -> "TruncatedState":
        """Tensor product of two single-mode amplitude vectors of equal length."""
        if first.shape != second.shape:
            raise DomainError("mode vectors must share one truncation")
        return cls(amplitudes=np.outer(first, second), n_max=len(first) - 1)

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def vector(self) -> np.ndarray:
        return self.amplitudes.reshape(-1)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def with_vector(self, vector: np.ndarray) -> "TruncatedState":
        return TruncatedState(amplitudes=vector.reshape(self.dim, self.dim), n_max=self.n_max)


class TruncatedDensityMatrix(BaseModel):
    """Two-mode density matrix over the flattened (n1, n2) basis."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray
    n_max: int = Field(..., ge=0)

    @classmethod
    def from_state(cls, state: TruncatedState) -> "TruncatedDensityMatrix":
        vec = state.vector
        return cls(entries=np.outer(vec, vec.conj()), n_max=state.n_max)

    @property
    def dim(self) -> int:
        return self.n_max + 1

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def populations(self) -> np.ndarray:
        return np.diag(self.entries).real.reshape(self.dim, self.dim)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T), initial=0.0))

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue of the Hermitian part (spot check of positivity)."""
        hermitian = 0.5 * (self.entries + self.entries.conj().T)
        return float(np.linalg.eigvalsh(hermitian)[0])


def poisson_cutoff(alpha: float, tail: float | None = None) -> int:
    """
    Smallest n_max whose Poisson tail P(n > n_max) is below ``tail``.

    Args:
        alpha: Coherent amplitude
        tail: Tail budget; defaults to the configured Poisson tail

    Returns:
        Required n_max
    """
    tail = get_settings().poisson_tail if tail is None else tail
    lam = alpha**2
    if lam == 0.0:
        return 0
    n = max(int(lam), 0)
    while poisson.sf(n, lam) >= tail:
        n += 1
    return n


def coherent_state(alpha: float, n_max: int, tail: float | None = None) -> np.ndarray:
    """
    Fock amplitudes exp(-α²/2)·αⁿ/sqrt(n!) of a real coherent state.

    Args:
        alpha: Real amplitude, >= 0
        n_max: Highest retained level
        tail: Allowed Poisson mass above n_max

    Returns:
        Amplitude vector of length n_max + 1

    Raises:
        TruncationError: If the tail above n_max exceeds the budget
    """
    tail = get_settings().poisson_tail if tail is None else tail
    lam = alpha**2
    amplitudes = np.zeros(n_max + 1, dtype=complex)
    if lam == 0.0:
        amplitudes[0] = 1.0
        return amplitudes
    if poisson.sf(n_max, lam) >= tail:
        raise TruncationError(
            f"coherent amplitude {alpha} does not fit below n_max={n_max}",
            suggested_n_max=poisson_cutoff(alpha, tail),
        )
    n = number_levels(n_max + 1)
    amplitudes[:] = np.exp(-lam / 2.0 + n * math.log(alpha) - gammaln(n + 1) / 2.0)
    return amplitudes


def vacuum(n_max: int) -> np.ndarray:
    amplitudes = np.zeros(n_max + 1, dtype=complex)
    amplitudes[0] = 1.0
    return amplitudes


# ---------------------------------------------------------------------------
# Unitaries and channels
# ---------------------------------------------------------------------------


def _diagonal_phase(
    state: TruncatedState | TruncatedDensityMatrix, phases: np.ndarray, mode: int
) -> TruncatedState | TruncatedDensityMatrix:
    dim = state.dim
    grid = np.ones((dim, dim), dtype=complex)
    grid *= phases[:, None] if mode == 0 else phases[None, :]
    if isinstance(state, TruncatedState):
        return TruncatedState(amplitudes=state.amplitudes * grid, n_max=state.n_max)
    flat = grid.reshape(-1)
    return TruncatedDensityMatrix(
        entries=flat[:, None] * state.entries * flat.conj()[None, :], n_max=state.n_max
    )


def apply_kerr(state: TruncatedState, gamma: float, mode: int = 0) -> TruncatedState:
    """Multiply the amplitude at n by exp(-iγn(n-1)) on ``mode``."""
    n = number_levels(state.dim)
    return cast(TruncatedState, _diagonal_phase(state, np.exp(-1j * gamma * n * (n - 1.0)), mode))


def phase_shift(
    state: TruncatedState | TruncatedDensityMatrix, phi: float, mode: int = 0
) -> TruncatedState | TruncatedDensityMatrix:
    """Apply exp(iNφ) on ``mode``, so the Heisenberg annihilator acquires e^{iφ}."""
    return _diagonal_phase(state, np.exp(1j * phi * number_levels(state.dim)), mode)


def squeeze_generator(r: float, theta: float, n_max: int) -> sp.csc_matrix:
    """Anti-Hermitian generator r(e^{iθ}a1†a2† - e^{-iθ}a1a2) on the two-mode space."""
    dims = [n_max + 1, n_max + 1]
    a1 = embed(annihilation(n_max + 1), 0, dims)
    a2 = embed(annihilation(n_max + 1), 1, dims)
    pair = a1 @ a2
    return (r * (np.exp(1j * theta) * pair.conj().T - np.exp(-1j * theta) * pair)).tocsc()


def edge_population(state: TruncatedState | TruncatedDensityMatrix) -> float:
    """Probability carried by the highest retained level of either mode."""
    populations = state.populations()
    edge = populations[-1, :].sum() + populations[:, -1].sum() - populations[-1, -1]
    return float(edge)


def _check_edge(state: TruncatedState | TruncatedDensityMatrix, budget: float) -> None:
    edge = edge_population(state)
    if edge > budget:
        raise TruncationError(
            f"population {edge:.3e} reached the top level n_max={state.n_max}",
            suggested_n_max=math.ceil(1.25 * state.dim),
        )


def two_mode_squeeze(
    state: TruncatedState | TruncatedDensityMatrix,
    r: float,
    theta: float,
    budget: float | None = None,
) -> TruncatedState | TruncatedDensityMatrix:
    """
    Apply the OPA unitary exp(r(e^{iθ}a1†a2† - e^{-iθ}a1a2)).

    The truncated generator is anti-Hermitian, so the evolution stays unitary
    on the truncated space; leakage is monitored through the population that
    reaches the top level.

    Args:
        state: Pure state or density matrix
        r: Squeezing amplitude
        theta: Squeezing phase
        budget: Allowed top-level population; defaults to the truncation budget

    Returns:
        Squeezed state of the same kind

    Raises:
        TruncationError: If the top-level population exceeds the budget
    """
    budget = get_settings().truncation_budget if budget is None else budget
    if r == 0.0:
        return state
    generator = squeeze_generator(r, theta, state.n_max)
    if isinstance(state, TruncatedState):
        result: TruncatedState | TruncatedDensityMatrix = state.with_vector(
            expm_multiply(generator, state.vector)
        )
    else:
        left = expm_multiply(generator, state.entries)
        entries = expm_multiply(generator, left.conj().T).conj().T
        result = TruncatedDensityMatrix(entries=entries, n_max=state.n_max)
    _check_edge(result, budget)
    return result


def loss_kraus_operators(transmissivity: float, dim: int) -> list[sp.csc_matrix]:
    """Kraus ladder K_k|n> = sqrt(C(n,k)·T^(n-k)·(1-T)^k)|n-k> of the pure-loss channel."""
    operators = []
    for k in range(dim):
        n = np.arange(k, dim)
        weights = np.sqrt(comb(n, k) * transmissivity ** (n - k) * (1.0 - transmissivity) ** k)
        operators.append(sp.csc_matrix((weights.astype(complex), (n - k, n)), shape=(dim, dim)))
    return operators


def loss_channel(
    state: TruncatedState | TruncatedDensityMatrix, transmissivity: float, mode: int = 0
) -> TruncatedDensityMatrix:
    """
    Pure-loss channel of transmissivity T on one mode.

    Args:
        state: Pure state or density matrix
        transmissivity: T in (0, 1]
        mode: Mode the beam splitter acts on

    Returns:
        Density matrix after the channel

    Raises:
        DomainError: If T is outside (0, 1]
    """
    if not 0.0 < transmissivity <= 1.0:
        raise DomainError(f"transmissivity must lie in (0, 1], got {transmissivity}")
    if isinstance(state, TruncatedState):
        state = TruncatedDensityMatrix.from_state(state)
    rho = state
    if transmissivity == 1.0:
        return rho
    dims = [rho.dim, rho.dim]
    entries = np.zeros_like(rho.entries)
    for kraus in loss_kraus_operators(transmissivity, rho.dim):
        if kraus.nnz == 0:
            continue
        full = embed(kraus, mode, dims)
        entries += full @ (full @ rho.entries.conj().T).conj().T
    return TruncatedDensityMatrix(entries=entries, n_max=rho.n_max)
