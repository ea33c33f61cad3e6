"""Coherent-catalysis demonstrations.

Two settings are covered.  A two-level atom driven on resonance by a single
truncated cavity mode (Jaynes-Cummings coupling): choosing the atom state as
the fixed point of the stroboscopic channel at time tau makes the atom return
to its initial state exactly, so it acts as a catalyst while the cavity's
effective temperatures move.  And a qutrit assisted by a qubit reference
frame: a planar rotation inside the two degenerate energy subspaces of the
joint system converts the qutrit's energy coherences into population bias
while preserving the reference frame's marginal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from . import linalg, temperatures
from .linalg import SolverError, ValidationError
from .thermal import QuantumSystem, gibbs_populations

FIXED_POINT_TOL = 1e-10
EIGENVALUE_ONE_TOL = 1e-8
NEGATIVITY_TOL = 1e-9
AVERAGED_MAX_ITER = 200000

TIME_SERIES_COLUMNS = (
    "t",
    "beta_c_A",
    "beta_h_A",
    "beta_c_R",
    "beta_h_R",
    "atom_distance",
    "cavity_coherence",
)


def default_time_grid(steps: int = 600, t_max: float = 30.0) -> np.ndarray:
    """Uniform grid of steps+1 samples over [0, t_max]."""
    if steps < 1 or t_max <= 0:
        raise ValidationError("need steps >= 1 and t_max > 0")
    return np.linspace(0.0, t_max, steps + 1)


@dataclass(frozen=True)
class JCConfig:
    """Resonant Jaynes-Cummings configuration with a truncated cavity.

    The cavity keeps `fock_levels` Fock states; resonance omega_a == omega_r
    is required so that the coupling commutes with the total energy and the
    evolution is a valid thermal-operation unitary.
    """

    omega_a: float = 1.0
    omega_r: float = 1.0
    g: float = 0.1
    fock_levels: int = 3
    tau: float = 28.5
    time_grid: np.ndarray = field(default=None)

    def __post_init__(self):
        if abs(self.omega_a - self.omega_r) > 1e-12:
            raise ValidationError(
                f"off-resonant drive: omega_a={self.omega_a} != omega_r={self.omega_r}"
            )
        if self.fock_levels < 2:
            raise ValidationError("need at least 2 Fock levels")
        if not (self.tau > 0):
            raise ValidationError("tau must be positive")
        grid = self.time_grid
        if grid is None:
            grid = default_time_grid(t_max=max(30.0, self.tau))
        grid = np.asarray(grid, dtype=float)
        if grid.ndim != 1 or grid.size == 0:
            raise ValidationError("time_grid must be a non-empty 1-d array")
        object.__setattr__(self, "time_grid", grid)

    @property
    def cavity_energies(self) -> np.ndarray:
        return self.omega_a * np.arange(self.fock_levels, dtype=float)

    @property
    def atom_energies(self) -> np.ndarray:
        return np.array([0.0, self.omega_r])


@dataclass(frozen=True)
class CatalysisResult:
    """Catalyst state, its return residual, and the recorded time series.

    `time_series` rows follow TIME_SERIES_COLUMNS; beta values are emitted
    as inverse temperatures so population crossings stay finite (they pass
    through beta = 0 rather than a temperature pole).
    """

    catalyst_state: np.ndarray
    fixed_point_residual: float
    time_series: np.ndarray
    boundary_occupancy: float = 0.0


def destroy(n: int) -> np.ndarray:
    """Truncated bosonic annihilation operator, a|k> = sqrt(k)|k-1>."""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)


def jc_hamiltonian(config: JCConfig) -> np.ndarray:
    """omega (a^dag a + |e><e|) + g (a sigma_+ + a^dag sigma_-) on cavity (x) atom."""
    n = config.fock_levels
    a = destroy(n)
    number = np.diag(np.arange(n, dtype=float)).astype(complex)
    excited = np.diag([0.0, 1.0]).astype(complex)
    sigma_plus = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)  # |e><g|, basis (g, e)
    h = (
        config.omega_a * np.kron(number, np.eye(2))
        + config.omega_r * np.kron(np.eye(n), excited)
        + config.g * (np.kron(a, sigma_plus) + np.kron(a.conj().T, sigma_plus.conj().T))
    )
    return h


def excitation_number(config: JCConfig) -> np.ndarray:
    """Joint excitation operator a^dag a + |e><e|; commutes with the Hamiltonian."""
    n = config.fock_levels
    return np.kron(np.diag(np.arange(n, dtype=float)), np.eye(2)) + np.kron(
        np.eye(n), np.diag([0.0, 1.0])
    ).astype(complex)


# ---------------------------------------------------------------------------
# channel fixed points


def _channel_matrix(apply_channel: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    m = np.zeros((dim * dim, dim * dim), dtype=complex)
    for k in range(dim):
        for l in range(dim):
            unit = np.zeros((dim, dim), dtype=complex)
            unit[k, l] = 1.0
            m[:, k * dim + l] = apply_channel(unit).reshape(-1)
    return m


def _normalize_candidate(x: np.ndarray) -> np.ndarray | None:
    x = (x + x.conj().T) / 2
    tr = float(np.trace(x).real)
    if abs(tr) < 1e-12:
        return None
    return x / tr


def fixed_point_eigen(apply_channel, dim: int) -> np.ndarray | None:
    """Fixed point from the eigenvalue-1 eigenvector of the vectorized channel.

    Returns None when the unit eigenvalue is degenerate or the candidate is
    unusable (zero trace), leaving the decision to the averaged iteration.
    """
    m = _channel_matrix(apply_channel, dim)
    eigvals, eigvecs = np.linalg.eig(m)
    near_one = np.where(np.abs(eigvals - 1.0) < EIGENVALUE_ONE_TOL)[0]
    if near_one.size == 0:
        raise SolverError("channel has no eigenvalue within 1e-8 of 1; not trace-preserving?")
    if near_one.size > 1:
        return None
    return _normalize_candidate(eigvecs[:, near_one[0]].reshape(dim, dim))


def fixed_point_averaged(apply_channel, dim: int, tol: float = FIXED_POINT_TOL) -> np.ndarray:
    """Averaged iteration x <- (x + Phi(x))/2 from the maximally mixed state.

    The averaging damps rotating (peripheral) spectrum, so the iteration
    converges to a fixed point of Phi even when the fixed-point space is
    degenerate; started from I/d it realizes the Cesaro-limit convention.
    """
    x = np.eye(dim, dtype=complex) / dim
    for _ in range(AVERAGED_MAX_ITER):
        fx = apply_channel(x)
        if linalg.trace_distance(fx, x) <= tol:
            return x
        x = (x + fx) / 2
    raise SolverError(f"averaged fixed-point iteration missed tolerance {tol:.0e}")


def channel_fixed_point(apply_channel, dim: int, tol: float = FIXED_POINT_TOL) -> np.ndarray:
    """Density-matrix fixed point of a CPTP map.

    Spectral solve first; averaged iteration from I/d on degeneracy.  The
    result is validated as a state: eigenvalues below -1e-9 abort, smaller
    negativities are floored at zero before renormalizing.
    """
    x = fixed_point_eigen(apply_channel, dim)
    if x is None or linalg.trace_distance(apply_channel(x), x) > tol:
        x = fixed_point_averaged(apply_channel, dim, tol)
    w = np.linalg.eigvalsh(x)
    if w.min() < -NEGATIVITY_TOL:
        raise SolverError(f"fixed point has negative eigenvalue {w.min():.3e}")
    if w.min() < 0.0:
        vals, vecs = np.linalg.eigh(x)
        vals = np.maximum(vals, 0.0)
        x = (vecs * vals) @ vecs.conj().T
        x = x / np.trace(x).real
    if linalg.trace_distance(apply_channel(x), x) > tol:
        raise SolverError(f"fixed point residual exceeds {tol:.0e}")
    return x


# ---------------------------------------------------------------------------
# Jaynes-Cummings catalysis


def _jc_channel(config: JCConfig, cavity_state: np.ndarray, t: float):
    h = jc_hamiltonian(config)
    u = linalg.unitary_evolution(h, t)
    n = config.fock_levels

    def apply(x: np.ndarray) -> np.ndarray:
        joint = u @ linalg.tensor_product(cavity_state, x) @ u.conj().T
        return linalg.partial_trace(joint, (n, 2), keep="second")

    return apply


def solve_catalyst_fixed_point(config: JCConfig, cavity_state) -> CatalysisResult:
    """Atom state X with X = Tr_A[U(tau) (rho_A (x) X) U(tau)^dag]."""
    rho_a = linalg.check_density_matrix(cavity_state, "cavity state")
    if rho_a.shape[0] != config.fock_levels:
        raise ValidationError("cavity state dimension != fock_levels")
    apply = _jc_channel(config, rho_a, config.tau)
    x = channel_fixed_point(apply, 2)
    residual = linalg.trace_distance(apply(x), x)
    return CatalysisResult(
        catalyst_state=x,
        fixed_point_residual=residual,
        time_series=np.empty((0, len(TIME_SERIES_COLUMNS))),
    )


def _offdiag_l1(m: np.ndarray) -> float:
    return float(np.abs(m - np.diag(np.diag(m))).sum())


def run_time_series(config: JCConfig, cavity_state, atom_state) -> CatalysisResult:
    """Evolve rho_A (x) X over the grid and record both subsystems' temperatures.

    Each row holds the cavity and atom beta pairs, the atom's trace distance
    to its initial state, and the cavity's off-diagonal l1 norm as a
    coherence proxy.  `boundary_occupancy` reports the largest population of
    the top Fock level with the atom excited -- the only state whose
    dynamics the truncation alters.
    """
    rho_a = linalg.check_density_matrix(cavity_state, "cavity state")
    atom0 = linalg.check_density_matrix(atom_state, "atom state")
    if rho_a.shape[0] != config.fock_levels or atom0.shape[0] != 2:
        raise ValidationError("state dimensions do not match the configuration")
    n = config.fock_levels
    h = jc_hamiltonian(config)
    w, v = linalg.hermitian_eig(h)
    joint0 = linalg.tensor_product(rho_a, atom0)
    joint0_v = v.conj().T @ joint0 @ v

    e_cav = config.cavity_energies
    e_atom = config.atom_energies
    boundary_index = (n - 1) * 2 + 1

    rows = np.empty((config.time_grid.size, len(TIME_SERIES_COLUMNS)))
    boundary = 0.0
    for k, t in enumerate(config.time_grid):
        phases = np.exp(-1j * w * t)
        joint = (v * phases) @ joint0_v @ (v * phases).conj().T
        sigma_a = linalg.partial_trace(joint, (n, 2), keep="first")
        sigma_r = linalg.partial_trace(joint, (n, 2), keep="second")
        pair_a = temperatures.single_copy_effective(QuantumSystem(e_cav, sigma_a))
        pair_r = temperatures.single_copy_effective(QuantumSystem(e_atom, sigma_r))
        rows[k] = (
            t,
            pair_a.beta_c,
            pair_a.beta_h,
            pair_r.beta_c,
            pair_r.beta_h,
            linalg.trace_distance(sigma_r, atom0),
            _offdiag_l1(sigma_a),
        )
        boundary = max(boundary, float(joint[boundary_index, boundary_index].real))

    apply_tau = _jc_channel(config, rho_a, config.tau)
    residual = linalg.trace_distance(apply_tau(atom0), atom0)
    return CatalysisResult(
        catalyst_state=atom0,
        fixed_point_residual=residual,
        time_series=rows,
        boundary_occupancy=boundary,
    )


def uniform_superposition_state(dim: int) -> np.ndarray:
    """|psi><psi| for the uniform superposition of all energy levels."""
    psi = np.ones(dim, dtype=complex) / math.sqrt(dim)
    return np.outer(psi, psi.conj())


# ---------------------------------------------------------------------------
# qutrit with a qubit reference frame

QUTRIT_ENERGIES = np.array([0.0, 1.0, 2.0])
CATALYST_ENERGIES = np.array([0.0, 1.0])


def reference_catalyst() -> np.ndarray:
    """(1 - 1/sqrt(2))/2 * I + 1/sqrt(2) |+><+| on the qubit frame."""
    plus = np.full((2, 2), 0.5, dtype=complex)
    return 0.5 * (1.0 - 1.0 / math.sqrt(2)) * np.eye(2) + plus / math.sqrt(2)


def qutrit_state(lam: float, beta: float) -> np.ndarray:
    """(1 - lam) * gibbs(beta) + lam |psi><psi| with the uniform |psi>."""
    w = gibbs_populations(QUTRIT_ENERGIES, beta)
    return (1.0 - lam) * np.diag(w).astype(complex) + lam * uniform_superposition_state(3)


@dataclass(frozen=True)
class QutritCatalystSetup:
    """Coherence weight lam in [0, 1], bath beta, and the frame state."""

    lam: float
    beta: float
    phi_r: np.ndarray = field(default=None)

    def __post_init__(self):
        if not (0.0 <= self.lam <= 1.0):
            raise ValidationError(f"lambda must lie in [0, 1], got {self.lam}")
        if not math.isfinite(self.beta):
            raise ValidationError("beta must be finite")
        phi = self.phi_r
        phi = reference_catalyst() if phi is None else linalg.check_density_matrix(phi, "phi_r")
        if phi.shape[0] != 2:
            raise ValidationError("the reference frame must be a qubit")
        object.__setattr__(self, "phi_r", phi)

    @property
    def rho_a(self) -> np.ndarray:
        return qutrit_state(self.lam, self.beta)


def qutrit_block_unitary() -> np.ndarray:
    """Planar pi/4 rotation in each degenerate subspace of the joint energy.

    The degenerate blocks are span{|01>, |10>} and span{|20>, |11>} (joint
    index 2a + r).  The rotation is oriented so the first basis vector of
    each block gains population (cos sin)(M_12 + M_21) from the block's
    off-diagonal M.  A +/-i-phased variant of this block map is sometimes
    written down for the same protocol, but it is not unitary (its columns
    are not orthogonal) and, with the phases made unitary, transfers no
    population from real-valued product inputs; the real rotation is the
    energy-conserving choice that produces the stated marginals.
    """
    v = np.eye(6, dtype=complex)
    c = s = 1.0 / math.sqrt(2)
    for first, second in ((1, 2), (4, 3)):
        v[first, first] = c
        v[first, second] = s
        v[second, first] = -s
        v[second, second] = c
    return v


class QutritProtocolResult(NamedTuple):
    sigma_a: np.ndarray
    sigma_r: np.ndarray
    temps: temperatures.EffectiveTempPair
    correlation_norm: float


def qutrit_catalyst_protocol(setup: QutritCatalystSetup) -> QutritProtocolResult:
    """Apply the block rotation to rho_A (x) phi_R and read off the marginals.

    Returns the qutrit marginal, the frame marginal, the qutrit's effective
    temperatures after the rotation, and the trace-norm distance between the
    joint state and the product of its marginals (the correlation built up).
    """
    v = qutrit_block_unitary()
    joint = v @ linalg.tensor_product(setup.rho_a, setup.phi_r) @ v.conj().T
    sigma_a = linalg.partial_trace(joint, (3, 2), keep="first")
    sigma_r = linalg.partial_trace(joint, (3, 2), keep="second")
    temps = temperatures.single_copy_effective(QuantumSystem(QUTRIT_ENERGIES, sigma_a))
    correlation = linalg.trace_norm(joint - linalg.tensor_product(sigma_a, sigma_r))
    return QutritProtocolResult(sigma_a, sigma_r, temps, correlation)


def tune_catalyst(setup: QutritCatalystSetup) -> np.ndarray:
    """Frame state left invariant by the protocol at the given (lam, beta).

    Solves phi = Tr_A[V (rho_A (x) phi) V^dag] with the same spectral
    machinery as the Jaynes-Cummings fixed point.  For a diagonal rho_A the
    channel preserves diagonality, so the returned frame is diagonal.
    """
    v = qutrit_block_unitary()
    rho_a = setup.rho_a

    def apply(x: np.ndarray) -> np.ndarray:
        joint = v @ linalg.tensor_product(rho_a, x) @ v.conj().T
        return linalg.partial_trace(joint, (3, 2), keep="second")

    return channel_fixed_point(apply, 2)
