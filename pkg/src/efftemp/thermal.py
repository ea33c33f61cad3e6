"""Gibbs states by inverse temperature or by mean energy.

Temperatures are handled as inverse temperatures beta (nats per unit of
energy, k_B = 1) over the extended reals: beta = +inf is the ground-subspace
uniform state, beta = -inf the top-subspace uniform state.  Working in beta
keeps the hotness order total; the Kelvin-style T = 1/beta is left to the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import BracketError, SolverError, ValidationError

BISECT_WIDTH_TOL = 1e-13
BISECT_MAX_ITER = 200
ENERGY_RTOL = 1e-12


def check_energy_levels(energies) -> np.ndarray:
    """Validate an ascending, finite energy ladder (degeneracies allowed)."""
    e = np.asarray(energies, dtype=float)
    if e.ndim != 1 or e.size == 0:
        raise ValidationError("energies must be a non-empty 1-d list")
    if not np.all(np.isfinite(e)):
        raise ValidationError("energies must be finite")
    if np.any(np.diff(e) < 0):
        raise ValidationError("energies must be sorted in ascending order")
    if e.size > linalg.max_dim():
        raise ValidationError(f"spectrum size {e.size} exceeds the dense cap {linalg.max_dim()}")
    return e


@dataclass(frozen=True)
class QuantumSystem:
    """A Hamiltonian spectrum paired with a density matrix.

    `energies` are the Hamiltonian eigenvalues in ascending order.  When
    `eigenbasis` is given, H = V diag(energies) V^dag and `rho` is expressed
    in the same outer basis; otherwise the state is already in the energy
    eigenbasis.
    """

    energies: np.ndarray
    rho: np.ndarray
    eigenbasis: np.ndarray | None = None

    def __post_init__(self):
        e = check_energy_levels(self.energies)
        rho = linalg.check_density_matrix(self.rho)
        if rho.shape[0] != e.size:
            raise ValidationError(f"state dimension {rho.shape[0]} != {e.size} energy levels")
        basis = self.eigenbasis
        if basis is not None:
            basis = linalg.as_square(basis, "eigenbasis")
            if basis.shape[0] != e.size:
                raise ValidationError("eigenbasis dimension mismatch")
            dev = np.abs(basis.conj().T @ basis - np.eye(e.size)).max()
            if dev > 1e-10:
                raise ValidationError(f"eigenbasis is not unitary: deviation {dev:.3e}")
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "eigenbasis", basis)
        if abs(self.populations.sum() - 1.0) > 1e-10:
            raise ValidationError("populations do not sum to 1 within 1e-10")

    @property
    def dim(self) -> int:
        return self.energies.size

    @property
    def rho_energy_basis(self) -> np.ndarray:
        """The state rotated into the energy eigenbasis."""
        if self.eigenbasis is None:
            return self.rho
        return self.eigenbasis.conj().T @ self.rho @ self.eigenbasis

    @property
    def populations(self) -> np.ndarray:
        """p_i = <e_i| rho |e_i>."""
        return np.diag(self.rho_energy_basis).real.copy()

    @property
    def mean_energy(self) -> float:
        return float(self.populations @ self.energies)

    def hamiltonian(self) -> np.ndarray:
        h = np.diag(self.energies).astype(complex)
        if self.eigenbasis is None:
            return h
        return self.eigenbasis @ h @ self.eigenbasis.conj().T

    def entropy(self) -> float:
        return linalg.von_neumann_entropy(self.rho)


@dataclass(frozen=True)
class GibbsSolveResult:
    """Outcome of a Gibbs construction: state diagonal in the energy basis."""

    beta: float
    state: np.ndarray
    mean_energy: float
    entropy: float
    energy_variance: float

    @property
    def populations(self) -> np.ndarray:
        return np.diag(self.state).real.copy()


def gibbs_populations(energies, beta: float) -> np.ndarray:
    """Populations proportional to exp(-beta * e_i), stable at any finite beta.

    The exponent is shifted by min(beta * e_i) before exponentiating so the
    largest weight is exactly 1.  beta = +inf (-inf) puts uniform weight on
    the ground (top) degenerate subspace.
    """
    e = check_energy_levels(energies)
    if math.isinf(beta):
        edge = e.min() if beta > 0 else e.max()
        mask = np.abs(e - edge) <= linalg.energy_equal_tol(e)
        return mask / mask.sum()
    t = beta * e
    w = np.exp(-(t - t.min()))
    return w / w.sum()


def _result_from_populations(e: np.ndarray, beta: float, p: np.ndarray) -> GibbsSolveResult:
    mean = float(p @ e)
    var = float(p @ (e - mean) ** 2)
    return GibbsSolveResult(
        beta=beta,
        state=np.diag(p).astype(complex),
        mean_energy=mean,
        entropy=linalg.entropy_of_probabilities(p),
        energy_variance=max(0.0, var),
    )


def gibbs_by_beta(energies, beta: float) -> GibbsSolveResult:
    """Gibbs state exp(-beta H)/Z on the given energy ladder."""
    e = check_energy_levels(energies)
    return _result_from_populations(e, float(beta), gibbs_populations(e, beta))


def mean_energy_at(energies, beta: float) -> float:
    """Mean energy of the Gibbs state at inverse temperature beta."""
    e = check_energy_levels(energies)
    return float(gibbs_populations(e, beta) @ e)


def gibbs_by_energy(energies, target_energy: float) -> GibbsSolveResult:
    """Invert beta |-> mean energy by bisection.

    The map is strictly decreasing, so a bracket is expanded geometrically
    (into negative beta when the target exceeds the infinite-temperature
    mean) and then bisected to width 1e-13 or machine stall.  The result is
    accepted only if |mean - target| <= 1e-12 * max(1, |target|).

    Raises
    ------
    BracketError
        If `target_energy` is outside the open interval (e_min, e_max); for
        a fully degenerate ladder only its single energy is allowed.
    SolverError
        If the residual tolerance is not met within 200 bisection steps.
    """
    e = check_energy_levels(energies)
    target = float(target_energy)
    emin, emax = float(e[0]), float(e[-1])
    tol = linalg.energy_equal_tol(e)
    if emax - emin <= tol:
        if abs(target - emin) <= tol:
            return gibbs_by_beta(e, 0.0)
        raise BracketError(
            f"fully degenerate spectrum at {emin:.12g}; target {target:.12g} unreachable"
        )
    if not (emin < target < emax):
        raise BracketError(
            f"target energy {target:.12g} outside the open interval ({emin:.12g}, {emax:.12g})"
        )

    def mean(b: float) -> float:
        return float(gibbs_populations(e, b) @ e)

    e0 = mean(0.0)
    if target == e0:
        lo = hi = 0.0
    elif target < e0:
        lo, hi = 0.0, 1.0
        while mean(hi) > target:
            hi *= 2.0
            if hi > 1e300:
                raise SolverError("bracket expansion overflow")
    else:
        lo, hi = -1.0, 0.0
        while mean(lo) < target:
            lo *= 2.0
            if lo < -1e300:
                raise SolverError("bracket expansion overflow")
    # invariant: mean(lo) >= target >= mean(hi)
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= BISECT_WIDTH_TOL:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if mean(mid) > target:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    result = gibbs_by_beta(e, beta)
    residual = abs(result.mean_energy - target)
    if residual > ENERGY_RTOL * max(1.0, abs(target)):
        raise SolverError(
            f"bisection stalled with energy residual {residual:.3e} at beta={beta:.12g}"
        )
    return result


def t_star(system: QuantumSystem) -> float:
    """Inverse temperature of the Gibbs state matching Tr[H rho].

    Returns +inf (-inf) when the mean energy sits at the bottom (top) of the
    spectrum.
    """
    e = system.energies
    mean = system.mean_energy
    if e[-1] - e[0] <= linalg.energy_equal_tol(e):
        return 0.0
    if mean <= e[0]:
        return math.inf
    if mean >= e[-1]:
        return -math.inf
    return gibbs_by_energy(e, mean).beta


def beta_free_energy(system: QuantumSystem, beta: float) -> float:
    """beta * F = beta * Tr[H rho] - S(rho); finite for every real beta."""
    return float(beta) * system.mean_energy - system.entropy()


def free_energy(system: QuantumSystem, beta: float) -> float:
    """Non-equilibrium free energy Tr[H rho] - S(rho)/beta at inverse temperature beta."""
    if beta == 0.0:
        raise ValidationError("free energy diverges at beta = 0; use beta_free_energy")
    return beta_free_energy(system, beta) / float(beta)


def energy_variance(result: GibbsSolveResult) -> float:
    """Energy variance of a Gibbs solve; zero only on a single energy shell."""
    var = float(result.energy_variance)
    if var < 0.0:
        raise ValidationError(f"negative energy variance {var:.3e}")
    return var
