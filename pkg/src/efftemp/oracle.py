"""Heat-flow verification over the Gibbs-stochastic polytope.

A bath at inverse temperature beta acting through any energy-conserving
interaction moves the populations of a state by a column-stochastic matrix G
that fixes the bath's Gibbs weight vector g (G @ g = g).  Maximizing the
system's energy change lambda^T (G - 1) p over that polytope is a small
linear program; its sign decides whether any thermometer at that bath
temperature can be cooled or heated.  This module is the brute-force
counterpart to the closed-form virtual-temperature predictions, plus the
explicit two-level swap protocol that saturates the cooling bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg, simplex, temperatures
from .linalg import ValidationError
from .thermal import QuantumSystem, check_energy_levels

ORACLE_DIM_CAP = 6
SIGN_MARGIN = 1e-9       # numerical margin realizing strict heat-sign inequalities
POLYTOPE_TOL = 1e-9


@dataclass(frozen=True)
class GibbsStochasticLP:
    """Energy-change optimization over {G >= 0, 1^T G = 1^T, G g = g}."""

    populations: np.ndarray
    energies: np.ndarray
    beta_bath: float
    sense: str = "maximize"

    def __post_init__(self):
        p = np.asarray(self.populations, dtype=float)
        e = check_energy_levels(self.energies)
        if p.ndim != 1 or p.size != e.size:
            raise ValidationError("populations must match the energy ladder")
        if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-10:
            raise ValidationError("populations must be a probability vector (1e-10)")
        if not math.isfinite(self.beta_bath):
            raise ValidationError("bath inverse temperature must be finite")
        if self.sense not in ("maximize", "minimize"):
            raise ValidationError(f"sense must be maximize|minimize, got {self.sense!r}")
        object.__setattr__(self, "populations", np.maximum(p, 0.0))
        object.__setattr__(self, "energies", e)

    @property
    def dim(self) -> int:
        return self.energies.size


@dataclass(frozen=True)
class HeatOptimum:
    """LP optimum of lambda^T (G - 1) p with its certifying matrix."""

    value: float
    matrix: np.ndarray
    status: str


@dataclass(frozen=True)
class CoolingProtocol:
    """Resonant two-level swap against a qubit thermometer.

    The pair (i, j) attains the coldest virtual temperature beta_max; the
    thermometer has gap = e_j - e_i and Gibbs populations (g0, g1) at the
    bath temperature.  delta_ij is the ground-population gain of the
    thermometer, so heat_to_thermometer = -gap * delta_ij.
    """

    pair: tuple[int, int]
    gap: float
    g0: float
    g1: float
    delta_ij: float
    heat_to_thermometer: float
    beta_max: float


def gibbs_weights(energies, beta: float) -> np.ndarray:
    """Normalized Gibbs weight vector exp(-beta e)/Z (finite beta, any sign)."""
    e = check_energy_levels(energies)
    if not math.isfinite(beta):
        raise ValidationError("Gibbs weights need a finite inverse temperature")
    t = beta * e
    w = np.exp(-(t - t.min()))
    return w / w.sum()


def max_energy_gain(lp: GibbsStochasticLP) -> HeatOptimum:
    """Optimize the system energy change over the Gibbs-stochastic polytope.

    Variables are the d^2 entries of G; the 2d equality rows are the column
    sums and the Gibbs fixed-vector condition (one row is redundant, which
    the solver tolerates).  The returned matrix is re-checked against the
    polytope and the objective to 1e-9.
    """
    d = lp.dim
    if d > ORACLE_DIM_CAP:
        raise ValidationError(f"oracle dimension cap is {ORACLE_DIM_CAP}, got {d}")
    e, p = lp.energies, lp.populations
    g = gibbs_weights(e, lp.beta_bath)

    nvar = d * d  # G[i, j] -> x[i*d + j]
    a_eq = np.zeros((2 * d, nvar))
    b_eq = np.zeros(2 * d)
    for j in range(d):
        for i in range(d):
            a_eq[j, i * d + j] = 1.0
        b_eq[j] = 1.0
    for i in range(d):
        for j in range(d):
            a_eq[d + i, i * d + j] = g[j]
        b_eq[d + i] = g[i]
    cost = np.zeros(nvar)
    for i in range(d):
        for j in range(d):
            cost[i * d + j] = e[i] * p[j]

    result = simplex.solve_lp(cost, a_eq=a_eq, b_eq=b_eq, maximize=(lp.sense == "maximize"))
    G = result.x.reshape(d, d)

    col_dev = np.abs(G.sum(axis=0) - 1.0).max()
    fix_dev = np.abs(G @ g - g).max()
    if G.min() < -POLYTOPE_TOL or col_dev > POLYTOPE_TOL or fix_dev > POLYTOPE_TOL:
        raise linalg.SolverError(
            f"optimal matrix violates the polytope: cols {col_dev:.2e}, fix {fix_dev:.2e}"
        )
    value = float(e @ (G @ p) - e @ p)
    if abs(value - (result.value - float(e @ p))) > POLYTOPE_TOL:
        raise linalg.SolverError("objective recomputation mismatch beyond 1e-9")
    return HeatOptimum(value=value, matrix=G, status="optimal")


def heat_sign_oracle(system: QuantumSystem, beta_bath: float) -> tuple[bool, bool]:
    """(can_cool, can_heat) verdicts for a bath at the given inverse temperature.

    can_cool: some thermometer at beta_bath loses energy, i.e. the system
    can gain energy under a Gibbs-stochastic map; can_heat symmetrically.
    Strict inequalities are realized with a 1e-9 margin, since the simplex
    returns exact vertices up to float noise.
    """
    if system.dim > ORACLE_DIM_CAP:
        raise ValidationError(f"oracle dimension cap is {ORACLE_DIM_CAP}, got {system.dim}")
    p = system.populations
    gain = max_energy_gain(
        GibbsStochasticLP(p, system.energies, beta_bath, sense="maximize")
    ).value
    loss = max_energy_gain(
        GibbsStochasticLP(p, system.energies, beta_bath, sense="minimize")
    ).value
    return bool(gain > SIGN_MARGIN), bool(loss < -SIGN_MARGIN)


def build_cooling_protocol(system: QuantumSystem, beta_bath: float) -> CoolingProtocol:
    """Swap protocol on the coldest pair against a resonant qubit thermometer.

    delta_ij = p_i g0 exp(-beta gap) (1 - exp(-(beta_max - beta) gap)) with
    beta_max the coldest virtual temperature; the transfer vanishes exactly
    at beta_bath = beta_max and cools the thermometer whenever the bath is
    strictly hotter.  No search over thermometers is needed: the resonant
    pair choice is optimal.
    """
    if not math.isfinite(beta_bath):
        raise ValidationError("bath inverse temperature must be finite")
    spectrum = temperatures.virtual_spectrum(system)
    if len(spectrum) == 0:
        raise ValidationError("no level pair with distinct energies")
    i, j, beta_max = max(spectrum.entries, key=lambda entry: entry[2])
    gap = float(system.energies[j] - system.energies[i])
    p = temperatures._clean_populations(system.populations)
    g0 = 1.0 / (1.0 + math.exp(-beta_bath * gap))
    g1 = 1.0 - g0
    if p[i] == 0.0:
        delta = 0.0
    elif math.isinf(beta_max):
        # empty upper level: the full p_i * g1 weight moves
        delta = p[i] * g0 * math.exp(-beta_bath * gap)
    else:
        delta = p[i] * g0 * math.exp(-beta_bath * gap) * (
            1.0 - math.exp(-(beta_max - beta_bath) * gap)
        )
    return CoolingProtocol(
        pair=(int(i), int(j)),
        gap=gap,
        g0=g0,
        g1=g1,
        delta_ij=float(delta),
        heat_to_thermometer=float(-gap * delta),
        beta_max=float(beta_max),
    )


def simulated_protocol_heat(
    system: QuantumSystem, beta_bath: float, pair: tuple[int, int]
) -> float:
    """Heat to the thermometer from an explicit joint-unitary simulation.

    Builds the resonant qubit thermometer, generates the swap from its
    interaction Hamiltonian at t = pi/2, evolves rho (x) gamma_B and reads
    Tr[H_B (sigma_B - gamma_B)].  Independent of the closed-form transfer
    formula; used to certify it.
    """
    i, j = pair
    d = system.dim
    gap = float(system.energies[j] - system.energies[i])
    if gap <= 0:
        raise ValidationError("pair must have a positive energy gap")
    g0 = 1.0 / (1.0 + math.exp(-beta_bath * gap))
    gamma_b = np.diag([g0, 1.0 - g0]).astype(complex)
    h_b = np.diag([0.0, gap]).astype(complex)

    h_int = np.zeros((2 * d, 2 * d), dtype=complex)
    # |e_j, 0><e_i, 1| + h.c., joint index a*2 + s
    h_int[2 * j + 0, 2 * i + 1] = 1.0
    h_int[2 * i + 1, 2 * j + 0] = 1.0
    u = linalg.unitary_evolution(h_int, math.pi / 2)

    rho_e = system.rho_energy_basis
    joint = u @ linalg.tensor_product(rho_e, gamma_b) @ u.conj().T
    sigma_b = linalg.partial_trace(joint, (d, 2), keep="second")
    return float(np.real(np.trace(h_b @ (sigma_b - gamma_b))))


def random_diagonal_system(rng: np.random.Generator, dim: int) -> QuantumSystem:
    """Random full-rank diagonal system with well-separated energy levels."""
    energies = np.sort(rng.uniform(0.0, 2.0, dim)) + 0.05 * np.arange(dim)
    populations = rng.dirichlet(np.ones(dim))
    return QuantumSystem(energies=energies, rho=np.diag(populations).astype(complex))


@dataclass(frozen=True)
class EquivalenceReport:
    cases: int
    disagreements: int
    max_polytope_residual: float


def equivalence_trials(
    n_systems: int,
    baths_per_system: int,
    seed: int,
    dims: tuple[int, ...] = (3, 4),
) -> EquivalenceReport:
    """Compare LP heat-sign verdicts with the virtual-temperature prediction.

    For each random diagonal system and bath temperature the oracle verdict
    must match: cooling possible iff the bath is strictly hotter than beta_c,
    heating possible iff strictly colder than beta_h.
    """
    rng = np.random.default_rng(seed)
    disagreements = 0
    cases = 0
    residual = 0.0
    for k in range(n_systems):
        system = random_diagonal_system(rng, dims[k % len(dims)])
        pair = temperatures.single_copy_effective(system)
        for _ in range(baths_per_system):
            beta_bath = float(rng.uniform(-3.0, 3.0))
            can_cool, can_heat = heat_sign_oracle(system, beta_bath)
            g = gibbs_weights(system.energies, beta_bath)
            for sense in ("maximize", "minimize"):
                opt = max_energy_gain(
                    GibbsStochasticLP(system.populations, system.energies, beta_bath, sense)
                )
                residual = max(
                    residual,
                    float(np.abs(opt.matrix.sum(axis=0) - 1.0).max()),
                    float(np.abs(opt.matrix @ g - g).max()),
                )
            predicted_cool = temperatures.hotter_than(beta_bath, pair.beta_c)
            predicted_heat = temperatures.hotter_than(pair.beta_h, beta_bath)
            cases += 1
            if can_cool != predicted_cool or can_heat != predicted_heat:
                disagreements += 1
    return EquivalenceReport(
        cases=cases, disagreements=disagreements, max_polytope_residual=residual
    )
