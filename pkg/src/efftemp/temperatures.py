"""Effective cold/hot inverse temperatures of a quantum state.

Every pair of energy levels with distinct energies carries an inverse
virtual temperature

    beta_ij = log(p_i / p_j) / (e_j - e_i),

where the p_i are the populations of the dephased state.  The hotness order
is total in beta: smaller beta is hotter, and negative beta is hotter than
every positive beta.  A state is coldest across its largest beta_ij and
hottest across its smallest, which gives the single-copy pair

    beta_c = max_ij beta_ij,      beta_h = min_ij beta_ij.

Heat-per-copy constrained (asymptotic) temperatures follow from entropy
differences of mean-energy-matched Gibbs states; those pairs depend on the
full spectrum of the state, coherences included, and at finite heat delta the
cold value drops below the hot one (the usable temperature window shrinks).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement

import numpy as np

from . import linalg, thermal
from .linalg import SolverError, ValidationError
from .thermal import QuantumSystem, gibbs_by_energy

ZERO_POPULATION = 1e-15
TENSOR_POWER_CAP = 10**6
# relative tolerance for clustering sums of energies in tensor powers
_GROUP_RTOL = 1e-9


@dataclass(frozen=True)
class VirtualTempSpectrum:
    """All pairwise inverse virtual temperatures of a state.

    Entries are (i, j, beta_ij) with e_i < e_j, one per unordered pair of
    levels with distinct energies; beta_ji = beta_ij.  Pairs whose two
    populations both vanish are omitted, and a single vanishing population
    is recorded as +inf (empty upper level) or -inf (empty lower level).
    """

    entries: tuple[tuple[int, int, float], ...]

    def betas(self) -> np.ndarray:
        return np.array([b for _, _, b in self.entries], dtype=float)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class EffectiveTempPair:
    """A (beta_c, beta_h) pair on the extended real line.

    For spectrum-derived pairs beta_h <= beta_c by construction.  Heat-
    constrained pairs may order the other way once the minimum transferred
    heat is finite, so no ordering is enforced here.
    """

    beta_c: float
    beta_h: float

    def __post_init__(self):
        if math.isnan(self.beta_c) or math.isnan(self.beta_h):
            raise ValidationError("effective temperatures must not be NaN")


@dataclass(frozen=True)
class AsymptoticRequest:
    """A system together with the heat per copy, delta > 0, in energy units."""

    system: QuantumSystem
    delta: float

    def __post_init__(self):
        if not (self.delta > 0.0) or not math.isfinite(self.delta):
            raise ValidationError(f"delta must be positive and finite, got {self.delta}")


def _clean_populations(p: np.ndarray) -> np.ndarray:
    """Treat populations at or below the zero threshold as exact zeros."""
    return np.where(p <= ZERO_POPULATION, 0.0, p)


def _pair_beta(p_low: float, p_high: float, gap: float) -> float | None:
    """beta across one pair; None when both populations vanish."""
    if p_low == 0.0 and p_high == 0.0:
        return None
    if p_high == 0.0:
        return math.inf
    if p_low == 0.0:
        return -math.inf
    return math.log(p_low / p_high) / gap


def virtual_spectrum(system: QuantumSystem) -> VirtualTempSpectrum:
    """Virtual temperature spectrum of the dephased state.

    Coherences never enter: the populations are read from the dephased state
    in the energy eigenbasis.  Degenerate pairs (equal energies) carry no
    virtual temperature and are excluded.
    """
    e = system.energies
    rho_e = linalg.dephase(system.rho_energy_basis, e)
    p = _clean_populations(np.diag(rho_e).real)
    tol = linalg.energy_equal_tol(e)
    entries = []
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            gap = e[j] - e[i]
            if gap <= tol:
                continue
            beta = _pair_beta(p[i], p[j], gap)
            if beta is not None:
                entries.append((i, j, beta))
    return VirtualTempSpectrum(entries=tuple(entries))


def single_copy_effective(system: QuantumSystem) -> EffectiveTempPair:
    """Extremal inverse virtual temperatures (beta_c = max, beta_h = min)."""
    spectrum = virtual_spectrum(system)
    if len(spectrum) == 0:
        raise ValidationError(
            "effective temperatures are undefined: all energy levels are degenerate"
        )
    betas = spectrum.betas()
    return EffectiveTempPair(beta_c=float(betas.max()), beta_h=float(betas.min()))


def _energy_groups(energies: np.ndarray, log_pops: np.ndarray, n: int):
    """Cluster n-fold energy sums and track extremal log-populations per sum.

    Products of populations and sums of energies depend only on the multiset
    of chosen levels, so enumerating multisets instead of all d**n indices is
    exact and keeps n <= 6 cheap.  Returns a list of
    (energy, max_log_p, min_log_p, has_zero) with max/min over the positive-
    population multi-indices only (None when every one vanishes).
    """
    raw = []
    for combo in combinations_with_replacement(range(len(energies)), n):
        esum = 0.0
        lsum = 0.0
        for idx in combo:
            esum += energies[idx]
            lsum += log_pops[idx]
        raw.append((esum, lsum))
    raw.sort(key=lambda t: t[0])
    tol = _GROUP_RTOL * max(1.0, n * float(np.abs(energies).max()))
    groups = []
    cur_e = raw[0][0]
    cur_max = cur_min = None
    cur_zero = False
    for esum, lsum in raw + [(math.inf, 0.0)]:
        if esum - cur_e > tol:
            groups.append((cur_e, cur_max, cur_min, cur_zero))
            if math.isinf(esum):
                break
            cur_e, cur_max, cur_min, cur_zero = esum, None, None, False
        if math.isinf(esum):
            break
        if lsum == -math.inf:
            cur_zero = True
        else:
            cur_max = lsum if cur_max is None else max(cur_max, lsum)
            cur_min = lsum if cur_min is None else min(cur_min, lsum)
    return groups


def tensor_power_effective(system: QuantumSystem, n: int) -> EffectiveTempPair:
    """Effective temperatures of n independent copies processed collectively.

    The spectrum of A^n pairs product populations p_{i1}...p_{in} with summed
    energies; the extremes are found from per-energy extremal populations
    without materializing the d**n-dimensional state.
    """
    if n < 1:
        raise ValidationError(f"copy count must be >= 1, got {n}")
    d = system.dim
    if d**n > TENSOR_POWER_CAP:
        raise ValidationError(f"{d}**{n} exceeds the tensor-power cap {TENSOR_POWER_CAP}")
    e = system.energies
    rho_e = linalg.dephase(system.rho_energy_basis, e)
    p = _clean_populations(np.diag(rho_e).real)
    with np.errstate(divide="ignore"):
        logp = np.where(p > 0.0, np.log(np.where(p > 0.0, p, 1.0)), -math.inf)
    groups = _energy_groups(e, logp, n)
    if len(groups) < 2:
        raise ValidationError(
            "effective temperatures are undefined: all energy levels are degenerate"
        )
    beta_c = -math.inf
    beta_h = math.inf
    found = False
    for a in range(len(groups)):
        ea, max_a, min_a, zero_a = groups[a]
        for b in range(a + 1, len(groups)):
            eb, max_b, min_b, zero_b = groups[b]
            gap = eb - ea
            if max_a is not None and max_b is not None:
                beta_c = max(beta_c, (max_a - min_b) / gap)
                beta_h = min(beta_h, (min_a - max_b) / gap)
                found = True
            if max_a is not None and zero_b:
                beta_c = math.inf
                found = True
            if zero_a and max_b is not None:
                beta_h = -math.inf
                found = True
    if not found:
        raise ValidationError("no populated level pair with distinct energies")
    return EffectiveTempPair(beta_c=beta_c, beta_h=beta_h)


def asymptotic_branch(request: AsymptoticRequest, branch: str) -> float:
    """One branch of the heat-constrained asymptotic temperatures.

    cold: [S(gibbs(E + delta)) - S(rho)] / delta
    hot:  [S(rho) - S(gibbs(E - delta))] / delta

    S(rho) is the full von Neumann entropy, so coherences matter here.  The
    shifted mean energy must stay strictly inside the spectrum; otherwise a
    BracketError propagates from the Gibbs inversion.
    """
    system, delta = request.system, request.delta
    s_rho = system.entropy()
    energy = system.mean_energy
    if branch == "cold":
        solve = gibbs_by_energy(system.energies, energy + delta)
        return (solve.entropy - s_rho) / delta
    if branch == "hot":
        solve = gibbs_by_energy(system.energies, energy - delta)
        return (s_rho - solve.entropy) / delta
    raise ValidationError(f"branch must be 'cold' or 'hot', got {branch!r}")


def asymptotic_effective(request: AsymptoticRequest) -> EffectiveTempPair:
    """Both asymptotic branches; requires E +/- delta inside the spectrum."""
    return EffectiveTempPair(
        beta_c=asymptotic_branch(request, "cold"),
        beta_h=asymptotic_branch(request, "hot"),
    )


def expansion_effective(request: AsymptoticRequest) -> EffectiveTempPair:
    """Small-delta expansion of the asymptotic temperatures.

        beta_c ~  dS/delta + beta*(E) - delta / (2 Var)
        beta_h ~ -dS/delta + beta*(E) + delta / (2 Var)

    with dS = S(gibbs(E)) - S(rho) and Var the energy variance of gibbs(E).
    The hot branch is the cold expansion evaluated at -delta, which flips the
    variance term; the remaining error is O(delta^2) on both branches.
    """
    system, delta = request.system, request.delta
    solve = gibbs_by_energy(system.energies, system.mean_energy)
    var = thermal.energy_variance(solve)
    if var <= 0.0:
        raise SolverError("energy variance of the matched Gibbs state vanishes")
    # the Gibbs state is the entropy maximizer at fixed mean energy; clamp
    # float noise so the leading term keeps its sign
    ds = max(0.0, solve.entropy - system.entropy())
    curvature = delta / (2.0 * var)
    return EffectiveTempPair(
        beta_c=ds / delta + solve.beta - curvature,
        beta_h=-ds / delta + solve.beta + curvature,
    )


def hotter_than(beta_1: float, beta_2: float) -> bool:
    """True when the first inverse temperature is strictly hotter.

    Hotness is strictly decreasing in beta across the whole extended real
    line: every negative beta is hotter than every positive one, and
    beta = -inf (+inf) is the hottest (coldest) point.
    """
    return float(beta_1) < float(beta_2)
