"""Command-line interface: file ingestion, subcommands, CSV/JSON emission.

Input files are JSON with either of two state forms:

    {"energies": [...], "populations": [...]}
    {"energies": [...], "rho_re": [[...]], "rho_im": [[...]]}

(`rho_im` may be omitted for real states).  All reports are printed as JSON
with deterministic key order; non-finite floats are emitted as the strings
"inf"/"-inf"/"nan" so the output stays strict JSON.  Exit codes: 0 success,
1 input/usage error, 2 numerical/solver failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

import numpy as np

from . import catalysis, oracle, temperatures, thermal
from .linalg import SolverError, ValidationError
from .temperatures import AsymptoticRequest
from .thermal import QuantumSystem

CSV_FLOAT_FORMAT = "{:.12g}"
SWEEP_GRID_POINTS = 41


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _params_digest(params: dict) -> str:
    return _digest(json.dumps(params, sort_keys=True).encode())


def load_system_file(path: str) -> tuple[QuantumSystem, str]:
    """Parse a SystemFile and return (system, content digest)."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}")
    if not isinstance(doc, dict) or "energies" not in doc:
        raise ValidationError(f"{path}: expected an object with an 'energies' field")
    energies = doc["energies"]
    if "populations" in doc:
        p = np.asarray(doc["populations"], dtype=float)
        if p.ndim != 1:
            raise ValidationError(f"{path}: populations must be a flat list")
        rho = np.diag(p).astype(complex)
    elif "rho_re" in doc:
        re = np.asarray(doc["rho_re"], dtype=float)
        im = np.asarray(doc.get("rho_im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise ValidationError(f"{path}: rho_re and rho_im shapes differ")
        rho = re + 1j * im
    else:
        raise ValidationError(f"{path}: need either 'populations' or 'rho_re'")
    try:
        system = QuantumSystem(energies=np.asarray(energies, dtype=float), rho=rho)
    except ValidationError as exc:
        raise ValidationError(f"{path}: {exc}")
    return system, _digest(raw)


def _jsonable(value):
    """Make a value JSON-serializable with non-finite floats as strings."""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def _emit(report: dict) -> None:
    print(json.dumps(_jsonable(report), sort_keys=True, indent=2))


def _write_csv(path: str, header: tuple[str, ...], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(CSV_FLOAT_FORMAT.format(float(v)) for v in row))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _matrix_fields(m: np.ndarray) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _kelvin(beta: float) -> float:
    if beta == 0.0:
        return math.inf
    if math.isinf(beta):
        return 0.0
    return 1.0 / beta


KELVIN_NOTE = (
    "Kelvin-style values are T = 1/beta with k_B = 1: beta = 0 maps to T = inf, "
    "beta = +/-inf to T = 0, and negative beta to negative T; T is not monotone "
    "in hotness across sign changes, unlike beta."
)


def _add_kelvin(results: dict, warnings: list, keys: tuple[str, ...]) -> None:
    results["kelvin"] = {k: _kelvin(results[k]) for k in keys if k in results}
    warnings.append(KELVIN_NOTE)


# ---------------------------------------------------------------------------
# subcommands


def cmd_single(args) -> tuple[dict, list, str]:
    system, digest = load_system_file(args.path)
    pair = temperatures.single_copy_effective(system)
    spectrum = temperatures.virtual_spectrum(system)
    results = {
        "beta_c": pair.beta_c,
        "beta_h": pair.beta_h,
        "beta_star": thermal.t_star(system),
        "vts": [[i, j, b] for i, j, b in spectrum.entries],
    }
    warnings: list[str] = []
    if args.kelvin:
        _add_kelvin(results, warnings, ("beta_c", "beta_h", "beta_star"))
    if args.out:
        _write_csv(args.out, ("i", "j", "beta_ij"), results["vts"])
        results["csv"] = args.out
    return results, warnings, digest


def cmd_asymptotic(args) -> tuple[dict, list, str]:
    system, digest = load_system_file(args.path)
    request = AsymptoticRequest(system=system, delta=args.delta)
    cold = thermal.gibbs_by_energy(system.energies, system.mean_energy + args.delta)
    hot = thermal.gibbs_by_energy(system.energies, system.mean_energy - args.delta)
    pair = temperatures.asymptotic_effective(request)
    results = {
        "delta": args.delta,
        "mean_energy": system.mean_energy,
        "state_entropy": system.entropy(),
        "beta_c": pair.beta_c,
        "beta_h": pair.beta_h,
        "gibbs_cold": {"beta": cold.beta, "mean_energy": cold.mean_energy, "entropy": cold.entropy},
        "gibbs_hot": {"beta": hot.beta, "mean_energy": hot.mean_energy, "entropy": hot.entropy},
    }
    warnings: list[str] = []
    if args.expansion:
        expansion = temperatures.expansion_effective(request)
        matched = thermal.gibbs_by_energy(system.energies, system.mean_energy)
        results["expansion"] = {
            "beta_c": expansion.beta_c,
            "beta_h": expansion.beta_h,
            "beta_star": matched.beta,
            "energy_variance": matched.energy_variance,
        }
    if args.kelvin:
        _add_kelvin(results, warnings, ("beta_c", "beta_h"))
    return results, warnings, digest


def cmd_oracle(args) -> tuple[dict, list, str]:
    system, digest = load_system_file(args.path)
    if args.random is not None and args.seed is None:
        raise ValidationError("--random requires an explicit --seed")
    can_cool, can_heat = oracle.heat_sign_oracle(system, args.beta_bath)
    gain = oracle.max_energy_gain(
        oracle.GibbsStochasticLP(system.populations, system.energies, args.beta_bath, "maximize")
    )
    loss = oracle.max_energy_gain(
        oracle.GibbsStochasticLP(system.populations, system.energies, args.beta_bath, "minimize")
    )
    pair = temperatures.single_copy_effective(system)
    predicted_cool = temperatures.hotter_than(args.beta_bath, pair.beta_c)
    predicted_heat = temperatures.hotter_than(pair.beta_h, args.beta_bath)
    results = {
        "beta_bath": args.beta_bath,
        "max_energy_gain": gain.value,
        "max_energy_loss": -loss.value,
        "can_cool": can_cool,
        "can_heat": can_heat,
        "predicted_cool": predicted_cool,
        "predicted_heat": predicted_heat,
        "agreement": (can_cool == predicted_cool) and (can_heat == predicted_heat),
    }
    warnings: list[str] = []
    if args.random is not None:
        report = oracle.equivalence_trials(args.random, 5, args.seed)
        results["random_trials"] = {
            "systems": args.random,
            "baths_per_system": 5,
            "seed": args.seed,
            "cases": report.cases,
            "disagreements": report.disagreements,
            "max_polytope_residual": report.max_polytope_residual,
        }
        if report.disagreements:
            warnings.append(f"{report.disagreements} oracle/formula disagreements")
    return results, warnings, digest


def cmd_jc(args) -> tuple[dict, list, str]:
    params = {
        "omega": args.omega,
        "g": args.g,
        "tau": args.tau,
        "fock": args.fock,
        "steps": args.steps,
    }
    config = catalysis.JCConfig(
        omega_a=args.omega,
        omega_r=args.omega,
        g=args.g,
        fock_levels=args.fock,
        tau=args.tau,
        time_grid=catalysis.default_time_grid(args.steps, max(30.0, args.tau)),
    )
    cavity = catalysis.uniform_superposition_state(args.fock)
    solved = catalysis.solve_catalyst_fixed_point(config, cavity)
    series = catalysis.run_time_series(config, cavity, solved.catalyst_state)
    grid = config.time_grid
    k_tau = int(np.argmin(np.abs(grid - args.tau)))
    rows = series.time_series
    results = {
        "fixed_point_residual": solved.fixed_point_residual,
        "catalyst_state": _matrix_fields(solved.catalyst_state),
        "boundary_occupancy": series.boundary_occupancy,
        "atom_distance_at_tau": rows[k_tau, 5],
        "cavity_coherence_initial": rows[0, 6],
        "cavity_coherence_at_tau": rows[k_tau, 6],
        "cavity_beta_c_initial": rows[0, 1],
        "cavity_beta_h_initial": rows[0, 2],
        "samples": int(rows.shape[0]),
    }
    warnings = [
        "truncated cavity: population of the top Fock level with the atom excited "
        f"peaks at {series.boundary_occupancy:.6g}; raise --fock to test convergence"
    ]
    if args.out:
        _write_csv(args.out, catalysis.TIME_SERIES_COLUMNS, rows)
        results["csv"] = args.out
    return results, warnings, _params_digest(params)


def cmd_qutrit_catalyst(args) -> tuple[dict, list, str]:
    if args.sweep and args.copies:
        raise ValidationError("--sweep and --copies are mutually exclusive")
    params = {"lambda": args.lam, "beta": args.beta}
    warnings: list[str] = []

    if args.sweep:
        rows = []
        for lam in np.linspace(0.0, 1.0, SWEEP_GRID_POINTS):
            setup = catalysis.QutritCatalystSetup(lam=float(lam), beta=args.beta)
            tuned = catalysis.tune_catalyst(setup)
            run = catalysis.qutrit_catalyst_protocol(
                catalysis.QutritCatalystSetup(lam=float(lam), beta=args.beta, phi_r=tuned)
            )
            residual = float(np.abs(run.sigma_r - tuned).max())
            rows.append((float(lam), run.temps.beta_c, run.temps.beta_h, residual))
        results = {"sweep": [list(r) for r in rows], "grid_points": SWEEP_GRID_POINTS}
        if args.out:
            _write_csv(args.out, ("lambda", "beta_c", "beta_h", "catalyst_residual"), rows)
            results["csv"] = args.out
        return results, warnings, _params_digest({**params, "sweep": True})

    if args.copies:
        system = QuantumSystem(
            energies=catalysis.QUTRIT_ENERGIES, rho=catalysis.qutrit_state(args.lam, args.beta)
        )
        rows = []
        for n in range(1, args.copies + 1):
            pair = temperatures.tensor_power_effective(system, n)
            rows.append((float(n), pair.beta_c, pair.beta_h))
        results = {"copies": [list(r) for r in rows]}
        if args.out:
            _write_csv(args.out, ("n", "beta_c", "beta_h"), rows)
            results["csv"] = args.out
        return results, warnings, _params_digest({**params, "copies": args.copies})

    setup = catalysis.QutritCatalystSetup(lam=args.lam, beta=args.beta)
    tuned = catalysis.tune_catalyst(setup)
    run = catalysis.qutrit_catalyst_protocol(
        catalysis.QutritCatalystSetup(lam=args.lam, beta=args.beta, phi_r=tuned)
    )
    results = {
        "beta_c": run.temps.beta_c,
        "beta_h": run.temps.beta_h,
        "sigma_a": _matrix_fields(run.sigma_a),
        "catalyst": _matrix_fields(tuned),
        "catalyst_residual": float(np.abs(run.sigma_r - tuned).max()),
        "reference_frame_distance": float(
            np.abs(tuned - catalysis.reference_catalyst()).max()
        ),
        "correlation_norm": run.correlation_norm,
    }
    if args.kelvin:
        _add_kelvin(results, warnings, ("beta_c", "beta_h"))
    return results, warnings, _params_digest(params)


# ---------------------------------------------------------------------------
# parser and entry point


class _Parser(argparse.ArgumentParser):
    # usage problems are input errors (exit 1), not solver failures
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="efftemp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("single", help="effective temperatures of a state file")
    p.add_argument("path")
    p.add_argument("--out", help="write the virtual temperature spectrum as CSV")
    p.add_argument("--kelvin", action="store_true")

    p = sub.add_parser("asymptotic", help="heat-constrained asymptotic temperatures")
    p.add_argument("path")
    p.add_argument("--delta", type=float, required=True, help="heat per copy (> 0)")
    p.add_argument("--expansion", action="store_true", help="also report the small-delta expansion")
    p.add_argument("--kelvin", action="store_true")

    p = sub.add_parser("oracle", help="LP heat-flow verdicts vs the closed form")
    p.add_argument("path")
    p.add_argument("--beta-bath", type=float, required=True, dest="beta_bath")
    p.add_argument("--random", type=int, help="run N random equivalence trials")
    p.add_argument("--seed", type=int, help="seed for --random (required with it)")

    p = sub.add_parser("jc", help="Jaynes-Cummings catalyst run and time series")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--g", type=float, default=0.1)
    p.add_argument("--tau", type=float, default=28.5)
    p.add_argument("--fock", type=int, default=3)
    p.add_argument("--steps", type=int, default=600)
    p.add_argument("--out", help="write the time-series CSV here")

    p = sub.add_parser("qutrit-catalyst", help="qubit-frame protocol on the qutrit family")
    p.add_argument("--lambda", type=float, default=1.0, dest="lam")
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--sweep", action="store_true", help="emit a lambda-grid CSV")
    p.add_argument("--copies", type=int, help="emit the n-copies broadening table")
    p.add_argument("--out")
    p.add_argument("--kelvin", action="store_true")

    return parser


_COMMANDS = {
    "single": cmd_single,
    "asymptotic": cmd_asymptotic,
    "oracle": cmd_oracle,
    "jc": cmd_jc,
    "qutrit-catalyst": cmd_qutrit_catalyst,
}


def _echo_params(args: argparse.Namespace) -> dict:
    skip = {"command"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = {"command": args.command, "params": _echo_params(args)}
    try:
        results, warnings, digest = _COMMANDS[args.command](args)
    except ValidationError as exc:
        report.update(error=str(exc), status=1)
        _emit(report)
        return 1
    except SolverError as exc:
        report.update(error=str(exc), status=2)
        _emit(report)
        return 2
    report.update(input_digest=digest, results=results, warnings=warnings, status=0)
    _emit(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
