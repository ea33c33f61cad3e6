"""Benchmark the simplex kernel: numba-compiled vs interpreted numpy path.

Runs identical batches of random Gibbs-stochastic energy-flow LPs through
both paths and reports wall time per solve.  The compiled path is warmed up
first so JIT compilation is excluded from the steady-state numbers.

    python benchmarks/bench_simplex.py [--trials 400] [--seed 0]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from efftemp import _kernels


def build_instance(rng: np.random.Generator, dim: int):
    energies = np.sort(rng.uniform(0.0, 2.0, dim)) + 0.05 * np.arange(dim)
    populations = rng.dirichlet(np.ones(dim))
    beta = rng.uniform(-2.0, 2.0)
    t = beta * energies
    weights = np.exp(-(t - t.min()))
    weights /= weights.sum()

    nvar = dim * dim
    a = np.zeros((2 * dim, nvar))
    b = np.zeros(2 * dim)
    for j in range(dim):
        for i in range(dim):
            a[j, i * dim + j] = 1.0
        b[j] = 1.0
    for i in range(dim):
        for j in range(dim):
            a[dim + i, i * dim + j] = weights[j]
        b[dim + i] = weights[i]
    c = np.zeros(nvar)
    for i in range(dim):
        for j in range(dim):
            c[i * dim + j] = -energies[i] * populations[j]
    return a, b, c


def run_batch(kernel, instances) -> tuple[float, float]:
    t0 = time.perf_counter()
    checksum = 0.0
    for a, b, c in instances:
        status, x = kernel(a, b, c, 1e-10, 20000)
        assert status == _kernels.OPTIMAL
        checksum += float(c @ x)
    return time.perf_counter() - t0, checksum


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=400)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = np.random.default_rng(args.seed)
    instances = [build_instance(rng, int(rng.integers(3, 6))) for _ in range(args.trials)]

    print(f"simplex backend selected at import: {_kernels.BACKEND}")
    paths = [("numpy (interpreted)", _kernels.simplex_kernel_python)]
    if _kernels.BACKEND == "numba":
        _kernels.simplex_kernel(*instances[0], 1e-10, 20000)  # warm up / compile
        paths.append(("numba (@njit)", _kernels.simplex_kernel))

    results = {}
    for name, kernel in paths:
        elapsed, checksum = run_batch(kernel, instances)
        results[name] = (elapsed, checksum)
        print(f"{name:22s} {elapsed:8.3f} s total  {1e6 * elapsed / args.trials:9.1f} us/solve")

    checksums = {round(v[1], 9) for v in results.values()}
    if len(checksums) != 1:
        raise SystemExit(f"paths disagree on objective checksums: {checksums}")
    if len(results) == 2:
        slow = results["numpy (interpreted)"][0]
        fast = results["numba (@njit)"][0]
        print(f"speedup: {slow / fast:.1f}x")


if __name__ == "__main__":
    main()
