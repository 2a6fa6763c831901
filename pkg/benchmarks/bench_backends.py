#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Each backend runs in its own subprocess (the choice is fixed at import
time via POLYGAMY_LAB_BACKEND) over the same seeded workloads:

* jacobi:    Hermitian eigendecompositions, 8x8
* objective: roof-ensemble objective evaluations (m=4 members, two qubits)
* eoa:       one default-budget assisted-measure optimization
* audit:     a small randomized polygamy audit end to end

Usage: python3 benchmarks/bench_backends.py [--quick]
"""

import argparse
import json
import os
import subprocess
import sys

PROBE = r"""
import json
import time

import numpy as np

import polygamy_lab as pl
from polygamy_lab import kernels

QUICK = {quick}
SCALE = 0.2 if QUICK else 1.0


def timed(fn, warmups=1):
    for _ in range(warmups):
        fn()
    t0 = time.perf_counter()
    n = fn()
    return (time.perf_counter() - t0) / n


def bench_jacobi():
    rng = np.random.default_rng(1)
    mats = []
    for _ in range(20):
        a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        mats.append((a + a.conj().T) / 2)
    reps = max(1, int(50 * SCALE))

    def run():
        for _ in range(reps):
            for m in mats:
                pl.hermitian_eig(m)
        return reps * len(mats)

    return timed(run)


def bench_objective():
    rho = pl.random_mixed(pl.SystemLayout((2, 2)), 2, 7)
    lam = rho.eigen.eigenvalues
    mask = lam > 1e-12
    basis = np.ascontiguousarray(rho.eigen.eigenvectors[:, mask] * np.sqrt(lam[mask]))
    rng = np.random.default_rng(2)
    us = [np.linalg.qr(rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2)))[0]
          for _ in range(100)]
    reps = max(1, int(200 * SCALE))

    def run():
        acc = 0.0
        for _ in range(reps):
            for u in us:
                acc += kernels.ensemble_objective(
                    basis, np.ascontiguousarray(u), 2, 2, kernels.MEASURE_ENTROPY
                )
        return reps * len(us)

    return timed(run)


def bench_eoa():
    rho = pl.random_mixed(pl.SystemLayout((2, 2)), 2, 11)
    opts = pl.OptimizerOptions(seed=3)

    def run():
        pl.assisted_measure(rho, "entropy", opts)
        return 1

    return timed(run)


def bench_audit():
    trials = 2 if QUICK else 6
    config = pl.AuditConfig(trials=trials, master_seed=5,
                            optimizer=pl.OptimizerOptions(restarts=10, iterations=600))

    def run():
        pl.random_audit(config)
        return trials

    return timed(run, warmups=0)


print(json.dumps({
    "backend": pl.BACKEND,
    "jacobi_us": bench_jacobi() * 1e6,
    "objective_us": bench_objective() * 1e6,
    "eoa_ms": bench_eoa() * 1e3,
    "audit_ms_per_trial": bench_audit() * 1e3,
}))
"""


def run_backend(backend: str, quick: bool) -> dict:
    env = dict(os.environ, POLYGAMY_LAB_BACKEND=backend)
    code = PROBE.replace("{quick}", str(quick))
    proc = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(f"{backend} probe failed")
    return json.loads(proc.stdout.strip().split("\n")[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    args = parser.parse_args()

    results = {name: run_backend(name, args.quick) for name in ("numba", "numpy")}
    rows = [
        ("jacobi eig 8x8", "jacobi_us", "us"),
        ("ensemble objective", "objective_us", "us"),
        ("assisted_measure (default)", "eoa_ms", "ms"),
        ("random audit per trial", "audit_ms_per_trial", "ms"),
    ]
    print(f"{'workload':<28} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for label, key, unit in rows:
        nb, npy = results["numba"][key], results["numpy"][key]
        print(f"{label:<28} {nb:>9.2f} {unit:>2} {npy:>9.2f} {unit:>2} {npy / nb:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
