"""Benchmark the numba kernels against the pure-numpy fallback.

Run without arguments to time both backends (each in a fresh subprocess so
the QECPROBE_NO_NUMBA flag takes effect at import) and print a comparison
table.  JIT compilation happens during warmup and is excluded from the
timings; numba caches the compiled code on disk for later runs.

    python benchmarks/benchmark_backends.py
    python benchmarks/benchmark_backends.py --worker   # current backend only
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np


def workload_pauli_apply(reps=2000):
    from qecprobe import kernels
    from qecprobe.pauli import parse
    from qecprobe.simulator import _phase_of

    rng = np.random.default_rng(0)
    n = 10
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps = (amps / np.linalg.norm(amps)).astype(np.complex128)
    op = parse("XZYXZIIYZX")
    x, z, phase = op.x_bits, op.z_bits, _phase_of(op)
    kernels.pauli_apply(amps, x, z, phase)  # warmup/JIT
    start = time.perf_counter()
    for _ in range(reps):
        amps = kernels.pauli_apply(amps, x, z, phase)
    return time.perf_counter() - start


def workload_evolve_terms(reps=20000):
    from qecprobe import kernels
    from qecprobe.metrology import logical_z_orbit_signal
    from qecprobe.stabilizer import get_builtin

    code = get_builtin("fivequbit")
    signal = logical_z_orbit_signal(code)
    xs, zs, phases, coeffs = signal.term_arrays()
    thetas = coeffs * 0.01
    rng = np.random.default_rng(1)
    amps = rng.normal(size=32) + 1j * rng.normal(size=32)
    amps = (amps / np.linalg.norm(amps)).astype(np.complex128)
    kernels.evolve_terms(amps, xs, zs, phases, thetas)  # warmup/JIT
    start = time.perf_counter()
    for _ in range(reps):
        amps = kernels.evolve_terms(amps, xs, zs, phases, thetas)
    return time.perf_counter() - start


def workload_trajectories(shots=20000):
    from qecprobe.metrology import (
        CorrectionSchedule,
        ExperimentConfig,
        NoiseModel,
        default_xi,
        logical_z_orbit_signal,
        noisy_run,
    )
    from qecprobe.stabilizer import get_builtin

    code = get_builtin("repetition3")
    signal = logical_z_orbit_signal(code)
    xi = default_xi(code, signal, 1.0)

    def config(count, seed):
        return ExperimentConfig(
            code=code, signal=signal, xi=xi, tau=1.0, shots=count, seed=seed,
            noise=NoiseModel.from_strings(("XII", "IXI", "IIX"), 0.01),
            correction=CorrectionSchedule(10),
        )

    noisy_run(config(100, 0))  # warmup/JIT
    start = time.perf_counter()
    noisy_run(config(shots, 1))
    return time.perf_counter() - start


WORKLOADS = (
    ("pauli_apply (n=10, 2000 reps)", workload_pauli_apply),
    ("evolve_terms (5 terms, dim 32, 20000 reps)", workload_evolve_terms),
    ("noisy trajectories (20000 shots, 10 cycles)", workload_trajectories),
)


def run_worker() -> dict:
    from qecprobe import kernels

    timings = {label: fn() for label, fn in WORKLOADS}
    return {"backend": kernels.BACKEND, "timings": timings}


def run_comparison() -> None:
    results = {}
    for forced, label in (("0", "numba"), ("1", "numpy")):
        env = dict(os.environ, QECPROBE_NO_NUMBA=forced)
        proc = subprocess.run(
            [sys.executable, __file__, "--worker"],
            env=env, capture_output=True, text=True, check=True,
        )
        payload = json.loads(proc.stdout)
        if payload["backend"] != label:
            print(f"note: requested {label} backend, got {payload['backend']}", file=sys.stderr)
        results[label] = payload["timings"]

    width = max(len(label) for label, _ in WORKLOADS)
    print(f"{'workload':<{width}}  {'numba [s]':>10}  {'numpy [s]':>10}  {'speedup':>8}")
    for label, _ in WORKLOADS:
        tb, tp = results["numba"][label], results["numpy"][label]
        print(f"{label:<{width}}  {tb:>10.4f}  {tp:>10.4f}  {tp / tb:>7.1f}x")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true", help="time the active backend, emit JSON")
    args = parser.parse_args()
    if args.worker:
        print(json.dumps(run_worker()))
    else:
        run_comparison()
    return 0


if __name__ == "__main__":
    sys.exit(main())
