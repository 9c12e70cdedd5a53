#!/usr/bin/env python3
"""Timing comparison of the numba and pure-numpy kernel backends.

Each backend runs in its own subprocess (the backend is chosen once at
import time via the MIPT_LE_BACKEND environment variable).  Workloads
cover the hot paths: full monitored-circuit realizations at several
sizes and a measurement-heavy microbenchmark.

Usage: python3 benchmarks/bench_backends.py [--reps 20]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, os, sys, time
import numpy as np
import mipt_le as m

reps = int(sys.argv[1])
results = {"backend": m.BACKEND}

# warm up compilation outside the timed sections
m.run_realization(m.CircuitConfig(L=16, p=0.2, T=16, seed=0))

for L in (16, 32, 64):
    cfgs = [
        m.CircuitConfig(L=L, p=0.16, T=4 * L, seed=1, realization=k)
        for k in range(reps)
    ]
    t0 = time.perf_counter()
    for cfg in cfgs:
        m.run_realization(cfg)
    results[f"realization_L{L}"] = (time.perf_counter() - t0) / reps

rng = np.random.default_rng(2)
tab = m.StabilizerTableau(64)
gates = [m.sample_two_qubit_clifford(rng) for _ in range(512)]
pairs = [tuple(int(v) for v in rng.choice(64, 2, replace=False)) for _ in range(512)]
t0 = time.perf_counter()
for c, (a, b) in zip(gates, pairs):
    tab.apply_two_qubit(c, a, b)
results["gate_512_n64"] = time.perf_counter() - t0

t0 = time.perf_counter()
for k in range(512):
    tab.measure_z(int(rng.integers(64)), rng=rng)
results["measure_512_n64"] = time.perf_counter() - t0

print(json.dumps(results))
"""


def run_backend(backend: str, reps: int) -> dict:
    env = dict(os.environ, MIPT_LE_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", CHILD, str(reps)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=20, help="realizations per size")
    args = ap.parse_args()

    reports = {b: run_backend(b, args.reps) for b in ("numpy", "numba")}
    keys = [k for k in reports["numpy"] if k != "backend"]
    width = max(len(k) for k in keys)
    print(f"{'workload':<{width}}  {'numpy':>10}  {'numba':>10}  speedup")
    for key in keys:
        a, b = reports["numpy"][key], reports["numba"][key]
        print(f"{key:<{width}}  {a * 1e3:>8.2f}ms  {b * 1e3:>8.2f}ms  {a / b:>6.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
