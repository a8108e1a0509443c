#!/usr/bin/env python3
"""Benchmark the LP hot kernel: numba-jitted pivot loop vs pure numpy.

Runs the same robustness workload in two subprocesses, one with
MAGIC_SWITCH_NO_NUMBA=1, and reports per-solve timings.  JIT compilation is
excluded by a warmup solve inside each subprocess.

Usage:
    python3 benchmarks/bench_lp.py [--channel-lps N] [--state-lps N]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_workload(n_channel: int, n_state: int) -> dict:
    import numpy as np

    from magicswitch import (
        DensityOperator,
        channel_robustness,
        cspo_choi_atoms,
        enumerate_stabilizer_states,
        noisy_th_channel,
        rom_state,
    )
    from magicswitch._accel import BACKEND

    atoms = cspo_choi_atoms(enumerate_stabilizer_states(2))
    qubit_dict = enumerate_stabilizer_states(1)

    # Warmup covers JIT compilation and the cached atom vectorization.
    channel_robustness(noisy_th_channel(0.2), atoms)
    rom_state(DensityOperator.maximally_mixed(2), qubit_dict)

    start = time.perf_counter()
    for k in range(n_channel):
        p = (k % 100) / 100
        channel_robustness(noisy_th_channel(p), atoms)
    channel_seconds = time.perf_counter() - start

    rng = np.random.default_rng(1234)
    states = []
    for _ in range(n_state):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        mat = g @ g.conj().T
        states.append(DensityOperator(mat / np.trace(mat).real))
    start = time.perf_counter()
    for rho in states:
        rom_state(rho, qubit_dict)
    state_seconds = time.perf_counter() - start

    return {
        "backend": BACKEND,
        "channel_lps": n_channel,
        "channel_seconds": channel_seconds,
        "state_lps": n_state,
        "state_seconds": state_seconds,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--channel-lps", type=int, default=150)
    parser.add_argument("--state-lps", type=int, default=300)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        print(json.dumps(run_workload(args.channel_lps, args.state_lps)))
        return 0

    results = {}
    for label, env_value in (("numba", None), ("numpy", "1")):
        env = dict(os.environ)
        env.pop("MAGIC_SWITCH_NO_NUMBA", None)
        if env_value is not None:
            env["MAGIC_SWITCH_NO_NUMBA"] = env_value
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker",
             "--channel-lps", str(args.channel_lps), "--state-lps", str(args.state_lps)],
            env=env,
            capture_output=True,
            text=True,
        )
        if proc.returncode != 0:
            print(proc.stderr, file=sys.stderr)
            return proc.returncode
        results[label] = json.loads(proc.stdout.strip().splitlines()[-1])

    print(f"{'workload':<24} {'numba':>12} {'numpy':>12} {'speedup':>9}")
    for key, count_key in (("channel_seconds", "channel_lps"), ("state_seconds", "state_lps")):
        n = results["numba"][count_key]
        t_nb = results["numba"][key] / n * 1e3
        t_np = results["numpy"][key] / n * 1e3
        name = key.replace("_seconds", f" LP ({n}x, ms/solve)")
        print(f"{name:<24} {t_nb:>12.3f} {t_np:>12.3f} {t_np / t_nb:>8.1f}x")
    if results["numba"]["backend"] != "numba":
        print("note: numba unavailable; both columns ran the numpy path")
    return 0


if __name__ == "__main__":
    sys.exit(main())
