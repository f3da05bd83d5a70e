"""Compiled vs numpy kernels, plus end-to-end shot throughput under each backend.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from code832 import _kernels_py

try:
    from code832 import _kernels
except ImportError:
    _kernels = None

N = 11  # width of the flagged |+++> experiment


def kernel_cases(mod):
    rng = np.random.default_rng(1)
    psi = (rng.normal(size=1 << N) + 1j * rng.normal(size=1 << N)).astype(np.complex128)
    psi /= np.linalg.norm(psi)
    outcomes = rng.integers(0, 1 << N, size=100_000, dtype=np.int64)
    cdf = np.cumsum(np.full(1 << N, 1.0 / (1 << N)))
    u = rng.random(100_000)
    checks = np.array([0b11110000000, 0b00001111000], dtype=np.int64)
    decode = np.array([0b11110000000, 0b11001100000, 0b10101010000], dtype=np.int64)
    s = 2 ** -0.5
    return {
        "apply_matrix1": lambda: mod.apply_matrix1(psi, N, 3, s, s, s, -s),
        "apply_cnot": lambda: mod.apply_cnot(psi, N, 2, 9),
        "apply_ccz": lambda: mod.apply_ccz(psi, N, 0, 4, 7),
        "apply_pauli": lambda: mod.apply_pauli(psi, N, 0b10110010011, 0b01100110001, 1j),
        "postselect_decode[1e5]": lambda: mod.postselect_decode(outcomes, checks, 0b111, decode),
        "sample_cdf[1e5]": lambda: mod.sample_cdf(cdf, u),
    }


def best(fn, repeat):
    t = timeit.Timer(fn)
    number, _ = t.autorange()
    return min(t.repeat(repeat, number)) / number


SHOTS_SNIPPET = """
import time
from code832.noise import NoiseModel, run_experiment
from code832.reference import ExperimentSpec
spec = ExperimentSpec.parse("PLUS3+CCZ@X/encoded")
t = time.perf_counter()
run_experiment(spec, NoiseModel(p2=0.01, pm=0.01), 100000, 1, resamples=0)
print(time.perf_counter() - t)
"""


def shots_seconds(pure):
    env = dict(os.environ, CODE832_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", SHOTS_SNIPPET], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    py = kernel_cases(_kernels_py)
    cc = kernel_cases(_kernels) if _kernels is not None else {}
    print(f"{'kernel':24s} {'numpy us':>10s} {'compiled us':>12s} {'speedup':>8s}")
    for name, fn in py.items():
        tp = best(fn, args.repeat) * 1e6
        if name in cc:
            tc = best(cc[name], args.repeat) * 1e6
            print(f"{name:24s} {tp:10.2f} {tc:12.2f} {tp / tc:8.1f}x")
        else:
            print(f"{name:24s} {tp:10.2f} {'n/a':>12s}")
    tp = shots_seconds(True)
    line = f"1e5 noisy PLUS3+CCZ shots: numpy {tp:.2f}s"
    if _kernels is not None:
        tc = shots_seconds(False)
        line += f", compiled {tc:.2f}s ({tp / tc:.1f}x)"
    print(line)


if __name__ == "__main__":
    main()
