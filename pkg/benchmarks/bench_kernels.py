"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--qubits 18] [--repeat 5]

The end-to-end rows run a post-selected pattern in a subprocess so that the
``ONEWAY_DISABLE_NUMBA`` switch takes effect at import time.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from oneway.sim.kernels import _numba, _numpy

H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
U4 = np.linalg.qr(np.random.default_rng(1).normal(size=(4, 4)) + 0j)[0]
BRA = np.array([1, np.exp(-0.3j)], dtype=complex) / np.sqrt(2)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def kernel_rows(n, repeat):
    rng = np.random.default_rng(0)
    base = (rng.normal(size=(2, 1 << n)) + 1j * rng.normal(size=(2, 1 << n))).astype(complex)
    cases = {
        "apply_1q": lambda k, s: k.apply_1q(s, n, n // 2, H),
        "apply_2q": lambda k, s: k.apply_2q(s, n, 1, n - 2, U4),
        "apply_cz": lambda k, s: k.apply_cz(s, n, 0, n - 1),
        "project": lambda k, s: k.project(s, n, n // 3, BRA),
        "parity_fuse": lambda k, s: k.parity_fuse(s, n, 2, n - 3),
    }
    for name, call in cases.items():
        s = base.copy()
        call(_numba, s)  # compile outside the timed region
        t_nb = best_of(lambda: call(_numba, s), repeat)
        t_np = best_of(lambda: call(_numpy, s), repeat)
        yield name, t_np, t_nb


PATTERN_SNIPPET = """
import time
from oneway.pipeline import compile_qasm
from oneway.sim.pattern import run_pattern
from oneway.sim.kernels import BACKEND
src = open({path!r}).read()
m = compile_qasm(src).mgraph
run_pattern(m)
t = time.perf_counter()
for _ in range({repeat}):
    run_pattern(m)
print(BACKEND, (time.perf_counter() - t) / {repeat})
"""


def pattern_row(path, repeat, disable):
    env = dict(os.environ, ONEWAY_DISABLE_NUMBA="1" if disable else "0")
    code = PATTERN_SNIPPET.format(path=path, repeat=repeat)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, secs = out.stdout.split()
    return backend, float(secs)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--qubits", type=int, default=18)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"kernels on a (2, 2^{args.qubits}) batch, best of {args.repeat}")
    print(f"{'kernel':12s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, t_np, t_nb in kernel_rows(args.qubits, args.repeat):
        print(f"{name:12s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.2f}x")

    here = os.path.dirname(os.path.abspath(__file__))
    qasm = os.path.join(here, "..", "src", "oneway", "data", "qasmbench", "adder-n4.qasm")
    print("\npost-selected run of adder-n4")
    for disable in (True, False):
        backend, secs = pattern_row(qasm, args.repeat, disable)
        print(f"{backend:12s} {secs * 1e3:9.2f}ms")


if __name__ == "__main__":
    main()
