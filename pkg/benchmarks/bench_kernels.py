"""Compare the compiled and pure-Python tridiagonal kernels.

Times Sturm counting, bisection of the five lowest eigenvalues and one
shifted tridiagonal solve on the oscillator TM Hamiltonian, then a full
two-polarization spectrum through the public API.

    python3 benchmarks/bench_kernels.py [--sizes 401 1601 6401] [--repeat 5]
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from gradmode import _kernels_py
from gradmode.profiles import GaussianSusyPair, Grid
from gradmode.reduction import Polarization, effective_potential
from gradmode.spectral import build_hamiltonian

try:
    from gradmode import _kernels_ext
except ImportError:
    _kernels_ext = None


def problem(n):
    H = build_hamiltonian(effective_potential(GaussianSusyPair(1.0, 1.0), Grid(-8.0, 8.0, n), 5.0, Polarization.TM))
    e2 = np.full(H.dim - 1, H.offdiag**2)
    lo, hi = H.diag.min() - 2 * abs(H.offdiag), H.diag.max() + 2 * abs(H.offdiag)
    pivmin = np.finfo(float).tiny * max(1.0, H.offdiag**2)
    rhs = np.random.default_rng(0).uniform(-1, 1, H.dim)
    return H, e2, lo, hi, pivmin, rhs


def best(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_kernels(sizes, repeat):
    backends = [("python", _kernels_py)] + ([("cython", _kernels_ext)] if _kernels_ext else [])
    print(f"{'n':>6} {'kernel':<10}" + "".join(f"{name:>14}" for name, _ in backends) + "   speedup")
    for n in sizes:
        H, e2, lo, hi, pivmin, rhs = problem(n)
        mid = 0.5 * (lo + hi)
        cases = {
            "sturm": lambda k: k.sturm_count(H.diag, e2, mid, pivmin),
            "bisect5": lambda k: k.bisect_eigenvalues(H.diag, e2, 0, 5, lo, hi, pivmin),
            "solve": lambda k: k.shifted_solve(H.diag, H.off, lo, rhs, pivmin),
        }
        for name, case in cases.items():
            times = [best(lambda k=k: case(k), repeat) for _, k in backends]
            speed = f"{times[0] / times[1]:9.1f}x" if len(times) > 1 else ""
            print(f"{n:>6} {name:<10}" + "".join(f"{t * 1e3:12.3f}ms" for t in times) + "  " + speed)


def bench_end_to_end():
    # the backend is fixed at import, so each one runs in a fresh interpreter
    code = (
        "import time; from gradmode import kernels; from gradmode.susy import analyze;"
        "from gradmode.profiles import GaussianSusyPair, Grid;"
        "t=time.perf_counter(); analyze(GaussianSusyPair(1.0, 1.0), Grid(-8.0, 8.0, 1601), 5.0, 4);"
        "print(kernels.BACKEND, round(time.perf_counter()-t, 4))"
    )
    for pure in (True, False):
        env = dict(os.environ)
        env.pop("GRADMODE_PURE_PYTHON", None)
        if pure:
            env["GRADMODE_PURE_PYTHON"] = "1"
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"analyze (TE+TM, 1601 points, 4 modes) with {backend}: {secs} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[401, 1601, 6401])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _kernels_ext is None:
        print("compiled extension not built; timing the pure-Python kernels only")
    bench_kernels(args.sizes, args.repeat)
    bench_end_to_end()


if __name__ == "__main__":
    main()
