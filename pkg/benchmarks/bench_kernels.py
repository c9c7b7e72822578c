"""Compare the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each row reports the best wall time over ``--repeat`` runs and checks that
both backends returned identical arrays.
"""
import argparse
import time
from fractions import Fraction

import numpy as np

from lmcdist import _backend, gadgets
from lmcdist.bernoulli import solve_f
from lmcdist.simulator import sample_ratios


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases():
    yield "bernoulli theta=1.5 grid=4097", lambda k: solve_f(1.5, 4097, 1e-9, backend=k).half
    yield "bernoulli theta=3 grid=16385", lambda k: solve_f(3.0, 16385, 1e-9, backend=k).half
    fig3 = gadgets.generate(gadgets.Irrational(Fraction(1, 4)))
    yield "sample fig3 len=200 runs=20000", lambda k: sample_ratios(fig3, 1, 200, 20000, 1, backend=k)
    par = gadgets.generate(gadgets.Parallel((Fraction(1, 8), Fraction(1, 4), Fraction(3, 8))))
    yield "sample parallel(3) len=100 runs=20000", lambda k: sample_ratios(par, 1, 100, 20000, 1, backend=k)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _backend.BACKEND != "cython":
        print("compiled extension not available; only the fallback can be timed")
    print(f"{'case':40s} {'cython [s]':>11s} {'numpy [s]':>11s} {'speedup':>8s}  same")
    for name, fn in cases():
        tf, outf = best_of(lambda: fn(_backend.fallback), args.repeat)
        if _backend.BACKEND == "cython":
            tc, outc = best_of(lambda: fn(_backend.kernels), args.repeat)
            same = np.array_equal(outc, outf)
            print(f"{name:40s} {tc:11.4f} {tf:11.4f} {tf / tc:8.1f}  {same}")
        else:
            print(f"{name:40s} {'-':>11s} {tf:11.4f} {'-':>8s}  -")


if __name__ == "__main__":
    main()
