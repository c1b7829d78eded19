"""Compare the compiled and pure-Python Jacobi kernels.

Run with ``python benchmarks/bench_jacobi.py``. LAPACK ``eigh`` is listed as
a reference point only; the package never calls it for spectral work.
"""
import argparse
import time

import numpy as np

from matpersp import funcat, jensen, linalg


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_eig(sizes, repeat):
    rng = linalg.make_rng(0)
    backends = sorted(linalg._KERNELS)
    print(f"{'n':>4} " + " ".join(f"{b:>12}" for b in backends) + f" {'lapack':>12}   (seconds per decomposition)")
    for n in sizes:
        H = linalg.sample_hermitian(n, 1.0, rng)
        row = [best_of(lambda b=b: linalg.eig_hermitian(H, backend=b), repeat) for b in backends]
        row.append(best_of(lambda: np.linalg.eigh(H), repeat))
        print(f"{n:>4} " + " ".join(f"{t:12.3e}" for t in row))


def bench_suite(trials):
    print(f"\naffine_jensen[xlogx], n=4, {trials} trials")
    for b in sorted(linalg._KERNELS):
        previous = linalg.BACKEND
        linalg.BACKEND = b
        try:
            t = best_of(lambda: jensen.verify_suite("affine_jensen", n=4, trials=trials, seed=0, f=funcat.xlogx()), 1)
        finally:
            linalg.BACKEND = previous
        print(f"  {b:>8}: {t:.2f}s ({trials / t:.0f} trials/s)")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--trials", type=int, default=200)
    args = parser.parse_args()
    print(f"default backend: {linalg.BACKEND}")
    bench_eig(args.sizes, args.repeat)
    bench_suite(args.trials)
