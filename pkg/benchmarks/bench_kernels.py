"""Compare the numba-compiled kernels with their vectorized numpy fallbacks.

Run with ``python benchmarks/bench_kernels.py [--sizes 8,32,96] [--repeat 20]``.
"""
import argparse
import timeit

import numpy as np

from revorder import _accel
from revorder.svdkit import EPS, MAX_SWEEPS


def _jacobi_case(n, rng):
    G = rng.standard_normal((n, n))
    V = np.eye(n)
    return lambda fn: fn(G.copy(), V.copy(), n * EPS, MAX_SWEEPS)


def _rref_case(n, rng):
    R = rng.standard_normal((n, n // 2)) @ rng.standard_normal((n // 2, n))
    piv = np.zeros(n, dtype=np.int64)
    return lambda fn: fn(R.copy(), n * EPS * np.abs(R).max(), piv.copy())


def _time(call, fn, repeat):
    call(fn)  # warm-up (and JIT compilation)
    return min(timeit.repeat(lambda: call(fn), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="8,32,96")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    if not _accel.USING_NUMBA:
        print("numba disabled; only the numpy kernels are available")
    rng = np.random.default_rng(0)
    kernels = [
        ("jacobi", _jacobi_case, _accel._jacobi_sweeps_jit, _accel._jacobi_sweeps_numpy),
        ("rref", _rref_case, _accel._pivoted_rref_jit, _accel._pivoted_rref_numpy),
    ]
    print(f"{'kernel':8} {'n':>4} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for name, make, jit, fallback in kernels:
        for n in (int(s) for s in args.sizes.split(",")):
            call = make(n, rng)
            t_np = _time(call, fallback, args.repeat)
            if jit is None:
                print(f"{name:8} {n:4d} {'-':>10} {1e3 * t_np:10.3f} {'-':>8}")
                continue
            t_jit = _time(call, jit, args.repeat)
            print(f"{name:8} {n:4d} {1e3 * t_jit:10.3f} {1e3 * t_np:10.3f} {t_np / t_jit:8.1f}")


if __name__ == "__main__":
    main()
