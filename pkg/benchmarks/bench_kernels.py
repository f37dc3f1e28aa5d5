"""Benchmark the compiled kernel extension against the pure-Python fallback.

Times the two hot paths: the optimizer's penalized objective and the Jacobi
eigensolver behind the two-photon trace norm.  Run from the repo root:

    python benchmarks/bench_kernels.py
"""

import math
import time

import numpy as np

from pomlab import _kernels
from pomlab._kernels import reference
from pomlab.bits import mask_sign_table, parity_masks, xsign_table

try:
    from pomlab._kernels import _fast
except ImportError:
    _fast = None


def time_call(fn, repeats):
    start = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - start) / repeats


def bench_objective(impl, n, repeats):
    rng = np.random.default_rng(12345)
    angles = rng.uniform(0, 2 * math.pi, 2 * 2**n + 2 * n)
    xsign = xsign_table(n)
    msign = mask_sign_table(n, parity_masks(n))
    return time_call(lambda: impl.pom_objective(angles, xsign, msign, 10.0, 1e-4), repeats)


def bench_jacobi(impl, dim, repeats):
    rng = np.random.default_rng(54321)
    raw = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    mat = (raw + raw.conj().T) / 2
    re = np.ascontiguousarray(mat.real)
    im = np.ascontiguousarray(mat.imag)
    return time_call(lambda: impl.hermitian_eigvals(re, im), repeats)


def main():
    print(f"active backend: {_kernels.BACKEND}")
    if _fast is None:
        print("compiled extension not built; timing the pure backend only\n")
    rows = [
        ("objective n=2", lambda impl: bench_objective(impl, 2, 20000)),
        ("objective n=3", lambda impl: bench_objective(impl, 3, 10000)),
        ("jacobi 4x4", lambda impl: bench_jacobi(impl, 4, 5000)),
        ("jacobi 8x8", lambda impl: bench_jacobi(impl, 8, 1000)),
    ]
    header = f"{'kernel':<16}{'pure':>12}{'compiled':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, runner in rows:
        pure = runner(reference)
        if _fast is not None:
            fast = runner(_fast)
            print(f"{name:<16}{pure * 1e6:>10.2f}us{fast * 1e6:>10.2f}us{pure / fast:>9.1f}x")
        else:
            print(f"{name:<16}{pure * 1e6:>10.2f}us{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
