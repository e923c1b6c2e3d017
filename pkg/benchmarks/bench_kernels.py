"""Compare the compiled and pure-Python kernel backends.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

Reports best-of-N wall time per call and checks that both backends agree.
"""

import argparse
import time

import numpy as np

from cohdistill import kernels
from cohdistill.distill import FALSIFY_CHUNK, falsification_search
from cohdistill.states import random_block_state, random_density


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b):
    if a is None or b is None:
        return a is b
    if isinstance(a, tuple):
        return all(np.allclose(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def _cases(rng):
    for d in (4, 8, 16):
        rho = random_density(d, d, rng).mat
        assign = rng.integers(0, 3, size=(FALSIFY_CHUNK, d), dtype=np.int8)
        coeff = rng.standard_normal((FALSIFY_CHUNK, d)) + 1j * rng.standard_normal((FALSIFY_CHUNK, d))
        yield f"first_pure_coherent d={d} x{FALSIFY_CHUNK}", lambda r=rho, a=assign, c=coeff: kernels.first_pure_coherent(r, a, c, 1e-9, 1e-12)
    for d in (16, 64, 256):
        mask = rng.random((d, d)) < 2.0 / d
        mask = mask | mask.T
        yield f"component_labels d={d}", lambda m=mask: kernels.component_labels(m)
    rho = random_block_state([4], [4], 1)
    yield "falsification_search d=4 10000 trials", lambda r=rho: falsification_search(r, 10_000, 0)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not kernels.HAVE_COMPILED:
        print("compiled backend not built; only the python backend is timed")
    rng = np.random.default_rng(0)
    print(f"{'case':44s} {'python':>11s} {'compiled':>11s} {'speedup':>8s}")
    for name, fn in _cases(rng):
        kernels.use_backend("python")
        t_py, ref = _best(fn, args.repeat)
        if kernels.HAVE_COMPILED:
            kernels.use_backend("compiled")
            t_c, out = _best(fn, args.repeat)
            flag = "" if _same(ref, out) else "  MISMATCH"
            print(f"{name:44s} {t_py * 1e3:9.3f}ms {t_c * 1e3:9.3f}ms {t_py / t_c:7.1f}x{flag}")
        else:
            print(f"{name:44s} {t_py * 1e3:9.3f}ms {'-':>11s}")
    if kernels.HAVE_COMPILED:
        kernels.use_backend("compiled")


if __name__ == "__main__":
    main()
