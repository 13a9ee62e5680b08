"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3]

Each row runs the same kernel on the same input under both backends and
checks that the outputs agree.
"""

import argparse
import time

import numpy as np

from finmetric import _backend, _pykernels
from finmetric.generators import random_euclidean, random_metric


def _best(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    d60 = np.ascontiguousarray(random_euclidean(60, seed=1).d)
    d30 = np.ascontiguousarray(random_euclidean(30, seed=2).d)
    X = np.ascontiguousarray(random_metric(7, seed=3).d)
    Y = np.ascontiguousarray(random_metric(7, seed=4).d)
    slots = [(0, i) for i in range(7)] + [(1, j) for j in range(7)]
    adj = np.ascontiguousarray(random_euclidean(40, seed=5).d < 0.25)
    np.fill_diagonal(adj, False)
    yield "triangle_scan n=60", lambda k: k.triangle_scan(d60, 1e-9)
    yield "quad_scan n=30", lambda k: k.quad_scan(d30, 1e-9)
    yield "four_point_scan n=30", lambda k: k.four_point_scan(d30)
    yield "ultra_scan n=60", lambda k: k.ultra_scan(d60)
    yield "correspondence_bb 7x7", lambda k: k.correspondence_bb(X, Y, slots, True, 10**7, float("inf"), 0.0)
    yield "mis_bb n=40", lambda k: k.mis_bb(adj)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    try:
        from finmetric import _ckernels
    except ImportError:
        print("compiled kernels not built; only the Python backend is available")
        _ckernels = None
    print(f"{'kernel':<24}{'python s':>12}{'cython s':>12}{'speedup':>10}  agree")
    for name, run in cases():
        tp, out_p = _best(lambda: run(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:<24}{tp:>12.4f}{'-':>12}{'-':>10}  -")
            continue
        tc, out_c = _best(lambda: run(_ckernels), args.repeat)
        agree = repr(out_p) == repr(out_c)
        print(f"{name:<24}{tp:>12.4f}{tc:>12.4f}{tp / max(tc, 1e-9):>10.1f}  {agree}")
    print(f"active backend: {_backend.BACKEND}")


if __name__ == "__main__":
    main()
