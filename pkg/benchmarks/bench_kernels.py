"""Time the numba and numpy series kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Each case builds a truncated denominator product and a partition table on a
dense box; both backends must return identical arrays.
"""

import argparse
import time

import numpy as np

from kacmoody import _kernels
from kacmoody.characters import _root_factors, denominator_box
from kacmoody.finite_cartan import from_string

CASES = [("A1", 8), ("A1", 16), ("A2", 5), ("A2", 7), ("B2", 4), ("G2", 3)]


def run(fc, depth, kind):
    dims = denominator_box(fc, depth)
    factors = _root_factors(fc, dims)
    if kind == "product":
        return _kernels.product_table(dims, factors)
    return _kernels.partition_table(dims, factors)


def best_of(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return out, best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    # compile once outside the timings
    _kernels.use_numba(True)
    run(from_string("A1"), 1, "product")
    print(f"{'type':<5}{'depth':>6}{'kind':>10}{'cells':>10}{'numba s':>11}{'numpy s':>11}{'speedup':>9}")
    for name, depth in CASES:
        fc = from_string(name)
        for kind in ("product", "partition"):
            _kernels.use_numba(True)
            a, t_nb = best_of(lambda: run(fc, depth, kind), args.repeat)
            _kernels.use_numba(False)
            b, t_np = best_of(lambda: run(fc, depth, kind), args.repeat)
            if not np.array_equal(a, b):
                raise SystemExit(f"backends disagree on {name} depth {depth} {kind}")
            print(f"{name:<5}{depth:>6}{kind:>10}{a.size:>10}{t_nb:>11.4f}{t_np:>11.4f}{t_np / t_nb:>9.1f}")
    _kernels.use_numba(True)


if __name__ == "__main__":
    main()
