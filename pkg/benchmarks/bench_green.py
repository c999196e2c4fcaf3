"""Time the O_n kernels on both backends and check they agree.

    python3 benchmarks/bench_green.py [n ...]
"""
import sys
import time

import numpy as np

from endoq._kernels import backend_functions
from endoq.green import enumerate_chain_endos


def setup(n):
    maps = np.array(enumerate_chain_endos(n), dtype=np.int64) - 1
    lookup = np.full(n ** n, -1, dtype=np.int64)
    lookup[maps @ (n ** np.arange(n, dtype=np.int64))] = np.arange(len(maps))
    return maps, lookup


def run(fns, maps, lookup):
    compose, left, right, regular = fns
    comp = compose(maps, lookup)
    return comp, left(comp), right(comp), regular(comp)


def best_of(fns, maps, lookup, reps=3):
    best = float("inf")
    for _ in range(reps):
        t = time.perf_counter()
        out = run(fns, maps, lookup)
        best = min(best, time.perf_counter() - t)
    return best, out


def main(sizes):
    nb = backend_functions("numba")
    npy = backend_functions("numpy")
    run(nb, *setup(2))  # compile
    print(f"{'n':>2} {'|O_n|':>6} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for n in sizes:
        maps, lookup = setup(n)
        t_nb, a = best_of(nb, maps, lookup)
        t_np, b = best_of(npy, maps, lookup)
        assert all(np.array_equal(x, y) for x, y in zip(a, b)), f"backends disagree at n={n}"
        print(f"{n:>2} {len(maps):>6} {t_nb:>9.4f} {t_np:>9.4f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main([int(a) for a in sys.argv[1:]] or [4, 5, 6, 7])
