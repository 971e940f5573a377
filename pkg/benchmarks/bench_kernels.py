"""Time the compiled kernels against their numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  The first
call of each jitted kernel is made before timing, so compile time is
reported separately.
"""
import argparse
import time
import timeit

import numpy as np

from catduality import _kernels as K
from catduality.monoid import bfs_words, catalog, generating_set, product_monoid, \
    symmetric_group
from catduality.profinite import cyclic_monoid


def workloads():
    rng = np.random.default_rng(0)
    S4 = symmetric_group(4)
    C = cyclic_monoid(1, 2)
    P = product_monoid(symmetric_group(2), symmetric_group(3))
    gens = np.array(generating_set(C), dtype=np.int64)
    order, parent, via = bfs_words(C, list(gens))
    big = rng.integers(0, 40, size=(3, 40))
    pairs = rng.integers(0, 40, size=(6, 2))
    N = catalog(3)[5]
    return {
        "assoc_violation": (S4.table,),
        "hom_mask": (P.table, S4.table, rng.integers(0, 24, size=(20000, 12))),
        "action_violation": (S4.table, S4.identity, S4.table),
        "equivariance_violation": (S4.table, S4.table, np.arange(24, dtype=np.int64)),
        "close_equivalence": (big, pairs, 40),
        "functor_maps": (P.table, P.identity, N.table, 0, np.arange(N.order, dtype=np.int64)),
        "mset_actions": (C.table, gens, order, parent, via, 5),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<24}{'compile s':>11}{'numba ms':>11}{'numpy ms':>11}{'speedup':>9}")
    for name, call_args in workloads().items():
        jit, plain = K.flavours(name)
        t0 = time.perf_counter()
        jit(*call_args)
        compile_s = time.perf_counter() - t0
        n = 3
        t_jit = min(timeit.repeat(lambda: jit(*call_args), number=n, repeat=args.repeat)) / n
        t_np = min(timeit.repeat(lambda: plain(*call_args), number=n, repeat=args.repeat)) / n
        print(f"{name:<24}{compile_s:>11.2f}{t_jit * 1e3:>11.3f}{t_np * 1e3:>11.3f}"
              f"{t_np / t_jit:>8.1f}x")


if __name__ == "__main__":
    main()
