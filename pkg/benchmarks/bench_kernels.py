#!/usr/bin/env python3
"""Benchmark the pure-Python kernels against the compiled extension.

Runs each kernel on the workloads the scans actually produce (5-vertex
graph closures, completion tables, filter and subfamily enumeration) and
prints one row per kernel with both timings.  Usage:

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time
from itertools import combinations

from ucf import _kernels_py

try:
    from ucf import _kernels_c
except ImportError:
    _kernels_c = None


def graph_workload():
    pairs = list(combinations(range(5), 2))
    edge_masks = [(1 << a) | (1 << b) for a, b in pairs]
    sets = []
    for sel in range(1, 1 << 10):
        gens = [edge_masks[i] for i in range(10) if sel >> i & 1]
        support = 0
        for g in gens:
            support |= g
        sets.append((gens, support))
    return sets


WORKLOAD = graph_workload()
CLOSURES = [(_kernels_py.closed_subsets(g, s), g, s) for g, s in WORKLOAD[:200]]


def bench_union_close(impl):
    for gens, _ in WORKLOAD[:400]:
        impl.union_close(gens, True)


def bench_closed_subsets(impl):
    for gens, support in WORKLOAD:
        impl.closed_subsets(gens, support)


def bench_count_supersets(impl):
    for members, gens, _ in CLOSURES:
        for g in gens:
            impl.count_supersets(members, g)


def bench_eset_tables(impl):
    for gens, support in WORKLOAD[:300]:
        u = gens[0]
        impl.eset_sizes_powerset(gens, u, support & ~u)


def bench_join_masks(impl):
    for members, gens, _ in CLOSURES[:120]:
        impl.join_masks(members, members)


def bench_powerset_filters(impl):
    impl.powerset_filters(5)


def bench_union_closed_masks(impl):
    impl.union_closed_masks(4)


BENCHES = [
    ("union_close", bench_union_close),
    ("closed_subsets", bench_closed_subsets),
    ("count_supersets", bench_count_supersets),
    ("eset_sizes_powerset", bench_eset_tables),
    ("join_masks", bench_join_masks),
    ("powerset_filters(5)", bench_powerset_filters),
    ("union_closed_masks(4)", bench_union_closed_masks),
]


def run(impl, fn, repeat):
    best = None
    for _ in range(repeat):
        start = time.perf_counter()
        fn(impl)
        elapsed = time.perf_counter() - start
        best = elapsed if best is None else min(best, elapsed)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    header = f"{'kernel':<24}{'python':>12}{'cython':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, fn in BENCHES:
        py = run(_kernels_py, fn, args.repeat)
        if _kernels_c is not None:
            cy = run(_kernels_c, fn, args.repeat)
            print(f"{name:<24}{py * 1e3:>10.1f}ms{cy * 1e3:>10.1f}ms"
                  f"{py / cy:>9.1f}x")
        else:
            print(f"{name:<24}{py * 1e3:>10.1f}ms{'n/a':>12}{'':>10}")
    if _kernels_c is None:
        print("\ncompiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
