#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallbacks.

Usage:
    python3 benchmarks/bench_kernels.py [--nodes 4000] [--edges-per-node 12]

Builds one random DAG and times each kernel on both backends.  Results must
agree exactly (both count integers); the table reports wall time and
speedup.
"""

import argparse
import time

import numpy as np

from dagkit import backend, graph, metrics
from dagkit.graph import topological_generations


def make_graph(n: int, epn: int, seed: int = 0) -> graph.Dag:
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(1, n):
        k = min(i, int(rng.integers(1, 2 * epn)))
        for j in rng.choice(i, size=k, replace=False):
            edges.append((i, int(j)))
    return graph.build(n, edges)


def run_kernel(name: str, fn, repeats: int = 3):
    results = {}
    for impl in backend.available():
        backend.use(impl)
        kern = backend.kernels()
        best = float("inf")
        value = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            value = fn(kern)
            best = min(best, time.perf_counter() - t0)
        results[impl] = (best, value)
    py_time, py_val = results["python"]
    line = f"{name:<24} python {py_time * 1e3:9.1f} ms"
    if "cython" in results:
        cy_time, cy_val = results["cython"]
        check = _same(py_val, cy_val)
        line += f"   cython {cy_time * 1e3:9.1f} ms   speedup {py_time / cy_time:6.1f}x   match={check}"
    print(line)


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return bool((a == b).all())
    return a == b


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--nodes", type=int, default=4000)
    parser.add_argument("--edges-per-node", type=int, default=12)
    args = parser.parse_args()

    g = make_graph(args.nodes, args.edges_per_node)
    print(f"graph: {g.node_count} nodes, {g.edge_count} edges")
    gen = topological_generations(g)
    und_indptr, und_indices = metrics.undirected_csr(g)
    sources = np.arange(min(g.node_count, 2000), dtype=np.int64)

    run_kernel(
        "triangle_counts",
        lambda k: k.triangle_counts(und_indptr, und_indices, g.node_count),
    )
    run_kernel(
        "disruption_counts",
        lambda k: k.disruption_counts(
            g.out_indptr.astype(np.int64), g.out_indices.astype(np.int64),
            g.in_indptr.astype(np.int64), g.in_indices.astype(np.int64),
            gen.g.astype(np.int64), gen.g + 10,
        ),
    )
    run_kernel(
        "bfs_distance_totals",
        lambda k: k.bfs_distance_totals(
            g.out_indptr.astype(np.int64), g.out_indices.astype(np.int64), sources
        ),
    )


if __name__ == "__main__":
    main()
