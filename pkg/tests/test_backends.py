"""The compiled kernels must agree bit-for-bit with the pure-Python twins."""

import numpy as np
import pytest

from dagkit import backend, graph, metrics
from dagkit import _kernels_py

from conftest import random_dag

cython_kernels = pytest.importorskip("dagkit._kernels")


def csr_int64(indptr, indices):
    return indptr.astype(np.int64), indices.astype(np.int64)


class TestParity:
    def test_triangle_counts(self):
        rng = np.random.default_rng(81)
        for _ in range(100):
            g = random_dag(rng, max_nodes=25, edge_prob=0.3)
            indptr, indices = metrics.undirected_csr(g)
            a = _kernels_py.triangle_counts(indptr, indices, g.node_count)
            b = cython_kernels.triangle_counts(indptr, indices, g.node_count)
            assert (a == b).all()

    def test_disruption_counts(self):
        rng = np.random.default_rng(82)
        for trial in range(100):
            g = random_dag(rng, max_nodes=20, edge_prob=0.35)
            gen = graph.topological_generations(g)
            upper = None if trial % 2 else gen.g + int(rng.integers(0, 4))
            args = (
                g.out_indptr.astype(np.int64), g.out_indices.astype(np.int64),
                g.in_indptr.astype(np.int64), g.in_indices.astype(np.int64),
                gen.g.astype(np.int64), upper,
            )
            for a, b in zip(_kernels_py.disruption_counts(*args),
                            cython_kernels.disruption_counts(*args)):
                assert (a == b).all()

    def test_bfs_distance_totals(self):
        rng = np.random.default_rng(83)
        for _ in range(100):
            g = random_dag(rng, max_nodes=30, edge_prob=0.2)
            sources = np.arange(g.node_count, dtype=np.int64)
            a = _kernels_py.bfs_distance_totals(
                g.out_indptr.astype(np.int64), g.out_indices.astype(np.int64), sources
            )
            b = cython_kernels.bfs_distance_totals(
                g.out_indptr.astype(np.int64), g.out_indices.astype(np.int64), sources
            )
            assert a == b


class TestSelection:
    def test_both_backends_listed(self):
        assert set(backend.available()) == {"python", "cython"}

    def test_switching(self):
        previous = backend.implementation()
        try:
            backend.use("python")
            assert backend.implementation() == "python"
            backend.use("cython")
            assert backend.implementation() == "cython"
        finally:
            backend.use(previous)

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            backend.use("fortran")
