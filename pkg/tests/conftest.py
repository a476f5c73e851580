import numpy as np
import pytest

from dagkit import backend, graph


def random_dag(rng, max_nodes=12, edge_prob=0.3, permute=True):
    """Random DAG: edges point from higher to lower index, then relabeled."""
    n = int(rng.integers(2, max_nodes + 1))
    edges = [(i, j) for i in range(n) for j in range(i) if rng.random() < edge_prob]
    if permute:
        perm = rng.permutation(n)
        edges = [(int(perm[i]), int(perm[j])) for i, j in edges]
    return graph.build(n, edges)


def random_digraph(rng, max_nodes=30, edge_prob=0.2):
    """Random directed graph, possibly cyclic, no self-loops."""
    n = int(rng.integers(2, max_nodes + 1))
    edges = [
        (i, j) for i in range(n) for j in range(n) if i != j and rng.random() < edge_prob
    ]
    return graph.build(n, edges)


@pytest.fixture(params=backend.available())
def kernel_backend(request):
    """Run the test once per available kernel backend."""
    previous = backend.implementation()
    backend.use(request.param)
    yield request.param
    backend.use(previous)
