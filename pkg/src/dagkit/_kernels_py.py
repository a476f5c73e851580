"""Pure-Python kernels: reference implementations of the hot loops.

These mirror the compiled versions in ``_kernels.pyx`` exactly: both count
integers and leave all floating-point arithmetic to the callers, so results
are bit-identical regardless of which backend is active.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "python"


def triangle_counts(indptr: np.ndarray, indices: np.ndarray, n: int) -> np.ndarray:
    """Per-node triangle counts of an undirected graph in CSR form.

    Adjacency lists must be sorted, loop-free and duplicate-free, with every
    undirected edge present in both directions.
    """
    tri = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if v <= u:
                continue
            a, a_end = indptr[u], indptr[u + 1]
            b, b_end = indptr[v], indptr[v + 1]
            while a < a_end and b < b_end:
                x = indices[a]
                y = indices[b]
                if x < y:
                    a += 1
                elif y < x:
                    b += 1
                else:
                    tri[x] += 1
                    tri[u] += 1
                    tri[v] += 1
                    a += 1
                    b += 1
    # each triangle was credited once per edge to each of its three nodes,
    # i.e. three times in total per node
    assert tri.sum() % 3 == 0
    return tri // 3


def disruption_counts(
    out_indptr: np.ndarray,
    out_indices: np.ndarray,
    in_indptr: np.ndarray,
    in_indices: np.ndarray,
    order: np.ndarray,
    upper: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Set cardinalities feeding the disruption formula, per node.

    For each focal node i, with its citer set restricted to order <= upper[i]
    (no restriction when ``upper`` is None) and the citers-of-references set
    additionally restricted to order > order[i]:

    returns (citations, n_both, n_tilde_only) where ``citations`` is the size
    of the restricted citer set, ``n_both`` the overlap with the
    citers-of-references set, and ``n_tilde_only`` the part of that set that
    does not cite i itself.
    """
    n = out_indptr.shape[0] - 1
    citations = np.zeros(n, dtype=np.int64)
    n_both = np.zeros(n, dtype=np.int64)
    n_tilde = np.zeros(n, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    use_upper = upper is not None
    for i in range(n):
        base = 3 * i
        ub = upper[i] if use_upper else 0
        c = 0
        for v in in_indices[in_indptr[i] : in_indptr[i + 1]]:
            if use_upper and order[v] > ub:
                continue
            mark[v] = base
            c += 1
        citations[i] = c
        oi = order[i]
        nb = 0
        nt = 0
        for j in out_indices[out_indptr[i] : out_indptr[i + 1]]:
            for v in in_indices[in_indptr[j] : in_indptr[j + 1]]:
                ov = order[v]
                if ov <= oi:
                    continue
                if use_upper and ov > ub:
                    continue
                m = mark[v]
                if m == base:
                    nb += 1
                    mark[v] = base + 1
                elif m != base + 1 and m != base + 2:
                    nt += 1
                    mark[v] = base + 2
        n_both[i] = nb
        n_tilde[i] = nt
    return citations, n_both, n_tilde


def bfs_distance_totals(
    indptr: np.ndarray, indices: np.ndarray, sources: np.ndarray
) -> tuple[int, int]:
    """Sum of shortest-path lengths and reachable-pair count over sources.

    Unweighted BFS; the source itself is not counted as a reachable pair.
    """
    n = indptr.shape[0] - 1
    dist = np.zeros(n, dtype=np.int64)
    visit = np.full(n, -1, dtype=np.int64)
    queue = np.empty(n, dtype=np.int64)
    total = 0
    pairs = 0
    for run, s in enumerate(sources):
        visit[s] = run
        dist[s] = 0
        queue[0] = s
        head, tail = 0, 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for v in indices[indptr[u] : indptr[u + 1]]:
                if visit[v] != run:
                    visit[v] = run
                    dist[v] = du + 1
                    queue[tail] = v
                    tail += 1
        total += int(dist[queue[1:tail]].sum())
        pairs += tail - 1
    return total, pairs
