# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot loops.

Semantics are defined by the pure-Python twin ``_kernels_py``; both count
integers only, so outputs are bit-identical across backends.
"""

import numpy as np

cimport numpy as cnp

IMPLEMENTATION = "cython"


def triangle_counts(cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices, Py_ssize_t n):
    """Per-node triangle counts of a symmetric, sorted CSR adjacency."""
    tri_arr = np.zeros(n, dtype=np.int64)
    cdef cnp.int64_t[::1] tri = tri_arr
    cdef Py_ssize_t u, k
    cdef cnp.int64_t v, x, y
    cdef cnp.int64_t a, a_end, b, b_end
    for u in range(n):
        for k in range(indptr[u], indptr[u + 1]):
            v = indices[k]
            if v <= u:
                continue
            a = indptr[u]
            a_end = indptr[u + 1]
            b = indptr[v]
            b_end = indptr[v + 1]
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
    assert tri_arr.sum() % 3 == 0
    return tri_arr // 3


def disruption_counts(
    cnp.int64_t[::1] out_indptr,
    cnp.int64_t[::1] out_indices,
    cnp.int64_t[::1] in_indptr,
    cnp.int64_t[::1] in_indices,
    cnp.int64_t[::1] order,
    upper,
):
    """Citer/overlap/extra counts per focal node; see the Python twin."""
    cdef Py_ssize_t n = out_indptr.shape[0] - 1
    citations_arr = np.zeros(n, dtype=np.int64)
    both_arr = np.zeros(n, dtype=np.int64)
    tilde_arr = np.zeros(n, dtype=np.int64)
    mark_arr = np.full(n, -1, dtype=np.int64)
    cdef cnp.int64_t[::1] citations = citations_arr
    cdef cnp.int64_t[::1] n_both = both_arr
    cdef cnp.int64_t[::1] n_tilde = tilde_arr
    cdef cnp.int64_t[::1] mark = mark_arr
    cdef bint use_upper = upper is not None
    cdef cnp.int64_t[::1] ub_view
    if use_upper:
        ub_view = upper
    else:
        ub_view = mark  # never read; keeps the view initialized
    cdef Py_ssize_t i, p, q
    cdef cnp.int64_t base, ub, c, nb, nt, v, j, oi, ov, m
    for i in range(n):
        base = 3 * i
        ub = ub_view[i] if use_upper else 0
        c = 0
        for p in range(in_indptr[i], in_indptr[i + 1]):
            v = in_indices[p]
            if use_upper and order[v] > ub:
                continue
            mark[v] = base
            c += 1
        citations[i] = c
        oi = order[i]
        nb = 0
        nt = 0
        for p in range(out_indptr[i], out_indptr[i + 1]):
            j = out_indices[p]
            for q in range(in_indptr[j], in_indptr[j + 1]):
                v = in_indices[q]
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
    return citations_arr, both_arr, tilde_arr


def bfs_distance_totals(
    cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices, cnp.int64_t[::1] sources
):
    """Total shortest-path length and reachable-pair count over sources."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist_arr = np.zeros(n, dtype=np.int64)
    visit_arr = np.full(n, -1, dtype=np.int64)
    queue_arr = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] dist = dist_arr
    cdef cnp.int64_t[::1] visit = visit_arr
    cdef cnp.int64_t[::1] queue = queue_arr
    cdef cnp.int64_t total = 0, pairs = 0, du
    cdef Py_ssize_t run, head, tail, p
    cdef cnp.int64_t s, u, v
    for run in range(sources.shape[0]):
        s = sources[run]
        visit[s] = run
        dist[s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            du = dist[u]
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if visit[v] != run:
                    visit[v] = run
                    dist[v] = du + 1
                    queue[tail] = v
                    tail += 1
        for p in range(1, tail):
            total += dist[queue[p]]
        pairs += tail - 1
    return int(total), int(pairs)
