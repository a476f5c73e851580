"""Degree-preserving randomization of DAGs and Z-score comparison.

A realization draws a random topological order of the input graph, then
rebuilds it stub by stub: traversing nodes oldest-first, each node draws
its out-links uniformly from the pool of in-stubs contributed by already
traversed nodes, and only then contributes its own in-stubs.  Every
realization therefore preserves each node's exact (out-degree, in-degree)
pair and is acyclic by construction.

Drawing from the stub pool can occasionally duplicate an existing edge;
such draws are retried up to 100 times, after which the duplicate is kept
provisionally and eliminated by a target-swapping repair pass.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import graph
from .graph import Dag

_MAX_RETRIES = 100


class RandomizationError(RuntimeError):
    """The repair pass could not remove duplicate edges."""


def _random_topological_order(g: Dag, rng: np.random.Generator) -> np.ndarray:
    """Topological order (cited nodes first) with uniform random tie-breaks."""
    n = g.node_count
    out_remaining = g.out_degrees().copy()
    avail = [int(i) for i in np.flatnonzero(out_remaining == 0)]
    order = np.empty(n, dtype=np.int64)
    in_indptr, in_indices = g.in_indptr, g.in_indices
    for pos in range(n):
        if not avail:
            raise graph.CycleError("graph has a cycle; cannot randomize")
        k = int(rng.integers(len(avail)))
        avail[k], avail[-1] = avail[-1], avail[k]
        j = avail.pop()
        order[pos] = j
        for i in in_indices[in_indptr[j] : in_indptr[j + 1]]:
            out_remaining[i] -= 1
            if out_remaining[i] == 0:
                avail.append(int(i))
    return order


def randomize_dag(g: Dag, seed: int) -> Dag:
    """One degree-preserving, acyclic randomization of ``g``.

    Deterministic for a fixed seed.  Node metadata (labels, dates, field
    vectors) is carried over unchanged since node identities keep their
    degrees.

    The drawn topological order always admits a duplicate-free assignment
    (the input graph itself is one), but the greedy stub draw can paint
    itself into a corner; if the swap repair cannot fix it the whole
    construction is retried with a fresh random order, and only repeated
    failure raises :class:`RandomizationError`.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    last_error: RandomizationError | None = None
    for _ in range(_MAX_REBUILDS):
        try:
            return _randomize_once(g, rng)
        except RandomizationError as exc:
            last_error = exc
    raise RandomizationError(
        f"graph is pathological: {_MAX_REBUILDS} rebuild attempts failed ({last_error})"
    )


_MAX_REBUILDS = 25


def _randomize_once(g: Dag, rng: np.random.Generator) -> Dag:
    order = _random_topological_order(g, rng)
    kout = g.out_degrees()
    kin = g.in_degrees()
    m = g.edge_count
    pool = np.empty(m, dtype=np.int64)
    pool_len = 0
    src = np.empty(m, dtype=np.int64)
    dst = np.empty(m, dtype=np.int64)
    edge_count = 0
    counts: dict[tuple[int, int], int] = {}
    duplicates: list[int] = []
    for u in order:
        u = int(u)
        chosen: set[int] = set()
        for _ in range(int(kout[u])):
            target = -1
            p = -1
            for _attempt in range(_MAX_RETRIES):
                p = int(rng.integers(pool_len))
                target = int(pool[p])
                if target not in chosen:
                    break
            if target in chosen:
                # rejection failed: draw uniformly among the still-valid
                # stubs if any remain, else keep the duplicate for repair
                valid = [i for i in range(pool_len) if int(pool[i]) not in chosen]
                if valid:
                    p = valid[int(rng.integers(len(valid)))]
                    target = int(pool[p])
            pool[p] = pool[pool_len - 1]
            pool_len -= 1
            src[edge_count] = u
            dst[edge_count] = target
            pair = (u, target)
            if target in chosen:
                duplicates.append(edge_count)
                counts[pair] += 1
            else:
                chosen.add(target)
                counts[pair] = counts.get(pair, 0) + 1
            edge_count += 1
        k = int(kin[u])
        if k:
            pool[pool_len : pool_len + k] = u
            pool_len += k
    if duplicates:
        _repair_duplicates(g, rng, order, src, dst, counts, duplicates)
    edges = np.stack([src, dst], axis=1)
    result = graph._from_edges(
        g.node_count, edges, labels=g.labels, dates=g.dates, field_vectors=g.field_vectors
    )
    if result.edge_count != m:
        raise RandomizationError("duplicate edges survived the repair pass")
    result._acyclic = True
    return result


def _repair_duplicates(g, rng, order, src, dst, counts, duplicates) -> None:
    """Swap targets between edges until no pair occurs twice.

    A swap of (u,t) with (x,y) into (u,y) and (x,t) keeps all degrees; it
    is applied only when both new edges respect the topological order and
    do not themselves duplicate existing pairs.  Partners are scanned in a
    seeded random rotation, applied swaps are capped at 10 * M.
    """
    pos = np.empty(g.node_count, dtype=np.int64)
    pos[order] = np.arange(g.node_count)
    m = g.edge_count
    swaps_left = 10 * m
    pending = [e for e in duplicates if counts[(int(src[e]), int(dst[e]))] > 1]
    while pending:
        e = pending[-1]
        u, t = int(src[e]), int(dst[e])
        if counts[(u, t)] <= 1:
            pending.pop()
            continue
        if swaps_left <= 0:
            raise RandomizationError(f"swap budget of {10 * m} exhausted")
        start = int(rng.integers(m))
        repaired = False
        for offset in range(m):
            f = (start + offset) % m
            x, y = int(src[f]), int(dst[f])
            if (x, y) == (u, t) or f == e:
                continue
            if pos[y] >= pos[u] or pos[t] >= pos[x]:
                continue
            if counts.get((u, y), 0) or counts.get((x, t), 0):
                continue
            counts[(u, t)] -= 1
            counts[(x, y)] -= 1
            if counts[(x, y)] == 0:
                del counts[(x, y)]
            counts[(u, y)] = 1
            counts[(x, t)] = 1
            dst[e] = y
            src[f], dst[f] = x, t
            swaps_left -= 1
            repaired = True
            break
        if not repaired:
            raise RandomizationError("a duplicate edge has no single-swap repair partner")
        pending.pop()


@dataclass(frozen=True)
class NullEnsemble:
    """Per-realization metric values over seeded randomizations."""

    size: int
    base_seed: int
    seeds: tuple[int, ...]
    values: tuple[float, ...]
    metric_name: str = ""


def ensemble(
    g: Dag,
    metric: Callable[[Dag], float],
    size: int = 10,
    base_seed: int = 0,
    metric_name: str = "",
) -> NullEnsemble:
    """Evaluate ``metric`` on ``size`` realizations; realization i uses seed
    base_seed + i."""
    seeds = tuple(base_seed + i for i in range(size))
    values = tuple(float(metric(randomize_dag(g, s))) for s in seeds)
    return NullEnsemble(size, base_seed, seeds, values, metric_name)


def zscore(real_value: float, null_values: Sequence[float]) -> float | None:
    """(real - mean(null)) / sample_std(null); None when undefined."""
    values = np.asarray(null_values, dtype=np.float64)
    if values.size < 2:
        return None
    std = float(np.std(values, ddof=1))
    if std == 0.0:
        return None
    return (float(real_value) - float(values.mean())) / std
