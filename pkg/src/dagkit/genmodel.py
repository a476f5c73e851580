"""Growth model mixing logical and societal links.

Each timestep adds a node with a random binary field vector and runs a
link-creation loop: pick one target by preferential attachment among the
"local world" of sufficiently similar existing nodes (a logical link),
optionally copy some of the target's neighbors (societal links, each with
probability q), then stop the loop with probability p.  New nodes only ever
point at existing nodes, so the result is acyclic by construction.

With q = 0 no societal links exist and the model produces theorem-network
features (short-tailed out-degrees); raising q yields the heavy-tailed,
high-clustering citation regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import graph
from .graph import Dag

LOGICAL, SOCIETAL = 0, 1


class CalibrationError(RuntimeError):
    """The parameter search could not reach the target link count."""


@dataclass(frozen=True)
class GenParams:
    """Model parameters: stop probability p, similarity threshold w,
    initial attractiveness a, neighbor-copy probability q."""

    p: float
    w: float
    a: float
    q: float
    target_n: int
    seed: int = 0
    dims: int = 10
    vector_density: float = 0.3

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise ValueError("p must lie in (0, 1]")
        if not 0.0 <= self.w <= 1.0:
            raise ValueError("w must lie in [0, 1]")
        if self.a < 0.0:
            raise ValueError("a must be nonnegative")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError("q must lie in [0, 1]")
        if self.dims < 1:
            raise ValueError("dims must be positive")
        if not 0.0 < self.vector_density < 1.0:
            raise ValueError("vector_density must lie in (0, 1)")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class LabeledDag:
    """A generated graph whose edges carry a type label and birth timestep.

    Edge arrays are in creation order; seed-graph edges come first with
    birth 0 and a Logical label.
    """

    dag: Dag
    sources: np.ndarray
    targets: np.ndarray
    labels: np.ndarray  # LOGICAL or SOCIETAL
    birth: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.sources.shape[0])


def cosine_similarity(u, v) -> float:
    """Cosine of two nonnegative vectors; both must be nonzero."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = math.sqrt(float(u @ u))
    nv = math.sqrt(float(v @ v))
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine similarity of a zero vector is undefined")
    return float(u @ v) / (nu * nv)


def _draw_vector(rng: np.random.Generator, dims: int, density: float) -> np.ndarray:
    while True:
        bits = (rng.random(dims) < density).astype(np.uint8)
        if bits.any():
            return bits


def synthetic_seed_graph(
    n: int = 100,
    seed: int = 0,
    dims: int = 10,
    density: float = 0.3,
    max_refs: int = 3,
    sinks: int = 1,
) -> Dag:
    """Small deterministic DAG with field vectors, usable as a seed graph
    when no real network snapshot is at hand.

    The first ``sinks`` nodes have no references, mimicking an axiom layer;
    every later node cites 1..max_refs earlier nodes.
    """
    if not 1 <= sinks < n:
        raise ValueError("sinks must lie in [1, n)")
    rng = np.random.Generator(np.random.PCG64(seed))
    vectors = np.stack([_draw_vector(rng, dims, density) for _ in range(n)])
    edges = []
    for i in range(sinks, n):
        r = int(rng.integers(1, min(i, max_refs) + 1))
        for t in rng.choice(i, size=r, replace=False):
            edges.append((i, int(t)))
    return graph.build(n, edges, field_vectors=vectors)


def generate(params: GenParams, seed_graph: Dag) -> LabeledDag:
    """Grow a labeled graph from ``seed_graph`` to ``params.target_n`` nodes."""
    n0 = seed_graph.node_count
    n = params.target_n
    if n <= n0:
        raise ValueError(f"target_n={n} must exceed the seed graph size {n0}")
    if seed_graph.field_vectors is None:
        raise ValueError("seed graph must carry field vectors")
    if seed_graph.field_vectors.shape[1] != params.dims:
        raise ValueError("seed graph vector dimension does not match params.dims")
    if not seed_graph.field_vectors.any(axis=1).all():
        raise ValueError("seed graph contains an all-zero field vector")

    rng = np.random.Generator(np.random.PCG64(params.seed))
    dims = params.dims
    vectors = np.zeros((n, dims), dtype=np.uint8)
    vectors[:n0] = seed_graph.field_vectors
    kin = np.zeros(n, dtype=np.float64)
    kin[:n0] = seed_graph.in_degrees()

    # similarity depends on vectors only through their (at most 2^dims - 1)
    # distinct bit patterns, so the local world is a per-pattern decision
    pattern_of = np.zeros(n, dtype=np.int64)
    powers = 1 << np.arange(dims, dtype=np.int64)
    pattern_of[:n0] = seed_graph.field_vectors.astype(np.int64) @ powers
    n_patterns = 1 << dims
    pat_bits = (np.arange(n_patterns, dtype=np.int64)[:, None] & powers) > 0
    pat_norms = np.sqrt(pat_bits.sum(axis=1).astype(np.float64))
    pat_norms[0] = 1.0  # pattern 0 never occurs; avoid 0/0

    preds: list[list[int]] = [[] for _ in range(n)]
    succs: list[list[int]] = [[] for _ in range(n)]
    src: list[int] = []
    dst: list[int] = []
    lab: list[int] = []
    birth: list[int] = []
    for i, j in seed_graph.edge_array():
        i, j = int(i), int(j)
        preds[j].append(i)
        succs[i].append(j)
        src.append(i)
        dst.append(j)
        lab.append(LOGICAL)
        birth.append(0)

    q, p, w, a = params.q, params.p, params.w, params.a
    in_world_stamp = np.full(n, -1, dtype=np.int64)
    for t in range(n0, n):
        step = t - n0 + 1
        bits = _draw_vector(rng, dims, params.vector_density)
        vectors[t] = bits
        pattern = int(bits.astype(np.int64) @ powers)
        pattern_of[t] = pattern
        sims = (pat_bits @ bits.astype(np.float64)) / (pat_norms * math.sqrt(float(bits.sum())))
        qualifies = sims > w
        world = np.flatnonzero(qualifies[pattern_of[:t]])
        if world.shape[0] == 0:
            # nobody clears the threshold: fall back to all existing nodes
            world = np.arange(t, dtype=np.int64)
        in_world_stamp[world] = t
        # weights (kin + a) are frozen into one cumulative array; links made
        # during this node's loop are folded in exactly as unit-weight
        # "events" on top of the stale distribution
        cum = np.cumsum(kin[world] + a)
        stale_total = float(cum[-1])
        events: list[int] = []
        linked: set[int] = set()

        def draw_target() -> int:
            r = float(rng.random())
            total = stale_total + len(events)
            if total <= 0.0:
                return int(world[min(int(r * world.shape[0]), world.shape[0] - 1)])
            val = r * total
            if val < stale_total:
                idx = int(np.searchsorted(cum, val, side="right"))
                return int(world[min(idx, world.shape[0] - 1)])
            return events[min(int(val - stale_total), len(events) - 1)]

        def add_link(target: int, kind: int) -> None:
            linked.add(target)
            kin[target] += 1.0
            if in_world_stamp[target] == t:
                events.append(target)
            preds[target].append(t)
            succs[t].append(target)
            src.append(t)
            dst.append(target)
            lab.append(kind)
            birth.append(step)

        while True:
            target = draw_target()
            if target not in linked:
                add_link(target, LOGICAL)
            if q > 0.0:
                nbrs = preds[target] + succs[target]
                mask = rng.random(len(nbrs)) < q
                for idx in np.flatnonzero(mask):
                    c = nbrs[idx]
                    if c != t and c not in linked:
                        add_link(c, SOCIETAL)
            if rng.random() < p:
                break

    edges = np.stack(
        [np.asarray(src, dtype=np.int64), np.asarray(dst, dtype=np.int64)], axis=1
    )
    dag = graph._from_edges(n, edges, field_vectors=vectors)
    if dag.edge_count != edges.shape[0]:
        raise AssertionError("generation produced a duplicate edge")
    dag._acyclic = True  # new nodes only cite existing nodes
    return LabeledDag(
        dag=dag,
        sources=np.asarray(src, dtype=np.int64),
        targets=np.asarray(dst, dtype=np.int64),
        labels=np.asarray(lab, dtype=np.uint8),
        birth=np.asarray(birth, dtype=np.int64),
    )


@dataclass(frozen=True)
class LinkTypeStats:
    societal_fraction: float
    logical_out_histogram: np.ndarray
    fraction_at_most_two_logical: float

    def to_dict(self) -> dict:
        return {
            "societal_fraction": self.societal_fraction,
            "logical_out_histogram": [int(c) for c in self.logical_out_histogram],
            "fraction_at_most_two_logical": self.fraction_at_most_two_logical,
        }


def link_type_stats(g: LabeledDag) -> LinkTypeStats:
    """Exact label counts: societal share, logical out-degree histogram,
    and the fraction of nodes with at most two logical out-links."""
    n = g.dag.node_count
    logical_src = g.sources[g.labels == LOGICAL]
    logical_out = np.bincount(logical_src, minlength=n)
    return LinkTypeStats(
        societal_fraction=float((g.labels == SOCIETAL).mean()) if g.edge_count else 0.0,
        logical_out_histogram=np.bincount(logical_out),
        fraction_at_most_two_logical=float((logical_out <= 2).mean()),
    )


@dataclass(frozen=True)
class CalibrationResult:
    params: GenParams
    achieved_mean_m: float
    evaluations: int


def calibrate(
    q: float,
    target_n: int,
    seed_graph: Dag,
    m_target: int,
    p_range: tuple[float, float] = (0.005, 1.0),
    w_range: tuple[float, float] = (0.0, 0.0),
    a_range: tuple[float, float] = (1.0, 1.0),
    realizations: int = 3,
    base_seed: int = 0,
    grid: int = 3,
    rel_tol: float = 0.10,
    dims: int | None = None,
    vector_density: float = 0.3,
) -> CalibrationResult:
    """Find parameters whose expected link count matches ``m_target``.

    Grid search over (w, a) with a bisection on p inside each cell (the
    expected link count is decreasing in p).  Every candidate is scored by
    the mean link count of ``realizations`` paired-seed runs.  Raises
    :class:`CalibrationError` when nothing gets within ``rel_tol``.
    """
    if m_target <= 0:
        raise ValueError("m_target must be positive")
    n0 = seed_graph.node_count
    seed_m = seed_graph.edge_count
    if dims is None:
        dims = seed_graph.field_vectors.shape[1] if seed_graph.field_vectors is not None else 10

    def mid(rng_pair):
        return 0.5 * (rng_pair[0] + rng_pair[1])

    # p = 1, q = 0 adds exactly one link per new node
    if q == 0.0 and m_target == seed_m + (target_n - n0) and p_range[1] >= 1.0:
        params = GenParams(
            p=1.0, w=mid(w_range), a=mid(a_range), q=q, target_n=target_n,
            seed=base_seed, dims=dims, vector_density=vector_density,
        )
        return CalibrationResult(params, float(m_target), 0)

    evaluations = 0

    def mean_m(p: float, w: float, a: float) -> float:
        nonlocal evaluations
        total = 0
        for k in range(realizations):
            params = GenParams(
                p=p, w=w, a=a, q=q, target_n=target_n, seed=base_seed + k,
                dims=dims, vector_density=vector_density,
            )
            total += generate(params, seed_graph).edge_count
            evaluations += 1
        return total / realizations

    def axis(rng_pair):
        lo, hi = rng_pair
        if lo == hi:
            return [lo]
        return list(np.linspace(lo, hi, grid))

    best: tuple[float, GenParams, float] | None = None
    achieved: list[float] = []
    for w in axis(w_range):
        for a in axis(a_range):
            p_lo, p_hi = p_range
            m_hi = mean_m(p_lo, w, a)  # most links at small p
            m_lo = mean_m(p_hi, w, a)
            achieved.extend([m_lo, m_hi])
            for m_value, p_value in ((m_hi, p_lo), (m_lo, p_hi)):
                err = abs(m_value - m_target) / m_target
                if best is None or err < best[0]:
                    best = (
                        err,
                        GenParams(p=p_value, w=w, a=a, q=q, target_n=target_n,
                                  seed=base_seed, dims=dims, vector_density=vector_density),
                        m_value,
                    )
            if not (m_lo <= m_target <= m_hi):
                continue
            lo, hi = p_lo, p_hi
            for _ in range(20):
                p_mid = 0.5 * (lo + hi)
                m_mid = mean_m(p_mid, w, a)
                achieved.append(m_mid)
                err = abs(m_mid - m_target) / m_target
                if err < best[0]:
                    best = (
                        err,
                        GenParams(p=p_mid, w=w, a=a, q=q, target_n=target_n,
                                  seed=base_seed, dims=dims, vector_density=vector_density),
                        m_mid,
                    )
                if err < 0.01:
                    break
                if m_mid > m_target:
                    lo = p_mid  # too many links: raise p
                else:
                    hi = p_mid
    if best is None or best[0] > rel_tol:
        lo = min(achieved) if achieved else float("nan")
        hi = max(achieved) if achieved else float("nan")
        raise CalibrationError(
            f"target M={m_target} unreachable within {rel_tol:.0%}: "
            f"achieved link counts span [{lo:.0f}, {hi:.0f}]"
        )
    return CalibrationResult(best[1], best[2], evaluations)
