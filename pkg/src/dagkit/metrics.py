"""Whole-network structural statistics.

Degree survival curves, self-degree correlation, clustering in the
directed-total convention, degree assortativity in all pairings, average
path length, and the consolidated report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import backend, stats
from .graph import Dag

#: out-degree bin boundaries for the self-degree curve, log-spaced base 3
SELF_DEGREE_BIN_EDGES = [1, 3, 9, 27, 81, 243]

#: exact BFS below this node count; seeded source sampling above
PATH_LENGTH_EXACT_LIMIT = 50_000
PATH_LENGTH_SAMPLE_SIZE = 10_000


@dataclass(frozen=True)
class DegreeCcdf:
    """Survival function of a degree distribution: fraction of nodes with
    degree >= k, at every observed k."""

    kind: str
    points: list[tuple[int, float]]


@dataclass(frozen=True)
class BinnedCurve:
    bin_edges: list[float]
    bin_means: list[float | None]
    bin_stderrs: list[float | None]
    bin_counts: list[int]


@dataclass(frozen=True)
class SelfDegreeResult:
    curve: BinnedCurve
    spearman: float
    p_value: float


@dataclass(frozen=True)
class MetricsReport:
    node_count: int
    link_count: int
    density: float
    max_degree: int
    max_out_degree: int
    max_in_degree: int
    average_degree: float
    average_path_length_directed: float | None
    average_path_length_undirected: float | None
    global_clustering_undirected: float
    global_clustering_directed: float
    average_clustering_undirected: float
    average_clustering_directed: float
    assortativity: dict
    self_degree_spearman: float | None
    self_degree_p_value: float | None

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["assortativity"] = dict(self.assortativity)
        return out


def _degrees(g: Dag, kind: str) -> np.ndarray:
    if kind == "total":
        return g.out_degrees() + g.in_degrees()
    if kind == "out":
        return g.out_degrees()
    if kind == "in":
        return g.in_degrees()
    raise ValueError(f"unknown degree kind {kind!r}")


def degree_ccdf(g: Dag, kind: str = "total") -> DegreeCcdf:
    """Cumulative (survival) degree distribution for the requested kind."""
    deg = _degrees(g, kind)
    n = deg.shape[0]
    if n == 0:
        return DegreeCcdf(kind, [])
    values, counts = np.unique(deg, return_counts=True)
    at_least = n - np.concatenate([[0], np.cumsum(counts)[:-1]])
    return DegreeCcdf(kind, [(int(k), float(c) / n) for k, c in zip(values, at_least)])


def undirected_csr(g: Dag) -> tuple[np.ndarray, np.ndarray]:
    """Symmetric simple adjacency of the undirected projection."""
    edges = g.edge_array()
    sym = np.concatenate([edges, edges[:, ::-1]])
    if sym.shape[0]:
        sym = np.unique(sym, axis=0)
    indptr = np.zeros(g.node_count + 1, dtype=np.int64)
    np.cumsum(np.bincount(sym[:, 0], minlength=g.node_count), out=indptr[1:])
    return indptr, np.ascontiguousarray(sym[:, 1])


def _reciprocal_degrees(g: Dag) -> np.ndarray:
    """Number of reciprocated partners per node (zero on any DAG)."""
    edges = g.edge_array()
    if edges.shape[0] == 0:
        return np.zeros(g.node_count, dtype=np.int64)
    key = edges[:, 0] * g.node_count + edges[:, 1]
    rev = edges[:, 1] * g.node_count + edges[:, 0]
    mask = np.isin(key, rev, assume_unique=True)
    return np.bincount(edges[mask, 0], minlength=g.node_count)


def clustering_directed(g: Dag) -> tuple[np.ndarray, float, float]:
    """Directed-total clustering: per-node coefficients, their average, and
    the global (triplet-ratio) value.

    Per node the coefficient is the directed-triangle count over
    2 * [d_tot*(d_tot-1) - 2*d_bidir] possible triplets; on loop-free
    graphs without reciprocated pairs (every finalized DAG) the numerator
    equals twice the undirected triangle count.  Graphs with reciprocated
    pairs are rejected.
    """
    recip = _reciprocal_degrees(g)
    if recip.any():
        raise ValueError("directed clustering requires a graph with no reciprocated edges")
    indptr, indices = undirected_csr(g)
    tri = backend.kernels().triangle_counts(indptr, indices, g.node_count)
    d_tot = g.out_degrees() + g.in_degrees()
    numerator = 2 * tri
    possible = 2 * (d_tot * (d_tot - 1))
    per_node = np.zeros(g.node_count, dtype=np.float64)
    ok = possible > 0
    per_node[ok] = numerator[ok] / possible[ok]
    average = float(per_node.mean()) if g.node_count else 0.0
    total_possible = int(possible.sum())
    global_ = float(numerator.sum() / total_possible) if total_possible else 0.0
    return per_node, average, global_


def clustering_undirected(g: Dag) -> tuple[float, float]:
    """Average and global clustering of the undirected projection."""
    indptr, indices = undirected_csr(g)
    tri = backend.kernels().triangle_counts(indptr, indices, g.node_count)
    deg = np.diff(indptr)
    possible = deg * (deg - 1)
    per_node = np.zeros(g.node_count, dtype=np.float64)
    ok = possible > 0
    per_node[ok] = 2.0 * tri[ok] / possible[ok]
    average = float(per_node.mean()) if g.node_count else 0.0
    total = int(possible.sum())
    global_ = float(2.0 * tri.sum() / total) if total else 0.0
    return average, global_


ASSORTATIVITY_MODES = ("undirected", "out-out", "out-in", "in-out", "in-in")


def assortativity(g: Dag, mode: str = "out-in") -> float | None:
    """Degree-degree Pearson correlation over edges.

    Directed modes pair the source's degree of the first kind with the
    target's degree of the second kind; the undirected mode correlates
    endpoint degrees of the projection with each edge counted in both
    orientations.  Returns None when a degree sequence has zero variance.
    """
    if g.edge_count < 2:
        raise ValueError("assortativity requires at least 2 edges")
    if mode == "undirected":
        indptr, indices = undirected_csr(g)
        deg = np.diff(indptr)
        src = np.repeat(np.arange(g.node_count), deg)
        x = deg[src].astype(np.float64)
        y = deg[indices].astype(np.float64)
    else:
        try:
            src_kind, dst_kind = mode.split("-")
        except ValueError:
            raise ValueError(f"unknown assortativity mode {mode!r}") from None
        edges = g.edge_array()
        x = _degrees(g, src_kind)[edges[:, 0]].astype(np.float64)
        y = _degrees(g, dst_kind)[edges[:, 1]].astype(np.float64)
    sx = x - x.mean()
    sy = y - y.mean()
    denom = math.sqrt(float(sx @ sx) * float(sy @ sy))
    if denom == 0.0:
        return None
    return float(sx @ sy) / denom


def self_degree_correlation(g: Dag) -> SelfDegreeResult:
    """In-degree as a function of out-degree.

    Nodes are binned by out-degree into [3^0,3^1), ..., [3^4,3^5); each bin
    reports the mean in-degree and its standard error.  The Spearman
    coefficient is computed over all nodes, including out-degree zero.
    """
    if g.node_count < 3:
        raise ValueError("self-degree correlation requires at least 3 nodes")
    kout = g.out_degrees()
    kin = g.in_degrees()
    edges = SELF_DEGREE_BIN_EDGES
    means: list[float | None] = []
    stderrs: list[float | None] = []
    counts: list[int] = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = kin[(kout >= lo) & (kout < hi)]
        counts.append(int(sel.size))
        if sel.size == 0:
            means.append(None)
            stderrs.append(None)
        else:
            means.append(float(sel.mean()))
            stderrs.append(
                float(np.std(sel, ddof=1) / math.sqrt(sel.size)) if sel.size > 1 else None
            )
    curve = BinnedCurve([float(e) for e in edges], means, stderrs, counts)
    result = stats.correlate(kout, kin, kind="spearman")
    return SelfDegreeResult(curve, result.coefficient, result.p_value)


def average_path_length(
    g: Dag, interpretation: str = "directed-reachable", seed: int = 0
) -> float:
    """Mean shortest-path length.

    ``directed-reachable`` averages over ordered reachable pairs following
    edge direction; ``undirected`` averages over pairs of the undirected
    projection.  Exact BFS from every source up to 50,000 nodes, above
    which 10,000 seeded sources are sampled.
    """
    if interpretation == "directed-reachable":
        indptr, indices = g.out_indptr, g.out_indices
    elif interpretation == "undirected":
        indptr, indices = undirected_csr(g)
    else:
        raise ValueError(f"unknown interpretation {interpretation!r}")
    n = g.node_count
    if n <= PATH_LENGTH_EXACT_LIMIT:
        sources = np.arange(n, dtype=np.int64)
    else:
        rng = np.random.Generator(np.random.PCG64(seed))
        sources = np.sort(rng.choice(n, size=PATH_LENGTH_SAMPLE_SIZE, replace=False)).astype(
            np.int64
        )
    total, pairs = backend.kernels().bfs_distance_totals(
        indptr.astype(np.int64), indices.astype(np.int64), sources
    )
    if pairs == 0:
        raise ValueError("no reachable pairs")
    return total / pairs


def summary(g: Dag, seed: int = 0, path_lengths: bool = True) -> MetricsReport:
    """All whole-network statistics in one serializable report."""
    n, m = g.node_count, g.edge_count
    kout = g.out_degrees()
    kin = g.in_degrees()
    ktot = kout + kin
    _, avg_dir, glob_dir = clustering_directed(g)
    avg_und, glob_und = clustering_undirected(g)
    assort = {}
    for mode in ASSORTATIVITY_MODES:
        try:
            assort[mode] = assortativity(g, mode)
        except ValueError:
            assort[mode] = None
    try:
        sd = self_degree_correlation(g)
        spearman, spearman_p = sd.spearman, sd.p_value
    except ValueError:
        spearman, spearman_p = None, None
    apl_dir = apl_und = None
    if path_lengths:
        try:
            apl_dir = average_path_length(g, "directed-reachable", seed=seed)
        except ValueError:
            pass
        try:
            apl_und = average_path_length(g, "undirected", seed=seed)
        except ValueError:
            pass
    return MetricsReport(
        node_count=n,
        link_count=m,
        density=m / (n * (n - 1)) if n > 1 else 0.0,
        max_degree=int(ktot.max()) if n else 0,
        max_out_degree=int(kout.max()) if n else 0,
        max_in_degree=int(kin.max()) if n else 0,
        average_degree=2.0 * m / n if n else 0.0,
        average_path_length_directed=apl_dir,
        average_path_length_undirected=apl_und,
        global_clustering_undirected=glob_und,
        global_clustering_directed=glob_dir,
        average_clustering_undirected=avg_und,
        average_clustering_directed=avg_dir,
        assortativity=assort,
        self_degree_spearman=spearman,
        self_degree_p_value=spearman_p,
    )
