"""Core directed-graph container, validation, and topological ordering.

Edges always point from the citing (newer) entity to the cited (older) one,
so sinks are the oldest entities (axioms, reference-less papers).  The
topological-sort convention follows suit: cited nodes come first.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np


class CycleError(ValueError):
    """A directed cycle was found where acyclicity is required.

    ``edge`` names one offending edge when known.
    """

    def __init__(self, message: str, edge: tuple[int, int] | None = None):
        super().__init__(message)
        self.edge = edge


@dataclass(frozen=True)
class NodeDate:
    """Publication date with day or bare-year precision.

    Bare years are stored with month = day = 0.  Comparisons across mixed
    precision fall back to year-level comparison.
    """

    year: int
    month: int = 0
    day: int = 0

    @property
    def day_precision(self) -> bool:
        return self.month > 0

    @classmethod
    def parse(cls, text: str) -> "NodeDate":
        """Parse ISO-8601 ``YYYY-MM-DD`` or a bare 4-digit year."""
        text = text.strip()
        parts = text.split("-")
        if len(parts) == 1:
            if not text.isdigit() or len(text) != 4:
                raise ValueError(f"not an ISO date or 4-digit year: {text!r}")
            return cls(int(text))
        if len(parts) != 3:
            raise ValueError(f"not an ISO date or 4-digit year: {text!r}")
        y, m, d = (int(p) for p in parts)
        if not (1 <= m <= 12 and 1 <= d <= 31):
            raise ValueError(f"impossible calendar date: {text!r}")
        return cls(y, m, d)

    def sort_key(self) -> int:
        """Monotone integer key; valid only among day-precision dates."""
        return self.year * 10000 + self.month * 100 + self.day

    def strictly_later_than(self, other: "NodeDate") -> bool:
        if self.day_precision and other.day_precision:
            return self.sort_key() > other.sort_key()
        return self.year > other.year

    def __str__(self) -> str:
        if self.day_precision:
            return f"{self.year:04d}-{self.month:02d}-{self.day:02d}"
        return f"{self.year:04d}"


@dataclass(frozen=True)
class BuildDiagnostics:
    """Non-fatal issues recorded while constructing a graph."""

    duplicate_edges_dropped: int = 0
    self_loops_rejected: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class GenerationAssignment:
    """Per-node topological generation: 0 for sinks, else one more than the
    deepest successor."""

    g: np.ndarray
    generation_count: int

    def sizes(self) -> np.ndarray:
        """Number of nodes in each generation."""
        return np.bincount(self.g, minlength=self.generation_count)


class Dag:
    """Immutable simple directed graph with dense integer node ids.

    Self-loops and duplicate edges are impossible by construction.  The
    class also represents raw, possibly cyclic graphs on their way through
    the cleaning pipeline; acyclicity is checked lazily and cached.
    """

    __slots__ = (
        "node_count",
        "out_indptr",
        "out_indices",
        "in_indptr",
        "in_indices",
        "labels",
        "dates",
        "field_vectors",
        "diagnostics",
        "_acyclic",
    )

    def __init__(
        self,
        node_count: int,
        out_indptr: np.ndarray,
        out_indices: np.ndarray,
        in_indptr: np.ndarray,
        in_indices: np.ndarray,
        labels: list[str] | None = None,
        dates: list[NodeDate | None] | None = None,
        field_vectors: np.ndarray | None = None,
        diagnostics: BuildDiagnostics = BuildDiagnostics(),
    ):
        self.node_count = int(node_count)
        for arr in (out_indptr, out_indices, in_indptr, in_indices):
            arr.flags.writeable = False
        self.out_indptr = out_indptr
        self.out_indices = out_indices
        self.in_indptr = in_indptr
        self.in_indices = in_indices
        self.labels = labels
        self.dates = dates
        if field_vectors is not None:
            field_vectors = np.ascontiguousarray(field_vectors, dtype=np.uint8)
            field_vectors.flags.writeable = False
        self.field_vectors = field_vectors
        self.diagnostics = diagnostics
        self._acyclic: bool | None = None

    # -- basic queries -------------------------------------------------

    @property
    def edge_count(self) -> int:
        return int(self.out_indices.shape[0])

    def out_neighbors(self, i: int) -> np.ndarray:
        """Nodes cited by i (ascending)."""
        return self.out_indices[self.out_indptr[i] : self.out_indptr[i + 1]]

    def in_neighbors(self, j: int) -> np.ndarray:
        """Nodes citing j (ascending)."""
        return self.in_indices[self.in_indptr[j] : self.in_indptr[j + 1]]

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_indptr)

    def in_degrees(self) -> np.ndarray:
        return np.diff(self.in_indptr)

    def edge_array(self) -> np.ndarray:
        """All edges as an (m, 2) array in (source, target) lexicographic order."""
        m = self.edge_count
        out = np.empty((m, 2), dtype=np.int64)
        out[:, 1] = self.out_indices
        out[:, 0] = np.repeat(np.arange(self.node_count, dtype=np.int64), self.out_degrees())
        return out

    def has_edge(self, i: int, j: int) -> bool:
        nbrs = self.out_neighbors(i)
        k = np.searchsorted(nbrs, j)
        return k < nbrs.shape[0] and nbrs[k] == j

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and np.array_equal(self.out_indptr, other.out_indptr)
            and np.array_equal(self.out_indices, other.out_indices)
        )

    __hash__ = None  # mutable-by-content semantics are not wanted anyway

    def __repr__(self) -> str:
        return f"Dag(nodes={self.node_count}, edges={self.edge_count})"

    # -- derived graphs -------------------------------------------------

    def replace_edges(self, edges: np.ndarray) -> "Dag":
        """New graph with the same nodes/metadata but a different edge set."""
        return _from_edges(
            self.node_count,
            edges,
            labels=self.labels,
            dates=self.dates,
            field_vectors=self.field_vectors,
        )

    def induced_subgraph(self, keep: np.ndarray) -> tuple["Dag", np.ndarray]:
        """Subgraph on ``keep`` (bool mask or index array).

        Returns the subgraph and the old->new index mapping (-1 for dropped
        nodes).  Kept nodes preserve their relative order.
        """
        keep = np.asarray(keep)
        if keep.dtype == bool:
            kept = np.flatnonzero(keep)
        else:
            kept = np.unique(keep.astype(np.int64))
        mapping = np.full(self.node_count, -1, dtype=np.int64)
        mapping[kept] = np.arange(kept.shape[0], dtype=np.int64)
        edges = self.edge_array()
        mask = (mapping[edges[:, 0]] >= 0) & (mapping[edges[:, 1]] >= 0)
        sub_edges = mapping[edges[mask]]
        labels = [self.labels[i] for i in kept] if self.labels is not None else None
        dates = [self.dates[i] for i in kept] if self.dates is not None else None
        vectors = self.field_vectors[kept] if self.field_vectors is not None else None
        sub = _from_edges(
            kept.shape[0], sub_edges, labels=labels, dates=dates, field_vectors=vectors
        )
        return sub, mapping


def _csr_from_sorted(n: int, src: np.ndarray, dst: np.ndarray):
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, np.ascontiguousarray(dst)


def _from_edges(n, edges, labels=None, dates=None, field_vectors=None, diagnostics=None):
    """Internal constructor from an already-validated (m, 2) edge array."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.shape[0]:
        edges = np.unique(edges, axis=0)  # sorts by (src, dst) and dedupes
    src, dst = edges[:, 0], edges[:, 1]
    out_indptr, out_indices = _csr_from_sorted(n, src, dst)
    order = np.lexsort((src, dst))
    in_indptr, in_indices = _csr_from_sorted(n, dst[order], src[order])
    return Dag(
        n,
        out_indptr,
        out_indices,
        in_indptr,
        in_indices,
        labels=labels,
        dates=dates,
        field_vectors=field_vectors,
        diagnostics=diagnostics or BuildDiagnostics(),
    )


def build(
    node_count: int,
    edges,
    labels: list[str] | None = None,
    dates: list[NodeDate | None] | None = None,
    field_vectors: np.ndarray | None = None,
) -> Dag:
    """Build a graph from an edge list, dropping duplicates and self-loops.

    Duplicate edges are silently collapsed (their count lands in
    ``dag.diagnostics``); self-loops are rejected and recorded there too.
    An out-of-range endpoint is a hard error.
    """
    edges = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
    edges = edges.reshape(-1, 2)
    if edges.shape[0]:
        if edges.min() < 0 or edges.max() >= node_count:
            bad = edges[(edges < 0).any(axis=1) | (edges >= node_count).any(axis=1)][0]
            raise ValueError(
                f"edge ({bad[0]}, {bad[1]}) out of range for {node_count} nodes"
            )
    loop_mask = edges[:, 0] == edges[:, 1]
    loops = tuple((int(a), int(b)) for a, b in edges[loop_mask])
    edges = edges[~loop_mask]
    unique = np.unique(edges, axis=0) if edges.shape[0] else edges
    diagnostics = BuildDiagnostics(
        duplicate_edges_dropped=int(edges.shape[0] - unique.shape[0]),
        self_loops_rejected=loops,
    )
    if labels is not None and len(labels) != node_count:
        raise ValueError("labels length does not match node_count")
    if dates is not None and len(dates) != node_count:
        raise ValueError("dates length does not match node_count")
    return _from_edges(
        node_count,
        unique,
        labels=labels,
        dates=dates,
        field_vectors=field_vectors,
        diagnostics=diagnostics,
    )


def is_acyclic(g: Dag) -> bool:
    """True iff the graph has no directed cycle (cached on first use)."""
    if g._acyclic is None:
        try:
            topological_sort(g)
            g._acyclic = True
        except CycleError:
            g._acyclic = False
    return g._acyclic


def topological_sort(g: Dag, rng_seed: int | None = None) -> np.ndarray:
    """Order the nodes so that every edge's target precedes its source.

    Cited (old) nodes come first.  Without a seed, ties are broken by the
    smallest node index; with a seed, ties among simultaneously available
    nodes are broken by a seeded uniform draw.
    """
    n = g.node_count
    out_remaining = g.out_degrees().copy()
    order = np.empty(n, dtype=np.int64)
    rng = np.random.Generator(np.random.PCG64(rng_seed)) if rng_seed is not None else None
    avail = [int(i) for i in np.flatnonzero(out_remaining == 0)]
    if rng is None:
        heapq.heapify(avail)
    pos = 0
    in_indptr, in_indices = g.in_indptr, g.in_indices
    while avail:
        if rng is None:
            j = heapq.heappop(avail)
        else:
            k = int(rng.integers(len(avail)))
            avail[k], avail[-1] = avail[-1], avail[k]
            j = avail.pop()
        order[pos] = j
        pos += 1
        for i in in_indices[in_indptr[j] : in_indptr[j + 1]]:
            out_remaining[i] -= 1
            if out_remaining[i] == 0:
                if rng is None:
                    heapq.heappush(avail, int(i))
                else:
                    avail.append(int(i))
    if pos < n:
        stuck = np.flatnonzero(out_remaining > 0)
        u = int(stuck[0])
        unresolved = [v for v in g.out_neighbors(u) if out_remaining[v] > 0]
        v = int(unresolved[0]) if unresolved else int(g.out_neighbors(u)[0])
        raise CycleError(f"graph has a cycle through edge ({u}, {v})", edge=(u, v))
    g._acyclic = True
    return order


def topological_generations(g: Dag) -> GenerationAssignment:
    """Assign each node its minimal layer: 0 for sinks, else
    1 + max over cited nodes.  Equals the longest path length to a sink."""
    n = g.node_count
    out_remaining = g.out_degrees().copy()
    gen = np.zeros(n, dtype=np.int64)
    current = [int(i) for i in np.flatnonzero(out_remaining == 0)]
    in_indptr, in_indices = g.in_indptr, g.in_indices
    level = 0
    seen = 0
    while current:
        nxt = []
        for j in current:
            gen[j] = level
            seen += 1
            for i in in_indices[in_indptr[j] : in_indptr[j + 1]]:
                out_remaining[i] -= 1
                if out_remaining[i] == 0:
                    nxt.append(int(i))
        current = nxt
        level += 1
    if seen < n:
        raise CycleError("cannot assign generations: graph has a cycle")
    g._acyclic = True
    return GenerationAssignment(g=gen, generation_count=level if n else 0)


def largest_weakly_connected_component(g: Dag) -> tuple[Dag, np.ndarray]:
    """Induced subgraph on the largest component of the undirected projection.

    Ties between equal-sized components go to the one containing the
    smallest original node index.  Also returns the old->new mapping.
    """
    if g.node_count == 0:
        raise ValueError("empty graph has no connected component")
    comp = np.full(g.node_count, -1, dtype=np.int64)
    n_comp = 0
    for root in range(g.node_count):
        if comp[root] >= 0:
            continue
        comp[root] = n_comp
        stack = [root]
        while stack:
            u = stack.pop()
            for v in g.out_neighbors(u):
                if comp[v] < 0:
                    comp[v] = n_comp
                    stack.append(int(v))
            for v in g.in_neighbors(u):
                if comp[v] < 0:
                    comp[v] = n_comp
                    stack.append(int(v))
        n_comp += 1
    sizes = np.bincount(comp, minlength=n_comp)
    # components are numbered by their smallest node index, so argmax's
    # first-wins tie rule is exactly the smallest-index tie-break
    best = int(np.argmax(sizes))
    return g.induced_subgraph(comp == best)


@dataclass(frozen=True)
class RemovedEdges:
    """Audit trail of `break_cycles`."""

    date_violations: tuple[tuple[int, int], ...] = ()
    back_edges: tuple[tuple[int, int], ...] = ()

    @property
    def total(self) -> int:
        return len(self.date_violations) + len(self.back_edges)


def break_cycles(
    g: Dag, dates: list[NodeDate | None] | None = None
) -> tuple[Dag, RemovedEdges]:
    """Delete edges until the graph is acyclic; returns the removals.

    Phase 1 (only when dates are known) deletes every edge whose target is
    strictly newer than its source; phase 2 deletes the back edges of a
    depth-first traversal taken in ascending node-index order.
    """
    if dates is None:
        dates = g.dates
    edges = g.edge_array()
    date_removed: list[tuple[int, int]] = []
    if dates is not None and edges.shape[0]:
        keep = np.ones(edges.shape[0], dtype=bool)
        for k in range(edges.shape[0]):
            i, j = edges[k]
            di, dj = dates[i], dates[j]
            if di is not None and dj is not None and dj.strictly_later_than(di):
                keep[k] = False
                date_removed.append((int(i), int(j)))
        edges = edges[keep]
    trimmed = g.replace_edges(edges)
    back_removed = _remove_back_edges(trimmed)
    if back_removed:
        drop = set(back_removed)
        edges = trimmed.edge_array()
        keep = np.fromiter(
            ((int(a), int(b)) not in drop for a, b in edges), dtype=bool, count=edges.shape[0]
        )
        trimmed = g.replace_edges(edges[keep])
    removed = RemovedEdges(
        date_violations=tuple(date_removed), back_edges=tuple(back_removed)
    )
    trimmed._acyclic = True
    return trimmed, removed


def _remove_back_edges(g: Dag) -> list[tuple[int, int]]:
    """Back edges of an iterative DFS over roots 0..n-1, neighbors ascending."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = np.zeros(g.node_count, dtype=np.uint8)
    indptr, indices = g.out_indptr, g.out_indices
    removed: list[tuple[int, int]] = []
    for root in range(g.node_count):
        if color[root] != WHITE:
            continue
        color[root] = GRAY
        stack: list[list[int]] = [[root, int(indptr[root])]]
        while stack:
            frame = stack[-1]
            u, ptr = frame
            advanced = False
            end = int(indptr[u + 1])
            while ptr < end:
                v = int(indices[ptr])
                ptr += 1
                if color[v] == GRAY:
                    removed.append((u, v))
                elif color[v] == WHITE:
                    color[v] = GRAY
                    frame[1] = ptr
                    stack.append([v, int(indptr[v])])
                    advanced = True
                    break
            if not advanced:
                frame[1] = ptr
                color[u] = BLACK
                stack.pop()
    return removed
