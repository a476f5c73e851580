"""Loading, cleaning, and serializing citation networks.

Two input families: SNAP-style edge lists (``#`` comments, whitespace-
separated integer pairs) and metadata CSVs (``id,label,date`` header,
RFC-4180, dates ISO-8601 or bare year).  A serialized network is an
``edges.txt`` / ``nodes.csv`` pair, optionally with a ``vectors.csv``
sidecar carrying per-node field vectors.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

import numpy as np

from . import graph
from .graph import Dag, NodeDate


@dataclass(frozen=True)
class CleaningReport:
    """Counts from the cleaning pipeline; all fields are >= 0."""

    isolates_removed: int
    component_nodes_kept: int
    date_violations_removed: int
    back_edges_removed: int
    post_cycle_nodes_removed: int = 0

    def to_dict(self) -> dict:
        return {
            "isolates_removed": self.isolates_removed,
            "component_nodes_kept": self.component_nodes_kept,
            "date_violations_removed": self.date_violations_removed,
            "back_edges_removed": self.back_edges_removed,
            "post_cycle_nodes_removed": self.post_cycle_nodes_removed,
        }


@dataclass(frozen=True)
class MetadataReport:
    rows_applied: int
    unknown_ids: tuple[str, ...]


def _as_lines(source):
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    if isinstance(source, str):
        source = io.StringIO(source)
    return source


def load_edge_list(source) -> Dag:
    """Parse a SNAP edge list into a densely indexed graph.

    Node identifiers may be arbitrary integers; they are re-indexed densely
    in ascending order and kept as node labels (the mapping table).
    Duplicate lines collapse to one edge and are counted in diagnostics.
    """
    raw: list[tuple[int, int]] = []
    for lineno, line in enumerate(_as_lines(source), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'source target', got {stripped!r}")
        try:
            raw.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer node id in {stripped!r}") from None
    if not raw:
        return graph.build(0, [])
    arr = np.asarray(raw, dtype=np.int64)
    ids = np.unique(arr)
    dense = {int(v): i for i, v in enumerate(ids)}
    edges = np.empty_like(arr)
    edges[:, 0] = [dense[int(v)] for v in arr[:, 0]]
    edges[:, 1] = [dense[int(v)] for v in arr[:, 1]]
    return graph.build(len(ids), edges, labels=[str(int(v)) for v in ids])


def load_csv_metadata(source, g: Dag) -> tuple[Dag, MetadataReport]:
    """Attach labels/dates from an ``id,label,date`` CSV to a graph.

    Ids are matched against the graph's labels (the original identifiers)
    when present, falling back to dense node indices.  Unknown ids are
    reported, not fatal.  Empty label/date cells leave the field unchanged.
    """
    reader = csv.reader(_as_lines(source))
    header = next(reader, None)
    if header is None or [h.strip().lower() for h in header[:3]] != ["id", "label", "date"]:
        raise ValueError("line 1: expected header 'id,label,date'")
    by_id: dict[str, int] = (
        {lab: i for i, lab in enumerate(g.labels)}
        if g.labels is not None
        else {str(i): i for i in range(g.node_count)}
    )
    labels = list(g.labels) if g.labels is not None else [str(i) for i in range(g.node_count)]
    dates: list[NodeDate | None] = list(g.dates) if g.dates is not None else [None] * g.node_count
    unknown: list[str] = []
    applied = 0
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ValueError(f"line {lineno}: expected 3 columns, got {len(row)}")
        key, label, date_text = (c.strip() for c in row)
        node = by_id.get(key)
        if node is None:
            unknown.append(key)
            continue
        if label:
            labels[node] = label
        if date_text:
            try:
                dates[node] = NodeDate.parse(date_text)
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        applied += 1
    if all(d is None for d in dates):
        dates = None
    out = Dag(
        g.node_count,
        g.out_indptr,
        g.out_indices,
        g.in_indptr,
        g.in_indices,
        labels=labels,
        dates=dates,
        field_vectors=g.field_vectors,
        diagnostics=g.diagnostics,
    )
    out._acyclic = g._acyclic
    return out, MetadataReport(rows_applied=applied, unknown_ids=tuple(unknown))


def clean(g: Dag) -> tuple[Dag, CleaningReport]:
    """Cleaning pipeline: drop isolates, keep the largest weakly connected
    component, break cycles (date phase first when dates exist), and keep
    the largest component again if edge removal disconnected anything.
    """
    if g.node_count == 0:
        raise ValueError("cannot clean an empty graph")
    degrees = g.out_degrees() + g.in_degrees()
    non_isolated = np.flatnonzero(degrees > 0)
    isolates_removed = g.node_count - non_isolated.shape[0]
    trimmed = g.induced_subgraph(non_isolated)[0] if isolates_removed else g
    if trimmed.node_count == 0:
        raise ValueError("graph has no edges left after isolate removal")
    component, _ = graph.largest_weakly_connected_component(trimmed)
    acyclic, removed = graph.break_cycles(component)
    post_removed = 0
    if removed.total:
        degrees = acyclic.out_degrees() + acyclic.in_degrees()
        acyclic = acyclic.induced_subgraph(degrees > 0)[0]
        acyclic, _ = graph.largest_weakly_connected_component(acyclic)
        post_removed = component.node_count - acyclic.node_count
    report = CleaningReport(
        isolates_removed=isolates_removed,
        component_nodes_kept=acyclic.node_count,
        date_violations_removed=len(removed.date_violations),
        back_edges_removed=len(removed.back_edges),
        post_cycle_nodes_removed=post_removed,
    )
    return acyclic, report


# -- directory serialization -------------------------------------------


def save_network(g: Dag, directory) -> None:
    """Write ``edges.txt`` + ``nodes.csv`` (+ ``vectors.csv`` if present)."""
    os.makedirs(directory, exist_ok=True)
    with open(os.path.join(directory, "edges.txt"), "w", encoding="utf-8") as fh:
        fh.write(f"# Directed graph: {g.node_count} nodes, {g.edge_count} edges\n")
        fh.write("# source\ttarget\n")
        for i, j in g.edge_array():
            fh.write(f"{i}\t{j}\n")
    with open(os.path.join(directory, "nodes.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label", "date"])
        for i in range(g.node_count):
            label = g.labels[i] if g.labels is not None else ""
            date = g.dates[i] if g.dates is not None else None
            writer.writerow([i, label, str(date) if date is not None else ""])
    if g.field_vectors is not None:
        with open(os.path.join(directory, "vectors.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id"] + [f"v{d}" for d in range(g.field_vectors.shape[1])])
            for i in range(g.node_count):
                writer.writerow([i] + [int(b) for b in g.field_vectors[i]])


def load_network(directory) -> Dag:
    """Load a network saved by :func:`save_network`.

    Unlike :func:`load_edge_list` this performs no re-indexing: node ids in
    the pair of files are already dense, and isolated nodes appear only in
    ``nodes.csv``.
    """
    edges_path = os.path.join(directory, "edges.txt")
    nodes_path = os.path.join(directory, "nodes.csv")
    edges: list[tuple[int, int]] = []
    with open(edges_path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise ValueError(f"{edges_path}:{lineno}: expected 'source target'")
            try:
                edges.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise ValueError(f"{edges_path}:{lineno}: non-integer node id") from None
    if not os.path.exists(nodes_path):
        n = 1 + max((max(i, j) for i, j in edges), default=-1)
        return graph.build(n, edges)
    with open(nodes_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        next(reader)  # header
        rows = list(reader)
    n = len(rows)
    labels: list[str] = [""] * n
    dates: list[NodeDate | None] = [None] * n
    for row in rows:
        i = int(row[0])
        labels[i] = row[1]
        dates[i] = NodeDate.parse(row[2]) if len(row) > 2 and row[2] else None
    vectors = None
    vec_path = os.path.join(directory, "vectors.csv")
    if os.path.exists(vec_path):
        with open(vec_path, "r", encoding="utf-8", newline="") as fh:
            vreader = csv.reader(fh)
            dims = len(next(vreader)) - 1
            vectors = np.zeros((n, dims), dtype=np.uint8)
            for row in vreader:
                vectors[int(row[0])] = [int(c) for c in row[1:]]
    if all(d is None for d in dates):
        dates = None
    return graph.build(n, edges, labels=labels, dates=dates, field_vectors=vectors)
