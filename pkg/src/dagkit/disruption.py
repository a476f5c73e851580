"""Functional metrics: disruption, citation preferences, Gini, groupings.

Disruption of a focal node compares its citers against the later citers of
its references: +1 when nobody citing the node also cites its references,
-1 when everybody does.  "Later" is measured by topological generation (or
by date in the date-based variant); the windowed variant keeps only citers
and co-citers up to a fixed number of generations after the focal node.

Nodes whose denominator is empty have undefined disruption; they are kept
in the record lists but excluded from every aggregate (means, Gini,
correlations).  That exclusion rule travels with serialized reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend, stats
from .graph import Dag, GenerationAssignment

EXCLUSION_RULE = "nodes with undefined disruption are excluded from aggregates"


@dataclass(frozen=True)
class DisruptionRecord:
    node: int
    disruption: float | None
    citations: int
    mode: str


@dataclass(frozen=True)
class PreferenceRecord:
    node: int
    reference_popularity: float
    reference_age: float


def _records(g: Dag, order: np.ndarray, upper: np.ndarray | None, mode: str) -> list[DisruptionRecord]:
    citations, both, tilde = backend.kernels().disruption_counts(
        g.out_indptr.astype(np.int64),
        g.out_indices.astype(np.int64),
        g.in_indptr.astype(np.int64),
        g.in_indices.astype(np.int64),
        np.ascontiguousarray(order, dtype=np.int64),
        None if upper is None else np.ascontiguousarray(upper, dtype=np.int64),
    )
    out = []
    for i in range(g.node_count):
        union = int(citations[i] + tilde[i])  # |P| + |P~ \ P|
        value = (int(citations[i]) - 2 * int(both[i])) / union if union else None
        out.append(DisruptionRecord(i, value, int(citations[i]), mode))
    return out


def disruption_full(g: Dag, gen: GenerationAssignment) -> list[DisruptionRecord]:
    """Full-history disruption; citations count all citers."""
    if gen.g.shape[0] != g.node_count:
        raise ValueError("generation assignment does not match the graph")
    return _records(g, gen.g, None, "full")


def disruption_windowed(
    g: Dag, gen: GenerationAssignment, window: int = 10
) -> list[DisruptionRecord]:
    """Disruption restricted to ``window`` generations after the focal node.

    Citers beyond generation g(i)+window are ignored entirely; citations
    count only the in-window citers.  A window covering the whole graph
    reproduces the full variant exactly.
    """
    if gen.g.shape[0] != g.node_count:
        raise ValueError("generation assignment does not match the graph")
    if window < 0:
        raise ValueError("window must be nonnegative")
    return _records(g, gen.g, gen.g + window, f"windowed-{window}")


def _date_orders(g: Dag) -> tuple[np.ndarray, bool]:
    if g.dates is None:
        raise ValueError("graph has no dates")
    missing = [i for i, d in enumerate(g.dates) if d is None]
    if missing:
        head = ", ".join(str(i) for i in missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise ValueError(f"nodes without dates: {head}{more}")
    if all(d.day_precision for d in g.dates):
        return np.asarray([d.sort_key() for d in g.dates], dtype=np.int64), False
    # mixed precision: compare everything at year level
    return np.asarray([d.year for d in g.dates], dtype=np.int64), True


def disruption_by_date(g: Dag, window_years: int | None = None) -> list[DisruptionRecord]:
    """Disruption with strict date comparison instead of generations.

    Every node must carry a date.  If any node has bare-year precision all
    comparisons degrade to year level.  ``window_years`` limits citers and
    co-citers to dates at most that many years after the focal node.
    """
    order, year_level = _date_orders(g)
    upper = None
    if window_years is not None:
        if window_years < 0:
            raise ValueError("window_years must be nonnegative")
        if year_level:
            upper = order + window_years
        else:
            upper = order + window_years * 10000  # keys are y*10000 + m*100 + d
    mode = "date-based" if window_years is None else f"date-based-{window_years}y"
    return _records(g, order, upper, mode)


def reference_metrics(g: Dag, gen: GenerationAssignment) -> list[PreferenceRecord]:
    """Mean citer count and mean generation gap of each node's references.

    Nodes with no references have no record.
    """
    kin = g.in_degrees()
    out = []
    for i in range(g.node_count):
        refs = g.out_neighbors(i)
        if refs.shape[0] == 0:
            continue
        popularity = float(kin[refs].mean())
        age = float((gen.g[i] - gen.g[refs]).mean())
        out.append(PreferenceRecord(i, popularity, age))
    return out


def defined_values(records: list[DisruptionRecord]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(nodes, disruption, citations) arrays over defined records only."""
    keep = [(r.node, r.disruption, r.citations) for r in records if r.disruption is not None]
    if not keep:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.float64),
            np.empty(0, dtype=np.int64),
        )
    nodes, values, cites = zip(*keep)
    return (
        np.asarray(nodes, dtype=np.int64),
        np.asarray(values, dtype=np.float64),
        np.asarray(cites, dtype=np.int64),
    )


def gini_of_disruption(records: list[DisruptionRecord]) -> float:
    """Gini coefficient of disruption mapped affinely onto [0, 1].

    The map is (d+1)/2 regardless of the observed range, so values are
    comparable across networks.  Undefined records are excluded.
    """
    _, values, _ = defined_values(records)
    if values.size < 2:
        raise ValueError("need at least 2 defined disruption values")
    x = np.sort((values + 1.0) / 2.0)
    total = float(x.sum())
    if total == 0.0:
        raise ValueError("all normalized values are zero; Gini undefined")
    n = x.size
    ranks = np.arange(1, n + 1, dtype=np.float64)
    return float((2.0 * (ranks @ x) - (n + 1) * total) / (n * total))


@dataclass(frozen=True)
class GroupStats:
    lower: float
    upper: float
    count: int
    mean_disruption: float | None
    correlation: stats.CorrelationResult | None


def grouped_evolution(
    g: Dag,
    gen: GenerationAssignment,
    records: list[DisruptionRecord],
    groups: int = 10,
) -> list[GroupStats]:
    """Disruption statistics over equal-width generation intervals.

    The first and last ten generations are dropped; the rest of the range
    splits into ``groups`` equal-width, left-closed intervals (fractional
    boundaries allowed).
    """
    if gen.generation_count <= 20:
        raise ValueError("need more than 20 generations for the grouped evolution")
    lo = 10.0
    hi = float(gen.generation_count - 10)
    width = (hi - lo) / groups
    nodes, values, cites = defined_values(records)
    keep = (gen.g[nodes] >= lo) & (gen.g[nodes] < hi)
    nodes, values, cites = nodes[keep], values[keep], cites[keep]
    idx = np.minimum((gen.g[nodes] - lo) // width, groups - 1).astype(np.int64)
    out = []
    for k in range(groups):
        sel = idx == k
        count = int(sel.sum())
        mean = float(values[sel].mean()) if count else None
        corr = None
        if count >= 3:
            try:
                corr = stats.correlate(values[sel], cites[sel], kind="pearson")
            except ValueError:
                corr = None
        out.append(GroupStats(lo + k * width, lo + (k + 1) * width, count, mean, corr))
    return out


@dataclass(frozen=True)
class PreferenceGroup:
    key_low: float
    key_high: float
    count: int
    correlation: stats.CorrelationResult | None


def grouped_by_preference(
    records: list[DisruptionRecord],
    preferences: list[PreferenceRecord],
    key: str = "popularity",
    groups: int = 5,
) -> list[PreferenceGroup]:
    """Disruption-citations correlation inside equal-count key quantiles.

    Nodes are sorted by the chosen preference key (ascending, node index as
    the tie-break) and split into ``groups`` contiguous chunks; chunk sizes
    differ by at most one, larger chunks first.
    """
    if key not in ("popularity", "age"):
        raise ValueError(f"unknown preference key {key!r}")
    by_node = {r.node: r for r in records if r.disruption is not None}
    items = [
        (p.reference_popularity if key == "popularity" else p.reference_age, p.node)
        for p in preferences
        if p.node in by_node
    ]
    if len(items) < groups:
        raise ValueError(f"need at least {groups} joined records")
    items.sort()
    out = []
    for chunk in np.array_split(np.arange(len(items)), groups):
        rows = [items[i] for i in chunk]
        values = np.asarray([by_node[node].disruption for _, node in rows])
        cites = np.asarray([by_node[node].citations for _, node in rows], dtype=np.float64)
        corr = None
        if len(rows) >= 3:
            try:
                corr = stats.correlate(values, cites, kind="pearson")
            except ValueError:
                corr = None
        out.append(PreferenceGroup(rows[0][0], rows[-1][0], len(rows), corr))
    return out
