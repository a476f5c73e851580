"""dagkit: build and analyse directed acyclic knowledge networks."""

from . import backend, disruption, genmodel, graph, ingest, metamath, metrics, nullmodel, stats
from .graph import (
    BuildDiagnostics,
    CycleError,
    Dag,
    GenerationAssignment,
    NodeDate,
    break_cycles,
    build,
    is_acyclic,
    largest_weakly_connected_component,
    topological_generations,
    topological_sort,
)

__version__ = "0.1.0"

__all__ = [
    "backend",
    "break_cycles",
    "build",
    "BuildDiagnostics",
    "CycleError",
    "Dag",
    "disruption",
    "GenerationAssignment",
    "genmodel",
    "graph",
    "ingest",
    "is_acyclic",
    "largest_weakly_connected_component",
    "metamath",
    "metrics",
    "NodeDate",
    "nullmodel",
    "stats",
    "topological_generations",
    "topological_sort",
    "__version__",
]
