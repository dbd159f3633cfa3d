"""Workload containers, the JSON file schema, and synthetic generators.

Two workload kinds exist. Grid workloads are flat lists of positive
integer patch costs (cell counts). Graph workloads carry real node
weights plus weighted undirected edges and describe communication-aware
problems. Native simulation dump formats are out of scope; everything
enters through the JSON schema below.

File schema (UTF-8 JSON, sorted keys)::

    {"kind": "grids", "metadata": {...}, "weights": [int, ...]}
    {"kind": "graph", "metadata": {...}, "nodes": [float, ...],
     "edges": [[u, v, weight], ...]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import ParseError, ValidationError
from .rng import stream

GRID_KIND = "grids"
GRAPH_KIND = "graph"


@dataclass(frozen=True)
class GridWorkload:
    """Per-patch integer costs for a structured-mesh workload."""

    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        weights = tuple(self.weights)
        if not weights:
            raise ValidationError("weights: must be non-empty")
        for i, w in enumerate(weights):
            if isinstance(w, bool) or not isinstance(w, int):
                raise ValidationError(f"weights[{i}]: expected an integer, got {w!r}")
            if w < 1:
                raise ValidationError(f"weights[{i}]: weight must be >= 1, got {w}")
        object.__setattr__(self, "weights", weights)

    @property
    def num_items(self) -> int:
        return len(self.weights)

    @property
    def total(self) -> int:
        return sum(self.weights)


@dataclass(frozen=True)
class GraphWorkload:
    """Node-weighted, edge-weighted undirected graph workload."""

    node_weights: tuple[float, ...]
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        nodes = tuple(float(w) for w in self.node_weights)
        if not nodes:
            raise ValidationError("nodes: must be non-empty")
        for i, w in enumerate(nodes):
            if not math.isfinite(w) or w <= 0.0:
                raise ValidationError(f"nodes[{i}]: weight must be positive and finite, got {w!r}")
        n = len(nodes)
        seen: set[tuple[int, int]] = set()
        edges = []
        for k, edge in enumerate(self.edges):
            u, v, w = edge
            if isinstance(u, bool) or isinstance(v, bool) or not isinstance(u, int) or not isinstance(v, int):
                raise ValidationError(f"edges[{k}]: endpoints must be integers, got {edge!r}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edges[{k}]: endpoint out of range for {n} nodes: ({u}, {v})")
            if u == v:
                raise ValidationError(f"edges[{k}]: self-loop at node {u}")
            if not u < v:
                raise ValidationError(f"edges[{k}]: endpoints must satisfy u < v, got ({u}, {v})")
            if (u, v) in seen:
                raise ValidationError(f"edges[{k}]: duplicate edge ({u}, {v})")
            seen.add((u, v))
            w = float(w)
            if not math.isfinite(w) or w <= 0.0:
                raise ValidationError(f"edges[{k}]: weight must be positive and finite, got {w!r}")
            edges.append((u, v, w))
        object.__setattr__(self, "node_weights", nodes)
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def num_items(self) -> int:
        return len(self.node_weights)

    @property
    def total(self) -> float:
        return float(sum(self.node_weights))


Workload = GridWorkload | GraphWorkload


@dataclass(frozen=True)
class WorkloadFile:
    """A workload plus free-form string metadata, as stored on disk."""

    kind: str
    payload: Workload
    metadata: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind == GRID_KIND:
            if not isinstance(self.payload, GridWorkload):
                raise ValidationError("kind: 'grids' requires a GridWorkload payload")
        elif self.kind == GRAPH_KIND:
            if not isinstance(self.payload, GraphWorkload):
                raise ValidationError("kind: 'graph' requires a GraphWorkload payload")
        else:
            raise ValidationError(f"kind: unknown workload kind {self.kind!r}")
        for key, value in self.metadata.items():
            if not isinstance(key, str) or not isinstance(value, str):
                raise ValidationError(f"metadata[{key!r}]: keys and values must be strings")


def load_workload(data: bytes | str) -> WorkloadFile:
    """Parse and validate a workload document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"workload document is not valid UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"workload document is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("workload document must be a JSON object")
    kind = doc.get("kind")
    if kind is None:
        raise ParseError("kind: missing required field")
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise ValidationError("metadata: must be an object of strings")

    if kind == GRID_KIND:
        weights = doc.get("weights")
        if not isinstance(weights, list):
            raise ParseError("weights: missing or not a list")
        payload: Workload = GridWorkload(tuple(weights))
    elif kind == GRAPH_KIND:
        nodes = doc.get("nodes")
        raw_edges = doc.get("edges", [])
        if not isinstance(nodes, list):
            raise ParseError("nodes: missing or not a list")
        if not isinstance(raw_edges, list):
            raise ParseError("edges: not a list")
        edges = []
        for k, entry in enumerate(raw_edges):
            if not isinstance(entry, list) or len(entry) != 3:
                raise ParseError(f"edges[{k}]: expected [u, v, weight]")
            edges.append((entry[0], entry[1], entry[2]))
        payload = GraphWorkload(tuple(nodes), tuple(edges))
    else:
        raise ValidationError(f"kind: unknown workload kind {kind!r}")
    return WorkloadFile(kind=kind, payload=payload, metadata=dict(metadata))


def save_workload(wf: WorkloadFile) -> bytes:
    """Serialize a workload document; load(save(x)) == x."""
    doc: dict = {"kind": wf.kind, "metadata": dict(wf.metadata)}
    if isinstance(wf.payload, GridWorkload):
        doc["weights"] = list(wf.payload.weights)
    else:
        doc["nodes"] = list(wf.payload.node_weights)
        doc["edges"] = [[u, v, w] for (u, v, w) in wf.payload.edges]
    return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def generate_blastwave_grids(num_patches: int, seed: int) -> GridWorkload:
    """Synthetic blast-wave style patch costs.

    Most patches are cheap; a heavy tail models refined regions near the
    shock front: 80% uniform integers in [500, 5000], 20% in [5000, 50000].
    """
    if num_patches < 2:
        raise ValidationError(f"num_patches: need at least 2 patches, got {num_patches}")
    rng = stream(seed)
    weights = []
    for _ in range(num_patches):
        if rng.random() < 0.8:
            weights.append(int(rng.integers(500, 5001)))
        else:
            weights.append(int(rng.integers(5000, 50001)))
    return GridWorkload(tuple(weights))


def _coords(index: int, side: int) -> tuple[int, int, int]:
    x, rem = divmod(index, side * side)
    y, z = divmod(rem, side)
    return x, y, z


def _periodic_adjacent(a: tuple[int, int, int], b: tuple[int, int, int], side: int) -> bool:
    # Chebyshev distance 1 on the periodic lattice: every axis within one
    # wrapped step, at least one axis differing.
    if a == b:
        return False
    for pa, pb in zip(a, b):
        d = abs(pa - pb)
        if min(d, side - d) > 1:
            return False
    return True


def generate_cosmo_clique(side: int, seed: int) -> GraphWorkload:
    """Periodic side^3 cell graph with face/edge/corner neighbour couplings.

    side=3 wraps onto itself so densely that the graph is complete. Node
    weights are log-normal (sigma 0.75) rescaled to mean 1.0; edge weights
    are uniform on [0.01, 0.2].
    """
    if side < 2:
        raise ValidationError(f"side: need side >= 2, got {side}")
    n = side ** 3
    rng = stream(seed)
    raw = rng.lognormal(mean=0.0, sigma=0.75, size=n)
    node_weights = tuple(float(w) for w in (raw / raw.mean()))
    coords = [_coords(i, side) for i in range(n)]
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if _periodic_adjacent(coords[u], coords[v], side):
                edges.append((u, v, float(rng.uniform(0.01, 0.2))))
    return GraphWorkload(node_weights, tuple(edges))
