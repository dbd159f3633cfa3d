"""Recursive bipartitioning of workloads into power-of-two parts.

Each recursion node formulates its subset as an Ising model, asks the
chosen solver for a split, and recurses on both sides. Node seeds are
derived from the master seed and the recursion path, so results do not
depend on traversal order. Graph edges crossing a committed split are
paid into the running cut weight and dropped from the subproblems.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .ising import IsingModel, batch_energies, from_graph_partitioning, from_number_partitioning
from .rng import derive_seed
from .samplers import AnnealParams, Sample, SampleSet, SqaParams, kernighan_lin, sample_model
from .workload import GraphWorkload, GridWorkload, Workload

MODEL_SOLVERS = ("sd", "sa", "sqa", "bf")
GRAPH_ONLY_SOLVERS = ("kl",)


@dataclass(frozen=True)
class TraceEntry:
    """One recursion node: which items were split, how, and how well."""

    path: tuple[int, ...]
    items: tuple[int, ...]
    solver: str
    best_energy: float
    side_loads: tuple[float, float]


@dataclass(frozen=True)
class PartitionResult:
    parts: int
    assignment: tuple[int, ...]
    part_loads: tuple[float, ...]
    cut_weight: float
    trace: tuple[TraceEntry, ...]

    def to_doc(self) -> dict:
        return {
            "parts": self.parts,
            "assignment": list(self.assignment),
            "part_loads": list(self.part_loads),
            "cut_weight": self.cut_weight,
            "trace": [
                {
                    "path": list(t.path),
                    "items": list(t.items),
                    "solver": t.solver,
                    "best_energy": t.best_energy,
                    "side_loads": list(t.side_loads),
                }
                for t in self.trace
            ],
        }


def assignment_from_spins(spins: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split indices by spin sign: +1 to subset 0, -1 to subset 1."""
    plus = tuple(i for i, s in enumerate(spins) if s > 0)
    minus = tuple(i for i, s in enumerate(spins) if s <= 0)
    return plus, minus


def induced_subproblem(g: GraphWorkload, subset: Sequence[int]) -> tuple[GraphWorkload, tuple[int, ...]]:
    """Subgraph on subset with dense reindexing; returns (subgraph, index map).

    index_map[new_index] is the original node id. Edges survive only if
    both endpoints are inside the subset.
    """
    subset = tuple(subset)
    if not subset:
        raise ValidationError("subset: must be non-empty")
    seen = set()
    for k, node in enumerate(subset):
        if not 0 <= node < g.num_items:
            raise ValidationError(f"subset[{k}]: node {node} out of range")
        if node in seen:
            raise ValidationError(f"subset[{k}]: duplicate node {node}")
        seen.add(node)
    position = {node: k for k, node in enumerate(subset)}
    nodes = tuple(g.node_weights[node] for node in subset)
    edges = []
    for u, v, w in g.edges:
        if u in position and v in position:
            a, b = position[u], position[v]
            if a > b:
                a, b = b, a
            edges.append((a, b, w))
    return GraphWorkload(nodes, tuple(edges)), subset


def _is_power_of_two(x: int) -> bool:
    return x >= 1 and (x & (x - 1)) == 0


def _weights_of(w: Workload) -> Sequence[float]:
    return w.weights if isinstance(w, GridWorkload) else w.node_weights


def _round_robin_split(items: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(items[0::2]), tuple(items[1::2])


def _candidate_splits(sub: Workload, solver: str, gamma: float, node_seed: int,
                      reads: int | None, sweeps: int | None,
                      anneal: AnnealParams | None, sqa: SqaParams | None) -> tuple[list[Sample], SampleSet | None]:
    """Solver candidates for one node, best energy first."""
    if solver == "kl":
        sample = kernighan_lin(sub, gamma, node_seed)
        return [sample], None
    if isinstance(sub, GridWorkload):
        model = from_number_partitioning(sub)
    else:
        model = from_graph_partitioning(sub, gamma)
    sampleset = sample_model(model, solver, node_seed, reads=reads, sweeps=sweeps,
                             anneal=anneal, sqa=sqa)
    return list(sampleset.by_energy()), sampleset


def recursive_bipartition_detailed(
    w: Workload, parts: int, solver: str = "sqa", *, gamma: float = 1.0,
    master_seed: int = 0, reads: int | None = None, sweeps: int | None = None,
    anneal: AnnealParams | None = None, sqa: SqaParams | None = None,
) -> tuple[PartitionResult, SampleSet | None]:
    """recursive_bipartition plus the root node's raw sample set."""
    if not _is_power_of_two(parts) or parts < 2:
        raise ValidationError(f"parts: must be a power of two >= 2, got {parts}")
    if parts > w.num_items:
        raise ValidationError(f"parts: {parts} exceeds the {w.num_items} items available")
    if solver in GRAPH_ONLY_SOLVERS and not isinstance(w, GraphWorkload):
        raise ValidationError(f"solver: {solver!r} requires a graph workload")
    if solver not in MODEL_SOLVERS and solver not in GRAPH_ONLY_SOLVERS:
        raise ValidationError(f"solver: unknown bipartition solver {solver!r}")

    n = w.num_items
    assignment = [0] * n
    trace: list[TraceEntry] = []
    cut_total = 0.0
    root_samples: SampleSet | None = None

    def recurse(items: tuple[int, ...], sub: Workload, nparts: int,
                path: tuple[int, ...], part_base: int) -> None:
        nonlocal cut_total, root_samples
        if nparts == 1:
            for item in items:
                assignment[item] = part_base
            return
        node_key = 1
        for bit in path:
            node_key = node_key * 2 + bit
        node_seed = derive_seed(master_seed, node_key)
        candidates, sampleset = _candidate_splits(
            sub, solver, gamma, node_seed, reads, sweeps, anneal, sqa)
        if not path and sampleset is not None:
            root_samples = sampleset

        # A side must be able to host its share of parts.
        min_side = nparts // 2
        chosen = None
        chosen_solver = solver
        for candidate in candidates:
            plus, minus = assignment_from_spins(candidate.spins)
            if len(plus) >= min_side and len(minus) >= min_side:
                chosen = (plus, minus, candidate.energy)
                break
        if chosen is None:
            plus, minus = _round_robin_split(tuple(range(len(items))))
            spins = [1 if k % 2 == 0 else -1 for k in range(len(items))]
            if isinstance(sub, GridWorkload):
                model = from_number_partitioning(sub)
            else:
                model = from_graph_partitioning(sub, gamma)
            energy = float(batch_energies(model, [spins])[0])
            chosen = (plus, minus, energy)
            chosen_solver = "rr"
        plus, minus, best_energy = chosen

        weights = _weights_of(sub)
        load_plus = sum(weights[k] for k in plus)
        load_minus = sum(weights[k] for k in minus)
        trace.append(TraceEntry(
            path=path,
            items=items,
            solver=chosen_solver,
            best_energy=float(best_energy),
            side_loads=(load_plus, load_minus),
        ))

        if isinstance(sub, GraphWorkload):
            inside_plus = set(plus)
            inside_minus = set(minus)
            for u, v, ew in sub.edges:
                if (u in inside_plus) != (v in inside_plus):
                    cut_total += ew
            sub_plus, _ = induced_subproblem(sub, plus)
            sub_minus, _ = induced_subproblem(sub, minus)
        else:
            sub_plus = GridWorkload(tuple(sub.weights[k] for k in plus))
            sub_minus = GridWorkload(tuple(sub.weights[k] for k in minus))
        items_plus = tuple(items[k] for k in plus)
        items_minus = tuple(items[k] for k in minus)
        recurse(items_plus, sub_plus, nparts // 2, path + (0,), part_base)
        recurse(items_minus, sub_minus, nparts // 2, path + (1,), part_base + nparts // 2)

    recurse(tuple(range(n)), w, parts, (), 0)

    weights = _weights_of(w)
    # Grid loads stay exact integers; graph loads are float sums.
    zero: float | int = 0 if isinstance(w, GridWorkload) else 0.0
    loads = [zero] * parts
    for item, part in enumerate(assignment):
        loads[part] += weights[item]
    part_loads = tuple(loads)
    result = PartitionResult(
        parts=parts,
        assignment=tuple(assignment),
        part_loads=part_loads,
        cut_weight=cut_total,
        trace=tuple(trace),
    )
    return result, root_samples


def recursive_bipartition(w: Workload, parts: int, solver: str = "sqa", *,
                          gamma: float = 1.0, master_seed: int = 0,
                          reads: int | None = None, sweeps: int | None = None,
                          anneal: AnnealParams | None = None,
                          sqa: SqaParams | None = None) -> PartitionResult:
    """Partition a workload into parts (a power of two) by recursive splits."""
    result, _ = recursive_bipartition_detailed(
        w, parts, solver, gamma=gamma, master_seed=master_seed,
        reads=reads, sweeps=sweeps, anneal=anneal, sqa=sqa)
    return result
