"""Orchestration shared by the CLI and the experiment-level tests.

Everything here composes the lower modules; no new math. Functions
return plain data so the CLI layer only handles files and figures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .ising import IsingModel, from_graph_partitioning, from_number_partitioning, graph_objectives
from .metrics import ObjectivePoint, imbalance, pareto_front, range_metric, solution_disparity, spin_disparity
from .partition import PartitionResult, TraceEntry, recursive_bipartition_detailed
from .rng import derive_seed
from .samplers import AnnealParams, SampleSet, SqaParams, round_robin, sample_model
from .workload import GraphWorkload, GridWorkload, Workload


def build_model(w: Workload, gamma: float = 1.0) -> IsingModel:
    """Formulate the bipartition model for either workload kind."""
    if isinstance(w, GridWorkload):
        return from_number_partitioning(w)
    return from_graph_partitioning(w, gamma)


def workload_weights(w: Workload) -> Sequence[float]:
    return w.weights if isinstance(w, GridWorkload) else w.node_weights


def bipartition_disparity_fn(w: Workload) -> Callable[[Sequence[int]], float]:
    """Disparity of a spin-encoded split of this workload."""
    weights = workload_weights(w)
    return lambda spins: spin_disparity(weights, spins)


def cut_weight_of_assignment(w: Workload, assignment: Sequence[int]) -> float:
    if isinstance(w, GridWorkload):
        return 0.0
    return float(sum(ew for (u, v, ew) in w.edges if assignment[u] != assignment[v]))


@dataclass(frozen=True)
class SolveOutcome:
    result: PartitionResult
    root_samples: SampleSet | None


def solve_workload(w: Workload, solver: str, parts: int, *, gamma: float = 1.0,
                   master_seed: int = 0, reads: int | None = None,
                   sweeps: int | None = None, anneal: AnnealParams | None = None,
                   sqa: SqaParams | None = None) -> SolveOutcome:
    """Produce a parts-way assignment with the chosen solver.

    Round robin assigns directly (it is the no-optimization baseline);
    every other solver goes through recursive bipartitioning.
    """
    if solver == "rr":
        assignment = tuple(round_robin(w, parts))
        weights = workload_weights(w)
        zero: float | int = 0 if isinstance(w, GridWorkload) else 0.0
        loads = [zero] * parts
        for item, part in enumerate(assignment):
            loads[part] += weights[item]
        result = PartitionResult(
            parts=parts,
            assignment=assignment,
            part_loads=tuple(loads),
            cut_weight=cut_weight_of_assignment(w, assignment),
            trace=(),
        )
        return SolveOutcome(result=result, root_samples=None)
    result, root_samples = recursive_bipartition_detailed(
        w, parts, solver, gamma=gamma, master_seed=master_seed,
        reads=reads, sweeps=sweeps, anneal=anneal, sqa=sqa)
    return SolveOutcome(result=result, root_samples=root_samples)


def metric_rows(run_id: str, w: Workload, result: PartitionResult) -> list[tuple[str, str, str, float]]:
    """Long-form metric rows (run_id, metric, index, value) for CSV export."""
    rows: list[tuple[str, str, str, float]] = []
    for part, value in enumerate(imbalance(result.part_loads)):
        rows.append((run_id, "imbalance_pct", str(part), value))
    rows.append((run_id, "range", "", float(range_metric(result.part_loads))))
    for entry in result.trace:
        w1, w2 = entry.side_loads
        path = "/".join(str(b) for b in entry.path) or "root"
        rows.append((run_id, "split_disparity", path, solution_disparity(w1, w2)))
    rows.append((run_id, "cut_weight", "", float(result.cut_weight)))
    return rows


def gamma_sweep(g: GraphWorkload, gammas: Sequence[float], solver: str = "sqa", *,
                master_seed: int = 0, reads: int | None = None,
                sweeps: int | None = None, anneal: AnnealParams | None = None,
                sqa: SqaParams | None = None) -> list[ObjectivePoint]:
    """Sample the balance/cut trade-off across Lagrange multiplier values.

    Every read of every gamma becomes one objective point; extract the
    front with metrics.pareto_front.
    """
    if len(gammas) == 0:
        raise ValidationError("gammas: must be non-empty")
    total = g.total
    points: list[ObjectivePoint] = []
    for step, gamma in enumerate(gammas):
        model = from_graph_partitioning(g, float(gamma))
        sampleset = sample_model(model, solver, derive_seed(master_seed, step),
                                 reads=reads, sweeps=sweeps, anneal=anneal, sqa=sqa)
        for sample in sampleset.samples:
            mismatch, cut = graph_objectives(g, sample.spins)
            points.append(ObjectivePoint(
                disparity=mismatch / (0.5 * total),
                cut_weight=cut,
                source=f"{solver}:g{step}:r{sample.read_index}",
                gamma=float(gamma),
            ))
    return points


def gamma_grid(gamma_min: float, gamma_max: float, steps: int) -> list[float]:
    """Evenly spaced gamma values, inclusive of both endpoints."""
    if steps < 1:
        raise ValidationError(f"steps: must be >= 1, got {steps}")
    if gamma_min < 0 or gamma_max < gamma_min:
        raise ValidationError(
            f"gamma: need 0 <= gamma_min <= gamma_max, got ({gamma_min}, {gamma_max})"
        )
    if steps == 1:
        return [float(gamma_min)]
    return [float(x) for x in np.linspace(gamma_min, gamma_max, steps)]


def reference_point(w: Workload, assignment: Sequence[int], source: str = "reference") -> ObjectivePoint:
    """Objective point of an externally produced bipartition assignment."""
    if len(assignment) != w.num_items:
        raise ValidationError(
            f"assignment: length {len(assignment)} does not match {w.num_items} items"
        )
    for k, part in enumerate(assignment):
        if part not in (0, 1):
            raise ValidationError(f"assignment[{k}]: bipartition parts must be 0 or 1, got {part!r}")
    spins = [1 if part == 0 else -1 for part in assignment]
    weights = workload_weights(w)
    disparity = spin_disparity(weights, spins)
    cut = cut_weight_of_assignment(w, list(assignment))
    return ObjectivePoint(disparity=disparity, cut_weight=cut, source=source)
