"""Quality metrics and Pareto machinery for partition solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError
from .samplers import SampleSet
from .workload import GraphWorkload, GridWorkload


@dataclass(frozen=True)
class ObjectivePoint:
    """One solution in (disparity, cut weight) objective space."""

    disparity: float
    cut_weight: float
    source: str = ""
    gamma: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.disparity) and self.disparity >= 0):
            raise ValidationError(f"disparity: must be >= 0 and finite, got {self.disparity!r}")
        if not (math.isfinite(self.cut_weight) and self.cut_weight >= 0):
            raise ValidationError(f"cut_weight: must be >= 0 and finite, got {self.cut_weight!r}")


def imbalance(loads: Sequence[float]) -> list[float]:
    """Per-processor deviation from the ideal share, as percent of total work.

    imbalance_i = |load_i - total/N| / total * 100.
    """
    if not loads:
        raise ValidationError("loads: must be non-empty")
    total = sum(loads)
    if total <= 0:
        raise ValidationError(f"loads: total must be positive, got {total}")
    n = len(loads)
    ideal = total / n
    return [abs(load - ideal) / total * 100.0 for load in loads]


def range_metric(loads: Sequence[float]) -> float:
    """Spread between the heaviest and lightest processor."""
    if not loads:
        raise ValidationError("loads: must be non-empty")
    return max(loads) - min(loads)


def solution_disparity(w1: float, w2: float) -> float:
    """Relative mismatch of a two-way split: |w1 - w2| / mean(w1, w2).

    0 is a perfect split; 2 means one side holds everything.
    """
    if w1 < 0 or w2 < 0:
        raise ValidationError(f"loads: must be >= 0, got ({w1}, {w2})")
    total = w1 + w2
    if total <= 0:
        raise ValidationError("loads: at least one side must be positive")
    return abs(w1 - w2) / (0.5 * total)


def spin_disparity(weights: Sequence[float], spins: Sequence[int]) -> float:
    """Disparity of the bipartition encoded by a spin vector."""
    if len(weights) != len(spins):
        raise ValidationError(
            f"spins: length {len(spins)} does not match {len(weights)} weights"
        )
    w1 = sum(w for w, s in zip(weights, spins) if s > 0)
    w2 = sum(w for w, s in zip(weights, spins) if s <= 0)
    return solution_disparity(w1, w2)


def _workload_weights(w: GridWorkload | GraphWorkload) -> Sequence[float]:
    return w.weights if isinstance(w, GridWorkload) else w.node_weights


def success_rate(samples: SampleSet, baseline_disparity: float,
                 w: GridWorkload | GraphWorkload) -> float:
    """Fraction of samples whose disparity strictly beats the baseline."""
    if not samples.samples:
        raise ValidationError("samples: must be non-empty")
    weights = _workload_weights(w)
    wins = sum(
        1 for s in samples.samples
        if spin_disparity(weights, s.spins) < baseline_disparity
    )
    return wins / len(samples.samples)


def _dominates(a: ObjectivePoint, b: ObjectivePoint) -> bool:
    # Weak dominance with at least one strict inequality.
    return (
        a.disparity <= b.disparity
        and a.cut_weight <= b.cut_weight
        and (a.disparity < b.disparity or a.cut_weight < b.cut_weight)
    )


def pareto_front(points: Sequence[ObjectivePoint]) -> list[ObjectivePoint]:
    """Non-dominated subset, sorted by disparity ascending.

    Points with identical (disparity, cut_weight) collapse to their first
    occurrence.
    """
    seen: set[tuple[float, float]] = set()
    unique: list[ObjectivePoint] = []
    for p in points:
        key = (p.disparity, p.cut_weight)
        if key not in seen:
            seen.add(key)
            unique.append(p)
    unique.sort(key=lambda p: (p.disparity, p.cut_weight))
    front: list[ObjectivePoint] = []
    best_cut = math.inf
    group_disparity: float | None = None
    for p in unique:
        if group_disparity is not None and p.disparity == group_disparity:
            continue  # same disparity, larger cut: dominated
        if p.cut_weight < best_cut:
            front.append(p)
            best_cut = p.cut_weight
        group_disparity = p.disparity
    return front


def dominance_fraction(points: Sequence[ObjectivePoint], reference: ObjectivePoint) -> float:
    """Fraction of points that dominate the reference solution."""
    if not points:
        raise ValidationError("points: must be non-empty")
    return sum(1 for p in points if _dominates(p, reference)) / len(points)


def performance_ratio(baseline: ObjectivePoint, candidate: ObjectivePoint) -> tuple[float, float]:
    """Per-objective improvement factors baseline/candidate.

    A zero candidate component with a nonzero baseline is reported as
    inf; two zeros count as parity (1.0).
    """

    def ratio(b: float, c: float) -> float:
        if c == 0:
            return 1.0 if b == 0 else math.inf
        return b / c

    return ratio(baseline.disparity, candidate.disparity), ratio(baseline.cut_weight, candidate.cut_weight)
