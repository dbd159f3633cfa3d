"""Ising models and the two load-balancing formulations.

A model is energy(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j
over spins s_i in {-1, +1}. Couplings are stored sparsely with i < j.
QUBO conversion is deliberately absent: samplers consume spin models
directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .workload import GraphWorkload, GridWorkload

Number = int | float
SpinVector = Sequence[int]


@dataclass(frozen=True)
class IsingModel:
    """Immutable spin model. Treat h and J as read-only after construction."""

    num_vars: int
    h: dict[int, Number] = field(default_factory=dict)
    J: dict[tuple[int, int], Number] = field(default_factory=dict)
    offset: Number = 0
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.num_vars < 1:
            raise ValidationError(f"num_vars: must be >= 1, got {self.num_vars}")
        for i, value in self.h.items():
            if not 0 <= i < self.num_vars:
                raise ValidationError(f"h[{i}]: index out of range for {self.num_vars} variables")
            if not math.isfinite(value):
                raise ValidationError(f"h[{i}]: coefficient must be finite, got {value!r}")
        for key, value in self.J.items():
            i, j = key
            if not (0 <= i < self.num_vars and 0 <= j < self.num_vars):
                raise ValidationError(f"J[{key}]: index out of range for {self.num_vars} variables")
            if not i < j:
                raise ValidationError(f"J[{key}]: keys must satisfy i < j")
            if not math.isfinite(value):
                raise ValidationError(f"J[{key}]: coefficient must be finite, got {value!r}")
        if not math.isfinite(self.offset):
            raise ValidationError(f"offset: must be finite, got {self.offset!r}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValidationError(f"scale: must be positive and finite, got {self.scale!r}")

    def max_coefficient(self) -> Number:
        """Largest |h| or |J| magnitude; 0 for an all-zero model."""
        mags = [abs(v) for v in self.h.values()] + [abs(v) for v in self.J.values()]
        return max(mags, default=0)


def _check_spins(m: IsingModel, spins: SpinVector) -> None:
    if len(spins) != m.num_vars:
        raise ValidationError(
            f"spins: length {len(spins)} does not match num_vars {m.num_vars}"
        )
    for i, s in enumerate(spins):
        if s != 1 and s != -1:
            raise ValidationError(f"spins[{i}]: must be +1 or -1, got {s!r}")


def energy(m: IsingModel, spins: SpinVector) -> Number:
    """Evaluate the model at a spin vector.

    Pure Python arithmetic: integer models evaluated at integer spins give
    exact integer energies.
    """
    _check_spins(m, spins)
    total = m.offset
    for i, hv in m.h.items():
        total += hv * spins[i]
    for (i, j), jv in m.J.items():
        total += jv * spins[i] * spins[j]
    return total


def from_number_partitioning(weights: Sequence[int] | GridWorkload) -> IsingModel:
    """Two-way balance of integer costs as (sum_i n_i s_i)^2, expanded.

    The square expands to sum_i n_i^2 + 2 sum_{i<j} n_i n_j s_i s_j, so
    h = 0, J_ij = 2 n_i n_j, offset = sum n_i^2, all exact integers.
    A perfectly balanced split has energy exactly 0.
    """
    if isinstance(weights, GridWorkload):
        weights = weights.weights
    wl = GridWorkload(tuple(weights))  # reuse its validation
    n = wl.num_items
    J: dict[tuple[int, int], Number] = {}
    for i in range(n):
        for j in range(i + 1, n):
            J[(i, j)] = 2 * wl.weights[i] * wl.weights[j]
    offset = sum(w * w for w in wl.weights)
    return IsingModel(num_vars=n, h={}, J=J, offset=offset, scale=1.0)


def from_graph_partitioning(g: GraphWorkload, gamma: float) -> IsingModel:
    """Balance-plus-cut objective gamma*(sum w_i s_i)^2 + sum_cut e_uv.

    The cut term for edge (u,v) is e_uv (1 - s_u s_v)/2. Expanding both
    terms: J_uv = 2*gamma*w_u*w_v - e_uv/2 on edges, 2*gamma*w_u*w_v on
    non-edges, offset = gamma*sum w_i^2 + sum_E e_uv/2, h = 0. Non-edge
    couplers are only materialized when gamma > 0 leaves them nonzero.
    """
    gamma = float(gamma)
    if not (math.isfinite(gamma) and gamma >= 0.0):
        raise ValidationError(f"gamma: must be >= 0 and finite, got {gamma!r}")
    n = g.num_items
    w = g.node_weights
    edge_weight = {(u, v): ew for (u, v, ew) in g.edges}
    J: dict[tuple[int, int], Number] = {}
    if gamma > 0.0:
        for i in range(n):
            for j in range(i + 1, n):
                J[(i, j)] = 2.0 * gamma * w[i] * w[j] - 0.5 * edge_weight.get((i, j), 0.0)
    else:
        for (u, v), ew in edge_weight.items():
            J[(u, v)] = -0.5 * ew
    offset = gamma * sum(wi * wi for wi in w) + 0.5 * sum(ew for _, _, ew in g.edges)
    return IsingModel(num_vars=n, h={}, J=J, offset=offset, scale=1.0)


def normalize(m: IsingModel) -> IsingModel:
    """Rescale so the largest |h| or |J| is 1.0; records the factor in scale.

    Energy ordering is preserved (positive rescale plus shifted offset).
    Normalizing an already-normalized model is the identity with scale 1.0.
    """
    f = m.max_coefficient()
    if f == 0:
        raise ValidationError("model: cannot normalize an all-zero model")
    f = float(f)
    return IsingModel(
        num_vars=m.num_vars,
        h={i: v / f for i, v in m.h.items()},
        J={k: v / f for k, v in m.J.items()},
        offset=m.offset / f,
        scale=f,
    )


def graph_objectives(g: GraphWorkload, spins: SpinVector) -> tuple[float, float]:
    """Raw objectives of a graph bipartition: (|weight mismatch|, cut weight)."""
    if len(spins) != g.num_items:
        raise ValidationError(
            f"spins: length {len(spins)} does not match graph with {g.num_items} nodes"
        )
    mismatch = abs(sum(w * s for w, s in zip(g.node_weights, spins)))
    cut = sum(ew for (u, v, ew) in g.edges if spins[u] != spins[v])
    return float(mismatch), float(cut)


def dense_arrays(m: IsingModel) -> tuple[np.ndarray, np.ndarray]:
    """Dense (h vector, symmetric J matrix) view for numeric kernels."""
    h = np.zeros(m.num_vars, dtype=np.float64)
    for i, v in m.h.items():
        h[i] = v
    J = np.zeros((m.num_vars, m.num_vars), dtype=np.float64)
    for (i, j), v in m.J.items():
        J[i, j] = v
        J[j, i] = v
    return h, J


def batch_energies(m: IsingModel, spins_matrix: np.ndarray) -> np.ndarray:
    """Energies of many spin vectors at once (rows of spins_matrix)."""
    s = np.asarray(spins_matrix, dtype=np.float64)
    if s.ndim == 1:
        s = s[None, :]
    h, J = dense_arrays(m)
    pair = 0.5 * np.einsum("ri,ri->r", s @ J, s)
    return m.offset + s @ h + pair


def format_model(m: IsingModel) -> str:
    """Plain-text model dump: num_vars, offset, scale, then h and J entries."""
    lines = [
        f"num_vars {m.num_vars}",
        f"offset {m.offset!r}",
        f"scale {m.scale!r}",
    ]
    for i in sorted(m.h):
        if m.h[i] != 0:
            lines.append(f"h {i} {m.h[i]!r}")
    for (i, j) in sorted(m.J):
        if m.J[(i, j)] != 0:
            lines.append(f"J {i} {j} {m.J[(i, j)]!r}")
    return "\n".join(lines) + "\n"
