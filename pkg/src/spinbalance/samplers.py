"""Samplers and baselines over Ising models.

All stochastic samplers follow the same contract: read r of a run keyed
by master_seed draws only from the (master_seed, r) stream, so results
are reproducible and independent of read execution order. Returned
sample energies are re-evaluated against the model that was passed in,
not the internally normalized copy.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .errors import ValidationError
from .ising import IsingModel, batch_energies, dense_arrays, from_graph_partitioning, normalize
from .rng import kernel_seed, stream
from .workload import GraphWorkload, GridWorkload


@dataclass(frozen=True)
class Sample:
    spins: tuple[int, ...]
    energy: float
    read_index: int


@dataclass(frozen=True)
class SampleSet:
    samples: tuple[Sample, ...]
    sampler_name: str
    params: dict
    master_seed: int
    diagnostics: dict = field(default_factory=dict)

    def best(self) -> Sample:
        """Lowest-energy sample; ties broken by read index."""
        return min(self.samples, key=lambda s: (s.energy, s.read_index))

    def by_energy(self) -> tuple[Sample, ...]:
        return tuple(sorted(self.samples, key=lambda s: (s.energy, s.read_index)))

    def to_doc(self) -> dict:
        return {
            "sampler": self.sampler_name,
            "master_seed": self.master_seed,
            "params": dict(self.params),
            "diagnostics": dict(self.diagnostics),
            "samples": [
                {"read_index": s.read_index, "energy": s.energy, "spins": list(s.spins)}
                for s in self.samples
            ],
        }


@dataclass(frozen=True)
class AnnealParams:
    """Simulated-annealing knobs; betas interpolate geometrically."""

    num_reads: int = 500
    num_sweeps: int = 1000
    beta_start: float = 0.1
    beta_end: float = 5.0

    def __post_init__(self) -> None:
        if self.num_reads < 1:
            raise ValidationError(f"num_reads: must be >= 1, got {self.num_reads}")
        if self.num_sweeps < 1:
            raise ValidationError(f"num_sweeps: must be >= 1, got {self.num_sweeps}")
        if not (0 < self.beta_start < self.beta_end):
            raise ValidationError(
                f"beta: need 0 < beta_start < beta_end, got ({self.beta_start}, {self.beta_end})"
            )


@dataclass(frozen=True)
class SqaParams:
    """Path-integral annealing knobs."""

    num_reads: int = 500
    num_sweeps: int = 1000
    trotter_slices: int = 20
    temperature: float = 0.05
    schedule: str = "linear"

    def __post_init__(self) -> None:
        if self.num_reads < 1:
            raise ValidationError(f"num_reads: must be >= 1, got {self.num_reads}")
        if self.num_sweeps < 1:
            raise ValidationError(f"num_sweeps: must be >= 1, got {self.num_sweeps}")
        if self.trotter_slices < 2:
            raise ValidationError(f"trotter_slices: must be >= 2, got {self.trotter_slices}")
        if not (math.isfinite(self.temperature) and self.temperature > 0):
            raise ValidationError(f"temperature: must be > 0, got {self.temperature}")
        if self.schedule != "linear":
            raise ValidationError(f"schedule: only 'linear' is supported, got {self.schedule!r}")


def _dynamics_model(m: IsingModel) -> IsingModel:
    # Annealing schedules assume coefficients of order one. A model with no
    # nonzero coefficient is constant, so it is sampled as-is.
    if m.max_coefficient() == 0:
        return m
    return normalize(m)


def _collect(m: IsingModel, spins: np.ndarray, name: str, params: dict,
             master_seed: int, diagnostics: dict | None = None) -> SampleSet:
    energies = batch_energies(m, spins)
    samples = tuple(
        Sample(tuple(int(x) for x in spins[r]), float(energies[r]), r)
        for r in range(spins.shape[0])
    )
    return SampleSet(samples, name, params, master_seed, diagnostics or {})


def round_robin(w: GridWorkload | GraphWorkload, parts: int) -> list[int]:
    """Cyclic assignment in input order: item k goes to part k mod parts.

    Deliberately ignores the weights; this is the weak baseline.
    """
    if parts < 2:
        raise ValidationError(f"parts: must be >= 2, got {parts}")
    return [k % parts for k in range(w.num_items)]


def steepest_descent(m: IsingModel, num_reads: int = 100, master_seed: int = 0) -> SampleSet:
    """Greedy descent from uniform random starts.

    Each read repeatedly flips the single spin with the largest energy
    decrease (ties to the lowest index) and stops at a one-flip local
    minimum.
    """
    if num_reads < 1:
        raise ValidationError(f"num_reads: must be >= 1, got {num_reads}")
    h, J = dense_arrays(m)
    spins = np.empty((num_reads, m.num_vars), dtype=np.int8)
    for r in range(num_reads):
        spins[r] = kernels.sd_read(h, J, kernel_seed(master_seed, r))
    return _collect(m, spins, "sd", {"num_reads": num_reads}, master_seed)


def simulated_annealing(m: IsingModel, params: AnnealParams | None = None,
                        master_seed: int = 0) -> SampleSet:
    """Single-spin-flip Metropolis annealing on the normalized model.

    beta interpolates geometrically from beta_start to beta_end over
    num_sweeps sweeps; acceptance is min(1, exp(-beta dE)). The final
    state of each read is returned with its energy under the original
    model.
    """
    p = params if params is not None else AnnealParams()
    base = _dynamics_model(m)
    h, J = dense_arrays(base)
    betas = np.geomspace(p.beta_start, p.beta_end, p.num_sweeps)
    spins = np.empty((p.num_reads, m.num_vars), dtype=np.int8)
    for r in range(p.num_reads):
        spins[r] = kernels.sa_read(h, J, betas, kernel_seed(master_seed, r))
    return _collect(m, spins, "sa", asdict(p), master_seed)


def simulated_quantum_annealing(m: IsingModel, params: SqaParams | None = None,
                                master_seed: int = 0) -> SampleSet:
    """Path-integral annealing with a transverse-field schedule.

    Runs trotter_slices coupled replicas per read and reads out the
    replica with the lowest problem energy. Diagnostics record, per read,
    the fraction of logical spins whose replicas still disagree at the
    end of the anneal.
    """
    p = params if params is not None else SqaParams()
    base = _dynamics_model(m)
    h, J = dense_arrays(base)
    spins = np.empty((p.num_reads, m.num_vars), dtype=np.int8)
    disagreement = np.empty(p.num_reads, dtype=np.float64)
    for r in range(p.num_reads):
        s, dis = kernels.sqa_read(
            h, J, p.trotter_slices, p.temperature, p.num_sweeps,
            kernel_seed(master_seed, r),
        )
        spins[r] = s
        disagreement[r] = dis
    diagnostics = {
        "replica_disagreement": [float(x) for x in disagreement],
        "mean_replica_disagreement": float(disagreement.mean()),
    }
    return _collect(m, spins, "sqa", asdict(p), master_seed, diagnostics)


_BRUTE_FORCE_LIMIT = 26
_CHUNK = 1 << 18


def brute_force(m: IsingModel) -> SampleSet:
    """Exhaustive enumeration returning every globally optimal state.

    Models with all-zero h have a global spin-flip symmetry, so only the
    half-space with the first spin up is enumerated and each optimum is
    reported together with its mirror.
    """
    n = m.num_vars
    if n > _BRUTE_FORCE_LIMIT:
        raise ValidationError(
            f"num_vars: brute force is capped at {_BRUTE_FORCE_LIMIT} variables, got {n}"
        )
    symmetric = all(v == 0 for v in m.h.values())
    free = n - 1 if symmetric and n > 1 else n
    total = 1 << free
    shifts = np.arange(free, dtype=np.uint64)

    best_e = math.inf
    best_states: list[np.ndarray] = []
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.uint64)
        bits = ((idx[:, None] >> shifts) & 1).astype(np.int8)
        if symmetric and n > 1:
            S = np.empty((len(idx), n), dtype=np.int8)
            S[:, 0] = 1
            S[:, 1:] = 2 * bits - 1
        else:
            S = 2 * bits - 1
        E = batch_energies(m, S)
        cmin = float(E.min())
        if cmin < best_e:
            best_e = cmin
            best_states = []
        if cmin == best_e:
            best_states.extend(S[E == best_e])

    states = [tuple(int(x) for x in s) for s in best_states]
    if symmetric and n > 1:
        states += [tuple(-x for x in s) for s in states]
    samples = tuple(
        Sample(spins=s, energy=best_e, read_index=r) for r, s in enumerate(states)
    )
    return SampleSet(samples, "bf", {"num_vars": n}, 0)


def kernighan_lin(g: GraphWorkload, gamma: float, master_seed: int = 0) -> Sample:
    """Pairwise-swap refinement of a random balanced bipartition.

    Serves as the classical partitioner baseline. The objective is the
    graph-partitioning model energy at the given gamma; swap passes keep
    the side sizes fixed and stop when no prefix of tentative swaps
    improves the energy.
    """
    m = from_graph_partitioning(g, gamma)
    _, J = dense_arrays(m)
    n = g.num_items
    rng = stream(master_seed)
    perm = rng.permutation(n)
    s = np.empty(n, dtype=np.float64)
    half = (n + 1) // 2
    s[perm[:half]] = 1.0
    s[perm[half:]] = -1.0
    f = J @ s  # h is zero for this formulation

    def apply_swap(a: int, b: int) -> None:
        for node in (a, b):
            old = s[node]
            s[node] = -old
            f[:] -= 2.0 * old * J[node]

    improved = True
    while improved:
        improved = False
        locked = np.zeros(n, dtype=bool)
        seq: list[tuple[int, int]] = []
        cums: list[float] = []
        cum = 0.0
        while True:
            plus = [i for i in range(n) if not locked[i] and s[i] > 0]
            minus = [i for i in range(n) if not locked[i] and s[i] < 0]
            if not plus or not minus:
                break
            best_pair = None
            best_dE = math.inf
            for a in plus:
                for b in minus:
                    dE = -2.0 * f[a] + 2.0 * f[b] - 4.0 * J[a, b]
                    if dE < best_dE:
                        best_dE = dE
                        best_pair = (a, b)
            a, b = best_pair
            apply_swap(a, b)
            cum += best_dE
            seq.append((a, b))
            cums.append(cum)
            locked[a] = True
            locked[b] = True
        if not seq:
            break
        k_best = int(np.argmin(cums))
        if cums[k_best] < -1e-12:
            keep = k_best + 1
            improved = True
        else:
            keep = 0
        for a, b in reversed(seq[keep:]):
            apply_swap(a, b)

    spins = tuple(1 if x > 0 else -1 for x in s)
    e = float(batch_energies(m, np.asarray(spins, dtype=np.int8))[0])
    return Sample(spins=spins, energy=e, read_index=0)


def sample_model(m: IsingModel, solver: str, master_seed: int = 0,
                 reads: int | None = None, sweeps: int | None = None,
                 sqa: SqaParams | None = None, anneal: AnnealParams | None = None) -> SampleSet:
    """Dispatch a model-level solver by name: sd, sa, sqa, or bf."""
    if solver == "sd":
        return steepest_descent(m, reads if reads is not None else 100, master_seed)
    if solver == "sa":
        p = anneal if anneal is not None else AnnealParams()
        if reads is not None or sweeps is not None:
            p = AnnealParams(
                num_reads=reads if reads is not None else p.num_reads,
                num_sweeps=sweeps if sweeps is not None else p.num_sweeps,
                beta_start=p.beta_start,
                beta_end=p.beta_end,
            )
        return simulated_annealing(m, p, master_seed)
    if solver == "sqa":
        p = sqa if sqa is not None else SqaParams()
        if reads is not None or sweeps is not None:
            p = SqaParams(
                num_reads=reads if reads is not None else p.num_reads,
                num_sweeps=sweeps if sweeps is not None else p.num_sweeps,
                trotter_slices=p.trotter_slices,
                temperature=p.temperature,
                schedule=p.schedule,
            )
        return simulated_quantum_annealing(m, p, master_seed)
    if solver == "bf":
        return brute_force(m)
    raise ValidationError(f"solver: unknown model solver {solver!r}")
