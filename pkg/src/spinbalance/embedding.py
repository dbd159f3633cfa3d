"""Uniform chain embedding onto hardware-style graphs, and its inverse.

A logical variable i is represented by a chain of chain_length physical
spins held together by a ferromagnetic coupling -c. This module embeds,
picks c, recovers logical samples by majority vote, and runs the
chain-strength sensitivity experiment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .ising import IsingModel, batch_energies
from .rng import derive_seed, stream
from .samplers import AnnealParams, Sample, SampleSet, SqaParams, sample_model

CHAIN_EXPERIMENT_REPETITIONS = 5
DEFAULT_UTC_PREFACTOR = math.sqrt(2.0)


@dataclass(frozen=True)
class Embedding:
    chains: tuple[tuple[int, ...], ...]
    chain_length: int

    @property
    def num_logical(self) -> int:
        return len(self.chains)

    @property
    def num_physical(self) -> int:
        return len(self.chains) * self.chain_length


@dataclass(frozen=True)
class EmbeddedModel:
    physical: IsingModel
    embedding: Embedding
    chain_strength: float


@dataclass(frozen=True)
class ChainStats:
    """Bookkeeping from unembedding one sample set."""

    chain_break_fraction: float
    per_read_breaks: tuple[int, ...]
    num_chains: int
    num_reads: int


def embed_uniform_chains(m: IsingModel, chain_length: int) -> Embedding:
    """Assign logical variable i the physical block [i*L, (i+1)*L)."""
    if chain_length < 1:
        raise ValidationError(f"chain_length: must be >= 1, got {chain_length}")
    chains = tuple(
        tuple(range(i * chain_length, (i + 1) * chain_length))
        for i in range(m.num_vars)
    )
    return Embedding(chains=chains, chain_length=chain_length)


def utc_chain_strength(m: IsingModel, prefactor: float = DEFAULT_UTC_PREFACTOR) -> float:
    """Uniform torque compensation estimate of the chain strength.

    prefactor * rms(J) * sqrt(mean coupling degree). Scales with problem
    stiffness rather than the worst-case coefficient.
    """
    if not (math.isfinite(prefactor) and prefactor > 0):
        raise ValidationError(f"prefactor: must be > 0, got {prefactor!r}")
    if not m.J:
        raise ValidationError("model: no couplings, chain strength is undefined")
    values = np.array(list(m.J.values()), dtype=np.float64)
    rms = float(np.sqrt(np.mean(values * values)))
    degree = np.zeros(m.num_vars, dtype=np.int64)
    for i, j in m.J:
        degree[i] += 1
        degree[j] += 1
    mean_degree = float(degree.mean())
    return prefactor * rms * math.sqrt(mean_degree)


def apply_embedding(m: IsingModel, e: Embedding, chain_strength: float) -> EmbeddedModel:
    """Build the physical model for a logical model under an embedding.

    Logical fields are split equally across chain members. Each logical
    coupling lands on a single physical edge, with endpoints rotated
    round-robin through the chain members so no member carries all of a
    chain's couplings. Chain members are tied in a path by couplings of
    -chain_strength. chain_length 1 reproduces the logical model exactly.
    """
    if e.num_logical != m.num_vars:
        raise ValidationError(
            f"embedding: has {e.num_logical} chains for a model with {m.num_vars} variables"
        )
    if not (math.isfinite(chain_strength) and chain_strength > 0):
        raise ValidationError(f"chain_strength: must be > 0, got {chain_strength!r}")
    L = e.chain_length
    if L == 1:
        physical = IsingModel(
            num_vars=m.num_vars, h=dict(m.h), J=dict(m.J),
            offset=m.offset, scale=m.scale,
        )
        return EmbeddedModel(physical=physical, embedding=e, chain_strength=chain_strength)

    h_phys: dict[int, float] = {}
    for i, v in m.h.items():
        for p in e.chains[i]:
            h_phys[p] = v / L
    J_phys: dict[tuple[int, int], float] = {}
    counters = [0] * e.num_logical
    for (i, j) in sorted(m.J):
        a = e.chains[i][counters[i] % L]
        b = e.chains[j][counters[j] % L]
        counters[i] += 1
        counters[j] += 1
        key = (a, b) if a < b else (b, a)
        J_phys[key] = m.J[(i, j)]
    for chain in e.chains:
        for t in range(L - 1):
            J_phys[(chain[t], chain[t + 1])] = -chain_strength
    physical = IsingModel(
        num_vars=e.num_physical, h=h_phys, J=J_phys,
        offset=m.offset, scale=m.scale,
    )
    return EmbeddedModel(physical=physical, embedding=e, chain_strength=chain_strength)


def unembed(samples: SampleSet, e: Embedding, logical: IsingModel,
            master_seed: int = 0) -> tuple[SampleSet, ChainStats]:
    """Collapse physical samples back to logical ones by chain majority vote.

    A chain that is not unanimous counts as broken; its logical value is
    the majority sign, with exact ties drawn from the
    (master_seed, read_index, chain_index) stream. Energies are
    re-evaluated against the logical model.
    """
    if e.num_logical != logical.num_vars:
        raise ValidationError(
            f"embedding: has {e.num_logical} chains for a model with {logical.num_vars} variables"
        )
    num_reads = len(samples.samples)
    logical_spins = np.empty((num_reads, e.num_logical), dtype=np.int8)
    per_read_breaks = []
    for row, sample in enumerate(samples.samples):
        if len(sample.spins) != e.num_physical:
            raise ValidationError(
                f"samples[{row}]: has {len(sample.spins)} spins, embedding needs {e.num_physical}"
            )
        breaks = 0
        for ci, chain in enumerate(e.chains):
            tot = sum(sample.spins[p] for p in chain)
            if abs(tot) == len(chain):
                value = sample.spins[chain[0]]
            else:
                breaks += 1
                if tot != 0:
                    value = 1 if tot > 0 else -1
                else:
                    tie_rng = stream(master_seed, sample.read_index, ci)
                    value = 1 if tie_rng.integers(0, 2) == 1 else -1
            logical_spins[row, ci] = value
        per_read_breaks.append(breaks)

    energies = batch_energies(logical, logical_spins)
    out = tuple(
        Sample(
            spins=tuple(int(x) for x in logical_spins[row]),
            energy=float(energies[row]),
            read_index=samples.samples[row].read_index,
        )
        for row in range(num_reads)
    )
    stats = ChainStats(
        chain_break_fraction=float(sum(per_read_breaks)) / (e.num_logical * max(num_reads, 1)),
        per_read_breaks=tuple(per_read_breaks),
        num_chains=e.num_logical,
        num_reads=num_reads,
    )
    unembedded = SampleSet(
        samples=out,
        sampler_name=samples.sampler_name,
        params=dict(samples.params),
        master_seed=samples.master_seed,
        diagnostics=dict(samples.diagnostics),
    )
    return unembedded, stats


@dataclass(frozen=True)
class ChainExperimentRow:
    multiplier: float
    repetition: int
    chain_break_fraction: float
    best_disparity: float
    best_energy: float


def chain_experiment(m: IsingModel, chain_length: int, multipliers: Sequence[float],
                     disparity_fn: Callable[[Sequence[int]], float],
                     solver: str = "sa", master_seed: int = 0,
                     reads: int | None = None, sweeps: int | None = None,
                     anneal: AnnealParams | None = None,
                     sqa: SqaParams | None = None) -> list[ChainExperimentRow]:
    """Chain-strength sensitivity study.

    For each multiplier, the chain strength is multiplier * max
    |coefficient| of the logical model. Each (multiplier, repetition)
    cell embeds, samples the physical model, majority-votes back, and
    records the chain break fraction plus the disparity and energy of
    the best returned solution. Repetitions reuse the same five derived
    seeds across multipliers so columns are comparable.
    """
    if not multipliers:
        raise ValidationError("multipliers: must be non-empty")
    max_coeff = m.max_coefficient()
    if max_coeff == 0:
        raise ValidationError("model: all-zero model has no chain strength reference")
    emb = embed_uniform_chains(m, chain_length)
    rows: list[ChainExperimentRow] = []
    for mult in multipliers:
        mult = float(mult)
        if not (math.isfinite(mult) and mult > 0):
            raise ValidationError(f"multipliers: entries must be > 0, got {mult!r}")
        strength = mult * float(max_coeff)
        em = apply_embedding(m, emb, strength)
        for rep in range(CHAIN_EXPERIMENT_REPETITIONS):
            sampler_seed = derive_seed(master_seed, rep)
            physical_set = sample_model(
                em.physical, solver, sampler_seed,
                reads=reads, sweeps=sweeps, anneal=anneal, sqa=sqa,
            )
            logical_set, stats = unembed(physical_set, emb, m, derive_seed(master_seed, rep, 1))
            best = logical_set.best()
            rows.append(ChainExperimentRow(
                multiplier=mult,
                repetition=rep,
                chain_break_fraction=stats.chain_break_fraction,
                best_disparity=float(disparity_fn(best.spins)),
                best_energy=best.energy,
            ))
    return rows
