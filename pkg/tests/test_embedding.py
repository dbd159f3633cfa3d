import math

import numpy as np
import pytest

from spinbalance.embedding import (
    CHAIN_EXPERIMENT_REPETITIONS,
    ChainStats,
    Embedding,
    apply_embedding,
    chain_experiment,
    embed_uniform_chains,
    unembed,
    utc_chain_strength,
)
from spinbalance.errors import ValidationError
from spinbalance.ising import IsingModel, energy, from_number_partitioning
from spinbalance.metrics import spin_disparity
from spinbalance.rng import stream
from spinbalance.samplers import Sample, SampleSet, simulated_annealing, AnnealParams
from spinbalance.workload import generate_blastwave_grids


def complete3(j: float) -> IsingModel:
    return IsingModel(num_vars=3, h={}, J={(0, 1): j, (0, 2): j, (1, 2): j}, offset=0.0)


def test_uniform_chains_layout():
    m = from_number_partitioning([1, 2, 3])
    e = embed_uniform_chains(m, 2)
    assert e.chains == ((0, 1), (2, 3), (4, 5))
    assert e.num_logical == 3
    assert e.num_physical == 6


def test_chain_length_one_is_identity_layout():
    m = from_number_partitioning([1, 2, 3])
    e = embed_uniform_chains(m, 1)
    assert e.chains == ((0,), (1,), (2,))


def test_chains_are_disjoint():
    for n, length in ((1, 1), (3, 2), (5, 4), (8, 3)):
        m = from_number_partitioning(list(range(1, n + 1)))
        e = embed_uniform_chains(m, length)
        seen: set[int] = set()
        for chain in e.chains:
            assert len(chain) == length
            assert not (seen & set(chain))
            seen.update(chain)
        assert seen == set(range(n * length))


def test_utc_chain_strength_examples():
    assert utc_chain_strength(complete3(1.0)) == pytest.approx(2.0)
    assert utc_chain_strength(complete3(0.5)) == pytest.approx(1.0)
    single = IsingModel(num_vars=2, h={}, J={(0, 1): -3.0}, offset=0.0)
    assert utc_chain_strength(single) == pytest.approx(math.sqrt(2) * 3.0)
    with pytest.raises(ValidationError):
        utc_chain_strength(IsingModel(num_vars=2, h={0: 1.0}, J={}, offset=0.0))


def test_apply_embedding_identity_for_unit_chains():
    m = from_number_partitioning([1, 2, 3])
    em = apply_embedding(m, embed_uniform_chains(m, 1), chain_strength=10.0)
    assert em.physical == m


def test_apply_embedding_two_logicals():
    m = IsingModel(num_vars=2, h={0: 2.0}, J={(0, 1): 1.0}, offset=0.5)
    em = apply_embedding(m, embed_uniform_chains(m, 2), chain_strength=10.0)
    p = em.physical
    assert p.num_vars == 4
    # logical field splits equally over the chain
    assert p.h == {0: 1.0, 1: 1.0}
    inter = {k: v for k, v in p.J.items() if v > 0}
    intra = {k: v for k, v in p.J.items() if v < 0}
    assert list(inter.values()) == [1.0]
    assert set(intra) == {(0, 1), (2, 3)}
    assert all(v == -10.0 for v in intra.values())
    assert p.offset == 0.5


def test_apply_embedding_spreads_couplings_round_robin():
    # three couplings at logical 0 cannot all land on the same member
    m = IsingModel(num_vars=4, h={},
                   J={(0, 1): 1.0, (0, 2): 1.0, (0, 3): 1.0}, offset=0.0)
    em = apply_embedding(m, embed_uniform_chains(m, 2), chain_strength=5.0)
    chain0 = {0, 1}
    endpoints = [a if a in chain0 else b
                 for (a, b), v in em.physical.J.items()
                 if v > 0]
    assert set(endpoints) == chain0


def test_unembed_unanimous_chains():
    m = from_number_partitioning([1, 2, 3])
    e = embed_uniform_chains(m, 2)
    physical = SampleSet(
        samples=(Sample((1, 1, 1, 1, -1, -1), 0.0, 0),),
        sampler_name="sa", params={}, master_seed=0,
    )
    logical, stats = unembed(physical, e, m)
    assert logical.samples[0].spins == (1, 1, -1)
    assert logical.samples[0].energy == energy(m, (1, 1, -1))
    assert stats.chain_break_fraction == 0.0
    assert stats.per_read_breaks == (0,)


def test_unembed_majority_vote_counts_breaks():
    m = from_number_partitioning([1, 1, 1])
    e = embed_uniform_chains(m, 3)
    spins = (1, 1, -1,  -1, -1, -1,  1, 1, 1)
    physical = SampleSet((Sample(spins, 0.0, 0),), "sa", {}, 0)
    logical, stats = unembed(physical, e, m)
    assert logical.samples[0].spins == (1, -1, 1)
    assert stats.per_read_breaks == (1,)
    assert stats.chain_break_fraction == pytest.approx(1 / 3)


def test_unembed_tie_break_is_seeded():
    m = from_number_partitioning([1, 1])
    e = embed_uniform_chains(m, 2)
    physical = SampleSet(
        samples=tuple(Sample((1, -1, 1, 1), 0.0, r) for r in range(40)),
        sampler_name="sa", params={}, master_seed=0,
    )
    first, stats = unembed(physical, e, m, master_seed=6)
    again, _ = unembed(physical, e, m, master_seed=6)
    assert first.samples == again.samples
    assert stats.per_read_breaks == (1,) * 40
    values = {s.spins[0] for s in first.samples}
    # a fair tie break lands on both signs across 40 reads
    assert values == {-1, 1}
    other, _ = unembed(physical, e, m, master_seed=7)
    assert other.samples != first.samples


def test_unembed_rejects_wrong_width():
    m = from_number_partitioning([1, 1])
    e = embed_uniform_chains(m, 2)
    bad = SampleSet((Sample((1, 1, 1), 0.0, 0),), "sa", {}, 0)
    with pytest.raises(ValidationError):
        unembed(bad, e, m)


def test_chain_experiment_row_grid():
    w = generate_blastwave_grids(12, 5)
    m = from_number_partitioning(w)
    rows = chain_experiment(
        m, 2, (1.0, 10.0),
        disparity_fn=lambda s: spin_disparity(w.weights, s),
        solver="sa", master_seed=4, reads=10, sweeps=100,
    )
    assert len(rows) == 2 * CHAIN_EXPERIMENT_REPETITIONS
    assert [r.multiplier for r in rows[:CHAIN_EXPERIMENT_REPETITIONS]] == [1.0] * 5
    assert [r.repetition for r in rows[:CHAIN_EXPERIMENT_REPETITIONS]] == [0, 1, 2, 3, 4]
    for r in rows:
        assert 0.0 <= r.chain_break_fraction <= 1.0
        assert r.best_disparity >= 0.0


def test_chain_experiment_unit_length_never_breaks():
    w = generate_blastwave_grids(12, 5)
    m = from_number_partitioning(w)
    rows = chain_experiment(
        m, 1, (0.5, 1.0, 100.0),
        disparity_fn=lambda s: spin_disparity(w.weights, s),
        solver="sa", master_seed=4, reads=10, sweeps=100,
    )
    assert all(r.chain_break_fraction == 0.0 for r in rows)


def test_chain_experiment_unit_length_matches_direct_run():
    """Identity embedding is bit-equivalent to sampling the logical model."""
    w = generate_blastwave_grids(12, 5)
    m = from_number_partitioning(w)
    rows = chain_experiment(
        m, 1, (1.0,),
        disparity_fn=lambda s: spin_disparity(w.weights, s),
        solver="sa", master_seed=4, reads=10, sweeps=100,
    )
    from spinbalance.rng import derive_seed

    for rep, row in enumerate(rows):
        direct = simulated_annealing(
            m, AnnealParams(num_reads=10, num_sweeps=100),
            master_seed=derive_seed(4, rep))
        best = direct.best()
        assert row.best_energy == best.energy
        assert row.best_disparity == pytest.approx(spin_disparity(w.weights, best.spins))


def test_chain_break_fraction_falls_with_multiplier():
    w = generate_blastwave_grids(30, 5)
    m = from_number_partitioning(w)
    rows = chain_experiment(
        m, 2, (0.1, 1.0, 10.0, 100.0),
        disparity_fn=lambda s: spin_disparity(w.weights, s),
        solver="sa", master_seed=4, reads=50,
    )
    means = []
    for mult in (0.1, 1.0, 10.0, 100.0):
        means.append(np.mean([r.chain_break_fraction for r in rows if r.multiplier == mult]))
    # statistical trend: allow sampling noise around zero at the rigid end
    for prev, nxt in zip(means, means[1:]):
        assert nxt <= prev + 5e-3
    assert means[0] > 0.3
    assert means[-1] < 0.01


def test_overstiff_chains_degrade_solution_quality():
    w = generate_blastwave_grids(30, 5)
    m = from_number_partitioning(w)
    rows = chain_experiment(
        m, 2, (1.0, 10.0, 100.0, 1e4),
        disparity_fn=lambda s: spin_disparity(w.weights, s),
        solver="sa", master_seed=4, reads=50,
    )
    mean_disp = {}
    for mult in (1.0, 10.0, 100.0, 1e4):
        mean_disp[mult] = np.mean([r.best_disparity for r in rows if r.multiplier == mult])
    interior_best = min(mean_disp[1.0], mean_disp[10.0], mean_disp[100.0])
    assert mean_disp[1e4] >= interior_best


def test_chain_experiment_validation():
    m = from_number_partitioning([1, 2, 3])
    fn = lambda s: 0.0
    with pytest.raises(ValidationError):
        chain_experiment(m, 2, (), disparity_fn=fn)
    with pytest.raises(ValidationError):
        chain_experiment(m, 2, (0.0,), disparity_fn=fn)
    flat = IsingModel(num_vars=2, h={}, J={}, offset=0.0)
    with pytest.raises(ValidationError):
        chain_experiment(flat, 2, (1.0,), disparity_fn=fn)
