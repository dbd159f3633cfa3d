"""spinbalance: Ising-model load balancing toolkit.

Formulates work-distribution problems (mesh patch assignment, cell-graph
partitioning) as spin models, solves them with annealing-style samplers,
and scores the results with imbalance, disparity, and Pareto metrics.
"""

from .embedding import (
    ChainStats,
    EmbeddedModel,
    Embedding,
    apply_embedding,
    chain_experiment,
    embed_uniform_chains,
    unembed,
    utc_chain_strength,
)
from .errors import ParseError, SolverError, SpinbalanceError, ValidationError
from .ising import (
    IsingModel,
    energy,
    from_graph_partitioning,
    from_number_partitioning,
    graph_objectives,
    normalize,
)
from .metrics import (
    ObjectivePoint,
    dominance_fraction,
    imbalance,
    pareto_front,
    performance_ratio,
    range_metric,
    solution_disparity,
    spin_disparity,
    success_rate,
)
from .partition import (
    PartitionResult,
    TraceEntry,
    assignment_from_spins,
    induced_subproblem,
    recursive_bipartition,
)
from .pipeline import (
    SolveOutcome,
    build_model,
    gamma_grid,
    gamma_sweep,
    reference_point,
    solve_workload,
)
from .rng import stream
from .samplers import (
    AnnealParams,
    Sample,
    SampleSet,
    SqaParams,
    brute_force,
    kernighan_lin,
    round_robin,
    simulated_annealing,
    simulated_quantum_annealing,
    steepest_descent,
)
from .workload import (
    GraphWorkload,
    GridWorkload,
    WorkloadFile,
    generate_blastwave_grids,
    generate_cosmo_clique,
    load_workload,
    save_workload,
)

__version__ = "0.1.0"
