"""Command line interface.

Subcommands: generate, formulate, solve, sweep-gamma, chain-experiment,
metrics, import-reference. Report-producing commands write delimited
data files and render companion PNG figures under the same prefix.

Exit codes: 0 success, 1 usage, 2 validation/parse, 3 solver failure,
4 I/O. The LB_SEED environment variable overrides --seed everywhere.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import pipeline, reporting
from .embedding import chain_experiment
from .errors import ParseError, SolverError, ValidationError
from .ising import format_model
from .metrics import ObjectivePoint, dominance_fraction, imbalance, pareto_front
from .partition import PartitionResult, TraceEntry
from .samplers import AnnealParams, SqaParams
from .workload import (
    GRAPH_KIND,
    GRID_KIND,
    WorkloadFile,
    generate_blastwave_grids,
    generate_cosmo_clique,
    load_workload,
    save_workload,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_IO = 4

SOLVER_CHOICES = ("rr", "sd", "sa", "sqa", "bf", "kl")
SAMPLER_CHOICES = ("sd", "sa", "sqa")


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; the contract wants 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _effective_seed(args: argparse.Namespace) -> int:
    env = os.environ.get("LB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"LB_SEED: must be an integer, got {env!r}") from None
    return args.seed


def _read_workload(path: str) -> WorkloadFile:
    return load_workload(Path(path).read_bytes())


def _sampler_param_objects(args: argparse.Namespace) -> tuple[AnnealParams, SqaParams]:
    anneal = AnnealParams(
        num_reads=args.reads, num_sweeps=args.sweeps,
        beta_start=args.beta_start, beta_end=args.beta_end,
    )
    sqa = SqaParams(
        num_reads=args.reads, num_sweeps=args.sweeps,
        trotter_slices=args.trotter, temperature=args.temperature,
    )
    return anneal, sqa


def _add_sampler_options(sub: argparse.ArgumentParser, default_reads: int) -> None:
    sub.add_argument("--reads", type=int, default=default_reads,
                     help=f"reads per sampler invocation (default {default_reads})")
    sub.add_argument("--sweeps", type=int, default=1000,
                     help="Monte Carlo sweeps per read (default 1000)")
    sub.add_argument("--trotter", type=int, default=20,
                     help="replica count for sqa (default 20)")
    sub.add_argument("--temperature", type=float, default=0.05,
                     help="sqa Metropolis temperature (default 0.05)")
    sub.add_argument("--beta-start", type=float, default=0.1,
                     help="sa initial inverse temperature (default 0.1)")
    sub.add_argument("--beta-end", type=float, default=5.0,
                     help="sa final inverse temperature (default 5.0)")


def build_parser() -> _Parser:
    parser = _Parser(prog="spinbalance",
                     description="Ising-model load balancing toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("generate", help="write a synthetic workload file")
    gen.add_argument("--kind", choices=("blastwave", "cosmo"), required=True)
    gen.add_argument("--patches", type=int, help="patch count for --kind blastwave")
    gen.add_argument("--side", type=int, help="cells per axis for --kind cosmo")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    form = commands.add_parser("formulate", help="dump the Ising model for a workload")
    form.add_argument("--workload", required=True)
    form.add_argument("--gamma", type=float, default=1.0,
                      help="balance weight for graph workloads (default 1.0)")
    form.add_argument("--out", required=True)

    solve = commands.add_parser("solve", help="partition a workload and report metrics")
    solve.add_argument("--workload", required=True)
    solve.add_argument("--solver", choices=SOLVER_CHOICES, required=True)
    solve.add_argument("--parts", type=int, default=2)
    solve.add_argument("--gamma", type=float, default=1.0)
    solve.add_argument("--seed", type=int, default=0)
    _add_sampler_options(solve, default_reads=500)
    solve.add_argument("--out-prefix", required=True)

    sweep = commands.add_parser("sweep-gamma",
                                help="trace the balance/cut trade-off over gamma")
    sweep.add_argument("--workload", required=True)
    sweep.add_argument("--solver", choices=SAMPLER_CHOICES, default="sqa")
    sweep.add_argument("--gamma-min", type=float, default=0.0)
    sweep.add_argument("--gamma-max", type=float, default=50.0)
    sweep.add_argument("--steps", type=int, default=100)
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--reference",
                       help="objective-point JSON to score dominance against")
    _add_sampler_options(sweep, default_reads=1000)
    sweep.add_argument("--out-prefix", required=True)

    chain = commands.add_parser("chain-experiment",
                                help="chain strength sensitivity study")
    chain.add_argument("--workload", required=True)
    chain.add_argument("--length", type=int, required=True, help="chain length")
    chain.add_argument("--multipliers", required=True,
                       help="comma-separated chain strength multipliers")
    chain.add_argument("--solver", choices=SAMPLER_CHOICES, default="sa")
    chain.add_argument("--gamma", type=float, default=1.0)
    chain.add_argument("--seed", type=int, default=0)
    _add_sampler_options(chain, default_reads=100)
    chain.add_argument("--out-prefix", required=True)

    met = commands.add_parser("metrics", help="recompute metrics for a stored result")
    met.add_argument("--workload", required=True)
    met.add_argument("--result", required=True, help="result JSON from solve")
    met.add_argument("--out-prefix", required=True)

    imp = commands.add_parser("import-reference",
                              help="score an external bipartition assignment")
    imp.add_argument("--workload", required=True)
    imp.add_argument("--assignment", required=True,
                     help="JSON file with a part index per item")
    imp.add_argument("--out", help="output path (default: stdout)")
    return parser


def cmd_generate(args: argparse.Namespace) -> int:
    seed = _effective_seed(args)
    if args.kind == "blastwave":
        if args.patches is None:
            raise ValidationError("patches: required for --kind blastwave")
        payload = generate_blastwave_grids(args.patches, seed)
        metadata = {"generator": "blastwave", "patches": str(args.patches), "seed": str(seed)}
        wf = WorkloadFile(kind=GRID_KIND, payload=payload, metadata=metadata)
    else:
        if args.side is None:
            raise ValidationError("side: required for --kind cosmo")
        payload = generate_cosmo_clique(args.side, seed)
        metadata = {"generator": "cosmo", "side": str(args.side), "seed": str(seed)}
        wf = WorkloadFile(kind=GRAPH_KIND, payload=payload, metadata=metadata)
    Path(args.out).write_bytes(save_workload(wf))
    print(f"wrote {args.out} ({wf.kind}, {wf.payload.num_items} items)")
    return EXIT_OK


def cmd_formulate(args: argparse.Namespace) -> int:
    wf = _read_workload(args.workload)
    model = pipeline.build_model(wf.payload, gamma=args.gamma)
    reporting.write_text(Path(args.out), format_model(model))
    print(f"wrote {args.out} ({model.num_vars} variables, {len(model.J)} couplings)")
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    seed = _effective_seed(args)
    wf = _read_workload(args.workload)
    if args.parts < 2 or (args.parts & (args.parts - 1)) != 0:
        raise ValidationError(f"parts: must be a power of two >= 2, got {args.parts}")
    anneal, sqa = _sampler_param_objects(args)
    outcome = pipeline.solve_workload(
        wf.payload, args.solver, args.parts, gamma=args.gamma, master_seed=seed,
        reads=args.reads, sweeps=args.sweeps, anneal=anneal, sqa=sqa,
    )
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    run_id = prefix.name

    result_doc = outcome.result.to_doc()
    result_doc["run_id"] = run_id
    result_doc["solver"] = args.solver
    result_doc["master_seed"] = seed
    reporting.write_json_doc(prefix.with_name(prefix.name + ".result.json"), result_doc)
    if outcome.root_samples is not None:
        reporting.write_json_doc(prefix.with_name(prefix.name + ".samples.json"),
                                 outcome.root_samples.to_doc())
    rows = pipeline.metric_rows(run_id, wf.payload, outcome.result)
    reporting.write_csv(prefix.with_name(prefix.name + ".metrics.csv"),
                        ["run_id", "metric", "index", "value"], rows)
    reporting.render_imbalance_figure(
        prefix.with_name(prefix.name + ".imbalance.png"),
        outcome.result.part_loads,
        imbalance(outcome.result.part_loads),
        title=f"{args.solver} into {args.parts} parts",
    )
    loads = ", ".join(str(x) for x in outcome.result.part_loads)
    print(f"part loads: {loads}")
    print(f"range: {max(outcome.result.part_loads) - min(outcome.result.part_loads)}")
    print(f"cut weight: {outcome.result.cut_weight}")
    return EXIT_OK


def _load_reference(path: str) -> ObjectivePoint:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"reference: not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "disparity" not in doc or "cut_weight" not in doc:
        raise ParseError("reference: expected an object with disparity and cut_weight")
    return ObjectivePoint(
        disparity=float(doc["disparity"]),
        cut_weight=float(doc["cut_weight"]),
        source=str(doc.get("source", "reference")),
    )


def cmd_sweep_gamma(args: argparse.Namespace) -> int:
    seed = _effective_seed(args)
    wf = _read_workload(args.workload)
    if wf.kind != GRAPH_KIND:
        raise ValidationError("workload: sweep-gamma needs a graph workload")
    anneal, sqa = _sampler_param_objects(args)
    gammas = pipeline.gamma_grid(args.gamma_min, args.gamma_max, args.steps)
    points = pipeline.gamma_sweep(
        wf.payload, gammas, args.solver, master_seed=seed, reads=args.reads,
        anneal=anneal, sqa=sqa,
    )
    front = pareto_front(points)
    reference = _load_reference(args.reference) if args.reference else None

    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    reporting.write_points_csv(prefix.with_name(prefix.name + ".points.csv"), points)
    reporting.write_points_csv(prefix.with_name(prefix.name + ".front.csv"), front)
    reporting.render_pareto_figure(
        prefix.with_name(prefix.name + ".pareto.png"), points, front, reference,
        title=f"{args.solver} sweep, gamma {args.gamma_min:g}..{args.gamma_max:g}",
    )
    print(f"{len(points)} points, {len(front)} on the front")
    if reference is not None:
        fraction = dominance_fraction(points, reference)
        print(f"dominance_fraction: {fraction}")
    return EXIT_OK


def cmd_chain_experiment(args: argparse.Namespace) -> int:
    seed = _effective_seed(args)
    wf = _read_workload(args.workload)
    try:
        multipliers = [float(tok) for tok in args.multipliers.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(
            f"multipliers: expected comma-separated numbers, got {args.multipliers!r}"
        ) from None
    anneal, sqa = _sampler_param_objects(args)
    model = pipeline.build_model(wf.payload, gamma=args.gamma)
    rows = chain_experiment(
        model, args.length, multipliers,
        disparity_fn=pipeline.bipartition_disparity_fn(wf.payload),
        solver=args.solver, master_seed=seed, reads=args.reads,
        anneal=anneal, sqa=sqa,
    )
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    reporting.write_chain_csv(prefix.with_name(prefix.name + ".chains.csv"), rows)
    reporting.render_chain_figure(
        prefix.with_name(prefix.name + ".chains.png"), rows,
        title=f"chain length {args.length}, {args.solver}",
    )
    print(f"wrote {len(rows)} rows for {len(multipliers)} multipliers")
    return EXIT_OK


def cmd_metrics(args: argparse.Namespace) -> int:
    wf = _read_workload(args.workload)
    try:
        doc = json.loads(Path(args.result).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"result: not valid JSON: {exc}") from None
    try:
        result = PartitionResult(
            parts=doc["parts"],
            assignment=tuple(doc["assignment"]),
            part_loads=tuple(doc["part_loads"]),
            cut_weight=doc["cut_weight"],
            trace=tuple(
                TraceEntry(
                    path=tuple(t["path"]),
                    items=tuple(t["items"]),
                    solver=t["solver"],
                    best_energy=t["best_energy"],
                    side_loads=tuple(t["side_loads"]),
                )
                for t in doc.get("trace", [])
            ),
        )
    except (KeyError, TypeError) as exc:
        raise ParseError(f"result: missing or malformed field: {exc}") from None
    if len(result.assignment) != wf.payload.num_items:
        raise ValidationError(
            f"result: assignment covers {len(result.assignment)} items, "
            f"workload has {wf.payload.num_items}"
        )
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    run_id = prefix.name
    rows = pipeline.metric_rows(run_id, wf.payload, result)
    reporting.write_csv(prefix.with_name(prefix.name + ".metrics.csv"),
                        ["run_id", "metric", "index", "value"], rows)
    reporting.render_imbalance_figure(
        prefix.with_name(prefix.name + ".imbalance.png"),
        result.part_loads, imbalance(result.part_loads),
        title=f"stored result, {result.parts} parts",
    )
    for row in rows:
        print(",".join(str(x) for x in row))
    return EXIT_OK


def cmd_import_reference(args: argparse.Namespace) -> int:
    wf = _read_workload(args.workload)
    try:
        doc = json.loads(Path(args.assignment).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"assignment: not valid JSON: {exc}") from None
    if isinstance(doc, dict):
        assignment = doc.get("assignment")
    else:
        assignment = doc
    if not isinstance(assignment, list):
        raise ParseError("assignment: expected a JSON list or an object with 'assignment'")
    point = pipeline.reference_point(wf.payload, assignment)
    out_doc = {
        "disparity": point.disparity,
        "cut_weight": point.cut_weight,
        "source": point.source,
    }
    text = json.dumps(out_doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


_HANDLERS = {
    "generate": cmd_generate,
    "formulate": cmd_formulate,
    "solve": cmd_solve,
    "sweep-gamma": cmd_sweep_gamma,
    "chain-experiment": cmd_chain_experiment,
    "metrics": cmd_metrics,
    "import-reference": cmd_import_reference,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits for --help (0) and _Parser.error raises 1
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
