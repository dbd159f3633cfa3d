import json

import pytest

from spinbalance.cli import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main

PNG_MAGIC = bytes.fromhex("89504e470d0a1a0a")


def run(argv):
    return main(argv)


def make_grid(tmp_path, patches=12, seed=5):
    out = tmp_path / "grid.json"
    assert run(["generate", "--kind", "blastwave", "--patches", str(patches),
                "--seed", str(seed), "--out", str(out)]) == EXIT_OK
    return out


def make_graph(tmp_path, seed=42):
    out = tmp_path / "graph.json"
    assert run(["generate", "--kind", "cosmo", "--side", "3",
                "--seed", str(seed), "--out", str(out)]) == EXIT_OK
    return out


def test_generate_blastwave(tmp_path, capsys):
    out = make_grid(tmp_path, patches=100, seed=7)
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["kind"] == "grids"
    assert len(doc["weights"]) == 100
    assert doc["metadata"]["generator"] == "blastwave"
    assert "100 items" in capsys.readouterr().out


def test_generate_cosmo(tmp_path):
    out = make_graph(tmp_path)
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["kind"] == "graph"
    assert len(doc["nodes"]) == 27
    assert len(doc["edges"]) == 351


def test_generate_rejects_unknown_kind(tmp_path):
    code = run(["generate", "--kind", "sphere", "--patches", "5",
                "--out", str(tmp_path / "x.json")])
    assert code == EXIT_USAGE


def test_generate_requires_matching_size_flag(tmp_path):
    code = run(["generate", "--kind", "blastwave", "--out", str(tmp_path / "x.json")])
    assert code == EXIT_VALIDATION


def test_unknown_subcommand_is_usage_error():
    assert run(["decompose"]) == EXIT_USAGE


def test_formulate_writes_model_text(tmp_path, capsys):
    wl = make_grid(tmp_path)
    out = tmp_path / "model.txt"
    assert run(["formulate", "--workload", str(wl), "--out", str(out)]) == EXIT_OK
    text = out.read_text(encoding="utf-8")
    assert text.startswith("num_vars 12")
    assert "J 0 1 " in text
    assert "variables" in capsys.readouterr().out


def test_solve_round_robin_files(tmp_path, capsys):
    wl = make_grid(tmp_path)
    prefix = tmp_path / "out" / "rrrun"
    assert run(["solve", "--workload", str(wl), "--solver", "rr",
                "--parts", "4", "--out-prefix", str(prefix)]) == EXIT_OK
    result = json.loads((tmp_path / "out" / "rrrun.result.json").read_text())
    assert result["parts"] == 4
    assert result["solver"] == "rr"
    assert len(result["part_loads"]) == 4
    assert (tmp_path / "out" / "rrrun.metrics.csv").exists()
    png = (tmp_path / "out" / "rrrun.imbalance.png").read_bytes()
    assert png[:8] == PNG_MAGIC
    # rr has no sampler, so there is no samples file
    assert not (tmp_path / "out" / "rrrun.samples.json").exists()
    assert "part loads:" in capsys.readouterr().out


def test_solve_sampler_writes_samples(tmp_path):
    wl = make_grid(tmp_path)
    prefix = tmp_path / "sd"
    assert run(["solve", "--workload", str(wl), "--solver", "sd", "--parts", "2",
                "--reads", "10", "--seed", "3", "--out-prefix", str(prefix)]) == EXIT_OK
    samples = json.loads((tmp_path / "sd.samples.json").read_text())
    assert samples["sampler"] == "sd"
    assert len(samples["samples"]) == 10


def test_solve_rejects_non_power_of_two(tmp_path):
    wl = make_grid(tmp_path)
    code = run(["solve", "--workload", str(wl), "--solver", "rr",
                "--parts", "3", "--out-prefix", str(tmp_path / "x")])
    assert code == EXIT_VALIDATION


def test_solve_rejects_kl_on_grids(tmp_path):
    wl = make_grid(tmp_path)
    code = run(["solve", "--workload", str(wl), "--solver", "kl",
                "--parts", "2", "--out-prefix", str(tmp_path / "x")])
    assert code == EXIT_VALIDATION


def test_solve_is_deterministic(tmp_path):
    wl = make_grid(tmp_path)
    a = tmp_path / "a" / "run"
    b = tmp_path / "b" / "run"
    for prefix in (a, b):
        assert run(["solve", "--workload", str(wl), "--solver", "sa", "--parts", "2",
                    "--reads", "10", "--sweeps", "100", "--seed", "9",
                    "--out-prefix", str(prefix)]) == EXIT_OK
    for suffix in (".result.json", ".samples.json", ".metrics.csv", ".imbalance.png"):
        assert (a.parent / ("run" + suffix)).read_bytes() == \
               (b.parent / ("run" + suffix)).read_bytes()


def test_lb_seed_env_overrides_flag(tmp_path, monkeypatch):
    wl_a = tmp_path / "a.json"
    wl_b = tmp_path / "b.json"
    wl_c = tmp_path / "c.json"
    monkeypatch.setenv("LB_SEED", "111")
    assert run(["generate", "--kind", "blastwave", "--patches", "20",
                "--seed", "5", "--out", str(wl_a)]) == EXIT_OK
    monkeypatch.delenv("LB_SEED")
    assert run(["generate", "--kind", "blastwave", "--patches", "20",
                "--seed", "111", "--out", str(wl_b)]) == EXIT_OK
    assert run(["generate", "--kind", "blastwave", "--patches", "20",
                "--seed", "5", "--out", str(wl_c)]) == EXIT_OK
    assert wl_a.read_bytes() == wl_b.read_bytes()
    assert wl_a.read_bytes() != wl_c.read_bytes()


def test_lb_seed_must_be_integer(tmp_path, monkeypatch):
    monkeypatch.setenv("LB_SEED", "pi")
    code = run(["generate", "--kind", "blastwave", "--patches", "20",
                "--out", str(tmp_path / "x.json")])
    assert code == EXIT_VALIDATION


def test_metrics_recomputes_stored_result(tmp_path, capsys):
    wl = make_grid(tmp_path)
    solve_prefix = tmp_path / "runA"
    assert run(["solve", "--workload", str(wl), "--solver", "rr", "--parts", "2",
                "--out-prefix", str(solve_prefix)]) == EXIT_OK
    capsys.readouterr()
    metrics_prefix = tmp_path / "again" / "runA"
    assert run(["metrics", "--workload", str(wl),
                "--result", str(tmp_path / "runA.result.json"),
                "--out-prefix", str(metrics_prefix)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "imbalance_pct" in out
    assert (tmp_path / "again" / "runA.metrics.csv").read_bytes() == \
           (tmp_path / "runA.metrics.csv").read_bytes()


def test_metrics_rejects_mismatched_workload(tmp_path):
    wl = make_grid(tmp_path, patches=12)
    other = tmp_path / "other.json"
    assert run(["generate", "--kind", "blastwave", "--patches", "6",
                "--out", str(other)]) == EXIT_OK
    prefix = tmp_path / "m"
    assert run(["solve", "--workload", str(wl), "--solver", "rr", "--parts", "2",
                "--out-prefix", str(prefix)]) == EXIT_OK
    code = run(["metrics", "--workload", str(other),
                "--result", str(tmp_path / "m.result.json"),
                "--out-prefix", str(tmp_path / "n")])
    assert code == EXIT_VALIDATION


def test_sweep_gamma_files_and_counts(tmp_path, capsys):
    wl = make_graph(tmp_path)
    prefix = tmp_path / "sweep"
    assert run(["sweep-gamma", "--workload", str(wl), "--solver", "sa",
                "--gamma-min", "0", "--gamma-max", "0.1", "--steps", "3",
                "--reads", "20", "--sweeps", "100", "--seed", "1",
                "--out-prefix", str(prefix)]) == EXIT_OK
    points = (tmp_path / "sweep.points.csv").read_text().splitlines()
    assert len(points) == 1 + 3 * 20
    front = (tmp_path / "sweep.front.csv").read_text().splitlines()
    assert 2 <= len(front) <= len(points)
    assert (tmp_path / "sweep.pareto.png").read_bytes()[:8] == PNG_MAGIC
    assert "points" in capsys.readouterr().out


def test_sweep_gamma_needs_graph(tmp_path):
    wl = make_grid(tmp_path)
    code = run(["sweep-gamma", "--workload", str(wl),
                "--out-prefix", str(tmp_path / "x")])
    assert code == EXIT_VALIDATION


def test_sweep_gamma_reference_dominance(tmp_path, capsys):
    wl = make_graph(tmp_path)
    ref = tmp_path / "ref.json"
    assert run(["import-reference", "--workload", str(wl),
                "--assignment", str(write_assignment(tmp_path, [0] * 27)),
                "--out", str(ref)]) == EXIT_OK
    capsys.readouterr()
    assert run(["sweep-gamma", "--workload", str(wl), "--solver", "sa",
                "--gamma-min", "0", "--gamma-max", "0.1", "--steps", "2",
                "--reads", "10", "--sweeps", "100", "--seed", "1",
                "--reference", str(ref),
                "--out-prefix", str(tmp_path / "s2")]) == EXIT_OK
    assert "dominance_fraction:" in capsys.readouterr().out


def write_assignment(tmp_path, assignment):
    path = tmp_path / "assign.json"
    path.write_text(json.dumps(assignment), encoding="utf-8")
    return path


def test_chain_experiment_files(tmp_path, capsys):
    wl = make_grid(tmp_path)
    prefix = tmp_path / "chain"
    assert run(["chain-experiment", "--workload", str(wl), "--length", "2",
                "--multipliers", "1,10", "--solver", "sa", "--reads", "10",
                "--sweeps", "100", "--seed", "2",
                "--out-prefix", str(prefix)]) == EXIT_OK
    rows = (tmp_path / "chain.chains.csv").read_text().splitlines()
    assert rows[0] == "multiplier,repetition,chain_break_fraction,best_disparity,best_energy"
    assert len(rows) == 1 + 2 * 5
    assert (tmp_path / "chain.chains.png").read_bytes()[:8] == PNG_MAGIC
    assert "10 rows" in capsys.readouterr().out


def test_chain_experiment_unit_length_never_breaks(tmp_path):
    wl = make_grid(tmp_path)
    assert run(["chain-experiment", "--workload", str(wl), "--length", "1",
                "--multipliers", "1,100", "--solver", "sa", "--reads", "10",
                "--sweeps", "100", "--out-prefix", str(tmp_path / "c1")]) == EXIT_OK
    rows = (tmp_path / "c1.chains.csv").read_text().splitlines()[1:]
    assert all(row.split(",")[2] == "0.0" for row in rows)


def test_chain_experiment_rejects_bad_multipliers(tmp_path):
    wl = make_grid(tmp_path)
    code = run(["chain-experiment", "--workload", str(wl), "--length", "2",
                "--multipliers", "1,zap", "--out-prefix", str(tmp_path / "x")])
    assert code == EXIT_VALIDATION
    code = run(["chain-experiment", "--workload", str(wl), "--length", "2",
                "--multipliers", ",", "--out-prefix", str(tmp_path / "x")])
    assert code == EXIT_VALIDATION


def test_import_reference_stdout(tmp_path, capsys):
    wl = make_graph(tmp_path)
    capsys.readouterr()
    assert run(["import-reference", "--workload", str(wl),
                "--assignment", str(write_assignment(tmp_path, [0] * 27))]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["disparity"] == 2.0
    assert doc["cut_weight"] == 0.0


def test_import_reference_accepts_wrapped_assignment(tmp_path, capsys):
    wl = make_graph(tmp_path)
    path = tmp_path / "wrapped.json"
    path.write_text(json.dumps({"assignment": [k % 2 for k in range(27)]}))
    capsys.readouterr()
    assert run(["import-reference", "--workload", str(wl),
                "--assignment", str(path)]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["cut_weight"] > 0


def test_import_reference_rejects_length_mismatch(tmp_path):
    wl = make_graph(tmp_path)
    code = run(["import-reference", "--workload", str(wl),
                "--assignment", str(write_assignment(tmp_path, [0, 1]))])
    assert code == EXIT_VALIDATION


def test_import_reference_rejects_bad_json(tmp_path):
    wl = make_graph(tmp_path)
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code = run(["import-reference", "--workload", str(wl), "--assignment", str(bad)])
    assert code == EXIT_VALIDATION


def test_missing_workload_file_is_io_error(tmp_path):
    code = run(["formulate", "--workload", str(tmp_path / "absent.json"),
                "--out", str(tmp_path / "m.txt")])
    assert code == 4
