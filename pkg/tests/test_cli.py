"""Command-line surface and exit statuses."""

import json

import pandas as pd
import pytest

from packages.core.config import settings
from packages.core.errors import NotIrreducible
from apps.harness.cli import run_cli


@pytest.fixture
def experiment_file(tmp_path):
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps({
        "name": "cli",
        "graph": {"topology": "random_bounded", "node_count": 2, "degree_cap": 0},
        "sample_sizes": [200, 400],
        "trials": 2,
        "epsilon": 0.1,
        "burn_in": 50,
        "master_seed": 1,
    }))
    return path


class TestGenerate:

    def test_stdout_document(self, capsys):
        assert run_cli(["generate", "--topology", "ring", "--nodes", "3", "--m-bar", "1"]) == 0
        document = json.loads(capsys.readouterr().out)
        assert document["node_count"] == 3
        assert document["obs"]["m_bar"] == 1
        assert len(document["edges"]) == 6

    def test_invalid_parameters(self, capsys):
        assert run_cli(["generate", "--topology", "line", "--nodes", "2", "--alpha", "1.5"]) == 1
        assert "alpha" in capsys.readouterr().err

    def test_unknown_topology(self):
        assert run_cli(["generate", "--topology", "star", "--nodes", "2"]) == 1


class TestSimulateAndLearn:

    def test_simulate_to_stdout(self, capsys, graphs_dir):
        assert run_cli(["simulate", "--graph", str(graphs_dir / "two_node.json"), "--T", "5", "--seed", "3"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "t,node,N,M"
        assert len(lines) == 11

    def test_too_short(self, tmp_path, capsys):
        graph = tmp_path / "deep.json"
        assert run_cli(["generate", "--topology", "line", "--nodes", "2", "--d", "2", "--out", str(graph)]) == 0
        assert run_cli(["simulate", "--graph", str(graph), "--T", "1"]) == 1
        assert "TooShort" in capsys.readouterr().err

    def test_round_trip_through_files(self, tmp_path, capsys, graphs_dir):
        graph = str(graphs_dir / "two_node.json")
        trajectory = tmp_path / "run.csv"
        assert run_cli(["simulate", "--graph", graph, "--T", "20000", "--seed", "5", "--out", str(trajectory)]) == 0
        capsys.readouterr()

        summary = tmp_path / "summary.csv"
        assert run_cli([
            "learn", "--trajectory", str(trajectory), "--epsilon", "0.01",
            "--graph", graph, "--summary", str(summary),
        ]) == 0
        captured = capsys.readouterr()
        assert json.loads(captured.out)["parents"] == {"0": [], "1": [0]}
        assert "Perfect recovery: True" in captured.err
        assert pd.read_csv(summary)["node"].tolist() == [0, 1]

    def test_learn_rejects_bad_epsilon(self, tmp_path, graphs_dir):
        trajectory = tmp_path / "run.csv"
        assert run_cli(["simulate", "--graph", str(graphs_dir / "two_node.json"), "--T", "50", "--out", str(trajectory)]) == 0
        assert run_cli(["learn", "--trajectory", str(trajectory), "--epsilon", "-1"]) == 1


class TestOracleAndBound:

    def test_oracle_report(self, capsys, graphs_dir):
        assert run_cli(["oracle", "--graph", str(graphs_dir / "two_node.json")]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["states"] == 4
        assert report["brute_force_parents"] == {"0": [], "1": [0]}
        assert report["matches_graph"] is True
        assert report["independence_violations"] == []

    def test_oracle_dump(self, tmp_path, graphs_dir):
        dump = tmp_path / "chain"
        assert run_cli(["oracle", "--graph", str(graphs_dir / "single_node.json"), "--dump", str(dump), "--out", str(tmp_path / "r.json")]) == 0
        assert (dump / "transitions.csv").exists()
        assert json.loads((tmp_path / "r.json").read_text())["lambda_star"] == pytest.approx(0.4, abs=1e-8)

    def test_runtime_failure_exits_two(self, mocker, graphs_dir, capsys):
        mocker.patch("apps.harness.cli.build_exact_chain", side_effect=NotIrreducible(2))
        assert run_cli(["oracle", "--graph", str(graphs_dir / "two_node.json")]) == 2
        assert "NotIrreducible" in capsys.readouterr().err

    def test_bound_table(self, capsys, graphs_dir):
        assert run_cli(["bound", "--graph", str(graphs_dir / "single_node.json")]) == 0
        out = capsys.readouterr().out
        assert "rho" in out
        assert "0.4" in out

    def test_bound_json(self, capsys, graphs_dir):
        assert run_cli(["bound", "--graph", str(graphs_dir / "single_node.json"), "--with-oracle", "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["rho"] == pytest.approx(0.4)
        assert report["lambda_star"] == pytest.approx(0.4, abs=1e-8)
        assert report["applicable"] is True

    def test_bound_rejects_gamma(self, graphs_dir):
        assert run_cli(["bound", "--graph", str(graphs_dir / "single_node.json"), "--gamma", "1.5"]) == 1


class TestExperiment:

    def test_writes_curve(self, tmp_path, capsys, experiment_file):
        out = tmp_path / "curve.csv"
        assert run_cli(["experiment", str(experiment_file), "--out", str(out), "--threshold", "--target", "1.0"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == str(out)
        assert lines[1].startswith("Threshold: T=200")
        assert pd.read_csv(out)["recovery_prob"].tolist() == [1.0, 1.0]

    def test_unreached_target_is_a_warning(self, tmp_path, capsys, experiment_file):
        out = tmp_path / "curve.csv"
        assert run_cli(["experiment", str(experiment_file), "--out", str(out), "--threshold", "--target", "1.5"]) == 0
        assert "NotReached" in capsys.readouterr().err

    def test_overrides(self, tmp_path, experiment_file):
        out = tmp_path / "curve.csv"
        assert run_cli(["experiment", str(experiment_file), "--out", str(out), "--trials", "1", "--seed", "9", "--epsilon", "0.1", "--epsilon", "0.2"]) == 0
        frame = pd.read_csv(out)
        assert frame["trials"].tolist() == [1, 1, 1, 1]
        assert frame["master_seed"].unique().tolist() == [9]
        assert frame["epsilon"].tolist() == [0.1, 0.1, 0.2, 0.2]

    def test_missing_config(self, tmp_path):
        assert run_cli(["experiment", str(tmp_path / "nope.json")]) == 1

    def test_unknown_command(self):
        assert run_cli(["frobnicate"]) == 1

    def test_threads_capped(self, tmp_path, experiment_file, mocker, monkeypatch):
        monkeypatch.setattr(settings, "threads", 1)
        pool = mocker.patch("apps.harness.pipeline.ExperimentPipeline._run_pool")
        assert run_cli(["experiment", str(experiment_file), "--out", str(tmp_path / "c.csv"), "--threads", "4"]) == 0
        pool.assert_not_called()
