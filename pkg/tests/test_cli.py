"""End-to-end coverage of the command-line interface."""

import csv
import json

import numpy as np
import pytest

from discrank.cli import main
from discrank.errors import ConvergenceFailure
from discrank.evaluation import BENCHMARK_COLUMNS, FitReport
from discrank.games import ExampleThree, realize
from discrank.payoff import load_payoff_json


def run(*argv):
    return main([str(arg) for arg in argv])


@pytest.fixture
def elo_payoff(tmp_path):
    path = tmp_path / "elo.json"
    assert run("generate", "--game", "elo", "--n", 10, "--seed", 0, "--out", path) == 0
    return path


@pytest.fixture
def cyclic_payoff(tmp_path):
    path = tmp_path / "cyclic.json"
    assert run("generate", "--game", "cyclic-disc", "--n", 7, "--out", path) == 0
    return path


class TestGenerate:
    def test_example3_matrix(self, tmp_path):
        out = tmp_path / "ex3.json"
        assert (
            run(
                "generate", "--game", "example3", "--gamma", 0.6, "--delta", 0.7,
                "--out", out,
            )
            == 0
        )
        obs = load_payoff_json(out)
        dense = obs.to_dense()
        np.testing.assert_allclose(
            dense.matrix, realize(ExampleThree(gamma=0.6, delta=0.7)).matrix,
            atol=1e-12,
        )

    def test_cyclic_disc_structure(self, tmp_path):
        out = tmp_path / "rps.json"
        assert run("generate", "--game", "cyclic-disc", "--n", 3, "--out", out) == 0
        matrix = load_payoff_json(out).to_dense().matrix
        assert matrix[0, 1] > 0.5 and matrix[1, 2] > 0.5 and matrix[2, 0] > 0.5

    def test_interp_ratio_one_equals_pure_elo(self, tmp_path):
        pure = tmp_path / "pure.json"
        mixed = tmp_path / "mixed.json"
        assert run("generate", "--game", "elo", "--n", 8, "--seed", 0, "--out", pure) == 0
        assert (
            run(
                "generate", "--game", "interp", "--ratio", 1.0, "--n", 8,
                "--seed", 0, "--out", mixed,
            )
            == 0
        )
        assert pure.read_bytes() == mixed.read_bytes()

    def test_byte_identical_determinism(self, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        for out in (first, second):
            assert run("generate", "--game", "disc", "--n", 6, "--seed", 7, "--out", out) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_spec_round_trip(self, tmp_path):
        payoff_a = tmp_path / "a.json"
        spec = tmp_path / "spec.json"
        payoff_b = tmp_path / "b.json"
        assert (
            run(
                "generate", "--game", "interp", "--ratio", 0.4, "--n", 6,
                "--seed", 1, "--out", payoff_a, "--spec-out", spec,
            )
            == 0
        )
        assert run("generate", "--from-spec", spec, "--out", payoff_b) == 0
        assert payoff_a.read_bytes() == payoff_b.read_bytes()

    def test_missing_required_parameters(self, tmp_path):
        out = tmp_path / "x.json"
        assert run("generate", "--game", "interp", "--out", out) == 2
        assert run("generate", "--game", "example3", "--out", out) == 2
        assert run("generate", "--out", out) == 2

    def test_seed_from_environment(self, tmp_path, monkeypatch):
        explicit, from_env = tmp_path / "explicit.json", tmp_path / "env.json"
        assert run("generate", "--game", "elo", "--n", 6, "--seed", 9, "--out", explicit) == 0
        monkeypatch.setenv("DISCRANK_SEED", "9")
        assert run("generate", "--game", "elo", "--n", 6, "--out", from_env) == 0
        assert explicit.read_bytes() == from_env.read_bytes()


class TestFit:
    def test_elo_on_elo_game(self, tmp_path, elo_payoff, capsys):
        model_path = tmp_path / "model.json"
        report_path = tmp_path / "report.json"
        code = run(
            "fit", "--input", elo_payoff, "--model", "elo", "--seed", 0,
            "--out", model_path, "--report", report_path,
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "test_mse=" in out
        report = json.loads(report_path.read_text())
        assert report["model"] == "elo"
        assert report["converged"] is True
        assert report["test_mse"] <= 1e-6
        assert json.loads(model_path.read_text())["model"] == "elo"

    def test_disc_on_cyclic_game(self, tmp_path, cyclic_payoff):
        report_path = tmp_path / "report.json"
        code = run(
            "fit", "--input", cyclic_payoff, "--model", "disc", "--k", 1,
            "--seed", 0, "--report", report_path,
        )
        assert code == 0
        assert json.loads(report_path.read_text())["test_mse"] <= 1e-4

    def test_no_holdout(self, tmp_path, elo_payoff, capsys):
        code = run(
            "fit", "--input", elo_payoff, "--model", "elo", "--test-fraction", 0,
        )
        assert code == 0
        assert "test_mse=" not in capsys.readouterr().out

    def test_deterministic_model_file(self, tmp_path, elo_payoff):
        first, second = tmp_path / "m1.json", tmp_path / "m2.json"
        for out in (first, second):
            assert (
                run(
                    "fit", "--input", elo_payoff, "--model", "disc", "--seed", 3,
                    "--out", out,
                )
                == 0
            )
        assert first.read_bytes() == second.read_bytes()

    def test_csv_input_with_min_games(self, tmp_path, data_dir):
        model_path = tmp_path / "model.json"
        code = run(
            "fit", "--input", data_dir / "chess_like.csv", "--model", "elo",
            "--seed", 0, "--min-games", 5, "--out", model_path,
        )
        assert code == 0
        assert model_path.exists()

    def test_cv_ridge_path(self, tmp_path, elo_payoff):
        code = run(
            "fit", "--input", elo_payoff, "--model", "disc", "--seed", 0,
            "--cv-ridge", "0.0",
        )
        assert code == 0

    def test_single_player_input(self, tmp_path):
        bad = tmp_path / "one.json"
        bad.write_text(json.dumps({"players": ["A"], "entries": []}))
        assert run("fit", "--input", bad, "--model", "elo") == 2

    def test_missing_input_file(self, tmp_path):
        assert run("fit", "--input", tmp_path / "nope.json", "--model", "elo") == 2

    def test_loss_model_mismatch(self, elo_payoff):
        assert run("fit", "--input", elo_payoff, "--model", "elo", "--loss", "quadratic") == 2
        assert run("fit", "--input", elo_payoff, "--model", "disc", "--loss", "prob-mse") == 2

    def test_convergence_failure_exit_code(self, tmp_path, elo_payoff, monkeypatch, capsys):
        report_path = tmp_path / "report.json"

        class StubbornModel:
            def __init__(self, **kwargs):
                pass

            def set_params(self, **kwargs):
                return self

            def fit(self, obs):
                raise ConvergenceFailure(
                    "stalled",
                    diagnostics={"report": FitReport(model="disc", n_params=0)},
                )

        monkeypatch.setattr("discrank.cli.DiscModel", StubbornModel)
        code = run(
            "fit", "--input", elo_payoff, "--model", "disc", "--report", report_path,
        )
        assert code == 3
        assert "stalled" in capsys.readouterr().err
        assert json.loads(report_path.read_text())["converged"] is False


class TestClassify:
    def _fit(self, payoff, tmp_path, name="model.json"):
        model_path = tmp_path / name
        assert (
            run("fit", "--input", payoff, "--model", "disc", "--seed", 0,
                "--out", model_path)
            == 0
        )
        return model_path

    def test_cyclic_verdict_with_witness(self, tmp_path, cyclic_payoff, capsys):
        model_path = self._fit(cyclic_payoff, tmp_path)
        assert run("classify", "--model", model_path) == 0
        out = capsys.readouterr().out
        assert "verdict: FullyCyclic" in out
        assert "origin: interior" in out
        assert "witness:" in out and "->" in out

    def test_transitive_verdict(self, tmp_path, elo_payoff, capsys):
        model_path = self._fit(elo_payoff, tmp_path)
        assert run("classify", "--model", model_path) == 0
        out = capsys.readouterr().out
        assert "verdict: FullyTransitive" in out
        assert "witness:" not in out

    def test_elo_model_rejected(self, tmp_path, elo_payoff):
        model_path = tmp_path / "elo_model.json"
        assert (
            run("fit", "--input", elo_payoff, "--model", "elo", "--out", model_path)
            == 0
        )
        assert run("classify", "--model", model_path) == 2

    def test_two_player_model_rejected(self, tmp_path):
        payoff = tmp_path / "two.json"
        payoff.write_text(
            json.dumps(
                {
                    "players": ["A", "B"],
                    "entries": [{"i": 0, "j": 1, "p": 0.7, "count": 4}],
                }
            )
        )
        model_path = tmp_path / "model.json"
        assert (
            run("fit", "--input", payoff, "--model", "disc", "--seed", 0,
                "--test-fraction", 0, "--out", model_path)
            == 0
        )
        assert run("classify", "--model", model_path) == 2


class TestPredict:
    def _fitted_model(self, payoff, tmp_path):
        model_path = tmp_path / "model.json"
        assert (
            run("fit", "--input", payoff, "--model", "elo", "--out", model_path) == 0
        )
        return model_path

    def test_round_trip(self, tmp_path, elo_payoff):
        model_path = self._fitted_model(elo_payoff, tmp_path)
        pairs = tmp_path / "pairs.csv"
        pairs.write_text("player_a,player_b\n0,1\n1,0\n")
        out = tmp_path / "pred.csv"
        assert run("predict", "--model", model_path, "--pairs", pairs, "--out", out) == 0
        with open(out, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 2
        p_ab = float(rows[0]["p_hat"])
        p_ba = float(rows[1]["p_hat"])
        np.testing.assert_allclose(p_ab + p_ba, 1.0, atol=1e-15)

    def test_unknown_players_all_listed(self, tmp_path, elo_payoff, capsys):
        model_path = self._fitted_model(elo_payoff, tmp_path)
        pairs = tmp_path / "pairs.csv"
        pairs.write_text("player_a,player_b\nghost,0\n1,phantom\n")
        assert run("predict", "--model", model_path, "--pairs", pairs) == 2
        err = capsys.readouterr().err
        assert "ghost" in err and "phantom" in err

    def test_bad_pairs_header(self, tmp_path, elo_payoff):
        model_path = self._fitted_model(elo_payoff, tmp_path)
        pairs = tmp_path / "pairs.csv"
        pairs.write_text("a,b\n0,1\n")
        assert run("predict", "--model", model_path, "--pairs", pairs) == 2


class TestExportEmbedding:
    def _disc_model(self, payoff, tmp_path):
        model_path = tmp_path / "model.json"
        assert (
            run("fit", "--input", payoff, "--model", "disc", "--loss", "logit-mse",
                "--seed", 0, "--test-fraction", 0, "--out", model_path)
            == 0
        )
        return model_path

    def test_header_and_shape(self, tmp_path, cyclic_payoff):
        model_path = self._disc_model(cyclic_payoff, tmp_path)
        out = tmp_path / "emb.csv"
        assert run("export-embedding", "--model", model_path, "--out", out) == 0
        with open(out, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert set(rows[0]) == {"player", "u", "v"}
        assert len(rows) == 7

    def test_component_out_of_range(self, tmp_path, cyclic_payoff):
        model_path = self._disc_model(cyclic_payoff, tmp_path)
        out = tmp_path / "emb.csv"
        assert run("export-embedding", "--model", model_path, "--component", 0, "--out", out) == 2
        assert run("export-embedding", "--model", model_path, "--component", 2, "--out", out) == 2

    def test_elo_game_yields_constant_positive_v(self, tmp_path, elo_payoff):
        """A purely additive game embeds as (u_i, c) with one shared c > 0."""
        model_path = self._disc_model(elo_payoff, tmp_path)
        out = tmp_path / "emb.csv"
        assert run("export-embedding", "--model", model_path, "--out", out) == 0
        with open(out, newline="") as handle:
            v = np.array([float(row["v"]) for row in csv.DictReader(handle)])
        assert np.all(v > 0.0)
        # every v within 1e-3 of one shared value
        assert np.ptp(v) <= 2e-3

    def test_cyclic_game_points_wind_around_origin(self, tmp_path, cyclic_payoff):
        from discrank.geometry import Verdict, classify_disc

        model_path = self._disc_model(cyclic_payoff, tmp_path)
        out = tmp_path / "emb.csv"
        assert run("export-embedding", "--model", model_path, "--out", out) == 0
        with open(out, newline="") as handle:
            points = np.array(
                [[float(row["u"]), float(row["v"])] for row in csv.DictReader(handle)]
            )
        assert classify_disc(points).verdict is Verdict.FULLY_CYCLIC

    def test_elo_model_rejected(self, tmp_path, elo_payoff):
        model_path = tmp_path / "elo_model.json"
        assert run("fit", "--input", elo_payoff, "--model", "elo", "--out", model_path) == 0
        assert run("export-embedding", "--model", model_path, "--out", tmp_path / "e.csv") == 2


class TestBenchmarkCommand:
    def test_csv_output(self, tmp_path):
        out = tmp_path / "bench.csv"
        code = run(
            "benchmark", "--games", "elo", "--models", "elo,disc-k1",
            "--n", 8, "--seeds", "0", "--seed", 0, "--out", out,
        )
        assert code == 0
        with open(out, newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 2
        assert set(rows[0]) == set(BENCHMARK_COLUMNS)

    def test_unknown_model_token(self, tmp_path):
        assert (
            run("benchmark", "--games", "elo", "--models", "oracle", "--n", 6)
            == 2
        )

    def test_all_model_families(self, tmp_path, capsys):
        code = run(
            "benchmark", "--games", "disc", "--models",
            "elo,elopp,disc-k1,melo-k1,schur-prob-k1",
            "--n", 8, "--seeds", "0", "--seed", 0,
        )
        assert code == 0
        lines = [l for l in capsys.readouterr().out.strip().splitlines() if l]
        assert len(lines) == 5
