import csv
import io
import json
import shutil
import subprocess
import sys

import pytest

from cli_harness import CASES, DISCONNECTED, K4, K5, PATH4, SINGLE_EDGE, invoke, normalized, run_twice
from edimlab.cli import CSV_FIELDS, EXIT_CAP, EXIT_GUARD, EXIT_USAGE, main
from edimlab.graph_core import complete_graph, generate_er, parse_edge_list
from edimlab.theory import suen_terms


def records(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestGen:
    def test_complete(self):
        out = run_twice(["gen", "--n", "5", "--p", "1.0"])
        assert out.code == 0
        assert parse_edge_list(out.stdout) == complete_graph(5)

    def test_file_matches_library(self):
        out = run_twice(["gen", "--n", "30", "--p", "0.3", "--seed", "9", "--out", "{tmp}/g.txt"])
        assert parse_edge_list(out.files["g.txt"]) == generate_er(30, 0.3, 9)

    @pytest.mark.parametrize("argv", [["gen", "--n", "5", "--p", "1.5"], ["gen", "--n", "0", "--p", "0.5"]])
    def test_bad_args(self, argv):
        out = run_twice(argv)
        assert out.code == EXIT_USAGE and out.stdout == ""


class TestSolve:
    def test_path4_brute(self):
        out = run_twice(["solve", "--graph", "{tmp}/p4.txt", "--mode", "edge", "--method", "brute"], {"p4.txt": PATH4})
        assert out.code == 0
        assert out.json()["size"] == 1

    def test_k4_bnb(self):
        out = run_twice(["solve", "--graph", "{tmp}/k4.txt", "--mode", "edge", "--method", "bnb"], {"k4.txt": K4})
        res = out.json()
        assert res["size"] == 3 and res["optimal"] is True
        assert list(res) == ["size", "witness", "optimal", "nodes_explored", "wall_time_ms"]

    def test_single_edge(self):
        out = run_twice(["solve", "--graph", "{tmp}/e.txt", "--mode", "edge"], {"e.txt": SINGLE_EDGE})
        assert out.json()["size"] == 0 and out.json()["witness"] == []

    def test_cap_exceeded(self):
        out = run_twice(["solve", "--graph", "{tmp}/k5.txt", "--max-size", "2"], {"k5.txt": K5})
        assert out.code == EXIT_CAP
        assert out.stdout == ""
        assert "CAP_EXCEEDED" in out.stderr

    def test_disconnected_warns(self):
        out = run_twice(["solve", "--graph", "{tmp}/d.txt"], {"d.txt": DISCONNECTED})
        assert out.code == 0
        assert "DISCONNECTED" in out.stderr

    def test_bad_file(self):
        out = run_twice(["solve", "--graph", "{tmp}/bad.txt"], {"bad.txt": "3 1\n0 0\n"})
        assert out.code == EXIT_USAGE and "line 2" in out.stderr
        assert run_twice(["solve", "--graph", "{tmp}/missing.txt"]).code == EXIT_USAGE

    def test_needs_graph_source(self):
        assert run_twice(["solve", "--p", "0.5"]).code == EXIT_USAGE

    def test_generated_with_csv(self):
        out = run_twice(["solve", "--n", "12", "--p", "0.5", "--seed", "1", "--mode", "vertex", "--csv", "{tmp}/r.csv"])
        rows = records(out.files["r.csv"])
        assert len(rows) == 1
        assert rows[0]["result_size"] == str(out.json()["size"]) == "3"
        assert rows[0]["mode"] == "vertex" and rows[0]["optimal"] == "true"

    def test_csv_appends_without_second_header(self, tmp_path):
        path = tmp_path / "r.csv"
        for seed in ("1", "2"):
            assert main(["solve", "--n", "10", "--p", "0.5", "--seed", seed, "--csv", str(path)]) == 0
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(CSV_FIELDS)
        assert len(lines) == 3

    def test_greedy_not_optimal(self):
        out = run_twice(["solve", "--n", "40", "--p", "0.5", "--method", "greedy"])
        assert out.json()["optimal"] is False

    def test_guard_exit(self, monkeypatch, tmp_path):
        from edimlab import config

        monkeypatch.setattr(config, "BRUTE_FORCE_MAX_SUBSETS", 10)
        path = tmp_path / "k5.txt"
        path.write_text(K5)
        assert main(["solve", "--graph", str(path), "--method", "brute"]) == EXIT_GUARD


class TestTheory:
    def test_values(self):
        out = run_twice(["theory", "--n", "100", "--p", "0.5"]).json()
        mu, big, small = suen_terms(100, 0.5)
        assert out["mu"] == pytest.approx(mu, rel=1e-14)
        assert out["mu"] == pytest.approx(3.052, abs=1e-3)
        assert out["n"] == 100 and out["log_base"] == "e"

    def test_float_n(self):
        assert run_twice(["theory", "--n", "1e6", "--p", "0.3"]).json()["n"] == 1000000

    @pytest.mark.parametrize("argv", [["theory", "--n", "100", "--p", "0"], ["theory", "--n", "8", "--p", "0.5"]])
    def test_domain(self, argv):
        assert run_twice(argv).code == EXIT_USAGE


class TestMc:
    def test_q(self):
        out = run_twice(["mc", "--target", "q", "--n", "200", "--p", "0.5", "--trials", "2000", "--seed", "1"]).json()
        assert out["reference"] == 0.625
        assert abs(out["p_hat"] - 0.625) <= out["tolerance"]

    def test_s_p(self):
        out = run_twice(["mc", "--target", "s_p", "--n", "100", "--p", "0.5", "--trials", "1e3", "--seed", "2"]).json()
        assert out["trials"] == 1000
        assert abs(out["p_hat"] - 0.40625) <= out["tolerance"]

    def test_profile(self):
        out = run_twice(["mc", "--target", "profile", "--n", "100", "--p", "0.5", "--trials", "500", "--seed", "3"]).json()
        assert sum(out["counts"].values()) + out["other"] == 500
        assert len(out["counts"]) == 16

    def test_whole_graph_targets(self):
        d = run_twice(["mc", "--target", "diameter2", "--n", "60", "--p", "0.5", "--trials", "10", "--seed", "4"]).json()
        assert d["trials"] == 10
        t = run_twice(["mc", "--target", "type_pairs", "--n", "20", "--p", "0.5", "--trials", "20", "--seed", "5"]).json()
        assert t["expected_type2"] == 3 * 4845 * 0.25
        r = run_twice(["mc", "--target", "random_set", "--n", "60", "--p", "0.5", "--trials", "5", "--w", "20"]).json()
        assert r["extra"] == {"w": 20}

    @pytest.mark.parametrize(
        "argv",
        [
            ["mc", "--target", "bogus", "--n", "60", "--p", "0.5"],
            ["mc", "--target", "random_set", "--n", "60", "--p", "0.5", "--trials", "5"],
        ],
    )
    def test_usage_errors(self, argv):
        assert run_twice(argv).code == EXIT_USAGE


class TestSweep:
    def test_grid(self):
        out = run_twice(
            ["sweep", "--n-list", "10,12", "--p-list", "0.5", "--seeds", "5", "--mode", "both",
             "--method", "brute", "--out", "{tmp}/s.csv"]
        )
        text = out.files["s.csv"]
        assert text.splitlines()[0] == ",".join(CSV_FIELDS)
        rows = records(text)
        assert len(rows) == 20
        assert [(r["n"], r["seed"], r["mode"]) for r in rows[:4]] == [
            ("10", "0", "vertex"), ("10", "0", "edge"), ("10", "1", "vertex"), ("10", "1", "edge"),
        ]
        for r in rows:
            assert r["optimal"] == "true" and r["error"] == ""
            assert 0 < float(r["ratio"]) < float("inf")
        n12 = [r for r in rows if r["n"] == "12"]
        assert {r["mode"] for r in n12} == {"vertex", "edge"}

    def test_sizes_match_library(self):
        from edimlab.solvers import edge_metric_dimension

        out = run_twice(
            ["sweep", "--n-list", "10,12", "--p-list", "0.5", "--seeds", "5", "--mode", "both",
             "--method", "brute", "--out", "{tmp}/s.csv"]
        )
        for r in records(out.files["s.csv"]):
            if r["mode"] == "edge":
                g = generate_er(int(r["n"]), 0.5, int(r["seed"]))
                assert int(r["result_size"]) == edge_metric_dimension(g).size

    def test_failures_recorded_not_fatal(self):
        out = run_twice(
            ["sweep", "--n-list", "8", "--p-list", "0.3,0.7", "--seeds", "2", "--mode", "edge", "--max-size", "1"]
        )
        rows = records(out.stdout)
        assert out.code == 0 and len(rows) == 4
        assert any(r["error"] == "CAP_EXCEEDED" for r in rows)
        for r in rows:
            if r["error"]:
                assert r["result_size"] == ""


@pytest.mark.parametrize("argv,files", CASES, ids=[" ".join(a[:3]) for a, _ in CASES])
def test_every_case_deterministic(argv, files):
    a, b = invoke(argv, files), invoke(argv, files)
    assert normalized(a) == normalized(b)


def test_console_script():
    exe = shutil.which("edimlab")
    cmd = [exe] if exe else [sys.executable, "-m", "edimlab"]
    out = subprocess.run(cmd + ["theory", "--n", "100", "--p", "0.5"], capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["q"] == 0.625
    mod = subprocess.run([sys.executable, "-m", "edimlab", "gen", "--n", "3", "--p", "1"], capture_output=True, text=True)
    assert mod.returncode == 0 and mod.stdout == "3 3\n0 1\n0 2\n1 2\n"
