import json
import subprocess
import sys

import pytest

from modcert.cli import main
from modcert.graph import Graph
from modcert.synth import path_pair_trace_problem, realize_problem

from conftest import complete_bipartite, cycle


def edge_list_text(graph: Graph) -> str:
    lines = [f"n {graph.n}"]
    lines += [f"{u} {v}" for u, v in graph.edges()]
    return "\n".join(lines) + "\n"


def write_graph(tmp_path, graph: Graph, name="graph.txt") -> str:
    target = tmp_path / name
    target.write_text(edge_list_text(graph), encoding="utf-8")
    return str(target)


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def names(ids) -> str:
    return ",".join(str(v) for v in ids)


class TestParity:
    def test_single_edge(self, tmp_path, capsys):
        target = write_graph(tmp_path, Graph.from_edges(2, [(0, 1)]))
        code, out, _ = run_cli(capsys, ["parity", target, "--json"])
        payload = json.loads(out)
        assert code == 0
        assert payload["verified"] is True
        assert sorted(len(p) for p in (payload["part0"], payload["part1"])) == [1, 1]

    def test_all_even_graph(self, tmp_path, capsys):
        target = write_graph(tmp_path, cycle(4))
        code, out, _ = run_cli(capsys, ["parity", target, "--json"])
        payload = json.loads(out)
        assert code == 0
        assert payload["part1"] == []
        assert payload["larger_size"] == 4

    def test_fifty_vertex_random_graph(self, tmp_path, capsys):
        import random

        from conftest import random_graph

        g = random_graph(50, 0.3, random.Random(505))
        target = write_graph(tmp_path, g)
        code, out, _ = run_cli(capsys, ["parity", target, "--json"])
        payload = json.loads(out)
        assert code == 0
        assert payload["verified"] is True
        assert payload["larger_size"] >= 25

    def test_parse_error_exit_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("0 0\n", encoding="utf-8")
        code, _, err = run_cli(capsys, ["parity", str(bad)])
        assert code == 2
        assert "self-loop" in err


class TestAbsorb:
    def test_deletion_certificate_exit_zero(self, tmp_path, capsys):
        problem = path_pair_trace_problem(2)
        target = write_graph(tmp_path, problem.graph)
        code, out, _ = run_cli(capsys, [
            "absorb", target, "--json",
            "--core", names(problem.core),
            "--witness", names(sorted(problem.witness.members)),
            "--q", "2",
        ])
        payload = json.loads(out)
        assert code == 0
        assert payload["kind"] == "deletion"
        assert payload["verified"] is True
        assert [entry["trace"] for entry in payload["chosen_traces"]] == [["0", "1"], ["1", "2"]]

    def test_parity_cut_exit_one(self, tmp_path, capsys):
        problem = realize_problem(4, 2, [0b0011, 0b1100], 0b0001)
        target = write_graph(tmp_path, problem.graph)
        code, out, _ = run_cli(capsys, [
            "absorb", target, "--json",
            "--core", names(problem.core),
            "--witness", names(sorted(problem.witness.members)),
            "--q", "2",
        ])
        payload = json.loads(out)
        assert code == 1
        assert payload["kind"] == "parity-cut"
        assert payload["parity_cut_Y"]

    def test_core_outside_witness_exit_two(self, tmp_path, capsys):
        problem = path_pair_trace_problem(2)
        target = write_graph(tmp_path, problem.graph)
        code, _, err = run_cli(capsys, [
            "absorb", target,
            "--core", names(problem.core),
            "--witness", names(problem.core[:2]),
            "--q", "2",
        ])
        assert code == 2
        assert "subset" in err

    def test_non_modular_witness_exit_two(self, tmp_path, capsys):
        target = write_graph(tmp_path, Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]))
        code, _, err = run_cli(capsys, [
            "absorb", target, "--core", "0", "--witness", "0,1,2,3", "--q", "2",
        ])
        assert code == 2
        assert "not 2-modular" in err


class TestAnalysisCommands:
    def test_check_modular(self, tmp_path, capsys):
        target = write_graph(tmp_path, cycle(5))
        code, out, _ = run_cli(capsys, [
            "check-modular", target, "--json", "--witness", "0,1,2,3,4", "--q", "1000",
        ])
        payload = json.loads(out)
        assert code == 0
        assert payload == {
            "command": "check-modular", "q": 1000, "modular": True,
            "residue": 2, "conflict": None,
        }

    def test_traces_and_next_bit(self, tmp_path, capsys):
        fixture = tmp_path / "cancelling.txt"
        fixture.write_text("x 1\ny 2\ny 3\ny 4\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, [
            "traces", str(fixture), "--json",
            "--core", "1,2,3,4", "--witness", "1,2,3,4,x,y",
        ])
        payload = json.loads(out)
        assert code == 0
        assert payload["tail_neighbor_counts"] == [1, 1, 1, 1]
        assert {tuple(e["trace"]): e["count"] for e in payload["entries"]} == {
            ("1",): 1, ("2", "3", "4"): 1,
        }

        code, out, _ = run_cli(capsys, [
            "next-bit", str(fixture), "--json",
            "--core", "1,2,3,4", "--witness", "1,2,3,4,x,y",
        ])
        payload = json.loads(out)
        assert code == 0
        assert all(r["defined"] and r["zero"] for r in payload["results"])

    def test_pair_trace(self, tmp_path, capsys):
        problem = path_pair_trace_problem(2)
        target = write_graph(tmp_path, problem.graph)
        code, out, _ = run_cli(capsys, [
            "pair-trace", target, "--json",
            "--core", names(problem.core),
            "--witness", names(sorted(problem.witness.members)),
            "--q", "2",
        ])
        payload = json.loads(out)
        assert code == 0
        assert payload["connected"] is True
        assert payload["applies"] is True
        assert ["0", "1"] in payload["edges"]

    def test_nd_complete_bipartite(self, tmp_path, capsys):
        target = write_graph(tmp_path, complete_bipartite(3, 3))
        code, out, _ = run_cli(capsys, ["nd", target, "--json"])
        payload = json.loads(out)
        assert code == 0
        assert payload["t"] == 2

    def test_oracle_f(self, tmp_path, capsys):
        target = write_graph(tmp_path, cycle(5))
        code, out, _ = run_cli(capsys, ["oracle-f", target, "--json"])
        payload = json.loads(out)
        assert code == 0
        assert payload["f"] == 5

    def test_oracle_absorb_exit_codes(self, tmp_path, capsys):
        solvable = path_pair_trace_problem(2)
        target = write_graph(tmp_path, solvable.graph)
        code, out, _ = run_cli(capsys, [
            "oracle-absorb", target, "--json",
            "--core", names(solvable.core),
            "--witness", names(sorted(solvable.witness.members)),
            "--q", "2",
        ])
        assert code == 0
        assert json.loads(out)["exists"] is True

        unsolvable = realize_problem(4, 2, [0b0011, 0b1100], 0b0001)
        target = write_graph(tmp_path, unsolvable.graph, name="unsolvable.txt")
        code, out, _ = run_cli(capsys, [
            "oracle-absorb", target, "--json",
            "--core", names(unsolvable.core),
            "--witness", names(sorted(unsolvable.witness.members)),
            "--q", "2",
        ])
        assert code == 1
        assert json.loads(out)["exists"] is False


class TestReservoirCommand:
    def test_requires_seed(self, capsys):
        with pytest.raises(SystemExit):
            main(["reservoir", "--m", "3", "--q", "2", "--samples", "64"])

    def test_report(self, capsys):
        code, out, _ = run_cli(capsys, [
            "reservoir", "--json", "--m", "3", "--q", "2",
            "--samples", "64", "--trials", "20", "--seed", "11",
        ])
        payload = json.loads(out)
        assert code == 0
        assert payload["rng"] == "mt19937"
        assert len(payload["per_trial_failures"]) == 20


class TestLadderBudget:
    def test_unit_constants(self, capsys):
        code, out, _ = run_cli(capsys, [
            "ladder-budget", "--json", "--C", "1", "--a", "0", "--C0", "1", "--r", "3",
        ])
        payload = json.loads(out)
        assert code == 0
        assert payload["budget"] == 16.0
        assert payload["log2"] == 4.0

    def test_growth_with_constants(self, capsys):
        code, out, _ = run_cli(capsys, [
            "ladder-budget", "--json", "--C", "2", "--a", "1", "--C0", "3", "--r", "5",
        ])
        payload = json.loads(out)
        assert code == 0
        # 2 * 3 * prod_{j=2..4} (2 * 2^j) * 2^5 = 6 * (8*16*32) * 32.
        assert payload["budget"] == pytest.approx(6 * 8 * 16 * 32 * 32)


class TestVerifyCert:
    def test_round_trip(self, tmp_path, capsys):
        problem = path_pair_trace_problem(2)
        target = write_graph(tmp_path, problem.graph)
        args = [
            "--core", names(problem.core),
            "--witness", names(sorted(problem.witness.members)),
            "--q", "2",
        ]
        code, out, _ = run_cli(capsys, ["absorb", target, "--json"] + args)
        assert code == 0
        cert_path = tmp_path / "cert.json"
        cert_path.write_text(out, encoding="utf-8")
        code, out, _ = run_cli(capsys, [
            "verify-cert", target, "--json", "--certificate", str(cert_path),
        ] + args)
        assert code == 0
        assert json.loads(out)["valid"] is True

    def test_tampered_certificate_rejected(self, tmp_path, capsys):
        problem = path_pair_trace_problem(2)
        target = write_graph(tmp_path, problem.graph)
        args = [
            "--core", names(problem.core),
            "--witness", names(sorted(problem.witness.members)),
            "--q", "2",
        ]
        code, out, _ = run_cli(capsys, ["absorb", target, "--json"] + args)
        payload = json.loads(out)
        payload["chosen_traces"] = payload["chosen_traces"][:1]
        cert_path = tmp_path / "cert.json"
        cert_path.write_text(json.dumps(payload), encoding="utf-8")
        code, out, _ = run_cli(capsys, [
            "verify-cert", target, "--json", "--certificate", str(cert_path),
        ] + args)
        assert code == 1
        assert json.loads(out)["valid"] is False


class TestFormats:
    def test_dimacs_input(self, tmp_path, capsys):
        target = tmp_path / "c5.col"
        target.write_text(
            "c cycle\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n",
            encoding="utf-8",
        )
        code, out, _ = run_cli(capsys, [
            "oracle-f", str(target), "--json", "--format", "dimacs",
        ])
        payload = json.loads(out)
        assert code == 0
        assert payload["f"] == 5
        assert payload["witness"] == ["1", "2", "3", "4", "5"]

    def test_named_vertices_round_trip(self, tmp_path, capsys):
        target = tmp_path / "named.txt"
        target.write_text("alpha beta\nbeta gamma\n", encoding="utf-8")
        code, out, _ = run_cli(capsys, ["parity", str(target), "--json"])
        payload = json.loads(out)
        assert code == 0
        assert set(payload["part0"]) | set(payload["part1"]) == {"alpha", "beta", "gamma"}

    def test_missing_file_exit_two(self, capsys):
        code, _, err = run_cli(capsys, ["parity", "/nonexistent/graph.txt"])
        assert code == 2
        assert "error" in err


def test_installed_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "modcert", "ladder-budget", "--json",
         "--C", "1", "--a", "0", "--C0", "1", "--r", "3"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["budget"] == 16.0
