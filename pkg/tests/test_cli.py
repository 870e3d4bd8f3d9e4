import json
from pathlib import Path

import pytest

from interpsched.cli import main

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def run(args):
    return main([str(a) for a in args])


class TestGenInstance:
    def test_t1_matches_fixture(self, tmp_path):
        assert run(["gen-instance", "--t1", "--out", tmp_path]) == 0
        assert (tmp_path / "t1.json").read_bytes() == (FIXTURES / "t1.json").read_bytes()

    def test_base_seed7_matches_fixture(self, tmp_path):
        assert run(["gen-instance", "--base", "--seed", 7, "--out", tmp_path]) == 0
        assert (tmp_path / "base_case.json").read_bytes() == (FIXTURES / "base_case.json").read_bytes()

    def test_deterministic(self, tmp_path):
        run(["gen-instance", "--base", "--seed", 3, "--out", tmp_path / "a"])
        run(["gen-instance", "--base", "--seed", 3, "--out", tmp_path / "b"])
        assert (tmp_path / "a/base_case.json").read_bytes() == (tmp_path / "b/base_case.json").read_bytes()

    def test_base_counts(self, tmp_path):
        run(["gen-instance", "--base", "--out", tmp_path])
        doc = json.loads((tmp_path / "base_case.json").read_text())
        kinds = [i["kind"] for i in doc["interpreters"]]
        assert kinds.count("full_time") == 12
        assert kinds.count("part_time") == 22
        assert doc["arrival_rates"]["Spanish"] == 0.184
        assert len(doc["outpatients"]) == 14


class TestSolveCommands:
    def test_solve_exact_guard_refusal_on_base(self, tmp_path):
        code = run(["solve-exact", "--instance", FIXTURES / "base_case.json", "--samples", 1, "--out", tmp_path])
        assert code == 2

    def test_solve_exact_on_t1(self, tmp_path):
        code = run(["solve-exact", "--instance", FIXTURES / "t1.json", "--samples", 1, "--out", tmp_path])
        assert code == 0
        doc = json.loads((tmp_path / "solution.json").read_text())
        assert doc["bits"] == [1, 0]
        assert doc["objective"] == 20.0

    def test_solve_ts_writes_solution_and_trace(self, tmp_path):
        code = run(
            ["solve-ts", "--instance", FIXTURES / "t1.json", "--iterations", 4,
             "--fitness-scenarios", 1, "--init-scenarios", 1, "--out", tmp_path]
        )
        assert code == 0
        trace = (tmp_path / "trace.csv").read_text().splitlines()
        assert trace[0] == "iteration,current_fitness,best_fitness,diversified"
        assert len(trace) == 5
        doc = json.loads((tmp_path / "solution.json").read_text())
        assert doc["bits"] == [1, 0]

    def test_solve_evp_t1(self, tmp_path):
        assert run(["solve-evp", "--instance", FIXTURES / "t1.json", "--out", tmp_path]) == 0
        doc = json.loads((tmp_path / "solution.json").read_text())
        assert doc["bits"] == [1, 0]

    def test_solve_saa_t1(self, tmp_path):
        code = run(
            ["solve-saa", "--instance", FIXTURES / "t1.json", "--samples", 1,
             "--replications", 2, "--eval-samples", 2, "--out", tmp_path]
        )
        assert code == 0
        report = json.loads((tmp_path / "saa_report.json").read_text())
        assert report["gap"] == 0.0
        summary = (tmp_path / "saa_summary.csv").read_text().splitlines()
        assert summary[0] == "S,LB,LB_std,UB,UB_std,gap,gap_pct,gap_std,ci_low,ci_high"

    def test_solve_saa_ts_inner(self, tmp_path):
        code = run(
            ["solve-saa", "--instance", FIXTURES / "t1.json", "--samples", 1,
             "--replications", 2, "--eval-samples", 2, "--inner", "ts", "--out", tmp_path]
        )
        assert code == 0
        doc = json.loads((tmp_path / "saa_report.json").read_text())
        assert doc["best_bits"] == [1, 0]

    def test_gen_scenarios_then_solve_exact(self, tmp_path):
        run(["gen-scenarios", "--instance", FIXTURES / "t1.json", "--samples", 2, "--seed", 5, "--out", tmp_path])
        code = run(
            ["solve-exact", "--instance", FIXTURES / "t1.json",
             "--scenarios", tmp_path / "scenarios.json", "--out", tmp_path]
        )
        assert code == 0


class TestEvaluateCompareCheck:
    def test_compare_t1_both_rows_20(self, tmp_path):
        code = run(
            ["compare", "--instance", FIXTURES / "t1.json", "--samples", 3,
             "--iterations", 4, "--fitness-scenarios", 1, "--init-scenarios", 1, "--out", tmp_path]
        )
        assert code == 0
        lines = (tmp_path / "comparison.csv").read_text().splitlines()
        assert lines[0].startswith("solution,mean_total,std,mean_wait")
        rows = {line.split(",")[0]: line.split(",") for line in lines[1:]}
        assert float(rows["evp"][1]) == 20.0
        assert float(rows["ts"][1]) == 20.0

    def test_evaluate_stored_solution(self, tmp_path):
        run(["solve-exact", "--instance", FIXTURES / "t1.json", "--samples", 1, "--out", tmp_path])
        code = run(
            ["evaluate", "--instance", FIXTURES / "t1.json",
             "--solution", tmp_path / "solution.json", "--samples", 4, "--out", tmp_path]
        )
        assert code == 0
        doc = json.loads((tmp_path / "evaluation.json").read_text())
        assert doc["mean_total"] == 20.0

    def test_check_clean_solution(self, tmp_path):
        run(["solve-exact", "--instance", FIXTURES / "t1.json", "--samples", 1, "--out", tmp_path])
        code = run(
            ["check", "--instance", FIXTURES / "t1.json",
             "--solution", tmp_path / "solution.json", "--samples", 20, "--out", tmp_path]
        )
        assert code == 0
        lines = (tmp_path / "violations.csv").read_text().splitlines()
        assert lines == ["family,scenario_index,ids"]

    def test_check_clean_on_ts_solution(self, tmp_path):
        run(
            ["solve-ts", "--instance", FIXTURES / "base_case.json", "--iterations", 3,
             "--fitness-scenarios", 3, "--init-scenarios", 2, "--seed", 5, "--out", tmp_path]
        )
        code = run(
            ["check", "--instance", FIXTURES / "base_case.json",
             "--solution", tmp_path / "solution.json", "--samples", 30, "--seed", 6, "--out", tmp_path]
        )
        assert code == 0

    def test_solve_ts_byte_identical_outputs(self, tmp_path):
        for sub in ("a", "b"):
            run(
                ["solve-ts", "--instance", FIXTURES / "t1.json", "--iterations", 5,
                 "--fitness-scenarios", 1, "--init-scenarios", 1, "--seed", 2, "--out", tmp_path / sub]
            )
        assert (tmp_path / "a/trace.csv").read_bytes() == (tmp_path / "b/trace.csv").read_bytes()
        assert (tmp_path / "a/solution.json").read_bytes() == (tmp_path / "b/solution.json").read_bytes()

    def test_sensitivity_quick_shape(self, tmp_path):
        code = run(
            ["sensitivity", "--instance", FIXTURES / "t1.json",
             "--parameter", "wait-penalty", "--quick", "--out", tmp_path]
        )
        assert code == 0
        lines = (tmp_path / "sensitivity_wait-penalty.csv").read_text().splitlines()
        assert len(lines) == 7
        assert lines[0].startswith("experiment,factor,mean_total")
        assert "hired_total" in lines[0]


class TestErrors:
    def test_missing_instance_file(self, tmp_path):
        assert run(["solve-evp", "--instance", tmp_path / "nope.json", "--out", tmp_path]) == 1

    def test_malformed_instance_reports_path(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        doc = json.loads((FIXTURES / "t1.json").read_text())
        del doc["horizon"]
        bad.write_text(json.dumps(doc))
        assert run(["solve-evp", "--instance", bad, "--out", tmp_path]) == 1
        assert "instance.horizon" in capsys.readouterr().err

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])
