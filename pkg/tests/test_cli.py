import json
import math

import pytest

from umaxpoly import ExperimentConfig, KernelKind, SearchMethod
from umaxpoly import cli


def run_main(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestParsing:
    def test_simulate_maps_to_experiment_config(self):
        inv = cli.parse_invocation([
            "simulate", "--kind", "ins-peri", "--m", "3", "--n", "100",
            "--reps", "10000", "--seed", "42",
        ])
        cfg = cli.experiment_from_params(inv.params)
        assert cfg == ExperimentConfig(
            kind=KernelKind.INSCRIBED_PERIMETER, m=3, n=100, replications=10000,
            seed=42, method=SearchMethod.AUTO, threads=None,
        )

    def test_tail_invocation(self):
        inv = cli.parse_invocation([
            "tail", "--kind", "circ-peri", "--m", "4", "--s", "0.02",
            "--trials", "10000000",
        ])
        assert inv.command == "tail"
        assert inv.params["kind"] == "circ-peri"
        assert inv.params["m"] == 4
        assert inv.params["s"] == 0.02
        assert inv.params["trials"] == 10_000_000
        assert inv.params["seed"] == 0

    def test_m_constraint_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            cli.parse_invocation(["simulate", "--kind", "ins-peri", "--m", "2",
                                  "--n", "10", "--reps", "5"])
        assert exc.value.code == 2

    def test_n_below_m_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            cli.parse_invocation(["simulate", "--kind", "ins-peri", "--m", "5",
                                  "--n", "4", "--reps", "5"])
        assert exc.value.code == 2

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            cli.parse_invocation(["constants", "--m", "3", "--bogus", "1"])
        assert exc.value.code == 2

    def test_missing_required_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            cli.parse_invocation(["simulate", "--kind", "ins-peri", "--m", "3"])
        assert exc.value.code == 2

    def test_constraint_message_names_the_constraint(self, capsys):
        with pytest.raises(SystemExit):
            cli.parse_invocation(["simulate", "--kind", "ins-peri", "--m", "2",
                                  "--n", "10", "--reps", "5"])
        assert "m >= 3" in capsys.readouterr().err

    @pytest.mark.parametrize("argv", [
        ["constants", "--m", "3"],
        ["simulate", "--kind", "ins-area", "--m", "4", "--n", "12", "--reps", "7",
         "--seed", "3", "--threads", "2", "--method", "dp"],
        ["tail", "--kind", "circ-area", "--m", "3", "--s", "0.1", "--trials", "100"],
        ["bound", "--kind", "ins-peri", "--m", "3", "--n", "20", "--t", "1.5",
         "--trials", "100", "--r", "2"],
        ["rate", "--kind", "ins-peri", "--m", "3", "--n", "10,20,40", "--reps", "5"],
        ["search", "--kind", "ins-peri", "--m", "3", "--angles", "0.1,1.0,2.0,4.0"],
    ])
    def test_config_echo_round_trips(self, argv):
        inv = cli.parse_invocation(argv)
        rebuilt = cli.argv_from_config(inv.command, inv.params)
        assert cli.parse_invocation(rebuilt) == inv


class TestReports:
    def test_constants_json_contains_triangle_constant(self, capsys):
        code, out, _ = run_main(["constants", "--m", "3"], capsys)
        assert code == 0
        assert '"K": 14.137166941154069' in out
        report = json.loads(out)
        assert list(report.keys()) == ["command", "config", "results",
                                       "tool_version", "elapsed_seconds"]
        assert len(report["results"]["constants"]) == 4

    def test_constants_single_kind(self, capsys):
        code, out, _ = run_main(["constants", "--m", "5", "--kind", "circ-area"], capsys)
        report = json.loads(out)
        rows = report["results"]["constants"]
        assert [r["kind"] for r in rows] == ["circ-area"]
        assert rows[0]["beta"] == 2.0

    def test_tail_csv_schema(self, capsys):
        code, out, _ = run_main([
            "tail", "--kind", "ins-peri", "--m", "3", "--s", "0.3",
            "--trials", "2000", "--format", "csv",
        ], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == ("kind,m,s,trials,hits,p_hat,ci_low,ci_high,"
                            "lemma_ratio,lemma_target")
        assert len(lines) == 2
        assert lines[1].startswith("ins-peri,3,0.3,2000,")

    def test_simulate_inlines_short_sample_vectors(self, capsys):
        code, out, _ = run_main([
            "simulate", "--kind", "ins-peri", "--m", "3", "--n", "8",
            "--reps", "20", "--seed", "1",
        ], capsys)
        report = json.loads(out)
        assert len(report["results"]["samples"]) == 20
        assert report["results"]["count"] == 20
        assert 0.0 <= report["results"]["ks_distance"] <= 1.0

    def test_simulate_writes_sidecar_for_long_vectors(self, tmp_path, capsys):
        out_path = tmp_path / "run.json"
        code, _, _ = run_main([
            "simulate", "--kind", "ins-peri", "--m", "3", "--n", "8",
            "--reps", "1200", "--seed", "1", "--out", str(out_path),
        ], capsys)
        assert code == 0
        report = json.loads(out_path.read_text())
        assert report["results"]["samples"] is None
        sidecar = tmp_path / "run.json.samples.csv"
        assert report["results"]["samples_file"] == str(sidecar)
        values = [float(line) for line in sidecar.read_text().splitlines()]
        assert len(values) == 1200

    def test_search_report(self, capsys):
        code, out, _ = run_main([
            "search", "--kind", "ins-peri", "--m", "3",
            "--angles", "0.0,1.5707963267948966,3.141592653589793,4.71238898038469",
        ], capsys)
        report = json.loads(out)
        assert code == 0
        assert report["results"]["value"] == pytest.approx(2.0 + 2.0 * math.sqrt(2.0), rel=1e-12)
        assert len(report["results"]["subset"]) == 3

    def test_bound_single_r_payload(self, capsys):
        code, out, _ = run_main([
            "bound", "--kind", "ins-peri", "--m", "3", "--n", "25", "--t", "40",
            "--trials", "200000", "--r", "2", "--seed", "3",
        ], capsys)
        report = json.loads(out)
        assert code == 0
        overlap = report["results"]["overlap"]
        assert overlap["r"] == 2
        assert overlap["joint_hat"] <= overlap["p_hat"]

    def test_bound_full_payload(self, capsys):
        code, out, _ = run_main([
            "bound", "--kind", "ins-peri", "--m", "3", "--n", "25", "--t", "40",
            "--trials", "200000", "--seed", "3",
        ], capsys)
        report = json.loads(out)
        assert code == 0
        assert len(report["results"]["overlaps"]) == 2
        bound = report["results"]["bound"]
        assert bound["bound"] >= 0.0
        assert bound["term_count"] == math.comb(25, 3) - math.comb(22, 3)

    def test_rate_payload(self, capsys):
        code, out, _ = run_main([
            "rate", "--kind", "ins-peri", "--m", "3", "--n", "8,12,16",
            "--reps", "300", "--seed", "2",
        ], capsys)
        report = json.loads(out)
        assert code == 0
        assert len(report["results"]["points"]) == 3
        assert "exponent" in report["results"]


class TestExitCodes:
    def test_unwritable_destination_is_io_error(self, capsys):
        code, _, err = run_main([
            "constants", "--m", "3", "--out", "/nonexistent-dir/report.json",
        ], capsys)
        assert code == 3
        assert "i/o" in err.lower()

    def test_budget_refusal_is_exit_4(self, capsys, monkeypatch):
        monkeypatch.setenv("UMAX_BUDGET", "1000")
        code, _, err = run_main([
            "simulate", "--kind", "ins-peri", "--m", "3", "--n", "50",
            "--reps", "1000", "--seed", "1",
        ], capsys)
        assert code == 4
        assert "refused" in err

    def test_budget_env_override_allows_run(self, capsys, monkeypatch):
        monkeypatch.setenv("UMAX_BUDGET", "1e9")
        code, _, _ = run_main([
            "simulate", "--kind", "ins-peri", "--m", "3", "--n", "10",
            "--reps", "10", "--seed", "1",
        ], capsys)
        assert code == 0


class TestVerify:
    def test_verify_runs_green(self, capsys):
        code, out, _ = run_main(["verify"], capsys)
        report = json.loads(out)
        assert report["results"]["all_passed"]
        assert len(report["results"]["checks"]) >= 5
        assert code == 0

    def test_verify_exits_nonzero_on_failure(self, capsys, monkeypatch):
        from umaxpoly.verify import CheckResult

        monkeypatch.setattr(
            cli.verify_suites, "run_all",
            lambda seed=0: [CheckResult("forced failure", False, "injected")],
        )
        code, out, _ = run_main(["verify"], capsys)
        assert code != 0
        assert not json.loads(out)["results"]["all_passed"]
