"""Command-line behavior: subcommands, config precedence, exit codes."""

import json

import pytest

from sobolev_pointwise.cli import main


class TestIdentities:
    def test_clean_run_exits_zero(self, capsys):
        assert main(["identities", "--draws", "40"]) == 0
        out = capsys.readouterr().out
        assert "identities: PASS" in out
        assert out.count("PASS") >= 8

    def test_corrupted_binomial_exits_one(self, capsys):
        assert main(["identities", "--draws", "40", "--corrupt-binomial"]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_report_file(self, tmp_path, capsys):
        out = tmp_path / "suite.json"
        assert main(["identities", "--draws", "20", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["passed"] is True
        assert len(data["identities"]) == 8


class TestVerify:
    def test_lemma1(self, capsys):
        code = main(["verify", "--scan", "lemma1", "--field", "sin:w=2",
                     "--grid", "-1:1:161", "--pairs", "200", "--seed", "1"])
        assert code == 0
        assert "PASS" in capsys.readouterr().out

    def test_main_scan_with_json_report(self, tmp_path, capsys):
        out = tmp_path / "scan.json"
        code = main(["verify", "--scan", "main", "--m", "2", "--field", "gauss:a=1.5",
                     "--grid", "-1:1:161", "--pairs", "150", "--seed", "2",
                     "--out", str(out)])
        assert code == 0
        data = json.loads(out.read_text())
        assert data["n_violations"] == 0
        assert data["params"]["order"] == 2

    def test_csv_report(self, tmp_path, capsys):
        out = tmp_path / "scan.csv"
        code = main(["verify", "--scan", "lemma1", "--field", "sin:w=2",
                     "--grid", "-1:1:161", "--pairs", "50", "--seed", "0",
                     "--out", str(out), "--format", "csv"])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 51
        assert "np.float64" not in lines[1]

    def test_same_seed_reports_are_byte_identical(self, tmp_path, capsys):
        args = ["verify", "--scan", "main", "--m", "2", "--field", "sin:w=2.5",
                "--grid", "-1:1:201", "--pairs", "120", "--seed", "9"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_negative_grid_bound_in_separate_token(self, capsys):
        # a leading dash in the value must not be mistaken for a flag
        code = main(["verify", "--scan", "lemma1", "--field", "sin:w=2",
                     "--grid", "-1:1:161", "--pairs", "50", "--seed", "0"])
        assert code == 0

    def test_bad_grid_exits_two(self, capsys):
        code = main(["verify", "--scan", "lemma1", "--field", "sin:w=2",
                     "--grid", "oops"])
        assert code == 2
        assert "configuration error" in capsys.readouterr().err

    def test_infeasible_scan_exits_three(self, capsys):
        code = main(["verify", "--scan", "lemma1", "--field", "sin:w=2",
                     "--grid", "-1:1:161", "--min-sep", "3.0", "--max-sep", "4.0",
                     "--pairs", "10"])
        assert code == 3
        assert "infeasible" in capsys.readouterr().err

    def test_hole_domain(self, capsys):
        code = main(["verify", "--scan", "main", "--m", "1",
                     "--field", "poly:x0*x1", "--dim", "2", "--grid", "-1:1:81",
                     "--pairs", "60", "--seed", "6",
                     "--domain", "hole=-0.2,-0.2:0.2,0.2"])
        assert code == 0

    def test_explicit_delta(self, capsys):
        code = main(["verify", "--scan", "main", "--m", "1", "--field", "sin:w=2",
                     "--grid", "-1:1:161", "--pairs", "80", "--seed", "3",
                     "--delta", "0.5"])
        assert code == 0


class TestConfigFile:
    def test_file_supplies_defaults_and_flags_win(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"pairs": 500, "seed": 11, "field": "gauss:a=2"}))
        code = main(["verify", "--scan", "lemma1", "--config", str(cfg),
                     "--grid", "-1:1:161", "--pairs", "80", "--dump-config"])
        assert code == 0
        dump = capsys.readouterr().out
        resolved = json.loads(dump[:dump.index("[lemma1]")])
        assert resolved["pairs"] == 80
        assert resolved["seed"] == 11
        assert resolved["field"] == "gauss:a=2"

    def test_unknown_key_is_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"pears": 3}))
        assert main(["verify", "--scan", "lemma1", "--config", str(cfg)]) == 2

    def test_missing_file_exits_two(self, capsys):
        assert main(["verify", "--scan", "lemma1",
                     "--config", "/nonexistent/cfg.json"]) == 2


class TestGeometry:
    def test_default_table(self, capsys):
        assert main(["geometry"]) == 0
        out = capsys.readouterr().out
        assert out.count("[geometry]") == 3

    def test_report_values(self, tmp_path, capsys):
        out = tmp_path / "geo.json"
        assert main(["geometry", "--dim", "3", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["rows"][0]["segment_ratio_constant"] == pytest.approx(3.2)


class TestMollify:
    def test_short_ladder(self, capsys):
        code = main(["mollify", "--field", "sin:w=3", "--grid", "-1:1:161",
                     "--m", "1", "--pairs", "80", "--seed", "4",
                     "--eps", "0.2,0.1", "--p", "1,2,inf"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.count("[young]") == 6
        assert out.count("[mollified") == 2
        assert "mollify: PASS" in out


class TestTriebel:
    def test_auto_coefficient_passes(self, capsys):
        code = main(["triebel", "--field", "sin:w=2", "--grid", "-1:1:161",
                     "--m", "2", "--pairs", "80", "--seed", "2"])
        assert code == 0

    def test_zero_coefficient_fails(self, capsys):
        code = main(["triebel", "--field", "sin:w=2", "--grid", "-1:1:161",
                     "--m", "2", "--pairs", "80", "--seed", "2", "--g", "zero"])
        assert code == 1
        assert "FAIL" in capsys.readouterr().out


class TestModuleEntry:
    def test_python_dash_m_invocation(self):
        import subprocess
        import sys

        proc = subprocess.run(
            [sys.executable, "-m", "sobolev_pointwise", "geometry", "--dim", "1"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert "[geometry] dim=1" in proc.stdout
