"""Command-line surface: exit codes, output formats, determinism, refinement."""

import re

from qha.cli import main
from qha.scenarios import builtin, save_scenario


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerify:
    def test_single_scenario_passes(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--scenario", "wh:4")
        assert code == 0
        assert "failed: 0" in out

    def test_all_builtins_pass(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--all", "--trials", "4")
        assert code == 0
        assert "failed: 0" in out

    def test_broken_fixture_exits_one(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--scenario", "broken-measure")
        assert code == 1
        assert "FAIL" in out

    def test_missing_file_exits_two(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--scenario", "/no/such/file.ini")
        assert code == 2
        assert "error" in err

    def test_unknown_id_exits_two(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--scenario", "bogus:thing")
        assert code == 2

    def test_no_scenario_exits_two(self, capsys):
        code, out, err = run_cli(capsys, "verify")
        assert code == 2

    def test_scenario_file_source(self, capsys, tmp_path):
        path = tmp_path / "wh4.ini"
        save_scenario(builtin("wh:4"), path)
        code, out, err = run_cli(capsys, "verify", "--scenario", str(path))
        assert code == 0

    def test_structured_format_fields(self, capsys):
        code, out, err = run_cli(capsys, "verify", "--scenario", "wh:2",
                                 "--format", "structured")
        assert code == 0
        assert out.startswith("qha-report v1")
        assert "scenario wh:2" in out and "seed 1729" in out
        row = next(line for line in out.splitlines() if line.startswith("check="))
        for field in ("check=", "claim=", "lhs=", "rhs=", "abs_err=", "rel_err=",
                      "tol_abs=", "tol_rel=", "pass=", "skipped="):
            assert field in row
        assert re.search(r"summary checks=\d+ failed=0", out)

    def test_structured_output_deterministic(self, capsys):
        for sid in ("wh:3", "affine-wavelet:coarse"):
            _, out1, _ = run_cli(capsys, "verify", "--scenario", sid,
                                 "--format", "structured")
            _, out2, _ = run_cli(capsys, "verify", "--scenario", sid,
                                 "--format", "structured")
            assert out1 == out2, sid

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "report.txt"
        code, out, err = run_cli(capsys, "verify", "--scenario", "wh:2",
                                 "--format", "structured", "--out", str(path))
        assert code == 0 and out == ""
        assert path.read_text().startswith("qha-report v1")

    def test_seed_flag_changes_report_header(self, capsys):
        _, out, _ = run_cli(capsys, "verify", "--scenario", "wh:2",
                            "--format", "structured", "--seed", "5")
        assert "seed 5" in out

    def test_env_seed_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("QHA_SEED", "123")
        _, out, _ = run_cli(capsys, "verify", "--scenario", "wh:2",
                            "--format", "structured")
        assert "seed 123" in out

    def test_bad_env_seed_exits_two(self, capsys, monkeypatch):
        monkeypatch.setenv("QHA_SEED", "xyz")
        code, out, err = run_cli(capsys, "verify", "--scenario", "wh:2")
        assert code == 2


class TestDuflo:
    def test_wh4_scalar(self, capsys):
        code, out, err = run_cli(capsys, "duflo", "--scenario", "wh:4")
        assert code == 0
        assert "D = 0.25 * 1" in out

    def test_translation_scalar_one(self, capsys):
        code, out, err = run_cli(capsys, "duflo", "--scenario", "translation:cyclic(6)")
        assert code == 0
        assert "D = 1 * 1" in out

    def test_s3_std_scalar_two(self, capsys):
        code, out, err = run_cli(capsys, "duflo", "--scenario", "irrep:s3:std")
        assert code == 0
        assert "D = 2 * 1" in out

    def test_spectrum_per_block(self, capsys):
        code, out, err = run_cli(capsys, "duflo", "--scenario", "wh:2")
        assert "block 0: spectrum of D" in out
        assert "cross-check residual" in out
        assert "semi-invariance defect" in out

    def test_broken_estimate_exits_one(self, capsys):
        code, out, err = run_cli(capsys, "duflo", "--scenario", "broken-measure")
        assert code == 1
        assert "estimate failed" in out


class TestRefine:
    def test_finite_scenario_exits_two(self, capsys):
        code, out, err = run_cli(capsys, "refine", "--scenario", "wh:4")
        assert code == 2
        assert "refinement is meaningless" in err

    def test_single_grid_exits_two(self, capsys):
        code, out, err = run_cli(capsys, "refine", "--scenario",
                                 "affine-wavelet:coarse", "--grids", "1")
        assert code == 2

    def test_monotone_table_on_coarse_preset(self, capsys):
        code, out, err = run_cli(capsys, "refine", "--scenario",
                                 "affine-wavelet:coarse", "--grids", "3")
        assert code == 0
        rows = [line.split() for line in out.splitlines() if re.match(r"\s*\d+\s", line)]
        assert len(rows) == 3
        orth = [float(r[2]) for r in rows]
        semi = [float(r[3]) for r in rows]
        assert orth[0] > orth[1] > orth[2]
        assert semi[0] > semi[1] > semi[2]


class TestList:
    def test_list_prints_catalog(self, capsys):
        code, out, err = run_cli(capsys, "list")
        assert code == 0
        assert "wh:4" in out
        assert "affine-wavelet:default" in out
        assert "broken-measure" in out
