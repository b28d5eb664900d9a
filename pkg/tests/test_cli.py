"""Command-line surface: outputs, manifests, exit codes, determinism."""

import json

import pytest

from gaugebench.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestPoint:
    def test_json_report_to_stdout(self, capsys):
        code, out, _ = run(
            capsys, "point", "--eta", "1e-3", "--gtilde", "0.2", "--tol", "1e-5"
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["diagnostics"]["g_tilde"] == pytest.approx(0.2)
        assert set(payload["truncated"]) == {"coulomb_2", "coulomb_3", "cfield_2", "cfield_3"}
        for entry in payload["truncated"].values():
            assert entry["relative_error"] >= 0.0

    def test_output_is_deterministic(self, capsys):
        argv = ("point", "--eta", "1e-3", "--f", "100", "--tol", "1e-5")
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_f_and_gtilde_are_exclusive(self, capsys):
        code, _, err = run(capsys, "point", "--eta", "1e-3", "--f", "1", "--gtilde", "0.1")
        assert code == EXIT_USAGE
        assert "exactly one" in err

    def test_resonant_requires_eta(self, capsys):
        code, _, _ = run(capsys, "point", "--f", "1")
        assert code == EXIT_USAGE

    def test_writes_file(self, capsys, tmp_path):
        out_path = tmp_path / "point.json"
        code, out, _ = run(
            capsys, "point", "--eta", "1e-3", "--f", "10", "--tol", "1e-5",
            "--out", str(out_path),
        )
        assert code == EXIT_OK
        assert out == ""
        assert json.loads(out_path.read_text())["geometry"]["f_eV"] == 10.0


class TestConverge:
    def test_report_contains_history(self, capsys):
        code, out, _ = run(
            capsys, "converge", "--eta", "1e-3", "--f", "50", "--tol", "1e-5",
            "--gauges", "cfield",
        )
        assert code == EXIT_OK
        payload = json.loads(out)
        assert payload["gauge"] == "cfield"
        assert len(payload["report"]["history"]) >= 2

    def test_detuned_mode(self, capsys):
        code, out, _ = run(
            capsys, "converge", "--detuned", "--nu", "1.0", "--omega10-ev", "1.0",
            "--f", "100", "--tol", "1e-5", "--gauges", "cfield",
        )
        assert code == EXIT_OK
        assert json.loads(out)["geometry"]["nu_eV"] == 1.0


class TestSweep:
    def test_writes_csv_and_manifest(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.csv"
        code, _, err = run(
            capsys, "sweep",
            "--eta-min", "1e-3", "--eta-max", "3e-3", "--eta-steps", "2",
            "--f-min", "10", "--f-max", "100", "--f-steps", "2",
            "--tol", "1e-5", "--out", str(out_path), "--json",
        )
        assert code == EXIT_OK
        assert "4/4" in err
        lines = out_path.read_text().strip().split("\n")
        assert len(lines) == 5
        manifest = json.loads((tmp_path / "sweep.manifest.json").read_text())
        assert manifest["command"] == "sweep"
        assert manifest["config"]["y_axis"]["count"] == 2
        assert str(out_path) in manifest["output_paths"]
        records = json.loads((tmp_path / "sweep.json").read_text())
        assert len(records) == 4

    def test_stdout_mode(self, capsys):
        code, out, _ = run(
            capsys, "sweep",
            "--eta-min", "1e-3", "--eta-max", "3e-3", "--eta-steps", "2",
            "--f-min", "10", "--f-max", "100", "--f-steps", "2",
            "--tol", "1e-5", "--stdout",
        )
        assert code == EXIT_OK
        assert out.startswith("mode,eta,")

    def test_config_file_with_flag_precedence(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"eta_min": 1e-3, "eta_max": 3e-3, "eta_steps": 2,
                                      "f_min": 10, "f_max": 100, "f_steps": 3,
                                      "tol": 1e-5}))
        code, out, _ = run(
            capsys, "sweep", "--config", str(config), "--f-steps", "2", "--stdout"
        )
        assert code == EXIT_OK
        # flag overrides the file: 2x2 grid, not 2x3
        assert len(out.strip().split("\n")) == 5

    def test_missing_config_file(self, capsys):
        code, _, err = run(capsys, "sweep", "--config", "/nonexistent/config.json")
        assert code == EXIT_IO
        assert "cannot read" in err


class TestOverlay:
    def test_stdout_has_eight_rows(self, capsys):
        code, out, _ = run(capsys, "overlay")
        assert code == EXIT_OK
        lines = out.strip().split("\n")
        assert len(lines) == 9
        assert lines[0].startswith("name,eta_min")

    def test_micron_units(self, capsys):
        _, natural, _ = run(capsys, "overlay", "--units", "natural")
        _, microns, _ = run(capsys, "overlay", "--units", "um")
        assert natural != microns
        assert ",um," in microns

    def test_missing_regimes_file(self, capsys):
        code, _, _ = run(capsys, "overlay", "--regimes", "/nonexistent.csv")
        assert code != EXIT_OK


class TestUsageErrors:
    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["frobnicate"])
        assert excinfo.value.code == 2

    def test_bad_levels_list(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["point", "--eta", "1e-3", "--f", "1", "--levels", "2,5"])
        assert excinfo.value.code == 2

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])
        assert excinfo.value.code == 0
