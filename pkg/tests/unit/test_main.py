"""
Unit tests for the command-line entry point.
Each test drives main() with an argv list and inspects stdout, files and exit codes.
"""

import json

import pandas as pd
import pytest

import main
from core.exceptions import InvariantViolationException
from core.logger import configure_logging
from repositories.voyage_repo import VoyageRepository
from services.ais.synthetic import AIS_FILE, METADATA_FILE


def _run(capsys, *argv):
    code = main.main(list(argv))
    return code, capsys.readouterr().out


class TestEquilibriumCommand:
    """Test suite for the equilibrium command"""

    def test_worked_example(self, tmp_path, capsys):
        code, out = _run(capsys, "equilibrium", "--types", "0,0.5,3", "--gamma", "1", "--out-dir", str(tmp_path))
        assert code == 0
        lines = out.splitlines()
        assert "Θ1 = {0}" in lines
        assert "Θ2 = [0.5, 1]" in lines
        assert "Θ3 = {3}" in lines
        assert "green (0, 1, 3)" in lines
        assert "slack total 0.5000 h" in lines

        payload = json.loads((tmp_path / "equilibrium.json").read_text(encoding="utf-8"))
        assert payload["green"] == pytest.approx([0.0, 1.0, 3.0])
        assert payload["intervals"][1]["player"] == 2
        schedule = pd.read_csv(tmp_path / "schedule.csv")
        assert set(schedule["profile"]) == {"sftw", "green"}
        assert (tmp_path / "intervals.csv").exists()
        assert (tmp_path / "run-manifest.json").exists()

    def test_open_interval_notation(self, tmp_path, capsys):
        code, out = _run(capsys, "equilibrium", "--types", "0,0.5,0.8", "--gamma", "1", "--out-dir", str(tmp_path))
        assert code == 0
        assert "Θ2 = [0.5, 0.8)" in out.splitlines()

    def test_ties_are_singletons(self, tmp_path, capsys):
        code, out = _run(capsys, "equilibrium", "--types", "1,1", "--gamma", "0.5", "--out-dir", str(tmp_path))
        assert code == 0
        assert "Θ1 = {1}" in out and "Θ2 = {1}" in out

    def test_verify(self, tmp_path, capsys):
        code, out = _run(
            capsys, "equilibrium", "--types", "0,0.5,3", "--gamma", "1", "--verify", "--out-dir", str(tmp_path)
        )
        assert code == 0
        assert out.splitlines()[-1] == "equilibrium"

    def test_profile_file(self, tmp_path, capsys):
        profile = tmp_path / "profile.json"
        profile.write_text(json.dumps({"types": [0, 0.5, 3], "gamma": 1}), encoding="utf-8")
        code, out = _run(capsys, "equilibrium", "--input", str(profile), "--out-dir", str(tmp_path / "out"))
        assert code == 0
        assert "green (0, 1, 3)" in out

    def test_closed_then_open_upper_ends(self, tmp_path, capsys):
        code, out = _run(capsys, "equilibrium", "--types", "0,0.5,1.2,1.8", "--gamma", "1", "--out-dir", str(tmp_path))
        assert code == 0
        lines = out.splitlines()
        assert "Θ1 = {0}" in lines
        assert "Θ2 = [0.5, 1]" in lines
        assert "Θ3 = [1.2, 1.8)" in lines
        assert "Θ4 = [1.8, 3]" in lines
        assert "slack total 2.3000 h" in lines

        schedule = pd.read_csv(tmp_path / "schedule.csv")
        sftw = schedule[schedule["profile"] == "sftw"]["completion"].tolist()
        green = schedule[schedule["profile"] == "green"]["completion"].tolist()
        assert green == pytest.approx(sftw)
        assert sftw == pytest.approx([1.0, 2.0, 3.0, 4.0])

    def test_verify_cross_checks_enumeration(self, tmp_path, capsys, mocker):
        mocker.patch("services.queue.waiting.enumerated_expectations", return_value=(99.0, 1.0))
        code, _ = _run(
            capsys, "equilibrium", "--types", "1,1,1", "--gamma", "0.5", "--verify", "--out-dir", str(tmp_path)
        )
        assert code == 4

    def test_enumeration_cap_from_config(self, tmp_path, capsys, mocker):
        mocker.patch("services.queue.waiting.enumerated_expectations", return_value=(99.0, 1.0))
        config = tmp_path / "run.cfg"
        config.write_text("enumeration_cap=2\n", encoding="utf-8")
        code, out = _run(
            capsys,
            "equilibrium",
            "--types",
            "1,1,1",
            "--gamma",
            "0.5",
            "--verify",
            "--config",
            str(config),
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        assert out.splitlines()[-1] == "equilibrium"

    @pytest.mark.parametrize(
        "argv",
        [
            ["--types", "a,b", "--gamma", "1"],
            ["--types", "3,1", "--gamma", "1"],
            ["--types", "0,1"],
            ["--types", "0,1", "--gamma", "-1"],
        ],
    )
    def test_input_errors(self, tmp_path, capsys, argv):
        code, _ = _run(capsys, "equilibrium", *argv, "--out-dir", str(tmp_path))
        assert code == 2


class TestPipelineCommands:
    """Test suite for the synth and ingest commands"""

    def test_synth_then_ingest(self, tmp_path, capsys):
        corpus = tmp_path / "corpus"
        code, _ = _run(capsys, "synth", "--out-dir", str(corpus))
        assert code == 0
        assert (corpus / AIS_FILE).exists() and (corpus / METADATA_FILE).exists()

        out_dir = tmp_path / "run"
        code, out = _run(
            capsys,
            "ingest",
            "--input",
            str(corpus / AIS_FILE),
            "--metadata",
            str(corpus / METADATA_FILE),
            "--out-dir",
            str(out_dir),
        )
        assert code == 0
        assert "gamma 4.0000 h" in out
        assert "voyages 3 (incomplete 0, without berth 1)" in out
        assert len(VoyageRepository(out_dir).load_voyages()) == 3

        calibration = json.loads((out_dir / "calibration.json").read_text(encoding="utf-8"))
        assert calibration["effective_berths"] == pytest.approx(9.0)
        manifest = json.loads((out_dir / "run-manifest.json").read_text(encoding="utf-8"))
        assert manifest["command"] == "ingest"
        assert len(manifest["inputs"]) == 2

        code, out = _run(capsys, "slack", "--input", str(out_dir / "voyages.csv"), "--out-dir", str(out_dir))
        assert code == 0
        assert "total 0.0000 h" in out

    def test_port_radius_flag(self, tmp_path, capsys, synthetic_dir):
        code, out = _run(
            capsys, "ingest", "--input", str(synthetic_dir / AIS_FILE), "--r-port", "50", "--out-dir", str(tmp_path)
        )
        assert code == 0
        assert "entries 3" in out

    def test_empty_input(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("", encoding="utf-8")
        code, _ = _run(capsys, "ingest", "--input", str(path), "--out-dir", str(tmp_path))
        assert code == 3

    def test_missing_input(self, tmp_path, capsys):
        code, _ = _run(capsys, "ingest", "--input", str(tmp_path / "nope.csv"), "--out-dir", str(tmp_path))
        assert code == 2

    def test_ingest_needs_input(self, tmp_path, capsys):
        code, _ = _run(capsys, "ingest", "--out-dir", str(tmp_path))
        assert code == 2


class TestSlackCommand:
    """Test suite for the slack command"""

    @pytest.fixture
    def voyages_path(self, tmp_path, make_voyage):
        from datetime import datetime, timezone

        voyages = [make_voyage("A", 30.0), make_voyage("B", 30.5), make_voyage("C", 33.0)]
        return VoyageRepository(tmp_path).save_voyages(voyages, datetime(2024, 1, 1, tzinfo=timezone.utc))

    def test_worked_fixture(self, tmp_path, capsys, voyages_path):
        code, out = _run(capsys, "slack", "--input", str(voyages_path), "--gamma", "1", "--out-dir", str(tmp_path))
        assert code == 0
        assert out.strip() == "mean 0.1667 h, median 0.0000 h, total 0.5000 h"
        assert len((tmp_path / "slack.csv").read_text(encoding="utf-8").splitlines()) == 4

    def test_window_split_and_verify(self, tmp_path, capsys, voyages_path):
        code, out = _run(
            capsys,
            "slack",
            "--input",
            str(voyages_path),
            "--gamma",
            "1",
            "--window-split",
            "day",
            "--verify",
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        assert "total 0.5000 h" in out

    def test_gamma_required(self, tmp_path, capsys, voyages_path):
        code, _ = _run(capsys, "slack", "--input", str(voyages_path), "--out-dir", str(tmp_path / "out"))
        assert code == 2

    def test_schema_mismatch(self, tmp_path, capsys):
        path = tmp_path / "voyages.csv"
        path.write_text("vessel\nA\n", encoding="utf-8")
        code, _ = _run(capsys, "slack", "--input", str(path), "--gamma", "1", "--out-dir", str(tmp_path))
        assert code == 2

    def test_no_voyages(self, tmp_path, capsys):
        path = tmp_path / "voyages.csv"
        path.write_text("", encoding="utf-8")
        code, _ = _run(capsys, "slack", "--input", str(path), "--gamma", "1", "--out-dir", str(tmp_path))
        assert code == 3


class TestSimulateCommand:
    """Test suite for the simulate command"""

    def test_zero_shift(self, tmp_path, capsys):
        code, out = _run(
            capsys, "simulate", "--players", "2", "--shift", "0", "--samples", "2000", "--out-dir", str(tmp_path)
        )
        assert code == 0
        gains = pd.read_csv(tmp_path / "deviation_gains.csv")
        assert (gains["gain"] == 0.0).all()
        assert "best response to type 0.3: 0.3" in out

    @pytest.mark.slow
    def test_default_grid(self, tmp_path, capsys):
        code, out = _run(capsys, "simulate", "--samples", "5000", "--out-dir", str(tmp_path))
        assert code == 0
        assert len(pd.read_csv(tmp_path / "deviation_gains.csv")) == 27
        assert "VIOLATION" not in out

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        argv = ["simulate", "--players", "2,3", "--gamma", "0.1", "--samples", "3000", "--seed", "5"]
        _run(capsys, *argv, "--out-dir", str(tmp_path))
        first = {name: (tmp_path / name).read_bytes() for name in ("deviation_gains.csv", "best_response.csv")}
        _run(capsys, *argv, "--out-dir", str(tmp_path))
        second = {name: (tmp_path / name).read_bytes() for name in ("deviation_gains.csv", "best_response.csv")}
        assert first == second


class TestExitCodes:
    """Test suite for exit code mapping"""

    def test_invariant_violation(self, tmp_path, capsys, mocker):
        mocker.patch.dict(main.COMMANDS, {"synth": mocker.Mock(side_effect=InvariantViolationException("broken"))})
        code, _ = _run(capsys, "synth", "--out-dir", str(tmp_path))
        assert code == 4

    def test_unexpected_error(self, tmp_path, capsys, mocker):
        mocker.patch.dict(main.COMMANDS, {"synth": mocker.Mock(side_effect=RuntimeError("boom"))})
        code, _ = _run(capsys, "synth", "--out-dir", str(tmp_path))
        assert code == 1

    def test_unknown_config_key(self, tmp_path, capsys):
        config = tmp_path / "run.cfg"
        config.write_text("not_a_field=1\n", encoding="utf-8")
        code, _ = _run(capsys, "synth", "--config", str(config), "--out-dir", str(tmp_path))
        assert code == 2


class TestLoggingConfig:
    """Test suite for log settings taken from the resolved run configuration"""

    @pytest.fixture(autouse=True)
    def restore_logging(self):
        yield
        configure_logging("INFO")

    def test_config_file_log_settings_apply(self, tmp_path, capsys):
        log_path = tmp_path / "logs" / "run.log"
        config = tmp_path / "run.cfg"
        config.write_text(f"log_file={log_path}\nlog_level=DEBUG\n", encoding="utf-8")

        code, _ = _run(
            capsys,
            "equilibrium",
            "--types",
            "0,0.5,3",
            "--gamma",
            "1",
            "--config",
            str(config),
            "--out-dir",
            str(tmp_path),
        )
        assert code == 0
        assert log_path.exists()
        assert "[CLI] Running equilibrium" in log_path.read_text(encoding="utf-8")

    def test_json_log_format(self, tmp_path, capsys):
        log_path = tmp_path / "run.jsonl"
        config = tmp_path / "run.cfg"
        config.write_text(f"log_file={log_path}\nlog_format=json\n", encoding="utf-8")

        code, _ = _run(capsys, "synth", "--config", str(config), "--out-dir", str(tmp_path / "corpus"))
        assert code == 0
        records = [json.loads(line) for line in log_path.read_text(encoding="utf-8").splitlines()]
        assert records and all("level" in r for r in records)
