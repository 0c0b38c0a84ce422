"""Tests for the CLI."""

import csv
import io
import json

from irsnoma.cli import main
from irsnoma.loader import load_preset, load_spec

SINGLE_PAIR = (
    "M: 4\n"
    "K: 1\n"
    "N: 4\n"
    "Q: 1\n"
    "rate_bpcu: 2\n"
    "schemes: [ideal, dft, onoff]\n"
    "snr_db: '0:10:5'\n"
    "trials: 3000\n"
    "seed: 5\n"
)

TWO_PAIR = (
    "M: 4\n"
    "K: 2\n"
    "N: 4\n"
    "Q: 1\n"
    "rate_bpcu: 1\n"
    "snr_db: '10:20:10'\n"
    "trials: 5000\n"
    "seed: 8\n"
)


def _write(tmp_path, text, name="experiment.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestCli:
    def test_no_command_returns_2(self):
        assert main([]) == 2

    def test_missing_config(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.yaml")]) == 2

    def test_needs_exactly_one_source(self, tmp_path):
        path = _write(tmp_path, SINGLE_PAIR)
        assert main(["simulate"]) == 2
        assert main(["simulate", "--config", str(path), "--preset", "fig2a"]) == 2

    def test_preset_list(self, capsys):
        assert main(["preset-list"]) == 0
        out = capsys.readouterr().out
        for name in ("fig2a", "fig2b", "fig3a", "fig3b", "fig3c"):
            assert name in out


class TestSimulate:
    def test_writes_csv(self, tmp_path):
        config = _write(tmp_path, SINGLE_PAIR)
        out = tmp_path / "results.csv"
        assert main(["simulate", "--config", str(config), "--out", str(out)]) == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 9
        assert {r["scheme"] for r in rows} == {"ideal", "dft", "onoff"}
        assert all(r["trials"] == "3000" for r in rows)

    def test_byte_identical_reruns(self, tmp_path):
        config = _write(tmp_path, SINGLE_PAIR)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["simulate", "--config", str(config), "--out", str(a)])
        main(["simulate", "--config", str(config), "--out", str(b), "--workers", "2"])
        assert a.read_bytes() == b.read_bytes()

    def test_stdout(self, tmp_path, capsys):
        config = _write(tmp_path, SINGLE_PAIR)
        assert main(["simulate", "--config", str(config), "--trials", "200"]) == 0
        assert capsys.readouterr().out.startswith("scheme,rho_db,")

    def test_overrides(self, tmp_path):
        config = _write(tmp_path, SINGLE_PAIR)
        out = tmp_path / "results.csv"
        result = main([
            "simulate", "--config", str(config), "--out", str(out),
            "--trials", "500", "--seed", "9", "--snr-db", "0:4:2", "--scheme", "onoff",
        ])
        assert result == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert [r["rho_db"] for r in rows] == ["0.0", "2.0", "4.0"]
        assert all(r["scheme"] == "onoff" and r["trials"] == "500" for r in rows)

    def test_empty_grid_writes_nothing(self, tmp_path, capsys):
        config = _write(tmp_path, SINGLE_PAIR)
        out = tmp_path / "results.csv"
        result = main([
            "simulate", "--config", str(config), "--out", str(out), "--snr-db", "10:0:1",
        ])
        assert result == 2
        assert not out.exists()
        assert "--snr-db" in capsys.readouterr().err

    def test_line_precise_error(self, tmp_path, capsys):
        config = _write(tmp_path, SINGLE_PAIR.replace("Q: 1", "Q: 3"))
        assert main(["simulate", "--config", str(config)]) == 2
        assert "experiment.yaml:4:" in capsys.readouterr().err

    def test_infeasible_ideal(self, tmp_path, capsys):
        text = "M: 4\nK: 3\nN: 2\nschemes: [ideal]\nsnr_db: '0:0:1'\ntrials: 100\n"
        config = _write(tmp_path, text)
        out = tmp_path / "results.csv"
        assert main(["simulate", "--config", str(config), "--out", str(out)]) == 2
        assert "E001" in capsys.readouterr().err
        assert not out.exists()

    def test_run_log(self, tmp_path):
        config = _write(tmp_path, SINGLE_PAIR)
        log = tmp_path / "runs.jsonl"
        main([
            "simulate", "--config", str(config), "--out", str(tmp_path / "r.csv"),
            "--trials", "100", "--log", str(log),
        ])
        lines = log.read_text().strip().split("\n")
        assert len(lines) == 9
        assert json.loads(lines[0])["trials"] == 100

    def test_bad_thread_env(self, tmp_path, monkeypatch):
        monkeypatch.setenv("IRSNOMA_THREADS", "many")
        config = _write(tmp_path, SINGLE_PAIR)
        assert main(["simulate", "--config", str(config), "--trials", "10"]) == 2


class TestAnalytic:
    def test_preset(self, tmp_path):
        out = tmp_path / "analytic.csv"
        assert main(["analytic", "--preset", "fig2b", "--out", str(out)]) == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert len(rows) == 3 * 13
        at_60 = {r["Q"]: float(r["outage_analytic"]) for r in rows if r["rho_db"] == "60.0"}
        assert at_60["1"] < at_60["2"] < at_60["3"]

    def test_multi_pair_columns(self, tmp_path):
        out = tmp_path / "analytic.csv"
        assert main(["analytic", "--preset", "fig3b", "--out", str(out)]) == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert all(r["floor"] and r["outage_analytic"] for r in rows)

    def test_tau_non_positive(self, tmp_path):
        config = _write(tmp_path, SINGLE_PAIR.replace("rate_bpcu: 2", "rate_bpcu: 3"))
        out = tmp_path / "analytic.csv"
        assert main(["analytic", "--config", str(config), "--out", str(out)]) == 0
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        assert {r["outage_analytic"] for r in rows} == {"1.0"}

    def test_stdout_matches_file(self, tmp_path, capsys):
        config = _write(tmp_path, SINGLE_PAIR)
        out = tmp_path / "analytic.csv"
        assert main(["analytic", "--config", str(config)]) == 0
        printed = capsys.readouterr().out
        assert main(["analytic", "--config", str(config), "--out", str(out)]) == 0
        assert "CSV written to" in capsys.readouterr().err
        assert out.read_text() == printed


class TestValidate:
    def test_single_pair_passes(self, tmp_path, capsys):
        config = _write(tmp_path, SINGLE_PAIR.replace("trials: 3000", "trials: 20000"))
        assert main(["validate", "--config", str(config)]) == 0
        assert "3/3 within" in capsys.readouterr().out

    def test_multi_pair_passes(self, tmp_path):
        config = _write(tmp_path, TWO_PAIR)
        assert main(["validate", "--config", str(config)]) == 0

    def test_designed_mismatch_fails(self, tmp_path, capsys):
        config = _write(tmp_path, TWO_PAIR)
        assert main(["validate", "--config", str(config), "--analytic-set", "K=1"]) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_json_report_to_file(self, tmp_path):
        config = _write(tmp_path, TWO_PAIR)
        report = tmp_path / "report.json"
        result = main([
            "validate", "--config", str(config), "--format", "json", "--output", str(report),
        ])
        assert result == 0
        data = json.loads(report.read_text())
        assert data["summary"]["total"] == 2
        assert len(data["evidence_hash"]) == 64

    def test_html_report(self, tmp_path, capsys):
        config = _write(tmp_path, TWO_PAIR)
        assert main(["validate", "--config", str(config), "--format", "html"]) == 0
        assert "<html" in capsys.readouterr().out

    def test_no_closed_form(self, tmp_path):
        config = _write(tmp_path, TWO_PAIR.replace("Q: 1", "Q: 2"))
        assert main(["validate", "--config", str(config)]) == 2

    def test_bad_analytic_set(self, tmp_path):
        config = _write(tmp_path, TWO_PAIR)
        assert main(["validate", "--config", str(config), "--analytic-set", "K"]) == 2
        assert main(["validate", "--config", str(config), "--analytic-set", "rho=3"]) == 2
        assert main(["validate", "--config", str(config), "--analytic-set", "K=9"]) == 2


class TestLint:
    def test_clean(self, tmp_path, capsys):
        config = _write(tmp_path, SINGLE_PAIR.replace("trials: 3000", "trials: 100000"))
        assert main(["lint", "--config", str(config)]) == 0
        assert "No issues found." in capsys.readouterr().out

    def test_warnings_only(self, tmp_path, capsys):
        config = _write(tmp_path, SINGLE_PAIR)
        assert main(["lint", "--config", str(config)]) == 0
        assert "W002" in capsys.readouterr().out

    def test_errors(self, tmp_path, capsys):
        text = "M: 4\nK: 3\nN: 2\nschemes: [ideal, ideal]\nsnr_db: '0:0:1'\n"
        config = _write(tmp_path, text)
        assert main(["lint", "--config", str(config)]) == 1
        out = capsys.readouterr().out
        assert "E001" in out
        assert "E002" in out

    def test_for_validation(self, tmp_path, capsys):
        config = _write(tmp_path, TWO_PAIR.replace("Q: 1", "Q: [1, 2]"))
        main(["lint", "--config", str(config), "--for-validation"])
        assert "W003" in capsys.readouterr().out


class TestInit:
    def test_creates_file(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["init"]) == 0
        assert load_spec(tmp_path / "experiment.yaml") == load_preset("fig2a")

    def test_other_preset(self, tmp_path):
        path = tmp_path / "fig3c.yaml"
        assert main(["init", "--preset", "fig3c", "--path", str(path)]) == 0
        assert load_spec(path) == load_preset("fig3c")

    def test_skips_existing(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        (tmp_path / "experiment.yaml").write_text("existing")
        assert main(["init"]) == 0
        assert (tmp_path / "experiment.yaml").read_text() == "existing"

    def test_unknown_preset(self, tmp_path):
        assert main(["init", "--preset", "nope", "--path", str(tmp_path / "x.yaml")]) == 2
