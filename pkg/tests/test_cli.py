#!/usr/bin/env python3
"""
Tests for the adsflux command line: exit codes, output files and formats.
"""

import json

import pytest

from adsflux.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, EXIT_USAGE, AdsFluxCLI


@pytest.fixture
def scenario_file(tmp_path, small_scenario):
    path = tmp_path / "scenario.json"
    path.write_text(small_scenario.model_copy(update={"suites": ["metric"]}).model_dump_json())
    return str(path)


def run(*args) -> int:
    return AdsFluxCLI().run(list(args))


class TestProject:
    """Single-point projection"""

    def test_identity_frame(self, capsys):
        assert run("project", "--g", "1", "0", "0", "1", "--u", "1", "0", "0", "--format", "json") == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["zl"] == pytest.approx([0.0, 1.0])
        assert data["zr"] == pytest.approx([0.0, 1.0])

    def test_bad_determinant(self, capsys):
        assert run("project", "--g", "2", "0", "0", "1", "--u", "1", "0", "0") == EXIT_FAILED
        assert "Error" in capsys.readouterr().err


class TestVerify:
    """Suite runs and report files"""

    def test_metric_suite_passes(self, scenario_file, tmp_path, capsys):
        out = tmp_path / "out"
        assert run("verify", "--config", scenario_file, "--out", str(out)) == EXIT_OK
        assert "ALL CHECKS PASSED" in capsys.readouterr().out
        assert (out / "report.json").exists()
        assert (out / "suite_metric.json").exists()
        assert (out / "timings.json").exists()

    def test_zero_tolerance_fails(self, scenario_file, tmp_path):
        assert run("verify", "--config", scenario_file, "--out", str(tmp_path), "--tol-scale", "0") == EXIT_FAILED
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["passed"] is False
        assert report["tolerance_scale"] == 0.0

    def test_reports_are_deterministic(self, scenario_file, tmp_path):
        for name in ("one", "two"):
            run("verify", "--config", scenario_file, "--out", str(tmp_path / name), "--seed", "5")
        first = (tmp_path / "one" / "report.json").read_text()
        assert first == (tmp_path / "two" / "report.json").read_text()
        assert json.loads(first)["seed"] == 5

    def test_invalid_config(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"tolerances": {"gauss": -1}}')
        assert run("verify", "--config", str(path)) == EXIT_CONFIG
        assert "Configuration error" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        assert run("verify", "--config", str(tmp_path / "missing.json")) == EXIT_CONFIG

    def test_unknown_hamiltonian(self, scenario_file, tmp_path):
        assert run("flux", "--config", scenario_file, "--out", str(tmp_path), "--hamiltonian", "nope") == EXIT_CONFIG


class TestScanAndExport:
    """Scan tables and mesh export"""

    def test_curvature_scan(self, scenario_file, tmp_path, capsys):
        assert run("scan", "curvature", "--config", scenario_file, "--out", str(tmp_path), "--format", "csv") == EXIT_OK
        lines = (tmp_path / "scan_curvature.csv").read_text().splitlines()
        assert lines[0].startswith("eps,")
        assert len(lines) == 3
        assert capsys.readouterr().out.startswith("eps,")

    def test_mesh_export(self, tmp_path, capsys):
        target = tmp_path / "mesh" / "octagon.txt"
        assert run("mesh-export", "--subdivision", "3", "--output", str(target), "--format", "json") == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["euler_characteristic"] == -2
        assert data["triangles"] == 8 * 3 * 3
        assert target.read_text().startswith("# adsflux surface mesh")


class TestUsage:
    """Argument errors exit with status 2"""

    def test_missing_command(self):
        with pytest.raises(SystemExit) as e:
            run()
        assert e.value.code == 2

    def test_unknown_suite(self):
        with pytest.raises(SystemExit) as e:
            run("verify", "--suite", "weather")
        assert e.value.code == 2

    def test_unknown_scan(self):
        with pytest.raises(SystemExit) as e:
            run("scan", "torsion")
        assert e.value.code == 2

    def test_malformed_loop_word(self, scenario_file, tmp_path, capsys):
        assert run("flux", "--config", scenario_file, "--out", str(tmp_path), "--loop", "c3") == EXIT_USAGE
        assert "Usage error" in capsys.readouterr().err

    def test_malformed_loop_word_in_scenario(self, tmp_path, capsys):
        path = tmp_path / "bad_loop.json"
        path.write_text('{"loops": ["a1 x"]}')
        assert run("verify", "--config", str(path)) == EXIT_CONFIG
        assert "Configuration error" in capsys.readouterr().err
