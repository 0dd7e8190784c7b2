#!/usr/bin/env python3
"""
Tests for scenario configuration, verification records and report files.
"""

import csv
import json
import math
from io import StringIO

import pytest

from adsflux import RepClass, ScenarioConfig, load_config
from adsflux.config import SUITE_NAMES, RepresentationConfig, parse_config
from adsflux.errors import ConfigError
from adsflux.report import OutputFormatter, Record, Report, ScanTable, SuiteReport, write_report, write_table


def sample_report() -> Report:
    metric = SuiteReport("metric")
    metric.add(Record("b_check", 1.0, 1.0, 1e-9, seconds=0.25))
    metric.add(Record("a_check", 2.0, 1.0, 0.5, seconds=0.5))
    fiber = SuiteReport("fiber", skipped=["general"])
    fiber.add(Record("period", 0.0, 0.0, 1e-9))
    return Report(seed=7, suites=[metric, fiber])


class TestScenarioConfig:
    """Validation of JSON scenarios"""

    def test_defaults(self):
        config = ScenarioConfig()
        assert config.representation.kind == "octagon"
        assert tuple(config.suites) == SUITE_NAMES
        assert config.loops == ["a1", "b1", "a2", "b2"]
        assert len({h.name for h in config.hamiltonians}) == len(config.hamiltonians)

    def test_empty_document(self):
        assert parse_config("{}") == ScenarioConfig()

    def test_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config('{"tolerance": {}}')

    def test_non_positive_tolerance(self):
        with pytest.raises(ConfigError):
            parse_config('{"tolerances": {"flux_zero": 0}}')

    def test_malformed_json(self):
        with pytest.raises(ConfigError):
            parse_config("{not json")

    def test_duplicate_hamiltonian_names(self):
        with pytest.raises(ConfigError):
            parse_config('{"hamiltonians": [{"name": "h"}, {"name": "h"}]}')

    def test_bad_loop_word(self):
        with pytest.raises(ConfigError):
            parse_config('{"loops": ["a1", "c7"]}')

    def test_unknown_suite(self):
        with pytest.raises(ConfigError):
            parse_config('{"suites": ["metric", "weather"]}')

    def test_conjugate_needs_beta(self):
        with pytest.raises(ConfigError):
            parse_config('{"representation": {"kind": "conjugate"}}')

    def test_conjugate_build(self):
        config = parse_config('{"representation": {"kind": "conjugate", "beta": [[1.5, 0], [0, 0.6666666666666666]]}}')
        assert config.representation.build().rep_class is RepClass.CONJUGATE

    def test_explicit_build_rejects_bad_matrices(self):
        identity = [[1.0, 0.0], [0.0, 1.0]]
        representation = RepresentationConfig(kind="explicit", left=[identity] * 4, right=[identity] * 4)
        with pytest.raises(ConfigError):
            representation.build()

    def test_hamiltonian_spec(self):
        config = parse_config('{"hamiltonians": [{"name": "h", "center": [0.2, 1.1], "sides": "both"}]}')
        spec = config.hamiltonians[0].spec("rk4")
        assert spec.center == complex(0.2, 1.1)
        assert spec.sides == "both"
        assert spec.method == "rk4"

    def test_numerics_override(self):
        numerics = parse_config('{"numerics": {"mesh_subdivision": 5, "fd_step": 1e-4}}').numerics.build()
        assert numerics.mesh_subdivision == 5
        assert numerics.fd_step == 1e-4

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "missing.json"))

    def test_load_file(self, tmp_path):
        path = tmp_path / "scenario.json"
        path.write_text('{"seed": 11, "suites": ["metric"]}')
        config = load_config(str(path))
        assert config.seed == 11
        assert config.suites == ["metric"]
        assert load_config(None) == ScenarioConfig()

    def test_scaled_tolerances(self):
        tolerances = ScenarioConfig().tolerances
        assert tolerances.scaled(2.0).flux_zero == pytest.approx(2.0 * tolerances.flux_zero)
        assert tolerances.scaled(0.0).gauss == 0.0


class TestRecords:
    """Pass/fail semantics of single checks"""

    def test_strict_comparison(self):
        assert Record("x", 1.0, 0.0, 1.5).passed
        assert not Record("x", 1.0, 0.0, 1.0).passed

    def test_zero_tolerance_always_fails(self):
        assert not Record("x", 0.0, 0.0, 0.0).passed

    def test_nan_fails(self):
        assert not Record("x", math.nan, 0.0, 1.0).passed

    def test_failure_record(self):
        record = Record.failure("x", ValueError("boom"), 1e-6)
        assert not record.passed
        assert record.error == "ValueError: boom"
        assert record.to_dict()["value"] is None


class TestReports:
    """Report aggregation and serialization"""

    def test_aggregation(self):
        report = sample_report()
        assert not report.passed
        assert report.suite("fiber").passed
        assert [r.name for r in report.suite("metric").failures()] == ["a_check"]
        with pytest.raises(KeyError):
            report.suite("orbit")

    def test_sorted_and_timing_free(self):
        data = sample_report().to_dict()
        assert [s["name"] for s in data["suites"]] == ["fiber", "metric"]
        assert [r["name"] for r in data["suites"][1]["records"]] == ["a_check", "b_check"]
        assert "seconds" not in json.dumps(data)

    def test_write_report(self, tmp_path):
        path = write_report(sample_report(), str(tmp_path / "out"))
        files = sorted(p.name for p in path.parent.iterdir())
        assert files == ["report.json", "suite_fiber.json", "suite_metric.json", "timings.json"]
        timings = json.loads((path.parent / "timings.json").read_text())
        assert timings["metric"]["a_check"] == 0.5
        assert json.loads(path.read_text())["summary"] == {"fiber": True, "metric": False}

    def test_write_report_deterministic(self, tmp_path):
        first = write_report(sample_report(), str(tmp_path / "one")).read_text()
        second = write_report(sample_report(), str(tmp_path / "two")).read_text()
        assert first == second


class TestScanTables:
    """CSV scan output"""

    def test_header_only(self):
        assert ScanTable("empty", ("eps", "defect")).to_csv() == "eps,defect\n"

    def test_rows_sorted_by_parameter(self, tmp_path):
        table = ScanTable("curvature", ("eps", "defect"), [(0.02, -1e-4), (0.01, -2.5e-5)])
        path = write_table(table, str(tmp_path))
        assert path.name == "scan_curvature.csv"
        rows = list(csv.reader(StringIO(path.read_text())))
        assert rows[0] == ["eps", "defect"]
        assert [float(r[0]) for r in rows[1:]] == [0.01, 0.02]


class TestOutputFormatter:
    """Rendering for the command line"""

    def test_json(self):
        data = sample_report().to_dict()
        assert json.loads(OutputFormatter.format_result(data, "json")) == data

    def test_csv_report(self):
        text = OutputFormatter.format_result(sample_report().to_dict(), "csv")
        rows = list(csv.reader(StringIO(text)))
        assert rows[0][:2] == ["suite", "check"]
        assert len(rows) == 4

    def test_default_report(self):
        text = OutputFormatter.format_result(sample_report().to_dict(), "default")
        assert "metric: FAIL (2 checks, 1 failed)" in text
        assert "  FAIL a_check" in text
        assert "  skipped general" in text
        assert text.endswith("CHECKS FAILED")

    def test_default_plain_dict(self):
        assert OutputFormatter.format_result({"zl": 1j}, "default") == "zl: 1j"
