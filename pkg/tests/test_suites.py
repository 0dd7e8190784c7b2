#!/usr/bin/env python3
"""
Tests for the suite runner: seeding, skipped checks and scan tables.
"""

import pytest

from adsflux.config import ClosedFormConfig, HamiltonianConfig
from adsflux.errors import QuadratureError, UnsupportedRepresentationError
from adsflux.suites import SuiteRun, run_scan, run_verify


class TestSuiteRun:
    """Per-check bookkeeping"""

    def test_unsupported_is_skipped(self):
        run = SuiteRun("demo")

        def unsupported():
            raise UnsupportedRepresentationError("general class")

        assert run.check("needs_diagonal", unsupported, 0.0, 1.0) is None
        assert run.report.skipped == ["needs_diagonal"]
        assert run.report.records == []
        assert run.report.passed

    def test_library_error_is_a_failure(self):
        run = SuiteRun("demo")

        def diverges():
            raise QuadratureError("no convergence")

        run.check("integral", diverges, 0.0, 1.0)
        run.check("exact", lambda: 0.25, 0.25, 1e-12)
        assert [r.name for r in run.report.failures()] == ["integral"]
        assert "QuadratureError" in run.report.failures()[0].error
        assert not run.report.passed


class TestRunVerify:
    """Suite selection and seeding"""

    def test_fast_suites_pass(self, small_scenario):
        report = run_verify(small_scenario, suites=["metric", "fiber", "foliation"])
        assert [s.name for s in report.suites] == ["metric", "fiber", "foliation"]
        assert report.passed

    def test_suite_seeding_is_independent(self, small_scenario):
        alone = run_verify(small_scenario, seed=7, suites=["fiber"]).suite("fiber")
        together = run_verify(small_scenario, seed=7, suites=["metric", "fiber"]).suite("fiber")
        assert alone.to_dict() == together.to_dict()

    @pytest.mark.slow
    def test_every_hamiltonian_is_checked(self, small_scenario):
        config = small_scenario.model_copy(update={
            "hamiltonians": [
                HamiltonianConfig(name="bump", amplitude=0.2, radius=0.6),
                HamiltonianConfig(name="bump_right", amplitude=0.3, radius=0.7, center=(0.3, 1.1), sides="right"),
            ],
            "loops": ["a1"],
            "closed_form": ClosedFormConfig(durations=[]),
        })
        suite = run_verify(config, suites=["flux_holonomy"]).suite("flux_holonomy")
        names = {r.name for r in suite.records}
        for h in ("bump", "bump_right"):
            assert f"hamiltonian.{h}.a1.flux" in names
            assert f"hamiltonian.{h}.a1.holonomy" in names
            assert f"interpolation.{h}.a1.flux_minus_holonomy" in names
        assert suite.passed

    def test_gauss_suite_covers_a_curved_surface(self, small_scenario):
        suite = run_verify(small_scenario, suites=["gauss"]).suite("gauss")
        bent = [r for r in suite.records if r.name.startswith("bent_surface_")]
        assert sorted(r.name for r in bent) == ["bent_surface_horizontality", "bent_surface_lagrangian_defect"]
        assert all(r.passed for r in bent)

    def test_unknown_suite(self, small_scenario):
        with pytest.raises(KeyError):
            run_verify(small_scenario, suites=["topology"])


class TestRunScan:
    """Convergence tables"""

    def test_curvature_scan(self, small_scenario):
        report, table = run_scan(small_scenario, "curvature")
        assert report.passed
        assert [row[0] for row in table.rows] == [0.04, 0.02]
        for eps, _, _, ratio, _ in table.rows:
            assert abs(ratio + 0.5) < 0.625 * eps

    def test_empty_scan_has_header_only(self, small_scenario):
        config = small_scenario.model_copy(
            update={"scans": small_scenario.scans.model_copy(update={"curvature_eps": []})})
        report, table = run_scan(config, "curvature")
        assert report.passed
        assert table.to_csv() == "eps,area,defect,defect_over_area,defect_over_eps2\n"

    def test_unknown_scan(self, small_scenario):
        with pytest.raises(KeyError):
            run_scan(small_scenario, "torsion")
