#!/usr/bin/env python3
"""
Tests for the genus-two octagon mesh, discrete harmonic forms and their exact flows.
"""

import numpy as np
import pytest

from adsflux import LoopWord, MeshFlow, SurfaceMesh, harmonic_one_form
from adsflux.errors import MeshFormatError
from adsflux.lagrangian_lab import area_distortion


class TestMeshTopology:
    """Gluing of the octagon sides"""

    def test_euler_characteristic(self, coarse_mesh):
        """The glued octagon is a genus-two surface"""
        assert coarse_mesh.euler_characteristic() == -2

    def test_all_corners_identified(self, coarse_mesh):
        """The eight octagon corners form a single vertex class"""
        cls, _ = coarse_mesh.vertex_classes()
        corners = [int(np.argmin(np.abs(coarse_mesh.klein - v).sum(axis=-1))) for v in coarse_mesh.domain.vertices]
        assert len({int(cls[c]) for c in corners}) == 1

    def test_every_boundary_edge_glued(self, coarse_mesh):
        n = coarse_mesh.subdivision
        assert len(coarse_mesh.boundary_edges()) == 8 * n
        assert coarse_mesh.identified_edge_pairs() == 4 * n

    def test_triangle_count(self, coarse_mesh):
        assert len(coarse_mesh.triangles) == 8 * coarse_mesh.subdivision ** 2

    def test_rejects_bad_subdivision(self, domain):
        with pytest.raises(ValueError):
            SurfaceMesh.octagon(0, domain)


class TestMeshText:
    """Plain-text serialization"""

    def test_round_trip(self, coarse_mesh, domain):
        copy = SurfaceMesh.from_text(coarse_mesh.to_text(), domain)
        assert np.array_equal(copy.triangles, coarse_mesh.triangles)
        assert np.array_equal(copy.identifications, coarse_mesh.identifications)
        assert np.abs(copy.vertices - coarse_mesh.vertices).max() == 0.0
        assert copy.euler_characteristic() == -2

    def test_unknown_record(self):
        with pytest.raises(MeshFormatError):
            SurfaceMesh.from_text("v 0 1\nq 1 2 3\n")

    def test_malformed_number(self):
        with pytest.raises(MeshFormatError):
            SurfaceMesh.from_text("v zero 1\n")

    def test_missing_vertex(self):
        with pytest.raises(MeshFormatError):
            SurfaceMesh.from_text("v 0 1\nv 1 1\nt 0 1 2\n")

    def test_vertex_below_axis(self):
        with pytest.raises(MeshFormatError):
            SurfaceMesh.from_text("v 0 -1\n")


class TestLaplacian:
    """Quotient cotangent Laplacian"""

    def test_symmetric(self, coarse_mesh):
        lap, _ = coarse_mesh.laplacian()
        assert abs(lap - lap.T).max() < 1e-12

    def test_kills_constants(self, coarse_mesh):
        lap, _ = coarse_mesh.laplacian()
        assert np.abs(lap @ np.ones(lap.shape[0])).max() < 1e-9


class TestHarmonicForms:
    """Harmonic representatives with prescribed periods"""

    def test_periods(self, a1_form):
        expected = {"a1": 1.0, "b1": 0.0, "a2": 0.0, "b2": 0.0, "a1 b1^-1": 1.0, "a1 a1": 2.0}
        for word, period in expected.items():
            assert a1_form.period(LoopWord.parse(word)) == pytest.approx(period, abs=1e-9)

    def test_coclosed(self, a1_form):
        assert a1_form.residual < 1e-8

    def test_linearity(self, coarse_mesh, rng):
        p1, p2 = rng.normal(size=4), rng.normal(size=4)
        f1, f2 = harmonic_one_form(coarse_mesh, p1), harmonic_one_form(coarse_mesh, p2)
        combined = harmonic_one_form(coarse_mesh, p1 + p2)
        assert np.abs(combined.values - f1.values - f2.values).max() < 1e-9

    def test_zero_periods(self, coarse_mesh):
        assert harmonic_one_form(coarse_mesh, np.zeros(4)).is_zero()

    def test_scaled(self, a1_form):
        assert a1_form.scaled(3.0).period(LoopWord.parse("a1")) == pytest.approx(3.0, abs=1e-9)

    def test_needs_four_periods(self, coarse_mesh):
        with pytest.raises(ValueError):
            harmonic_one_form(coarse_mesh, [1.0, 0.0])


class TestMeshFlow:
    """Exact flow of the symplectic dual of a harmonic form"""

    def test_preserves_primitive(self, a1_form, domain, rng, numerics):
        """Trajectories stay on level sets of the primitive"""
        z = domain.sample(20, rng, margin=0.05)
        moved = MeshFlow(a1_form, 1.0, numerics).flow(z, 0.2)
        assert np.abs(a1_form.value(moved) - a1_form.value(z)).max() < 1e-8

    def test_moves_points(self, a1_form, domain, rng, numerics):
        z = domain.sample(20, rng, margin=0.05)
        moved = MeshFlow(a1_form, 1.0, numerics).flow(z, 0.2)
        assert np.abs(moved - z).max() > 1e-3

    def test_reversible(self, a1_form, domain, rng, numerics):
        z = domain.sample(10, rng, margin=0.05)
        flow = MeshFlow(a1_form, 1.0, numerics)
        assert np.abs(flow.flow(flow.flow(z, 0.15), -0.15) - z).max() < 1e-7

    def test_dense_output(self, a1_form, domain, rng, numerics):
        z = domain.sample(5, rng, margin=0.05)
        flow = MeshFlow(a1_form, 1.0, numerics)
        dense = flow.flow_times(z, [0.05, 0.1])
        assert np.abs(dense[-1] - flow.flow(z, 0.1)).max() < 1e-9
        with pytest.raises(ValueError):
            flow.flow_times(z, [0.1, 0.05])

    def test_area_preserving(self, a1_form, domain, rng, numerics):
        z = domain.sample(30, rng, margin=0.05)
        assert np.nanmax(area_distortion(MeshFlow(a1_form, 1.0, numerics), z, 0.1)) < 1e-4

    def test_zero_form_is_stationary(self, coarse_mesh, numerics):
        flow = MeshFlow(harmonic_one_form(coarse_mesh, np.zeros(4)), 1.0, numerics)
        z = np.array([0.1 + 1.1j, -0.2 + 0.9j])
        assert np.abs(flow.flow(z, 0.3) - z).max() < 1e-12
