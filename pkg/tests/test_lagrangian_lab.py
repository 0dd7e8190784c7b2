#!/usr/bin/env python3
"""
Tests for equivariant surfaces, Gauss maps, the Lagrangian condition, flux
and holonomy.

Integrations over lifted loops are marked slow.
"""

import math

import numpy as np
import pytest

from adsflux import (
    GroupElt,
    HamiltonianSpec,
    LoopWord,
    SurfaceAdS,
    anchor_map,
    anchored_holonomy,
    closed_form_isotopy,
    conjugate_rep,
    explicit_rep,
    flux,
    gauss_map,
    geodesic_plane_surface,
    hamiltonian_isotopy,
    lagrangian_defect,
    normal_lift,
    relative_holonomy,
    section_closure,
)
from adsflux.adsgeom import project
from adsflux.errors import DegenerateSurfaceError, NonLagrangianError, UnsupportedRepresentationError
from adsflux.fuchsian import diagonal_map, scaled_map, shear_map
from adsflux.isotopies import ConstantIsotopy
from adsflux.lagrangian_lab import (
    bent_plane_surface,
    check_lagrangian,
    horizontality_residual,
    mapped_loop,
    normal_flow_residual,
    projection_rank,
)
from adsflux.lie_core import mobius_arr

A1 = LoopWord.parse("a1")
B1 = LoopWord.parse("b1")


@pytest.fixture(scope="module")
def plane(rep):
    return geodesic_plane_surface(rep)


class TestGeodesicPlane:
    """The totally geodesic plane and its normal lift"""

    def test_equivariant(self, plane, domain, rng):
        assert plane.equivariance_residual(domain.sample(20, rng), domain) < 1e-8

    def test_gauss_map_is_diagonal(self, plane, domain, rng, numerics):
        z = domain.sample(30, rng)
        zl, zr = gauss_map(plane, numerics)(z)
        assert np.abs(zl - z).max() < 1e-8
        assert np.abs(zr - z).max() < 1e-8

    def test_gauss_map_of_conjugate_plane(self, rep, domain, rng, numerics):
        """For ρ_r = β·ρ_l·β⁻¹ the Gauss map is x ↦ (x, β·x)"""
        beta = GroupElt(np.array([[1.2, 0.3], [0.5, (1.0 + 0.15) / 1.2]]))
        surface = geodesic_plane_surface(conjugate_rep(rep, beta))
        z = domain.sample(20, rng)
        zl, zr = gauss_map(surface, numerics)(z)
        assert np.abs(zl - z).max() < 1e-8
        assert np.abs(zr - mobius_arr(beta.m, z)).max() < 1e-8

    def test_normal_lift_over_i(self, plane, numerics):
        b = project(normal_lift(plane, 1j, numerics))
        assert b.zl == pytest.approx(1j, abs=1e-8)
        assert b.zr == pytest.approx(1j, abs=1e-8)

    def test_horizontal(self, plane, numerics):
        """The normal lift is horizontal for the connection"""
        for p, angle in [(1j, 0.0), (0.3 + 1.2j, 1.0), (-0.4 + 0.8j, 2.5)]:
            assert horizontality_residual(plane, p, np.exp(1j * angle), numerics) < 1e-7

    @pytest.mark.parametrize("t", [0.3, 1.2, math.pi / 2])
    def test_normal_flow_stays_in_fiber(self, plane, domain, rng, numerics, t):
        assert normal_flow_residual(plane, domain.sample(10, rng), t, numerics) < 1e-8

    def test_general_representation_unsupported(self, rep):
        general = explicit_rep([g.m for g in rep.left()], [g.m for g in rep.left()])
        with pytest.raises(UnsupportedRepresentationError):
            geodesic_plane_surface(general)
        with pytest.raises(UnsupportedRepresentationError):
            anchor_map(general)

    def test_degenerate_surface(self, numerics):
        """A constant map has no spacelike tangent plane"""
        constant = SurfaceAdS(lambda z: np.broadcast_to(np.eye(2), np.shape(z) + (2, 2)).copy(), name="point")
        with pytest.raises(DegenerateSurfaceError):
            gauss_map(constant, numerics)(np.array([1j]))

    def test_projection_rank(self, plane, domain, rng, numerics):
        """The plane immerses; a constant map has rank zero"""
        z = domain.sample(10, rng)
        assert np.all(projection_rank(plane, z, numerics=numerics) == 2)
        constant = SurfaceAdS(lambda z: np.broadcast_to(np.eye(2), np.shape(z) + (2, 2)).copy(), name="point")
        assert np.all(projection_rank(constant, z, numerics=numerics) == 0)


BENT_POINTS = np.array([1j, 0.3 + 1.2j, -0.4 + 0.8j, 0.2 + 1.5j, -0.25 + 1.1j])


class TestBentSurface:
    """A curved spacelike surface whose Gauss map is not a graph of an isometry"""

    def test_partials_match_differences(self):
        bent = bent_plane_surface()
        numeric = SurfaceAdS(bent.evaluate, name="bent_numeric")
        for exact, approx in zip(bent.derivatives(BENT_POINTS), numeric.derivatives(BENT_POINTS, 1e-6)):
            assert np.abs(exact - approx).max() < 1e-8

    def test_spacelike_and_curved(self, plane, numerics):
        bent = bent_plane_surface()
        assert np.linalg.eigvalsh(bent.induced_metric(BENT_POINTS)).min() > 0.05
        zl, zr = gauss_map(bent, numerics)(BENT_POINTS)
        pl, pr = gauss_map(plane, numerics)(BENT_POINTS)
        assert max(np.abs(zl - pl).max(), np.abs(zr - pr).max()) > 1e-3

    def test_gauss_map_is_lagrangian(self, numerics):
        defects = lagrangian_defect(gauss_map(bent_plane_surface(), numerics), BENT_POINTS, numerics)
        assert defects.max() < 1e-6

    def test_horizontal(self, numerics):
        bent = bent_plane_surface()
        for p, angle in zip(BENT_POINTS, [0.0, 1.0, 2.5, 4.0, 5.5]):
            assert horizontality_residual(bent, p, np.exp(1j * angle), numerics) < 1e-7


class TestLagrangianDefect:
    """Normalized Λ*Ω_ρ on the coordinate square"""

    def test_gauss_map_is_lagrangian(self, plane, domain, rng, numerics):
        z = domain.sample(30, rng)
        assert lagrangian_defect(gauss_map(plane, numerics), z, numerics).max() < 1e-6

    def test_scaled_map(self, numerics):
        """(x, y) ↦ (2x, y) at i has defect 1/√10"""
        value = float(lagrangian_defect(scaled_map(2.0, 1.0), 1j, numerics)[0])
        assert value == pytest.approx(1.0 / math.sqrt(10.0), abs=1e-12)

    def test_shear_is_lagrangian(self, domain, rng, numerics):
        z = domain.sample(30, rng)
        assert lagrangian_defect(shear_map(0.7), z, numerics).max() < 1e-12

    def test_check_rejects_non_lagrangian(self, numerics):
        with pytest.raises(NonLagrangianError):
            check_lagrangian(scaled_map(2.0, 1.0), np.array([1j]), numerics)
        assert check_lagrangian(diagonal_map(), np.array([1j, 0.5 + 2j]), numerics) < 1e-12

    def test_closed_form_end_is_lagrangian(self, rep, a1_form, domain, rng, numerics):
        """The graph of an area-preserving flow is Lagrangian away from creases"""
        end = closed_form_isotopy(rep, a1_form, 0.1, numerics).end
        z = domain.sample(20, rng, margin=0.05)
        assert np.nanmax(lagrangian_defect(end, z, numerics)) < numerics.lagrangian_gate_mesh


class TestMappedLoops:
    """Images of lifted loops"""

    def test_mapped_loop_endpoints(self, rep, domain, numerics):
        word = LoopWord.parse("a1 b1")
        loop = mapped_loop(diagonal_map(rep), word, domain, 1j, numerics)
        assert len(loop.pieces) == 2
        end = complex(mobius_arr(domain.word_matrix(word), np.array(1j)))
        assert loop.start.zl == pytest.approx(1j)
        assert loop.end.zl == pytest.approx(end)
        assert loop.end.zr == pytest.approx(end)


class TestFluxAndHolonomy:
    """Flux of Lagrangian isotopies against the change of holonomy"""

    def test_constant_path_has_no_flux(self, rep, domain, numerics):
        assert flux(ConstantIsotopy(anchor_map(rep)), A1, numerics, domain) == pytest.approx(0.0, abs=1e-12)

    def test_anchor_holonomy_vanishes(self, rep, domain, numerics):
        assert anchored_holonomy(rep, anchor_map(rep), A1, numerics, domain) == pytest.approx(0.0, abs=1e-9)

    def test_anchor_section_closes(self, rep, domain, numerics):
        assert section_closure(rep, anchor_map(rep), A1, numerics, domain) == pytest.approx(0.0, abs=1e-4)

    def test_holonomy_rejects_non_lagrangian(self, rep, domain, numerics):
        with pytest.raises(NonLagrangianError):
            relative_holonomy(scaled_map(2.0, 1.0), diagonal_map(rep), A1, None, numerics, domain, rep)

    def test_holonomy_needs_representation(self, domain, numerics):
        with pytest.raises(UnsupportedRepresentationError):
            relative_holonomy(shear_map(0.5), scaled_map(1.0, 1.0), A1, None, numerics, domain)

    @pytest.mark.slow
    @pytest.mark.parametrize("word", [A1, B1])
    def test_hamiltonian_flux_vanishes(self, rep, domain, numerics, word):
        path = hamiltonian_isotopy(rep, HamiltonianSpec(method="exact"), 0.5, anchor_map(rep), domain, numerics)
        assert flux(path, word, numerics, domain) == pytest.approx(0.0, abs=1e-4)
        assert relative_holonomy(path.end, path.start, word, None, numerics, domain) == pytest.approx(0.0, abs=1e-4)

    @pytest.mark.slow
    def test_hamiltonian_anchored_holonomy(self, rep, domain, numerics):
        path = hamiltonian_isotopy(rep, HamiltonianSpec(method="exact"), 0.5, anchor_map(rep), domain, numerics)
        assert anchored_holonomy(rep, path.end, A1, numerics, domain) == pytest.approx(0.0, abs=1e-4)
        assert section_closure(rep, path.end, A1, numerics, domain) == pytest.approx(0.0, abs=1e-4)

    @pytest.mark.slow
    @pytest.mark.parametrize("word, period", [(A1, 1.0), (B1, 0.0)])
    def test_closed_form_flux_is_period(self, rep, a1_form, domain, numerics, word, period):
        """Flux and holonomy both equal duration times the period"""
        path = closed_form_isotopy(rep, a1_form, 0.1, numerics)
        value = flux(path, word, numerics, domain)
        hol = relative_holonomy(path.end, path.start, word, None, numerics, domain)
        assert value == pytest.approx(0.1 * period, abs=5e-3)
        assert hol == pytest.approx(0.1 * period, abs=5e-3)
        assert value - hol == pytest.approx(0.0, abs=5e-3)

    @pytest.mark.slow
    def test_flux_is_homomorphism(self, rep, a1_form, domain, numerics):
        path = closed_form_isotopy(rep, a1_form, 0.1, numerics)
        total = flux(path, A1 * B1, numerics, domain)
        assert total == pytest.approx(flux(path, A1, numerics, domain) + flux(path, B1, numerics, domain), abs=5e-3)
