#!/usr/bin/env python3
"""
Tests for transport in the geodesic-flow bundle: offsets, loop defects against
symplectic areas, curvature scans and fiber coordinates.
"""

import math

import numpy as np
import pytest

from adsflux import (
    BasePath,
    BiPoint,
    FiberCoord,
    GroupElt,
    IsomPair,
    canonical_section,
    coordinate_square,
    curvature_scan,
    deck_gaps,
    fiber_gap,
    geodesic_flow,
    geodesic_triangle_area,
    loop_defect,
    mixed_square,
    symplectic_area,
    transport_offset,
)
from adsflux.bundle_transport import Disk, unwrap_gaps
from adsflux.errors import (
    EndpointMismatchError,
    HomotopyTooCoarseError,
    NotOnCommonFiberError,
    QuadratureError,
    StepBoundError,
)


def relative_defect(disk, loop, numerics):
    area = symplectic_area(disk)
    return abs(loop_defect(loop, numerics=numerics) + 0.5 * area) / abs(area)


class TestBasePaths:
    """Construction and evaluation of piecewise paths"""

    def test_polygon_endpoints(self):
        pts = [BiPoint.from_complex(1j, 2j), BiPoint.from_complex(0.5 + 1j, 2j), BiPoint.from_complex(1j, 1j)]
        path = BasePath.polygon(pts)
        assert path.start.distance(pts[0]) < 1e-12
        assert path.end.distance(pts[-1]) < 1e-12
        assert len(path.pieces) == 2

    def test_step_bound(self, numerics):
        """Samples further apart than the step bound are rejected"""
        pts = [BiPoint.from_complex(1j, 1j), BiPoint.from_complex(1.0 + 1j, 1j)]
        with pytest.raises(StepBoundError):
            BasePath.from_samples(pts, numerics)

    def test_polygon_needs_two_points(self):
        with pytest.raises(ValueError):
            BasePath.polygon([BiPoint.from_complex(1j, 1j)])

    def test_closed_detection(self):
        b0, b1 = BiPoint.from_complex(1j, 2j), BiPoint.from_complex(0.3 + 1j, 2j)
        loop = BasePath.geodesic(b0, b1) + BasePath.geodesic(b1, b0)
        assert loop.is_closed()
        assert not BasePath.geodesic(b0, b1).is_closed()


class TestTransport:
    """Transport offsets along paths"""

    def test_constant_path(self, numerics):
        assert transport_offset(BasePath.constant(BiPoint.from_complex(1j, 2j)), numerics) == pytest.approx(0.0)

    def test_reversal_negates(self, numerics):
        path = BasePath.geodesic(BiPoint.from_complex(1j, 0.5 + 1j), BiPoint.from_complex(0.2 + 1.5j, -0.3 + 0.8j))
        forward = transport_offset(path, numerics)
        assert transport_offset(path.reversed(), numerics) == pytest.approx(-forward, abs=1e-10)

    def test_diagonal_path_has_no_offset(self, numerics):
        """The canonical section is flat along the diagonal"""
        path = BasePath.geodesic(BiPoint.from_complex(1j, 1j), BiPoint.from_complex(0.4 + 2j, 0.4 + 2j))
        assert transport_offset(path, numerics) == pytest.approx(0.0, abs=1e-10)

    def test_sampled_mode_matches_analytic(self, numerics):
        """Derivative-free integration agrees with the analytic integrand"""
        path = BasePath.geodesic(BiPoint.from_complex(1j, 0.5 + 1j), BiPoint.from_complex(0.2 + 1.5j, -0.3 + 0.8j))
        sampled = BasePath.from_function(path.pieces[0].evaluate)
        assert transport_offset(sampled, numerics) == pytest.approx(transport_offset(path, numerics), abs=1e-8)

    def test_open_loop_rejected(self, numerics):
        path = BasePath.geodesic(BiPoint.from_complex(1j, 1j), BiPoint.from_complex(0.1 + 1j, 1j))
        with pytest.raises(EndpointMismatchError):
            loop_defect(path, numerics=numerics)


class TestCurvature:
    """Loop defect equals -½ of the enclosed Ω_l - Ω_r area"""

    def test_coordinate_square_area(self):
        """Left squares have area ε²/(y(y+ε)), right squares the negative"""
        eps = 0.05
        disk, _ = coordinate_square("left", 1j, eps)
        assert symplectic_area(disk) == pytest.approx(eps * eps / (1.0 + eps), rel=1e-10)
        disk, _ = coordinate_square("right", 1j, eps)
        assert symplectic_area(disk) == pytest.approx(-eps * eps / (1.0 + eps), rel=1e-10)

    def test_area_of_creased_disk_does_not_converge(self):
        def evaluate(a, b):
            return 1j + 0.1 * (a + 1j * np.abs(b - 1.0 / 3.0)), np.full(np.shape(a), 1j)

        with pytest.raises(QuadratureError):
            symplectic_area(Disk(evaluate), max_intervals=32)

    @pytest.mark.parametrize("side", ["left", "right"])
    def test_squares(self, side, numerics):
        disk, loop = coordinate_square(side, 0.2 + 1.1j, 0.03, 0.5 + 0.8j)
        assert relative_defect(disk, loop, numerics) < 1e-3

    def test_mixed_square(self, numerics):
        """Squares moving in both factors at once"""
        disk, loop = mixed_square(BiPoint.from_complex(0.3 + 0.9j, -0.4 + 1.3j), (1.0 + 0.5j, 0.2 - 1.0j),
                                  (1j * (1.0 + 0.5j), -1j * (0.2 - 1.0j)), 0.02)
        assert relative_defect(disk, loop, numerics) < 1e-3

    def test_section_independence(self, numerics):
        """Shifting the section along the fiber does not change the defect"""
        _, loop = coordinate_square("left", 0.2 + 1.1j, 0.03, 0.5 + 0.8j)
        shift = lambda zl, zr: 0.3 * np.sin(zl.real) + 0.2 * zr.imag
        assert loop_defect(loop, shift, numerics) == pytest.approx(loop_defect(loop, numerics=numerics), abs=1e-6)

    def test_bad_side(self):
        with pytest.raises(ValueError):
            coordinate_square("middle", 1j, 0.1)

    def test_scan_converges(self, numerics):
        """defect/area approaches -½ as ε shrinks"""
        rows = curvature_scan([0.04, 0.02, 0.01], numerics=numerics)
        assert [r.eps for r in rows] == [0.04, 0.02, 0.01]
        for row in rows:
            assert row.defect_over_area == pytest.approx(-0.5, abs=1e-3)
            assert abs(row.defect_over_eps2 + 0.5) < 0.5 * 1.25 * row.eps
        assert abs(rows[-1].defect_over_eps2 + 0.5) < abs(rows[0].defect_over_eps2 + 0.5)


class TestTriangleArea:
    """Signed areas of geodesic triangles"""

    def test_small_triangle(self):
        """A tiny counterclockwise triangle at i has nearly its Euclidean area"""
        h = 1e-3
        area = float(geodesic_triangle_area(np.array(1j), np.array(1j + h), np.array(1j + 1j * h)))
        assert area == pytest.approx(0.5 * h * h, rel=1e-2)

    def test_orientation(self):
        z1, z2, z3 = np.array(1j), np.array(1.0 + 2j), np.array(-0.5 + 1.5j)
        assert geodesic_triangle_area(z1, z2, z3) == pytest.approx(-geodesic_triangle_area(z1, z3, z2))

    def test_bounded_by_pi(self):
        area = geodesic_triangle_area(np.array(1e-3 + 1e-3j), np.array(1e3 + 1j), np.array(-1e3 + 1j))
        assert abs(float(area)) < math.pi


class TestFiberCoordinates:
    """Fiber times between frames over the same base point"""

    def test_round_trip(self):
        b = BiPoint.from_complex(0.3 + 0.7j, -1.0 + 2.0j)
        coord = FiberCoord(b, 0.4)
        back = FiberCoord.from_frame(coord.frame())
        assert back.t == pytest.approx(0.4)
        assert back.base.distance(b) < 1e-9

    def test_period_identification(self):
        b = BiPoint.from_complex(1j, 2j)
        assert FiberCoord(b, 0.1).same_downstairs(FiberCoord(b, 0.1).shifted(math.pi))
        assert not FiberCoord(b, 0.1).same_downstairs(FiberCoord(b, 0.6))

    def test_gap(self):
        frame = canonical_section(BiPoint.from_complex(0.5 + 1j, 1j))
        assert fiber_gap(frame, geodesic_flow(frame, -0.7)) == pytest.approx(-0.7)

    def test_gap_needs_common_fiber(self):
        f1 = canonical_section(BiPoint.from_complex(1j, 1j))
        f2 = canonical_section(BiPoint.from_complex(2j, 1j))
        with pytest.raises(NotOnCommonFiberError):
            fiber_gap(f1, f2)

    def test_unwrap_rejects_jumps(self, numerics):
        with pytest.raises(HomotopyTooCoarseError):
            unwrap_gaps(np.array([0.0, 1.5]), numerics)
        assert unwrap_gaps(np.array([1.5, -1.5]), numerics)[-1] == pytest.approx(math.pi - 1.5)

    def test_diagonal_deck_gaps_vanish(self, numerics):
        """The canonical section is equivariant under diagonal isometries"""
        h = GroupElt(np.array([[2.0, 1.0], [1.0, 1.0]]))
        connector = BasePath.geodesic(BiPoint.from_complex(1j, 1j), BiPoint.from_complex(0.3 + 1.2j, -0.2 + 0.9j))
        gaps = deck_gaps(IsomPair.diagonal(h), connector, numerics)
        assert np.abs(gaps).max() < 1e-9
