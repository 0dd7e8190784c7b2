#!/usr/bin/env python3
"""
Tests for the frame bundle: geodesic flow, projection, isometry action,
Sasaki pairing, connection form and the two foliations.
"""

import math

import numpy as np
import pytest

from adsflux import (
    J,
    AlgVec,
    BiPoint,
    FramePath,
    FramePoint,
    FrameTangent,
    GroupElt,
    IsomPair,
    Side,
    act,
    canonical_section,
    connection_along,
    connection_form,
    distribution_ranks,
    flow_pushforward,
    geodesic_flow,
    project,
    sasaki_pairing,
)
from adsflux.adsgeom import flow_orbit, foliation_section, frame_curve, normalize_timelike, tangent_of_path
from adsflux.errors import NonDifferentiablePathError, NotUnitTimelikeError, PastDirectedError, TangentError
from adsflux.lie_core import exp_arr, f_embed_arr, from_coords_arr, pairing_arr


def sample_frame(rng) -> FramePoint:
    g = exp_arr(from_coords_arr(0.5 * rng.normal(size=3))) @ exp_arr(from_coords_arr(0.5 * rng.normal(size=3)))
    u0 = f_embed_arr(complex(rng.uniform(-1, 1), math.exp(rng.uniform(-1, 1))))
    return FramePoint.from_arrays(g, u0)


def sample_tangent(rng, frame: FramePoint) -> FrameTangent:
    w = from_coords_arr(rng.normal(size=3))
    v = from_coords_arr(rng.normal(size=3))
    v = v + pairing_arr(v, frame.u0.m) * frame.u0.m
    return FrameTangent(AlgVec(w), AlgVec(v))


def assert_bipoints_close(a: BiPoint, b: BiPoint, tol: float = 1e-9):
    assert a.distance(b) < tol


class TestFramePoints:
    """Validation of (g, u0)"""

    def test_rejects_spacelike_velocity(self):
        with pytest.raises(NotUnitTimelikeError):
            FramePoint(GroupElt.identity(), AlgVec.from_coords(0.0, 1.0, 0.0))

    def test_rejects_past_velocity(self):
        with pytest.raises(PastDirectedError):
            FramePoint(GroupElt.identity(), AlgVec(-J))

    def test_normalize_timelike(self):
        """Rescaling lands on the future unit sheet"""
        x = normalize_timelike(-3.0 * J)
        assert np.allclose(x, J)
        with pytest.raises(NotUnitTimelikeError):
            normalize_timelike(np.array([[1.0, 0.0], [0.0, -1.0]]))

    def test_side_from_string(self):
        assert Side.from_string("L") is Side.LEFT
        assert Side.from_string(" right ") is Side.RIGHT
        with pytest.raises(ValueError):
            Side.from_string("up")


class TestFlowAndProjection:
    """Geodesic flow preserves fibers and has period π"""

    def test_flow_preserves_projection(self, rng):
        for _ in range(20):
            frame = sample_frame(rng)
            t = rng.uniform(-5.0, 5.0)
            assert_bipoints_close(project(geodesic_flow(frame, t)), project(frame))

    def test_flow_period(self, rng):
        frame = sample_frame(rng)
        assert geodesic_flow(frame, math.pi).is_close(frame, 1e-10)
        assert not geodesic_flow(frame, 0.5 * math.pi).is_close(frame, 0.1)

    def test_identity_frame_projects_to_i(self):
        """(I, J) lies over (i, i)"""
        b = project(FramePoint(GroupElt.identity(), AlgVec(J)))
        assert b.zl == pytest.approx(1j)
        assert b.zr == pytest.approx(1j)

    def test_projection_equivariance(self, rng):
        """project(a·frame) = a·project(frame)"""
        a = IsomPair(GroupElt(np.array([[2.0, 1.0], [1.0, 1.0]])), GroupElt.diag(1.5))
        for _ in range(10):
            frame = sample_frame(rng)
            assert_bipoints_close(project(act(a, frame)), project(frame).act(a))

    def test_canonical_section(self):
        """The canonical section is a section of the projection"""
        b = BiPoint.from_complex(0.3 + 0.7j, -1.0 + 2.0j)
        assert_bipoints_close(project(canonical_section(b)), b)

    def test_canonical_section_on_diagonal(self):
        """Over a diagonal point the section has g = I"""
        frame = canonical_section(BiPoint.from_complex(0.2 + 1.3j, 0.2 + 1.3j))
        assert frame.g.is_close(GroupElt.identity())


class TestSasakiAndConnection:
    """The Sasaki pairing and the connection form under the flow"""

    def test_pushforward_matches_differences(self, rng, numerics):
        """Closed-form differential of φ_t agrees with differentiating curves"""
        for _ in range(5):
            frame = sample_frame(rng)
            tangent = sample_tangent(rng, frame)
            t = rng.uniform(0.0, math.pi)
            curve = frame_curve(frame, tangent)
            numeric = tangent_of_path(FramePath(lambda s: geodesic_flow(curve(s), t)), 0.0, numerics)
            closed = flow_pushforward(frame, tangent, t)
            assert np.abs(numeric.as_vector() - closed.as_vector()).max() < 1e-6

    def test_flow_is_isometry(self, rng):
        """g_S(φ_t* X, φ_t* Y) = g_S(X, Y)"""
        for _ in range(10):
            frame = sample_frame(rng)
            t1, t2 = sample_tangent(rng, frame), sample_tangent(rng, frame)
            t = rng.uniform(0.0, math.pi)
            before = sasaki_pairing(frame, t1, t2)
            after = sasaki_pairing(geodesic_flow(frame, t), flow_pushforward(frame, t1, t),
                                   flow_pushforward(frame, t2, t))
            assert after == pytest.approx(before, abs=1e-9)

    def test_connection_invariant(self, rng):
        """φ_t* ω = ω"""
        frame = sample_frame(rng)
        tangent = sample_tangent(rng, frame)
        t = 1.1
        assert connection_form(geodesic_flow(frame, t), flow_pushforward(frame, tangent, t)) == pytest.approx(
            connection_form(frame, tangent), abs=1e-10)

    def test_connection_normalized_on_generator(self, rng):
        """ω(χ) = 1 along a flow orbit"""
        frame = sample_frame(rng)
        tangent = FrameTangent(frame.u0, AlgVec(np.zeros((2, 2))))
        assert connection_form(frame, tangent) == pytest.approx(1.0)
        assert connection_along(flow_orbit(frame), 0.3) == pytest.approx(1.0)

    def test_vertical_part_checked(self, rng):
        """Vertical parts must be orthogonal to u0"""
        frame = sample_frame(rng)
        bad = FrameTangent(AlgVec(np.zeros((2, 2))), frame.u0)
        with pytest.raises(TangentError):
            sasaki_pairing(frame, bad, bad)

    def test_connection_along_detects_kink(self):
        """A path with a corner at s = 0 is rejected"""
        u0 = AlgVec(J)

        def frame_at(s):
            return FramePoint(GroupElt(exp_arr(J, abs(s))), u0)

        kinked = FramePath(frame_at)
        with pytest.raises(NonDifferentiablePathError):
            connection_along(kinked, 0.0)


class TestFoliations:
    """D^L + D^R has rank 5 and meets along the flow line"""

    def test_ranks(self, rng, numerics):
        for _ in range(5):
            assert distribution_ranks(sample_frame(rng), numerics=numerics) == (5, 1)

    def test_leaf_sections_fix_one_factor(self, rng):
        u = AlgVec(f_embed_arr(0.3 + 1.4j))
        for _ in range(5):
            g = GroupElt(sample_frame(rng).g.m)
            left = project(foliation_section(Side.LEFT, u, g))
            right = project(foliation_section("right", u, g))
            assert abs(left.zr - (0.3 + 1.4j)) < 1e-9
            assert abs(right.zl - (0.3 + 1.4j)) < 1e-9
