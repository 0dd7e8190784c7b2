#!/usr/bin/env python3
"""
Tests for genus-two representations, loop words, the octagon domain and
equivariant maps.
"""

import math

import numpy as np
import pytest

from adsflux import (
    EquivMap,
    GroupElt,
    LoopWord,
    RepClass,
    TraceClass,
    conjugate_rep,
    explicit_rep,
    graph_map,
    octagon_rep,
)
from adsflux.errors import AdsFluxError, LoopWordError, RepresentationError
from adsflux.fuchsian import diagonal_map, octagon_inradius, relator, scaled_map, shear_map, to_klein
from adsflux.lie_core import exp_arr, from_coords_arr, mobius_arr


class TestOctagonRepresentation:
    """The diagonal side-pairing representation"""

    def test_inradius(self):
        """cosh r = 1 + √2"""
        assert math.cosh(octagon_inradius()) == pytest.approx(1.0 + math.sqrt(2.0), rel=1e-14)

    def test_relator(self, rep):
        assert rep.relator_residual() < 1e-9

    def test_fuchsian(self, rep):
        assert rep.is_fuchsian()
        assert all(c is TraceClass.HYPERBOLIC for c in rep.trace_classes())

    def test_diagonal(self, rep):
        assert rep.rep_class is RepClass.DIAGONAL
        for g in rep.generators:
            assert g.left.is_close(g.right, 0.0)

    def test_element_is_ordered_product(self, rep):
        word = LoopWord.parse("a1 b2^-1")
        expected = rep.generators[0] @ rep.generators[3].inverse()
        assert rep.element(word).psl_distance(expected) < 1e-12

    def test_relator_word_is_trivial(self, rep):
        word = LoopWord.parse("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1")
        assert rep.element(word).left.is_close(GroupElt.identity(), 1e-9)


class TestOtherRepresentations:
    """Conjugate and explicit constructors"""

    def test_conjugate_identity_is_diagonal(self, rep):
        assert conjugate_rep(rep, GroupElt.identity()) is rep

    def test_conjugate(self, rep):
        beta = GroupElt(np.array([[1.2, 0.3], [0.5, (1.0 + 0.15) / 1.2]]))
        conj = conjugate_rep(rep, beta)
        assert conj.rep_class is RepClass.CONJUGATE
        assert conj.relator_residual() < 1e-9
        for g in conj.generators:
            assert g.left.trace() == pytest.approx(g.right.trace())

    def test_builtin_constructors_are_checked(self, rep, rng):
        assert rep.check() is rep
        identity = GroupElt.identity()
        for _ in range(5):
            beta = GroupElt(exp_arr(from_coords_arr(0.5 * rng.normal(size=3))))
            conj = conjugate_rep(rep, beta)
            assert relator(conj.left()).psl_distance(identity) < 1e-9
            assert relator(conj.right()).psl_distance(identity) < 1e-9
            assert conj.is_fuchsian()

    def test_conjugate_needs_diagonal_base(self, rep):
        conj = conjugate_rep(rep, GroupElt.diag(1.5))
        with pytest.raises(RepresentationError):
            conjugate_rep(conj, GroupElt.diag(1.5))

    def test_explicit(self, rep):
        left = [g.m for g in rep.left()]
        general = explicit_rep(left, left)
        assert general.rep_class is RepClass.GENERAL

    def test_explicit_rejects_non_fuchsian(self):
        with pytest.raises(RepresentationError):
            explicit_rep([np.eye(2)] * 4, [np.eye(2)] * 4)

    def test_explicit_rejects_wrong_count(self, rep):
        left = [g.m for g in rep.left()]
        with pytest.raises(RepresentationError):
            explicit_rep(left[:3], left[:3])

    def test_explicit_rejects_determinant(self, rep):
        left = [g.m for g in rep.left()]
        with pytest.raises(RepresentationError):
            explicit_rep(left, [2.0 * m for m in left])

    def test_class_from_string(self):
        assert RepClass.from_string("Conjugate") is RepClass.CONJUGATE
        with pytest.raises(ValueError):
            RepClass.from_string("twisted")


class TestLoopWords:
    """Parsing and algebra of words in a1, b1, a2, b2"""

    def test_parse(self):
        assert LoopWord.parse("a1 b2^-1").letters == ((0, 1), (3, -1))
        assert LoopWord.parse("a1*b1'").letters == ((0, 1), (1, -1))
        assert LoopWord.parse("A2^(-1)").letters == ((2, -1),)

    @pytest.mark.parametrize("text", ["", "   ", "c3", "a1 x", "a5"])
    def test_parse_rejects(self, text):
        with pytest.raises(LoopWordError) as excinfo:
            LoopWord.parse(text)
        assert isinstance(excinfo.value, AdsFluxError)

    def test_str_round_trip(self):
        word = LoopWord.parse("a1 b2^-1 a2")
        assert str(word) == "a1 b2^-1 a2"
        assert LoopWord.parse(str(word)) == word

    def test_product_and_inverse(self):
        a, b = LoopWord.parse("a1"), LoopWord.parse("b1 a2")
        assert (a * b).letters == ((0, 1), (1, 1), (2, 1))
        assert b.inverse().letters == ((2, -1), (1, -1))

    def test_abelianization(self):
        word = LoopWord.parse("a1 b1 a1^-1 b2 b2")
        assert np.array_equal(word.abelianization(), [0.0, 1.0, 0.0, 2.0])
        assert np.array_equal(LoopWord.generator(2).abelianization(), [0.0, 0.0, 1.0, 0.0])

    def test_lift_ends_at_translate(self, domain):
        word = LoopWord.parse("a1 b1")
        path = word.lift(domain.generators)
        assert path.n_pieces == 2
        assert path.end == pytest.approx(complex(mobius_arr(domain.word_matrix(word), np.array(1j))))


class TestOctagonDomain:
    """Side tests, reduction and sampling"""

    def test_center_inside(self, domain):
        assert bool(domain.contains(np.array([1j]))[0])

    def test_reduce_single_translate(self, domain):
        w = np.array([0.1 + 1.05j])
        z = mobius_arr(domain.generators[0].m, w)
        z_fd, deck, counts = domain.reduce(z)
        assert z_fd[0] == pytest.approx(w[0])
        assert np.allclose(counts[0], [1.0, 0.0, 0.0, 0.0])
        assert complex(mobius_arr(deck[0], z_fd[0])) == pytest.approx(complex(z[0]))

    def test_reduce_far_point(self, domain):
        word = LoopWord.parse("a1 b1 a2^-1")
        z = mobius_arr(domain.word_matrix(word), np.array([1j]))
        z_fd, deck, counts = domain.reduce(z)
        assert bool(domain.contains(z_fd)[0])
        assert complex(mobius_arr(deck[0], z_fd[0])) == pytest.approx(complex(z[0]))
        assert np.allclose(counts[0], word.abelianization())

    def test_sample_inside(self, domain, rng):
        z = domain.sample(200, rng, margin=0.02)
        assert z.shape == (200,)
        assert np.all(domain.side_excess(to_klein(z)) <= -0.02)


class TestEquivariantMaps:
    """Graph maps and their equivariance"""

    def test_diagonal_map_equivariant(self, rep, domain, rng):
        z = domain.sample(50, rng)
        assert diagonal_map(rep).equivariance_residual(z, domain) < 1e-8

    def test_graph_map_for_conjugate(self, rep, domain, rng):
        beta = GroupElt.diag(1.3)
        conj = conjugate_rep(rep, beta)
        z = domain.sample(50, rng)
        assert graph_map(conj, beta).equivariance_residual(z, domain) < 1e-8

    def test_local_maps_carry_no_rep(self, domain):
        with pytest.raises(RepresentationError):
            shear_map(0.5).equivariance_residual(np.array([1j]), domain)

    def test_partials_match_differences(self):
        z = np.array([0.3 + 1.2j, -0.5 + 0.7j])
        exact = scaled_map(2.0, 1.5)
        numeric = EquivMap(exact.evaluate, name="numeric")
        for a, b in zip(exact.partials(z), numeric.partials(z)):
            assert np.allclose(a, b, atol=1e-8)

    def test_at(self, rep):
        b = graph_map(rep, GroupElt.diag(2.0)).at(0.5 + 1j)
        assert b.zl == pytest.approx(0.5 + 1j)
        assert b.zr == pytest.approx(4.0 * (0.5 + 1j))
