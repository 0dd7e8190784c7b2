#!/usr/bin/env python3
"""
Fuchsian representations of the genus-two surface group and the octagon domain

The surface group has generators a1, b1, a2, b2 and the single relator
[a1, b1]·[a2, b2] = 1. Its standard Fuchsian realization is generated by the
side pairings of the regular hyperbolic octagon with vertex angle π/4,
centered at i in the upper half-plane. A representation into
PSL(2,R) x PSL(2,R) is a RepPair of four IsomPair images.

Architecture:
- RepClass, RepPair: representation value type with relator and Fuchsian checks
- octagon_rep, conjugate_rep, explicit_rep: constructors
- LoopWord, DomainPath: loop classes as words and their piecewise-geodesic lifts
- OctagonDomain: Klein-model side tests, greedy reduction of points into the
  fundamental domain with deck bookkeeping, and the period homomorphism
- EquivMap: ρ-equivariant maps H2 → H2 x H2 with graph, shear and scaling builders

Klein coordinates of a half-plane point z = x + iy are
    k = (2x, |z|² - 1) / (|z|² + 1),
which sends i to the origin and the imaginary axis to the vertical diameter.
Side j of the octagon has outward normal n_j = (-sin jπ/4, cos jπ/4) and sits
at Klein distance tanh r from the origin, r being the inradius.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .adsgeom import BiPoint
from .errors import GeometryError, LoopWordError, RepresentationError
from .lie_core import (
    J,
    GroupElt,
    HPoint,
    IsomPair,
    TraceClass,
    exp_arr,
    geodesic_interp_arr,
    hyperbolic_distance_arr,
    inv_arr,
    mobius_arr,
)

_logger = logging.getLogger(__name__)

GENERATOR_NAMES = ("a1", "b1", "a2", "b2")
RELATOR_TOLERANCE = 1e-9
FUCHSIAN_MARGIN = 1e-6


# =============================================================================
# REPRESENTATIONS
# =============================================================================

class RepClass(Enum):
    """Shape of a representation pair"""

    DIAGONAL = "diagonal"
    CONJUGATE = "conjugate"
    GENERAL = "general"

    @classmethod
    def from_string(cls, value: str) -> "RepClass":
        normalized = value.lower().strip()
        for member in cls:
            if member.value == normalized:
                return member
        raise ValueError(f"Invalid representation class: {value}")


def commutator(x: GroupElt, y: GroupElt) -> GroupElt:
    return x @ y @ x.inverse() @ y.inverse()


def relator(gens: Sequence[GroupElt]) -> GroupElt:
    a1, b1, a2, b2 = gens
    return commutator(a1, b1) @ commutator(a2, b2)


@dataclass(frozen=True, eq=False)
class RepPair:
    """Images of (a1, b1, a2, b2) under ρ = (ρ_l, ρ_r).

    Attributes:
        generators: four IsomPair values
        rep_class: diagonal, conjugate or general
        beta: conjugating element for the conjugate class (ρ_r = β·ρ_l·β⁻¹)
        base_point: the lift x̃0 of the surface base point
    """

    generators: Tuple[IsomPair, IsomPair, IsomPair, IsomPair]
    rep_class: RepClass = RepClass.GENERAL
    beta: Optional[GroupElt] = None
    base_point: HPoint = field(default_factory=lambda: HPoint(0.0, 1.0))

    def left(self) -> List[GroupElt]:
        return [g.left for g in self.generators]

    def right(self) -> List[GroupElt]:
        return [g.right for g in self.generators]

    def relator_residual(self) -> float:
        """Frobenius distance of the relator from the identity, worst factor."""
        identity = GroupElt.identity()
        return max(relator(self.left()).psl_distance(identity),
                   relator(self.right()).psl_distance(identity))

    def short_products(self, side: str) -> List[GroupElt]:
        gens = self.left() if side == "left" else self.right()
        out = list(gens)
        for i, x in enumerate(gens):
            for y in gens[i + 1:]:
                out.append(x @ y)
                out.append(x @ y.inverse())
        return out

    def is_fuchsian(self, margin: float = FUCHSIAN_MARGIN) -> bool:
        """All generator images and their pairwise products are hyperbolic."""
        for side in ("left", "right"):
            for g in self.short_products(side):
                if abs(g.trace()) <= 2.0 + margin:
                    return False
        return True

    def check(self) -> "RepPair":
        """Validate the relator and Fuchsian invariants.

        Raises:
            RepresentationError: if either invariant fails
        """
        residual = self.relator_residual()
        _logger.debug("%s representation: relator residual %.3e", self.rep_class.value, residual)
        if residual > RELATOR_TOLERANCE:
            raise RepresentationError(f"relator residual {residual:.3e} exceeds {RELATOR_TOLERANCE}")
        if not self.is_fuchsian():
            raise RepresentationError("a generator image or short product is not hyperbolic")
        return self

    def element(self, word: "LoopWord") -> IsomPair:
        """ρ(word) as the ordered product of generator images."""
        out = IsomPair.identity()
        for index, exponent in word.letters:
            g = self.generators[index]
            out = out @ (g if exponent > 0 else g.inverse())
        return out

    def trace_classes(self) -> List[TraceClass]:
        return [g.left.trace_class() for g in self.generators]


def octagon_inradius() -> float:
    """Distance r from the center of the regular π/4-octagon to its sides.

    Solves cosh(r)·sin(π/8) = cos(π/8), i.e. cosh r = 1 + √2.
    """
    return brentq(lambda r: math.cosh(r) * math.sin(math.pi / 8) - math.cos(math.pi / 8), 0.1, 5.0,
                  xtol=1e-15, rtol=1e-15)


def rotation(phi: float) -> np.ndarray:
    """Counterclockwise rotation about i by phi."""
    return exp_arr(J, 0.5 * phi)


def octagon_generators() -> Tuple[GroupElt, GroupElt, GroupElt, GroupElt]:
    """Side-pairing translations (a1, b1, a2, b2) of the regular octagon.

    With D the translation by 2r along the imaginary axis and
    σ_k = Rot(kπ/4)·D·Rot(-kπ/4), the pairings are A_j = σ_k·Rot(π/2) for
    k = 0, 1, 4, 5, and the generators are a1 = A_0, b1 = A_1⁻¹,
    a2 = A_4, b2 = A_5⁻¹.
    """
    r = octagon_inradius()
    d = np.diag([math.exp(r), math.exp(-r)])
    quarter = rotation(0.5 * math.pi)

    def pairing_map(k: int) -> GroupElt:
        sigma = rotation(k * math.pi / 4) @ d @ rotation(-k * math.pi / 4)
        return GroupElt(sigma @ quarter)

    a1, big_b1, a2, big_b2 = (pairing_map(k) for k in (0, 1, 4, 5))
    return a1, big_b1.inverse(), a2, big_b2.inverse()


def octagon_rep() -> RepPair:
    """Diagonal representation ρ_l = ρ_r = octagon side pairings."""
    gens = tuple(IsomPair.diagonal(g) for g in octagon_generators())
    return RepPair(gens, RepClass.DIAGONAL).check()


def conjugate_rep(base: RepPair, beta: GroupElt) -> RepPair:
    """ρ_r = β·ρ_l·β⁻¹ over a diagonal representation.

    β = identity gives back the diagonal class.

    Raises:
        RepresentationError: if base is not diagonal, or the conjugated
            generators fail the relator or Fuchsian check
    """
    if base.rep_class is not RepClass.DIAGONAL:
        raise RepresentationError("conjugate_rep requires a diagonal base representation")
    if beta.is_close(GroupElt.identity(), 1e-15):
        return base
    beta_inv = beta.inverse()
    gens = tuple(IsomPair(g.left, beta @ g.left @ beta_inv) for g in base.generators)
    return RepPair(gens, RepClass.CONJUGATE, beta, base.base_point).check()


def explicit_rep(left: Sequence[np.ndarray], right: Sequence[np.ndarray]) -> RepPair:
    """General representation from explicit generator matrices.

    Raises:
        RepresentationError: if the relator or Fuchsian check fails
    """
    if len(left) != 4 or len(right) != 4:
        raise RepresentationError("explicit representations need four matrices per factor")
    try:
        gens = tuple(IsomPair(GroupElt(np.asarray(l)), GroupElt(np.asarray(r))) for l, r in zip(left, right))
    except GeometryError as e:
        raise RepresentationError(str(e)) from e
    return RepPair(gens, RepClass.GENERAL).check()


# =============================================================================
# LOOP WORDS
# =============================================================================

_LETTER = re.compile(r"^(a1|b1|a2|b2)(\^-1|\^\(-1\)|\^1|')?$")


@dataclass(frozen=True)
class LoopWord:
    """Word in the generators; letters are (generator index, ±1)"""

    letters: Tuple[Tuple[int, int], ...]

    @classmethod
    def parse(cls, text: str) -> "LoopWord":
        """Parse words like "a1", "a1 b2^-1" or "a1*b1'".

        Raises:
            LoopWordError: on an unknown letter or an empty word
        """
        tokens = [t for t in re.split(r"[\s*·]+", text.strip()) if t]
        if not tokens:
            raise LoopWordError("empty loop word")
        letters = []
        for token in tokens:
            match = _LETTER.match(token.lower())
            if not match:
                raise LoopWordError(f"Invalid generator letter: {token}")
            exponent = -1 if match.group(2) in ("^-1", "^(-1)", "'") else 1
            letters.append((GENERATOR_NAMES.index(match.group(1)), exponent))
        return cls(tuple(letters))

    @classmethod
    def generator(cls, index: int) -> "LoopWord":
        return cls(((index, 1),))

    def __mul__(self, other: "LoopWord") -> "LoopWord":
        return LoopWord(self.letters + other.letters)

    def inverse(self) -> "LoopWord":
        return LoopWord(tuple((i, -e) for i, e in reversed(self.letters)))

    def abelianization(self) -> np.ndarray:
        """Exponent sums per generator, the image in H1(S, Z)."""
        counts = np.zeros(4)
        for index, exponent in self.letters:
            counts[index] += exponent
        return counts

    def __str__(self) -> str:
        return " ".join(GENERATOR_NAMES[i] + ("" if e > 0 else "^-1") for i, e in self.letters)

    def lift(self, generators: Sequence[GroupElt], base: complex = 1j) -> "DomainPath":
        """Piecewise-geodesic lift from base to word·base, one segment per letter."""
        points = [complex(base)]
        prefix = np.eye(2)
        for index, exponent in self.letters:
            g = generators[index].m
            prefix = prefix @ (g if exponent > 0 else inv_arr(g))
            points.append(complex(mobius_arr(prefix, np.array(base))))
        return DomainPath(tuple(points))


def generator_words() -> List[LoopWord]:
    return [LoopWord.generator(i) for i in range(4)]


@dataclass(frozen=True)
class DomainPath:
    """Geodesic polygon in H2 through the given vertices, one piece per segment"""

    vertices: Tuple[complex, ...]

    @property
    def n_pieces(self) -> int:
        return len(self.vertices) - 1

    def piece(self, k: int):
        """(evaluate, derivative) of segment k on s ∈ [0, 1]."""
        z0 = np.asarray(self.vertices[k], dtype=complex)
        z1 = np.asarray(self.vertices[k + 1], dtype=complex)

        def evaluate(s):
            return geodesic_interp_arr(z0, z1, np.asarray(s, dtype=float))[0]

        def derivative(s):
            return geodesic_interp_arr(z0, z1, np.asarray(s, dtype=float))[1]

        return evaluate, derivative

    @property
    def start(self) -> complex:
        return self.vertices[0]

    @property
    def end(self) -> complex:
        return self.vertices[-1]


# =============================================================================
# OCTAGON DOMAIN
# =============================================================================

def to_klein(z: np.ndarray) -> np.ndarray:
    """Half-plane points to Klein coordinates (last axis of length 2)."""
    z = np.asarray(z, dtype=complex)
    s = np.abs(z) ** 2 + 1.0
    return np.stack([2.0 * z.real / s, (np.abs(z) ** 2 - 1.0) / s], axis=-1)


def from_klein(k: np.ndarray) -> np.ndarray:
    """Klein coordinates back to the half-plane through the Poincaré disk."""
    w = klein_to_disk(k)
    return (1.0 - 1j * w) / (w - 1j)


def klein_to_disk(k: np.ndarray) -> np.ndarray:
    """Klein coordinates to complex Poincaré-disk coordinates."""
    k = np.asarray(k, dtype=float)
    w = k[..., 0] + 1j * k[..., 1]
    return w / (1.0 + np.sqrt(np.maximum(0.0, 1.0 - np.abs(w) ** 2)))


def klein_area_density(k: np.ndarray) -> np.ndarray:
    """Hyperbolic area density (1 - |k|²)^(-3/2) in Klein coordinates."""
    k = np.asarray(k, dtype=float)
    return (1.0 - np.sum(k * k, axis=-1)) ** -1.5


class OctagonDomain:
    """Regular octagon fundamental domain of the diagonal octagon group.

    Side k is paired by the reduction element E_k, which maps the region just
    beyond side k back into the domain. Generator codes are ±1..±4 for
    a1, b1, a2, b2 and their inverses.
    """

    # Reduction element of each side as a signed generator code
    SIDE_CODES = (-1, 2, 1, -2, -3, 4, 3, -4)

    def __init__(self, generators: Optional[Sequence[GroupElt]] = None):
        self.generators = tuple(generators) if generators is not None else octagon_generators()
        self.inradius = octagon_inradius()
        self.tanh_r = math.tanh(self.inradius)
        angles = np.arange(8) * math.pi / 4
        self.normals = np.stack([-np.sin(angles), np.cos(angles)], axis=-1)
        vertex_angles = angles + math.pi / 8
        vertex_radius = self.tanh_r / math.cos(math.pi / 8)
        self.vertices = vertex_radius * np.stack([-np.sin(vertex_angles), np.cos(vertex_angles)], axis=-1)
        self.reduction = np.array([self.code_matrix(c) for c in self.SIDE_CODES])
        self.reduction_inv = inv_arr(self.reduction)
        self.reduction_counts = np.array([self.code_counts(c) for c in self.SIDE_CODES])

    def code_matrix(self, code: int) -> np.ndarray:
        g = self.generators[abs(code) - 1].m
        return g if code > 0 else inv_arr(g)

    @staticmethod
    def code_counts(code: int) -> np.ndarray:
        counts = np.zeros(4)
        counts[abs(code) - 1] = 1.0 if code > 0 else -1.0
        return counts

    @property
    def vertex_radius(self) -> float:
        return float(np.hypot(*self.vertices[0]))

    def side_excess(self, k: np.ndarray) -> np.ndarray:
        """P·n_j - tanh r for every side j (positive outside)."""
        return np.asarray(k, dtype=float) @ self.normals.T - self.tanh_r

    def contains(self, z: np.ndarray, tol: float = 1e-12) -> np.ndarray:
        return np.all(self.side_excess(to_klein(z)) <= tol, axis=-1)

    def reduce(self, z: np.ndarray, tol: float = 1e-12, max_steps: int = 200
               ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Move points into the domain by greedy side reductions.

        Returns (z_fd, deck, counts) with z = deck·z_fd and counts the
        exponent sums of deck in the generators, so that a period vector p
        gives the deck period counts·p.

        Raises:
            GeometryError: if a point does not settle within max_steps
        """
        z = np.array(np.atleast_1d(z), dtype=complex)
        deck = np.broadcast_to(np.eye(2), z.shape + (2, 2)).copy()
        counts = np.zeros(z.shape + (4,))
        for _ in range(max_steps):
            excess = self.side_excess(to_klein(z))
            worst = np.argmax(excess, axis=-1)
            active = np.take_along_axis(excess, worst[..., None], axis=-1)[..., 0] > tol
            if not np.any(active):
                return z, deck, counts
            side = worst[active]
            z[active] = mobius_arr(self.reduction[side], z[active])
            deck[active] = deck[active] @ self.reduction_inv[side]
            counts[active] -= self.reduction_counts[side]
        raise GeometryError(f"point reduction did not settle within {max_steps} steps")

    def deck_period(self, counts: np.ndarray, periods: Sequence[float]) -> np.ndarray:
        return np.asarray(counts) @ np.asarray(periods, dtype=float)

    def word_matrix(self, word: LoopWord) -> np.ndarray:
        out = np.eye(2)
        for index, exponent in word.letters:
            g = self.generators[index].m
            out = out @ (g if exponent > 0 else inv_arr(g))
        return out

    def sample(self, n: int, rng: np.random.Generator, margin: float = 0.0) -> np.ndarray:
        """Uniform-in-Klein samples of the domain shrunk by margin, as half-plane points."""
        out = np.empty(0, dtype=complex)
        radius = self.vertex_radius
        while out.size < n:
            k = rng.uniform(-radius, radius, size=(2 * n, 2))
            inside = np.all(self.side_excess(k) <= -margin, axis=-1)
            out = np.concatenate([out, from_klein(k[inside])])
        return out[:n]


# =============================================================================
# EQUIVARIANT MAPS
# =============================================================================

Partials = Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class EquivMap:
    """Map Λ̃: H2 → H2 x H2, vectorized over complex arrays.

    Equivariance means Λ̃(γ·x) = ρ(γ)·Λ̃(x) for the octagon deck group acting
    on the domain. Maps built only for local tests may carry rep=None.

    Attributes:
        evaluate: z ↦ (zl, zr)
        rep: the representation ρ
        jacobian: optional z ↦ (∂x zl, ∂y zl, ∂x zr, ∂y zr)
        smooth: False for piecewise-smooth (mesh-based) maps
        name: label used in reports
    """

    evaluate: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]
    rep: Optional[RepPair] = None
    jacobian: Optional[Callable[[np.ndarray], Partials]] = None
    smooth: bool = True
    name: str = "map"

    def __call__(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.evaluate(np.asarray(z, dtype=complex))

    def at(self, z: complex):
        zl, zr = self.evaluate(np.array([complex(z)]))
        return BiPoint.from_complex(complex(zl[0]), complex(zr[0]))

    def partials(self, z: np.ndarray, h: float = 1e-5) -> Partials:
        """Coordinate partials, analytic when available, else central differences."""
        z = np.asarray(z, dtype=complex)
        if self.jacobian is not None:
            return self.jacobian(z)
        lxp, rxp = self.evaluate(z + h)
        lxm, rxm = self.evaluate(z - h)
        lyp, ryp = self.evaluate(z + 1j * h)
        lym, rym = self.evaluate(z - 1j * h)
        return ((lxp - lxm) / (2 * h), (lyp - lym) / (2 * h),
                (rxp - rxm) / (2 * h), (ryp - rym) / (2 * h))

    def equivariance_residual(self, z: np.ndarray, domain: "OctagonDomain") -> float:
        """Largest distance between Λ̃(γ·z) and ρ(γ)·Λ̃(z) over the generators."""
        if self.rep is None:
            raise RepresentationError(f"map '{self.name}' carries no representation")
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        zl, zr = self.evaluate(z)
        worst = 0.0
        for gamma, image in zip(domain.generators, self.rep.generators):
            ml, mr = self.evaluate(mobius_arr(gamma.m, z))
            el, er = image.act_points(zl, zr)
            worst = max(worst, float(np.max(hyperbolic_distance_arr(ml, el))),
                        float(np.max(hyperbolic_distance_arr(mr, er))))
        return worst


def graph_map(rep: Optional[RepPair], g: Optional[GroupElt] = None, name: str = "graph") -> EquivMap:
    """x ↦ (x, g·x); the diagonal map when g is None or the identity."""
    m = np.eye(2) if g is None else g.m

    def evaluate(z):
        return z, mobius_arr(m, z)

    def jacobian(z):
        d = 1.0 / (m[1, 0] * z + m[1, 1]) ** 2
        one = np.ones_like(z)
        return one, 1j * one, d, 1j * d

    return EquivMap(evaluate, rep, jacobian, True, name)


def diagonal_map(rep: Optional[RepPair] = None) -> EquivMap:
    return graph_map(rep, None, "diagonal")


def shear_map(shear: float) -> EquivMap:
    """Graph of the area-preserving shear x + iy ↦ (x + shear·y) + iy."""
    def evaluate(z):
        return z, z + shear * z.imag

    def jacobian(z):
        one = np.ones_like(z)
        return one, 1j * one, one, (shear + 1j) * one

    return EquivMap(evaluate, None, jacobian, True, f"shear({shear:g})")


def scaled_map(sx: float, sy: float) -> EquivMap:
    """Graph of x + iy ↦ sx·x + i·sy·y; area-preserving only when sx = sy."""
    def evaluate(z):
        return z, sx * z.real + 1j * sy * z.imag

    def jacobian(z):
        one = np.ones_like(z)
        return one, 1j * one, sx * one, 1j * sy * one

    return EquivMap(evaluate, None, jacobian, True, f"scaled({sx:g},{sy:g})")
