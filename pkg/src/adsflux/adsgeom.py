#!/usr/bin/env python3
"""
AdS Geometry: the future unit timelike tangent bundle of AdS3 in body frame

A point of the bundle is stored as a FramePoint (g, u0): g in PSL(2,R) is the
base point and u0 is the unit future timelike velocity left-translated back
to the identity, so the world velocity is g·u0. In these coordinates the
geodesic flow is right multiplication by exp(t·u0) and the projection to
H2 x H2 is a pair of f-inversions.

Architecture:
- Value types: BiPoint, FramePoint, FrameTangent, FramePath
- Flow and projection: geodesic_flow, project, act, canonical_section
- Metric and connection: sasaki_pairing, connection_form, connection_along
- Tangent calculus: frame_curve, tangent_of_path, flow_pushforward
- Foliations: foliation_section, foliation_distribution, distribution_ranks
- Array kernels for sampled computations: canonical_section_arr, project_arr,
  section_connection_arr

Tangent vectors are body-frame pairs (w, v): w = g⁻¹g' is the horizontal part
and v = u0' + cross(w, u0) is the covariant derivative of the velocity, which
is orthogonal to u0.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Optional, Tuple

import numpy as np

from .errors import NonDifferentiablePathError, NotUnitTimelikeError, PastDirectedError, TangentError
from .lie_core import (
    J,
    AlgVec,
    GroupElt,
    HPoint,
    IsomPair,
    align_sign_arr,
    coords_arr,
    cross_arr,
    exp_arr,
    f_embed_arr,
    f_invert_arr,
    f_partials_arr,
    hyperbolic_distance_arr,
    inv_arr,
    pairing,
    pairing_arr,
    translation_along_arr,
)
from .settings import DEFAULT_NUMERICS, Numerics


# =============================================================================
# VALUE TYPES
# =============================================================================

@dataclass(frozen=True)
class BiPoint:
    """Point (left, right) of H2 x H2, i.e. a timelike geodesic of AdS3"""

    left: HPoint
    right: HPoint

    @classmethod
    def from_complex(cls, zl: complex, zr: complex) -> "BiPoint":
        return cls(HPoint.from_complex(zl), HPoint.from_complex(zr))

    @property
    def zl(self) -> complex:
        return self.left.z

    @property
    def zr(self) -> complex:
        return self.right.z

    def distance(self, other: "BiPoint") -> float:
        """Largest of the two factor distances."""
        return max(self.left.distance(other.left), self.right.distance(other.right))

    def act(self, a: IsomPair) -> "BiPoint":
        zl, zr = a.act_points(np.array(self.zl), np.array(self.zr))
        return BiPoint.from_complex(complex(zl), complex(zr))


def normalize_timelike(x: np.ndarray) -> np.ndarray:
    """Scale a timelike element to pairing -1, keeping it in the future cone."""
    n = pairing_arr(x, x)
    if np.any(n >= 0.0):
        raise NotUnitTimelikeError("cannot normalize a non-timelike element")
    y = x / np.sqrt(-n)[..., None, None]
    flip = pairing_arr(y, np.broadcast_to(J, y.shape)) > 0.0
    return np.where(flip[..., None, None], -y, y)


@dataclass(frozen=True, eq=False)
class FramePoint:
    """Body-frame point (g, u0) of the future unit timelike tangent bundle"""

    g: GroupElt
    u0: AlgVec

    def __post_init__(self):
        norm = pairing(self.u0, self.u0)
        if abs(norm + 1.0) > 1e-9:
            raise NotUnitTimelikeError(f"u0 has pairing {norm:.12g}, expected -1")
        if pairing(self.u0, AlgVec(J)) >= 0.0:
            raise PastDirectedError("u0 must be future-directed (same cone as J)")

    @classmethod
    def from_arrays(cls, g: np.ndarray, u0: np.ndarray) -> "FramePoint":
        return cls(GroupElt(g), AlgVec(u0))

    def world_velocity(self) -> np.ndarray:
        return self.g.m @ self.u0.m

    def is_close(self, other: "FramePoint", tol: float = 1e-9) -> bool:
        """Equality in PSL(2,R) x sl(2,R) up to tol."""
        return (self.g.psl_distance(other.g) <= tol
                and float(np.abs(self.u0.m - other.u0.m).max()) <= tol)


@dataclass(frozen=True, eq=False)
class FrameTangent:
    """Body-frame tangent (w, v): horizontal part w, vertical part v ⟂ u0"""

    w: AlgVec
    v: AlgVec

    def as_vector(self) -> np.ndarray:
        """Six coordinates (w in J,K,K' then v in J,K,K')."""
        return np.concatenate([coords_arr(self.w.m), coords_arr(self.v.m)])

    def __add__(self, other: "FrameTangent") -> "FrameTangent":
        return FrameTangent(self.w + other.w, self.v + other.v)

    def __mul__(self, scalar: float) -> "FrameTangent":
        return FrameTangent(self.w * scalar, self.v * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class FramePath:
    """Immutable one-parameter family of frame points.

    Attributes:
        frame_at: s ↦ FramePoint
        derivative: optional s ↦ (g⁻¹g', u0'), the body-frame velocity; when
            absent, derivatives are taken by finite differences
    """

    frame_at: Callable[[float], FramePoint]
    derivative: Optional[Callable[[float], Tuple[np.ndarray, np.ndarray]]] = None

    def __call__(self, s: float) -> FramePoint:
        return self.frame_at(s)


class Side(Enum):
    """Which of the two foliations of the bundle"""

    LEFT = "left"
    RIGHT = "right"

    @classmethod
    def from_string(cls, value: str) -> "Side":
        normalized = value.lower().strip()
        if normalized in ("left", "l"):
            return cls.LEFT
        if normalized in ("right", "r"):
            return cls.RIGHT
        raise ValueError(f"Invalid foliation side: {value}")


# =============================================================================
# FLOW, PROJECTION, ACTION
# =============================================================================

def geodesic_flow(frame: FramePoint, t: float) -> FramePoint:
    """Geodesic flow φ_t: (g, u0) ↦ (g·exp(t·u0), u0); period π in PSL(2,R)."""
    return FramePoint(GroupElt(frame.g.m @ exp_arr(frame.u0.m, t)), frame.u0)


def project(frame: FramePoint) -> BiPoint:
    """Projection to H2 x H2: (f⁻¹(g·u0·g⁻¹), f⁻¹(u0))."""
    zl, zr = project_arr(frame.g.m, frame.u0.m)
    return BiPoint.from_complex(complex(zl), complex(zr))


def act(a: IsomPair, frame: FramePoint) -> FramePoint:
    """Isometry action (g, u0) ↦ (α·g·β⁻¹, β·u0·β⁻¹)."""
    beta = a.right.m
    beta_inv = inv_arr(beta)
    return FramePoint(GroupElt(a.left.m @ frame.g.m @ beta_inv), AlgVec(beta @ frame.u0.m @ beta_inv))


def act_tangent(a: IsomPair, tangent: FrameTangent) -> FrameTangent:
    """Differential of act on body-frame tangents: both parts conjugated by β."""
    return FrameTangent(tangent.w.conjugate(a.right), tangent.v.conjugate(a.right))


def canonical_section(b: BiPoint) -> FramePoint:
    """Global section of project: (translation_along(right, left), f(right))."""
    g, u0 = canonical_section_arr(np.array(b.zl), np.array(b.zr))
    return FramePoint(GroupElt(g), AlgVec(u0))


def foliation_section(side: Side, u: AlgVec, g: GroupElt) -> FramePoint:
    """Leaf sections Σ^L_u(g) = (g, u) and Σ^R_u(g) = (g, g⁻¹·u·g)."""
    side = Side.from_string(side) if isinstance(side, str) else side
    if side is Side.LEFT:
        return FramePoint(g, u)
    g_inv = inv_arr(g.m)
    return FramePoint(g, AlgVec(g_inv @ u.m @ g.m))


# =============================================================================
# ARRAY KERNELS
# =============================================================================

def project_arr(g: np.ndarray, u0: np.ndarray, tol: float = 1e-9) -> Tuple[np.ndarray, np.ndarray]:
    world = g @ u0 @ inv_arr(g)
    return f_invert_arr(world, tol), f_invert_arr(u0, tol)


def canonical_section_arr(zl: np.ndarray, zr: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return translation_along_arr(zr, zl), f_embed_arr(zr)


def _f_velocity(z: np.ndarray, dz: np.ndarray) -> np.ndarray:
    dx, dy = f_partials_arr(z)
    dz = np.asarray(dz, dtype=complex)
    return dx * dz.real[..., None, None] + dy * dz.imag[..., None, None]


def section_connection_arr(zl: np.ndarray, zr: np.ndarray, dzl: np.ndarray, dzr: np.ndarray) -> np.ndarray:
    """Pullback of ω by the canonical section along velocities (dzl, dzr).

    With M = (P + I)/sqrt(τ), P = -f(zl)·f(zr), τ = trace P + 2 the value is
    -pairing(f(zr), M⁻¹M').
    """
    fl = f_embed_arr(zl)
    fr = f_embed_arr(zr)
    p = -(fl @ fr)
    dp = -(_f_velocity(zl, dzl) @ fr + fl @ _f_velocity(zr, dzr))
    tau = np.trace(p, axis1=-2, axis2=-1) + 2.0
    dtau = np.trace(dp, axis1=-2, axis2=-1)
    root = np.sqrt(tau)[..., None, None]
    m = (p + np.eye(2)) / root
    dm = dp / root - (p + np.eye(2)) * (dtau[..., None, None] / (2.0 * root ** 3))
    return -pairing_arr(fr, inv_arr(m) @ dm)


# =============================================================================
# METRIC AND CONNECTION
# =============================================================================

def _check_vertical(frame: FramePoint, tangent: FrameTangent, tol: float = 1e-9) -> None:
    residual = pairing(tangent.v, frame.u0)
    scale = 1.0 + float(np.abs(tangent.v.m).max())
    if abs(residual) > tol * scale:
        raise TangentError(f"vertical part not orthogonal to u0 (pairing {residual:.3e})")


def sasaki_pairing(frame: FramePoint, t1: FrameTangent, t2: FrameTangent) -> float:
    """Sasaki metric: ⟨w1, w2⟩ + ⟨v1, v2⟩; mixed horizontal/vertical pairs vanish."""
    _check_vertical(frame, t1)
    _check_vertical(frame, t2)
    return pairing(t1.w, t2.w) + pairing(t1.v, t2.v)


def flow_generator(frame: FramePoint) -> FrameTangent:
    """The generator χ of the geodesic flow at frame: (u0, 0)."""
    return FrameTangent(frame.u0, AlgVec(np.zeros((2, 2))))


def connection_form(frame: FramePoint, tangent: FrameTangent) -> float:
    """ω = -g_S(χ, ·), which in body frame is -pairing(u0, w)."""
    return -pairing(frame.u0, tangent.w)


def _frame_arrays(path: FramePath, s: float, ref: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    frame = path(s)
    return align_sign_arr(frame.g.m, ref), frame.u0.m


def connection_along(path: FramePath, s: float, numerics: Numerics = DEFAULT_NUMERICS) -> float:
    """Connection form evaluated on the velocity of a frame path at s.

    ω(d/ds) = -pairing(u0(s), g(s)⁻¹·g'(s)). Without an analytic derivative
    the velocity is a central difference; forward and backward one-sided
    second-order differences must then agree within numerics.fd_gate.

    Raises:
        NonDifferentiablePathError: if the one-sided differences disagree
    """
    frame = path(s)
    g = frame.g.m
    u0 = frame.u0.m
    if path.derivative is not None:
        w, _ = path.derivative(s)
        return float(-pairing_arr(u0, np.asarray(w, dtype=float)))

    h = numerics.fd_step
    g_p1, _ = _frame_arrays(path, s + h, g)
    g_m1, _ = _frame_arrays(path, s - h, g)
    g_p2, _ = _frame_arrays(path, s + 2 * h, g_p1)
    g_m2, _ = _frame_arrays(path, s - 2 * h, g_m1)
    g_inv = inv_arr(g)

    def omega(dg: np.ndarray) -> float:
        return float(-pairing_arr(u0, g_inv @ dg))

    central = omega((g_p1 - g_m1) / (2 * h))
    forward = omega((-3 * g + 4 * g_p1 - g_p2) / (2 * h))
    backward = omega((3 * g - 4 * g_m1 + g_m2) / (2 * h))
    if abs(forward - backward) > numerics.fd_gate * max(1.0, abs(central)):
        raise NonDifferentiablePathError(
            f"one-sided differences disagree at s={s}: {forward:.9g} vs {backward:.9g}"
        )
    return central


# =============================================================================
# TANGENT CALCULUS
# =============================================================================

def frame_curve(frame: FramePoint, tangent: FrameTangent) -> FramePath:
    """A frame path through frame with velocity tangent at s = 0.

    s ↦ (g·exp(s·w), normalize(u0 + s·(v - cross(w, u0)))).
    """
    w = tangent.w.m
    du0 = tangent.v.m - cross_arr(w, frame.u0.m)

    def frame_at(s: float) -> FramePoint:
        u0 = normalize_timelike(frame.u0.m + s * du0)
        return FramePoint(GroupElt(frame.g.m @ exp_arr(w, s)), AlgVec(u0))

    return FramePath(frame_at)


def tangent_of_path(path: FramePath, s: float, numerics: Numerics = DEFAULT_NUMERICS) -> FrameTangent:
    """Body-frame tangent (w, v) of a frame path by central differences."""
    h = numerics.fd_step
    frame = path(s)
    g = frame.g.m
    g_plus, u_plus = _frame_arrays(path, s + h, g)
    g_minus, u_minus = _frame_arrays(path, s - h, g)
    w = inv_arr(g) @ (g_plus - g_minus) / (2 * h)
    # drop the O(h²) trace so AlgVec accepts it
    w = w - 0.5 * np.trace(w) * np.eye(2)
    du0 = (u_plus - u_minus) / (2 * h)
    v = du0 + cross_arr(w, frame.u0.m)
    # project out the O(h²) component along u0
    v = v + pairing_arr(v, frame.u0.m) * frame.u0.m
    return FrameTangent(AlgVec(w), AlgVec(v))


def flow_pushforward(frame: FramePoint, tangent: FrameTangent, t: float) -> FrameTangent:
    """Differential of φ_t applied to a body-frame tangent at frame.

    With Y = v - cross(w, u0) and E = exp(t·u0):
        E⁻¹E' = (sin 2t / 2)·Y - ((1 - cos 2t)/2)·cross(u0, Y)
        w̃ = E⁻¹·w·E + E⁻¹E'
        ṽ = Y + cross(w̃, u0)
    """
    u0 = frame.u0.m
    w = tangent.w.m
    y = tangent.v.m - cross_arr(w, u0)
    e = exp_arr(u0, t)
    e_inv = inv_arr(e)
    drift = 0.5 * math.sin(2 * t) * y - 0.5 * (1 - math.cos(2 * t)) * cross_arr(u0, y)
    w_new = e_inv @ w @ e + drift
    v_new = y + cross_arr(w_new, u0)
    return FrameTangent(AlgVec(w_new), AlgVec(v_new))


def horizontal_lift_basis(frame: FramePoint) -> List[FrameTangent]:
    """Orthonormal horizontal directions (w ⟂ u0, v = 0) at frame."""
    u0 = frame.u0.m
    basis = []
    for e in (np.array([[1.0, 0.0], [0.0, -1.0]]), np.array([[0.0, 1.0], [1.0, 0.0]]), J):
        x = e + pairing_arr(e, u0) * u0
        for prev in basis:
            x = x - pairing_arr(x, prev) * prev
        n = pairing_arr(x, x)
        if n > 1e-8:
            basis.append(x / math.sqrt(n))
        if len(basis) == 2:
            break
    zero = AlgVec(np.zeros((2, 2)))
    return [FrameTangent(AlgVec(b), zero) for b in basis]


# =============================================================================
# FOLIATIONS
# =============================================================================

def foliation_distribution(side: Side, frame: FramePoint, numerics: Numerics = DEFAULT_NUMERICS) -> np.ndarray:
    """Basis of D^L or D^R at frame as rows of six coordinates.

    Each row is the finite-difference tangent of the leaf section through
    frame along one basis direction of the group.
    """
    side = Side.from_string(side) if isinstance(side, str) else side
    world_u = AlgVec(frame.g.m @ frame.u0.m @ inv_arr(frame.g.m))
    leaf_u = frame.u0 if side is Side.LEFT else world_u
    rows = []
    for e in (J, np.array([[1.0, 0.0], [0.0, -1.0]]), np.array([[0.0, 1.0], [1.0, 0.0]])):
        def frame_at(s: float, e=e) -> FramePoint:
            return foliation_section(side, leaf_u, GroupElt(frame.g.m @ exp_arr(e, s)))
        rows.append(tangent_of_path(FramePath(frame_at), 0.0, numerics).as_vector())
    return np.array(rows)


def distribution_ranks(frame: FramePoint, threshold: float = 1e-6,
                       numerics: Numerics = DEFAULT_NUMERICS) -> Tuple[int, int]:
    """Numerical ranks (dim D^L + D^R, dim D^L ∩ D^R) by singular values."""
    left = foliation_distribution(Side.LEFT, frame, numerics)
    right = foliation_distribution(Side.RIGHT, frame, numerics)

    def rank(rows: np.ndarray) -> int:
        sv = np.linalg.svd(rows, compute_uv=False)
        return int(np.sum(sv > threshold * max(1.0, sv[0])))

    total = rank(np.vstack([left, right]))
    return total, rank(left) + rank(right) - total


def frames_distance(f1: FramePoint, f2: FramePoint) -> float:
    """Distance between the projections of two frames (largest factor distance)."""
    b1, b2 = project(f1), project(f2)
    return float(max(hyperbolic_distance_arr(np.array(b1.zl), np.array(b2.zl)),
                     hyperbolic_distance_arr(np.array(b1.zr), np.array(b2.zr))))


def flow_orbit(frame: FramePoint) -> FramePath:
    """The flow orbit through frame as a path with analytic derivative."""
    def derivative(s: float) -> Tuple[np.ndarray, np.ndarray]:
        return frame.u0.m, np.zeros((2, 2))

    return FramePath(lambda s: geodesic_flow(frame, s), derivative)


__all__ = [
    "BiPoint", "FramePoint", "FrameTangent", "FramePath", "Side",
    "geodesic_flow", "project", "act", "act_tangent", "canonical_section", "foliation_section",
    "sasaki_pairing", "connection_form", "connection_along", "flow_generator",
    "frame_curve", "tangent_of_path", "flow_pushforward", "horizontal_lift_basis",
    "foliation_distribution", "distribution_ranks", "frames_distance", "flow_orbit",
    "normalize_timelike", "project_arr", "canonical_section_arr", "section_connection_arr",
]
