#!/usr/bin/env python3
"""
Lie Core: 2x2 matrix realizations of sl(2,R), PSL(2,R) and the hyperbolic plane

This module provides the exact matrix layer everything else is built on.
AdS3 is realized as PSL(2,R) with the Lorentzian metric given by 1/8 of the
Killing form; on trace-free matrices this is pairing(X, Y) = trace(XY)/2.
The upper half-plane H2 sits inside the algebra through the isometric
embedding f, whose image is the future sheet of unit timelike elements.

Architecture:
- Basis: J (timelike, fixes the future cone), K and K' (spacelike)
- Value types: AlgVec, GroupElt, HPoint, IsomPair (immutable)
- Operations on value types: pairing, cross, exp_alg, f_embed, f_invert,
  mobius, translation_along
- Array kernels (suffix _arr): the same formulas vectorized over leading axes,
  used by the sampling-heavy modules
- Oracles: killing_form computes the Killing form from structure constants

Conventions:
- Group elements are stored sign-normalized: the first entry of the first
  column whose magnitude exceeds 1e-14 is positive.
- Points of H2 are complex numbers in the array kernels and HPoint values in
  the object API.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np

from .errors import (
    GeometryError,
    NotInHalfPlaneError,
    NotUnitTimelikeError,
    PastDirectedError,
)

ArrayLike = Union[np.ndarray, float, complex]

# =============================================================================
# BASIS AND CONSTANTS
# =============================================================================

J = np.array([[0.0, 1.0], [-1.0, 0.0]])
K = np.array([[1.0, 0.0], [0.0, -1.0]])
KP = np.array([[0.0, 1.0], [1.0, 0.0]])
I2 = np.eye(2)
BASIS = (J, K, KP)

SIGN_THRESHOLD = 1e-14
DET_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-9
UNIT_TOLERANCE = 1e-9

# Below this |pairing(tX, tX)| the exponential uses its Taylor series
_SERIES_CUTOFF = 1e-6


# =============================================================================
# ARRAY KERNELS
# =============================================================================

def pairing_arr(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized pairing trace(XY)/2 over leading axes."""
    return 0.5 * np.einsum("...ij,...ji->...", x, y)


def cross_arr(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Vectorized Lorentzian cross product (XY - YX)/2."""
    return 0.5 * (x @ y - y @ x)


def coords_arr(x: np.ndarray) -> np.ndarray:
    """Coordinates (a, b, c) of X = aJ + bK + cK' along the last axis."""
    a = 0.5 * (x[..., 0, 1] - x[..., 1, 0])
    b = x[..., 0, 0]
    c = 0.5 * (x[..., 0, 1] + x[..., 1, 0])
    return np.stack([a, b, c], axis=-1)


def from_coords_arr(abc: np.ndarray) -> np.ndarray:
    abc = np.asarray(abc, dtype=float)
    a, b, c = abc[..., 0], abc[..., 1], abc[..., 2]
    out = np.empty(abc.shape[:-1] + (2, 2))
    out[..., 0, 0] = b
    out[..., 0, 1] = a + c
    out[..., 1, 0] = c - a
    out[..., 1, 1] = -b
    return out


def inv_arr(g: np.ndarray) -> np.ndarray:
    """Inverse of determinant-one matrices (adjugate formula)."""
    out = np.empty_like(g)
    out[..., 0, 0] = g[..., 1, 1]
    out[..., 0, 1] = -g[..., 0, 1]
    out[..., 1, 0] = -g[..., 1, 0]
    out[..., 1, 1] = g[..., 0, 0]
    return out


def sign_normalize_arr(g: np.ndarray) -> np.ndarray:
    """Choose the PSL representative with positive leading first-column entry."""
    lead = np.where(np.abs(g[..., 0, 0]) > SIGN_THRESHOLD, g[..., 0, 0], g[..., 1, 0])
    sign = np.where(lead < 0.0, -1.0, 1.0)
    return g * sign[..., None, None]


def align_sign_arr(g: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Pick the sign of g closer in Frobenius norm to ref (path continuity)."""
    plus = np.sum((g - ref) ** 2, axis=(-2, -1))
    minus = np.sum((g + ref) ** 2, axis=(-2, -1))
    sign = np.where(minus < plus, -1.0, 1.0)
    return g * sign[..., None, None]


def psl_distance_arr(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Frobenius distance between PSL classes (minimum over the sign)."""
    plus = np.sqrt(np.sum((g - h) ** 2, axis=(-2, -1)))
    minus = np.sqrt(np.sum((g + h) ** 2, axis=(-2, -1)))
    return np.minimum(plus, minus)


def exp_arr(x: np.ndarray, t: ArrayLike = 1.0) -> np.ndarray:
    """Closed-form exponential exp(tX) of trace-free matrices.

    Uses Y = tX with Y^2 = pairing(Y, Y)·I, so exp(Y) = c·I + s·Y where
    (c, s) are (cosh, sinh/arg) or (cos, sin/arg) depending on the sign of
    pairing(Y, Y), with a Taylor series near zero.
    """
    t = np.asarray(t, dtype=float)
    y = np.asarray(x, dtype=float) * t[..., None, None]
    n = pairing_arr(y, y)
    small = np.abs(n) < _SERIES_CUTOFF
    root = np.sqrt(np.abs(np.where(small, 1.0, n)))
    hyperbolic = n > 0
    c = np.where(hyperbolic, np.cosh(root), np.cos(root))
    s = np.where(hyperbolic, np.sinh(root), np.sin(root)) / root
    c_series = 1.0 + n / 2.0 + n * n / 24.0 + n ** 3 / 720.0
    s_series = 1.0 + n / 6.0 + n * n / 120.0 + n ** 3 / 5040.0
    c = np.where(small, c_series, c)
    s = np.where(small, s_series, s)
    return c[..., None, None] * I2 + s[..., None, None] * y


def f_embed_arr(z: np.ndarray) -> np.ndarray:
    """f(x+iy) = (1/y)·[[-x, x²+y²], [-1, x]] for complex arrays."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    if np.any(y <= 0):
        raise NotInHalfPlaneError("f_embed requires points with positive imaginary part")
    out = np.empty(z.shape + (2, 2))
    out[..., 0, 0] = -x / y
    out[..., 0, 1] = (x * x + y * y) / y
    out[..., 1, 0] = -1.0 / y
    out[..., 1, 1] = x / y
    return out


def f_partials_arr(z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Partial derivatives of f with respect to x and y."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    dx = np.empty(z.shape + (2, 2))
    dx[..., 0, 0] = -1.0 / y
    dx[..., 0, 1] = 2.0 * x / y
    dx[..., 1, 0] = 0.0
    dx[..., 1, 1] = 1.0 / y
    y2 = y * y
    dy = np.empty(z.shape + (2, 2))
    dy[..., 0, 0] = x / y2
    dy[..., 0, 1] = (y2 - x * x) / y2
    dy[..., 1, 0] = 1.0 / y2
    dy[..., 1, 1] = -x / y2
    return dx, dy


def f_invert_arr(x: np.ndarray, tol: float = UNIT_TOLERANCE) -> np.ndarray:
    """Inverse of f on unit future timelike elements; returns complex points.

    Raises:
        NotUnitTimelikeError: if some |pairing(X, X) + 1| exceeds tol
        PastDirectedError: if some element lies in the past cone (r >= 0)
    """
    x = np.asarray(x, dtype=float)
    norm = pairing_arr(x, x)
    if np.any(~np.isfinite(norm)) or np.any(np.abs(norm + 1.0) > tol):
        worst = float(np.max(np.abs(norm + 1.0)))
        raise NotUnitTimelikeError(f"pairing(X, X) deviates from -1 by {worst:.3e}")
    p = x[..., 0, 0]
    r = x[..., 1, 0]
    if np.any(r >= 0.0):
        raise PastDirectedError("element lies in the past cone (lower-left entry >= 0)")
    return p / r - 1j / r


def mobius_arr(g: np.ndarray, z: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    z = np.asarray(z, dtype=complex)
    return (g[..., 0, 0] * z + g[..., 0, 1]) / (g[..., 1, 0] * z + g[..., 1, 1])


def mobius_derivative_arr(g: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Complex derivative 1/(cz+d)² of the Möbius map (det g = 1)."""
    z = np.asarray(z, dtype=complex)
    return 1.0 / (g[..., 1, 0] * z + g[..., 1, 1]) ** 2


def translation_along_arr(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Hyperbolic translation carrying src to dst along their geodesic.

    Closed form (P + I)/sqrt(trace P + 2) with P = -f(dst)·f(src); this is
    the standard imaginary-axis translation conjugated into place and equals
    the identity when src = dst. trace P + 2 >= 4 on H2 x H2.
    """
    p = -(f_embed_arr(dst) @ f_embed_arr(src))
    tau = np.trace(p, axis1=-2, axis2=-1) + 2.0
    return (p + I2) / np.sqrt(tau)[..., None, None]


def hyperbolic_distance_arr(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return 2.0 * np.arcsinh(np.abs(z - w) / (2.0 * np.sqrt(z.imag * w.imag)))


def log_hyperbolic_arr(m: np.ndarray) -> np.ndarray:
    """Generator Y with exp(Y) = M for translations (trace >= 2, det 1)."""
    lam = 0.5 * np.trace(m, axis1=-2, axis2=-1)
    lam = np.maximum(lam, 1.0)
    theta = np.arccosh(lam)
    small = theta < 1e-6
    ratio = np.where(small, 1.0 - theta * theta / 6.0, theta / np.sinh(np.where(small, 1.0, theta)))
    return (m - lam[..., None, None] * I2) * ratio[..., None, None]


def sl2_field_arr(y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Velocity d/dt exp(tY)·z at t = 0, i.e. q + 2pz - rz² for Y = [[p,q],[r,-p]]."""
    z = np.asarray(z, dtype=complex)
    return y[..., 0, 1] + 2.0 * y[..., 0, 0] * z - y[..., 1, 0] * z * z


def geodesic_interp_arr(z0: np.ndarray, z1: np.ndarray, t: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """Constant-speed geodesic from z0 (t=0) to z1 (t=1) and its t-derivative."""
    gen = log_hyperbolic_arr(translation_along_arr(z0, z1))
    point = mobius_arr(exp_arr(gen, t), z0)
    return point, sl2_field_arr(gen, point)


# =============================================================================
# VALUE TYPES
# =============================================================================

class TraceClass(Enum):
    """Conjugacy type of a PSL(2,R) element"""

    IDENTITY = "identity"
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"

    @classmethod
    def from_string(cls, value: str) -> "TraceClass":
        normalized = value.lower().strip()
        for member in cls:
            if member.value == normalized:
                return member
        raise ValueError(f"Invalid trace class: {value}")


@dataclass(frozen=True, eq=False)
class AlgVec:
    """Element of sl(2,R): a trace-free real 2x2 matrix"""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float).reshape(2, 2)
        if abs(m[0, 0] + m[1, 1]) > TRACE_TOLERANCE * (1.0 + np.abs(m).max()):
            raise GeometryError(f"algebra element must be trace-free, trace = {m[0, 0] + m[1, 1]:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def from_coords(cls, a: float, b: float, c: float) -> "AlgVec":
        """Build aJ + bK + cK'."""
        return cls(from_coords_arr(np.array([a, b, c])))

    def coords(self) -> Tuple[float, float, float]:
        a, b, c = coords_arr(self.m)
        return float(a), float(b), float(c)

    def conjugate(self, g: "GroupElt") -> "AlgVec":
        """Adjoint action g·X·g⁻¹."""
        return AlgVec(g.m @ self.m @ inv_arr(g.m))

    def norm2(self) -> float:
        return pairing(self, self)

    def __add__(self, other: "AlgVec") -> "AlgVec":
        return AlgVec(self.m + other.m)

    def __sub__(self, other: "AlgVec") -> "AlgVec":
        return AlgVec(self.m - other.m)

    def __neg__(self) -> "AlgVec":
        return AlgVec(-self.m)

    def __mul__(self, scalar: float) -> "AlgVec":
        return AlgVec(self.m * float(scalar))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        a, b, c = self.coords()
        return f"AlgVec({a:.6g}·J + {b:.6g}·K + {c:.6g}·K')"


@dataclass(frozen=True, eq=False)
class GroupElt:
    """Element of PSL(2,R), stored as a sign-normalized determinant-one matrix.

    Matrices whose determinant is positive and within 1e-6 of one are rescaled
    by 1/sqrt(det) to absorb round-off; anything else is rejected.
    """

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det - 1.0) > DET_TOLERANCE:
            if det <= 0.0 or abs(det - 1.0) > 1e-6:
                raise GeometryError(f"group element must have determinant 1, got {det:.12g}")
            m = m / math.sqrt(det)
        m = sign_normalize_arr(m)
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> "GroupElt":
        return cls(I2)

    @classmethod
    def diag(cls, lam: float) -> "GroupElt":
        return cls(np.array([[lam, 0.0], [0.0, 1.0 / lam]]))

    def inverse(self) -> "GroupElt":
        return GroupElt(inv_arr(self.m))

    def __matmul__(self, other: "GroupElt") -> "GroupElt":
        return GroupElt(self.m @ other.m)

    def trace(self) -> float:
        return float(self.m[0, 0] + self.m[1, 1])

    def trace_class(self, tol: float = 1e-9) -> TraceClass:
        tr = abs(self.trace())
        if abs(tr - 2.0) <= tol:
            return TraceClass.IDENTITY if self.psl_distance(GroupElt.identity()) <= tol else TraceClass.PARABOLIC
        return TraceClass.HYPERBOLIC if tr > 2.0 else TraceClass.ELLIPTIC

    def psl_distance(self, other: "GroupElt") -> float:
        return float(psl_distance_arr(self.m, other.m))

    def is_close(self, other: "GroupElt", tol: float = 1e-9) -> bool:
        return self.psl_distance(other) <= tol

    def __repr__(self) -> str:
        (a, b), (c, d) = self.m
        return f"GroupElt([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


@dataclass(frozen=True)
class HPoint:
    """Point x + iy of the upper half-plane"""

    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0.0) or not math.isfinite(self.x):
            raise NotInHalfPlaneError(f"point ({self.x}, {self.y}) is not in the upper half-plane")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(float(np.real(z)), float(np.imag(z)))

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    def distance(self, other: "HPoint") -> float:
        return hyperbolic_distance(self, other)


@dataclass(frozen=True, eq=False)
class IsomPair:
    """Orientation-preserving isometry (left, right) of AdS3 and of H2 x H2.

    Acts on AdS3 by g ↦ left·g·right⁻¹ and on H2 x H2 componentwise.
    """

    left: GroupElt
    right: GroupElt

    @classmethod
    def identity(cls) -> "IsomPair":
        return cls(GroupElt.identity(), GroupElt.identity())

    @classmethod
    def diagonal(cls, g: GroupElt) -> "IsomPair":
        return cls(g, g)

    def inverse(self) -> "IsomPair":
        return IsomPair(self.left.inverse(), self.right.inverse())

    def __matmul__(self, other: "IsomPair") -> "IsomPair":
        return IsomPair(self.left @ other.left, self.right @ other.right)

    def act_group(self, g: GroupElt) -> GroupElt:
        return GroupElt(self.left.m @ g.m @ inv_arr(self.right.m))

    def act_points(self, zl: np.ndarray, zr: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return mobius_arr(self.left.m, zl), mobius_arr(self.right.m, zr)

    def psl_distance(self, other: "IsomPair") -> float:
        return max(self.left.psl_distance(other.left), self.right.psl_distance(other.right))


# =============================================================================
# OPERATIONS
# =============================================================================

def pairing(x: AlgVec, y: AlgVec) -> float:
    """Lorentzian pairing, 1/8 of the Killing form: trace(XY)/2.

    Args:
        x: trace-free element
        y: trace-free element

    Returns:
        The pairing value; J has norm -1, K and K' have norm +1.
    """
    return float(pairing_arr(x.m, y.m))


def cross(x: AlgVec, y: AlgVec) -> AlgVec:
    """Lorentzian cross product, (XY - YX)/2, so that [X, Y] = 2·cross(X, Y)."""
    return AlgVec(cross_arr(x.m, y.m))


def exp_alg(x: AlgVec, t: float = 1.0) -> GroupElt:
    """One-parameter subgroup exp(tX) as a PSL(2,R) element.

    For unit timelike X the orbit closes up: exp_alg(X, π) is the identity.
    """
    return GroupElt(exp_arr(x.m, t))


def f_embed(p: HPoint) -> AlgVec:
    """Isometric embedding of H2 onto the future unit sheet, f(i) = J."""
    return AlgVec(f_embed_arr(np.array(p.z)))


def f_invert(x: AlgVec, tol: float = UNIT_TOLERANCE) -> HPoint:
    """Inverse of f_embed.

    Raises:
        NotUnitTimelikeError: pairing(X, X) differs from -1 by more than tol
        PastDirectedError: X lies in the past cone
    """
    return HPoint.from_complex(complex(f_invert_arr(x.m, tol)))


def mobius(g: GroupElt, p: HPoint) -> HPoint:
    return HPoint.from_complex(complex(mobius_arr(g.m, np.array(p.z))))


def translation_along(src: HPoint, dst: HPoint) -> GroupElt:
    """Hyperbolic translation along the geodesic from src to dst.

    Returns the identity when src == dst; otherwise the result is hyperbolic
    with mobius(result, src) == dst.
    """
    if src == dst:
        return GroupElt.identity()
    return GroupElt(translation_along_arr(np.array(src.z), np.array(dst.z)))


def hyperbolic_distance(p: HPoint, q: HPoint) -> float:
    return float(hyperbolic_distance_arr(np.array(p.z), np.array(q.z)))


# =============================================================================
# KILLING FORM ORACLE
# =============================================================================

def structure_constants() -> np.ndarray:
    """c[i, j, k] with [E_i, E_j] = sum_k c[i, j, k] E_k in the basis (J, K, K')."""
    c = np.zeros((3, 3, 3))
    for i, ei in enumerate(BASIS):
        for j, ej in enumerate(BASIS):
            c[i, j] = coords_arr(ei @ ej - ej @ ei)
    return c


def killing_form(x: AlgVec, y: AlgVec) -> float:
    """Killing form trace(ad_X ∘ ad_Y) computed from structure constants."""
    c = structure_constants()
    xc = np.array(x.coords())
    yc = np.array(y.coords())
    ad_x = np.einsum("i,ijk->kj", xc, c)
    ad_y = np.einsum("i,ijk->kj", yc, c)
    return float(np.trace(ad_x @ ad_y))
