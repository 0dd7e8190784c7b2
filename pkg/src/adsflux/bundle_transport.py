#!/usr/bin/env python3
"""
Bundle Transport: parallel transport in the geodesic-flow bundle over H2 x H2

The projection of the unit tangent bundle of AdS3 to H2 x H2 is a principal
R-bundle (the R-action is the geodesic flow, with period π downstairs). The
connection ω = -g_S(χ, ·) has curvature dω = ½·π*Ω_ρ with Ω_ρ = Ω_l - Ω_r.
This module integrates the connection along paths of the base through the
canonical section and compares loop defects with symplectic areas.

Architecture:
- Paths: PathPiece, BasePath (concatenation, reversal, geodesic and sampled
  constructors), Disk (parametrized squares for areas)
- Transport: transport_offset, loop_defect (optionally with a shifted section)
- Areas: symplectic_area, geodesic_triangle_area
- Fiber coordinates: FiberCoord, fiber_gap, FrameHomotopy, deck_gap_homotopy
- Scans: coordinate_square, mixed_square, curvature_scan

Sign conventions: the parallel lift of a path satisfies t'(s) = -Σ*ω(d/ds),
so transport_offset = -∫Σ*ω and, by Stokes, loop_defect = -½·symplectic_area
for loops traversed counterclockwise in the moving factor's coordinates.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .adsgeom import (
    BiPoint,
    FramePoint,
    canonical_section,
    canonical_section_arr,
    geodesic_flow,
    project,
    project_arr,
    section_connection_arr,
)
from .errors import (
    EndpointMismatchError,
    HomotopyTooCoarseError,
    NotOnCommonFiberError,
    QuadratureError,
    StepBoundError,
)
from .lie_core import (
    IsomPair,
    align_sign_arr,
    exp_arr,
    geodesic_interp_arr,
    hyperbolic_distance_arr,
    inv_arr,
    mobius_arr,
    pairing_arr,
    psl_distance_arr,
)
from .quadrature import (
    GAUSS_NODES,
    GAUSS_WEIGHTS,
    adaptive_simpson,
    refine_sampled,
    simpson_grid,
)
from .settings import DEFAULT_NUMERICS, Numerics

_logger = logging.getLogger(__name__)

PointPair = Tuple[np.ndarray, np.ndarray]


# =============================================================================
# PATHS
# =============================================================================

@dataclass(frozen=True)
class PathPiece:
    """Smooth piece s ∈ [0, 1] ↦ (zl, zr), vectorized over s.

    derivative, when given, returns (dzl/ds, dzr/ds); pieces without it are
    integrated in the derivative-free (sampled) mode.
    """

    evaluate: Callable[[np.ndarray], PointPair]
    derivative: Optional[Callable[[np.ndarray], PointPair]] = None

    def reversed(self) -> "PathPiece":
        def evaluate(s):
            return self.evaluate(1.0 - np.asarray(s, dtype=float))

        derivative = None
        if self.derivative is not None:
            def derivative(s):
                dzl, dzr = self.derivative(1.0 - np.asarray(s, dtype=float))
                return -dzl, -dzr
        return PathPiece(evaluate, derivative)

    def length(self, samples: int = 32) -> float:
        """Largest factor length of the polygon through uniform samples."""
        zl, zr = self.evaluate(np.linspace(0.0, 1.0, samples + 1))
        zl = np.broadcast_to(zl, (samples + 1,))
        zr = np.broadcast_to(zr, (samples + 1,))
        return float(max(hyperbolic_distance_arr(zl[1:], zl[:-1]).sum(),
                         hyperbolic_distance_arr(zr[1:], zr[:-1]).sum()))


def _geodesic_piece(zl0: complex, zr0: complex, zl1: complex, zr1: complex) -> PathPiece:
    zl0, zr0, zl1, zr1 = (np.asarray(z, dtype=complex) for z in (zl0, zr0, zl1, zr1))

    def evaluate(s):
        s = np.asarray(s, dtype=float)
        return geodesic_interp_arr(zl0, zl1, s)[0], geodesic_interp_arr(zr0, zr1, s)[0]

    def derivative(s):
        s = np.asarray(s, dtype=float)
        return geodesic_interp_arr(zl0, zl1, s)[1], geodesic_interp_arr(zr0, zr1, s)[1]

    return PathPiece(evaluate, derivative)


@dataclass(frozen=True)
class BasePath:
    """Path in H2 x H2 made of smooth pieces, each parametrized by [0, 1]"""

    pieces: Tuple[PathPiece, ...]

    # ---- constructors --------------------------------------------------------

    @classmethod
    def constant(cls, b: BiPoint) -> "BasePath":
        zl, zr = b.zl, b.zr

        def evaluate(s):
            shape = np.shape(s)
            return np.full(shape, zl, dtype=complex), np.full(shape, zr, dtype=complex)

        def derivative(s):
            shape = np.shape(s)
            return np.zeros(shape, dtype=complex), np.zeros(shape, dtype=complex)

        return cls((PathPiece(evaluate, derivative),))

    @classmethod
    def geodesic(cls, b0: BiPoint, b1: BiPoint) -> "BasePath":
        """Constant-speed geodesic in each factor from b0 to b1."""
        return cls((_geodesic_piece(b0.zl, b0.zr, b1.zl, b1.zr),))

    @classmethod
    def polygon(cls, points: Sequence[BiPoint]) -> "BasePath":
        if len(points) < 2:
            raise ValueError("a polygon needs at least two points")
        return cls(tuple(_geodesic_piece(p.zl, p.zr, q.zl, q.zr) for p, q in zip(points[:-1], points[1:])))

    @classmethod
    def from_samples(cls, points: Sequence[BiPoint], numerics: Numerics = DEFAULT_NUMERICS) -> "BasePath":
        """Piecewise-geodesic path through samples obeying the step bound.

        Raises:
            StepBoundError: if two consecutive samples are further apart than
                numerics.step_bound in either factor
        """
        for k, (p, q) in enumerate(zip(points[:-1], points[1:])):
            if p.distance(q) > numerics.step_bound:
                raise StepBoundError(
                    f"samples {k} and {k + 1} are {p.distance(q):.4f} apart (bound {numerics.step_bound})"
                )
        return cls.polygon(points)

    @classmethod
    def from_function(cls, evaluate: Callable[[np.ndarray], PointPair],
                      derivative: Optional[Callable[[np.ndarray], PointPair]] = None) -> "BasePath":
        return cls((PathPiece(evaluate, derivative),))

    # ---- structure -----------------------------------------------------------

    def __add__(self, other: "BasePath") -> "BasePath":
        return BasePath(self.pieces + other.pieces)

    def reversed(self) -> "BasePath":
        return BasePath(tuple(piece.reversed() for piece in reversed(self.pieces)))

    def evaluate(self, s: np.ndarray) -> PointPair:
        """Evaluate at global parameters s ∈ [0, 1] (pieces share it equally)."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        m = len(self.pieces)
        index = np.minimum((s * m).astype(int), m - 1)
        local = s * m - index
        zl = np.empty(s.shape, dtype=complex)
        zr = np.empty(s.shape, dtype=complex)
        for k, piece in enumerate(self.pieces):
            mask = index == k
            if np.any(mask):
                a, b = piece.evaluate(local[mask])
                zl[mask] = a
                zr[mask] = b
        return zl, zr

    def point(self, s: float) -> BiPoint:
        zl, zr = self.evaluate(np.array([s]))
        return BiPoint.from_complex(complex(zl[0]), complex(zr[0]))

    @property
    def start(self) -> BiPoint:
        return self.point(0.0)

    @property
    def end(self) -> BiPoint:
        return self.point(1.0)

    def samples(self, n: int) -> List[Tuple[float, BiPoint]]:
        """n + 1 uniformly spaced (parameter, point) pairs."""
        params = np.linspace(0.0, 1.0, n + 1)
        zl, zr = self.evaluate(params)
        return [(float(s), BiPoint.from_complex(a, b)) for s, a, b in zip(params, zl, zr)]

    def is_closed(self, tol: float = 1e-12) -> bool:
        b0, b1 = self.start, self.end
        return abs(b0.zl - b1.zl) <= tol and abs(b0.zr - b1.zr) <= tol


# =============================================================================
# TRANSPORT
# =============================================================================

# A fiber shift t(zl, zr) defines the section b ↦ φ_{t(b)}(canonical_section(b))
FiberShift = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _min_intervals(piece: PathPiece, numerics: Numerics) -> int:
    return max(numerics.quad_min_nodes, int(math.ceil(piece.length() / numerics.step_bound)))


def _chord_sum(piece: PathPiece, n: int) -> float:
    """∫Σ*ω along the geodesic chords through n + 1 uniform samples."""
    zl, zr = piece.evaluate(np.linspace(0.0, 1.0, n + 1))
    zl = np.broadcast_to(np.asarray(zl, dtype=complex), (n + 1,))
    zr = np.broadcast_to(np.asarray(zr, dtype=complex), (n + 1,))
    nodes = GAUSS_NODES[None, :]
    pl, dl = geodesic_interp_arr(zl[:-1, None], zl[1:, None], nodes)
    pr, dr = geodesic_interp_arr(zr[:-1, None], zr[1:, None], nodes)
    alpha = section_connection_arr(pl, pr, dl, dr)
    return float(np.sum(alpha * GAUSS_WEIGHTS[None, :]))


def _shifted_integrand(piece: PathPiece, shift: FiberShift, h: float) -> Callable[[np.ndarray], np.ndarray]:
    def frames(s):
        zl, zr = piece.evaluate(s)
        g, u0 = canonical_section_arr(zl, zr)
        return g @ exp_arr(u0, shift(zl, zr)), u0

    def integrand(s):
        g, u0 = frames(s)
        g_plus, _ = frames(s + h)
        g_minus, _ = frames(s - h)
        dg = (align_sign_arr(g_plus, g) - align_sign_arr(g_minus, g)) / (2 * h)
        return -pairing_arr(u0, inv_arr(g) @ dg)

    return integrand


def _piece_connection_integral(piece: PathPiece, numerics: Numerics,
                               shift: Optional[FiberShift] = None) -> float:
    n_min = _min_intervals(piece, numerics)
    if shift is not None:
        integrand = _shifted_integrand(piece, shift, numerics.fd_step)
        return adaptive_simpson(integrand, 10 * numerics.quad_tol, n_min, numerics.quad_max_nodes).value
    if piece.derivative is not None:
        def integrand(s):
            zl, zr = piece.evaluate(s)
            dzl, dzr = piece.derivative(s)
            return section_connection_arr(zl, zr, dzl, dzr)
        return adaptive_simpson(integrand, numerics.quad_tol, n_min, numerics.quad_max_nodes).value
    start = max(numerics.sampled_nodes, n_min)
    if start > numerics.quad_max_nodes:
        raise StepBoundError(f"path piece needs {start} samples, more than the node budget")
    return refine_sampled(lambda n: _chord_sum(piece, n), numerics.quad_tol_sampled,
                          start, numerics.quad_max_nodes).value


def transport_offset(path: BasePath, numerics: Numerics = DEFAULT_NUMERICS) -> float:
    """Fiber offset of the parallel lift relative to the canonical section.

    Returns -∫Σ_can*ω along the path. Pieces with analytic derivatives use
    adaptive Simpson; sampled pieces are integrated chord by chord.

    Raises:
        StepBoundError: if a sampled piece needs more nodes than allowed
        QuadratureError: if a piece does not converge
    """
    return -sum(_piece_connection_integral(piece, numerics) for piece in path.pieces)


def loop_defect(loop: BasePath, section: Optional[FiberShift] = None,
                numerics: Numerics = DEFAULT_NUMERICS) -> float:
    """Transport defect -∮Σ*ω around a closed loop.

    Args:
        loop: closed path (endpoints equal within 1e-12)
        section: optional fiber shift t(b); the loop is then integrated with
            the shifted section by finite differences of its frames

    Raises:
        EndpointMismatchError: if the loop is not closed
    """
    if not loop.is_closed():
        raise EndpointMismatchError("loop endpoints differ")
    return -sum(_piece_connection_integral(piece, numerics, section) for piece in loop.pieces)


# =============================================================================
# SYMPLECTIC AREAS
# =============================================================================

def omega_half_plane(z: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Hyperbolic area form dx∧dy/y² evaluated on tangent vectors u, v at z."""
    return (u.real * v.imag - u.imag * v.real) / (z.imag ** 2)


@dataclass(frozen=True)
class Disk:
    """Parametrized map [0,1]² → H2 x H2, vectorized over (a, b).

    partials, when given, returns (∂a zl, ∂a zr, ∂b zl, ∂b zr).
    """

    evaluate: Callable[[np.ndarray, np.ndarray], PointPair]
    partials: Optional[Callable[[np.ndarray, np.ndarray], Tuple[np.ndarray, ...]]] = None

    def density(self, a: np.ndarray, b: np.ndarray, h: float = 1e-6) -> np.ndarray:
        zl, zr = self.evaluate(a, b)
        if self.partials is not None:
            al, ar, bl, br = self.partials(a, b)
        else:
            lp, rp = self.evaluate(a + h, b)
            lm, rm = self.evaluate(a - h, b)
            al, ar = (lp - lm) / (2 * h), (rp - rm) / (2 * h)
            lp, rp = self.evaluate(a, b + h)
            lm, rm = self.evaluate(a, b - h)
            bl, br = (lp - lm) / (2 * h), (rp - rm) / (2 * h)
        return omega_half_plane(zl, al, bl) - omega_half_plane(zr, ar, br)


def symplectic_area(disk: Disk, tol: float = 1e-12, max_intervals: int = 512) -> float:
    """∫∫ disk*Ω_ρ by a tensor Simpson rule with Richardson acceptance.

    Raises:
        QuadratureError: if the estimate misses tol at max_intervals
    """
    n = 16
    while True:
        grid = np.linspace(0.0, 1.0, n + 1)
        a, b = np.meshgrid(grid, grid, indexing="ij")
        values = disk.density(a, b)
        fine = float(simpson_grid(simpson_grid(values, axis=1), axis=0))
        coarse = float(simpson_grid(simpson_grid(values[::2, ::2], axis=1), axis=0))
        error = abs(fine - coarse) / 15.0
        if error <= tol * max(1.0, abs(fine)):
            return fine + (fine - coarse) / 15.0
        if n >= max_intervals:
            raise QuadratureError(f"symplectic area did not converge: error {error:.3e} at {n} intervals")
        n *= 2


def klein_lift_arr(z: np.ndarray) -> np.ndarray:
    """Hyperboloid vectors (X0, X1, X2) of half-plane points via the Klein chart."""
    z = np.asarray(z, dtype=complex)
    s = np.abs(z) ** 2 + 1.0
    k1 = 2.0 * z.real / s
    k2 = (np.abs(z) ** 2 - 1.0) / s
    # 1 - |k|² = 4y²/s² computed without cancellation
    x0 = s / (2.0 * z.imag)
    return np.stack([x0, x0 * k1, x0 * k2], axis=-1)


def geodesic_triangle_area(z1: np.ndarray, z2: np.ndarray, z3: np.ndarray) -> np.ndarray:
    """Signed hyperbolic area of geodesic triangles (positive counterclockwise).

    tan(A/2) = det(X1, X2, X3) / (1 - ⟨X1,X2⟩ - ⟨X2,X3⟩ - ⟨X3,X1⟩) on the
    hyperboloid with the Minkowski product ⟨X,Y⟩ = -X0Y0 + X1Y1 + X2Y2.
    """
    x1, x2, x3 = klein_lift_arr(z1), klein_lift_arr(z2), klein_lift_arr(z3)

    def mink(p, q):
        return -p[..., 0] * q[..., 0] + p[..., 1] * q[..., 1] + p[..., 2] * q[..., 2]

    det = np.linalg.det(np.stack([x1, x2, x3], axis=-2))
    denominator = 1.0 - mink(x1, x2) - mink(x2, x3) - mink(x3, x1)
    return 2.0 * np.arctan2(det, denominator)


# =============================================================================
# SQUARES AND CURVATURE SCANS
# =============================================================================

def _linear_square(base: Tuple[complex, complex], u: Tuple[complex, complex],
                   v: Tuple[complex, complex], eps: float) -> Tuple[Disk, BasePath]:
    bl, br = base
    ul, ur = u
    vl, vr = v

    def evaluate(a, b):
        return bl + eps * (a * ul + b * vl), br + eps * (a * ur + b * vr)

    def partials(a, b):
        shape = np.shape(a)
        return (np.full(shape, eps * ul), np.full(shape, eps * ur),
                np.full(shape, eps * vl), np.full(shape, eps * vr))

    def edge(p0: Tuple[float, float], p1: Tuple[float, float]) -> PathPiece:
        da, db = p1[0] - p0[0], p1[1] - p0[1]

        def piece_eval(s):
            s = np.asarray(s, dtype=float)
            return evaluate(p0[0] + s * da, p0[1] + s * db)

        def piece_derivative(s):
            shape = np.shape(s)
            return (np.full(shape, eps * (da * ul + db * vl), dtype=complex),
                    np.full(shape, eps * (da * ur + db * vr), dtype=complex))

        return PathPiece(piece_eval, piece_derivative)

    corners = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]
    loop = BasePath(tuple(edge(p, q) for p, q in zip(corners[:-1], corners[1:])))
    return Disk(evaluate, partials), loop


def coordinate_square(side: str, corner: complex, eps: float,
                      fixed: complex = 1j) -> Tuple[Disk, BasePath]:
    """Square [x, x+ε] x [y, y+ε] in one factor with the other factor fixed.

    The boundary loop runs counterclockwise in the moving factor's (x, y).
    """
    if side == "left":
        return _linear_square((corner, fixed), (1.0, 0.0), (1j, 0.0), eps)
    if side == "right":
        return _linear_square((fixed, corner), (0.0, 1.0), (0.0, 1j), eps)
    raise ValueError(f"Invalid side: {side}")


def mixed_square(base: BiPoint, u: Tuple[complex, complex], v: Tuple[complex, complex],
                 eps: float) -> Tuple[Disk, BasePath]:
    """Square spanned by two tangent directions (dzl, dzr) of H2 x H2."""
    return _linear_square((base.zl, base.zr), u, v, eps)


@dataclass(frozen=True)
class CurvatureRow:
    """One row of a curvature convergence scan"""

    eps: float
    area: float
    defect: float

    @property
    def defect_over_area(self) -> float:
        return self.defect / self.area

    @property
    def defect_over_eps2(self) -> float:
        """Defect per coordinate area; tends to -½ at first order in ε."""
        return self.defect / (self.eps ** 2)


def curvature_scan(epsilons: Sequence[float], side: str = "left", corner: complex = 1j,
                   numerics: Numerics = DEFAULT_NUMERICS) -> List[CurvatureRow]:
    rows = []
    for eps in epsilons:
        disk, loop = coordinate_square(side, corner, eps)
        rows.append(CurvatureRow(float(eps), symplectic_area(disk), loop_defect(loop, numerics=numerics)))
        _logger.info("curvature scan eps=%g defect=%.6e", eps, rows[-1].defect)
    return rows


# =============================================================================
# FIBER COORDINATES
# =============================================================================

@dataclass(frozen=True)
class FiberCoord:
    """Frame point geodesic_flow(canonical_section(base), t)"""

    base: BiPoint
    t: float

    def frame(self) -> FramePoint:
        return geodesic_flow(canonical_section(self.base), self.t)

    def shifted(self, dt: float) -> "FiberCoord":
        """The R-action of the principal bundle."""
        return FiberCoord(self.base, self.t + dt)

    def same_downstairs(self, other: "FiberCoord", tol: float = 1e-9) -> bool:
        """Equal as points of the PSL(2,R) bundle (fiber time modulo π)."""
        if self.base.distance(other.base) > tol:
            return False
        d = (self.t - other.t) / math.pi
        return abs(d - round(d)) * math.pi <= tol

    @classmethod
    def from_frame(cls, frame: FramePoint) -> "FiberCoord":
        base = project(frame)
        return cls(base, fiber_gap(canonical_section(base), frame))


def wrap_half_pi(t: np.ndarray) -> np.ndarray:
    """Reduce modulo π into [-π/2, π/2)."""
    return np.mod(np.asarray(t) + 0.5 * math.pi, math.pi) - 0.5 * math.pi


def raw_gap_arr(g1: np.ndarray, u1: np.ndarray, g2: np.ndarray) -> np.ndarray:
    """Flow time from (g1, u1) to (g2, u1) modulo π (principal value).

    For g2 = ±g1·exp(t·u1): trace(g1⁻¹g2)/2 = ±cos t and -trace(u1·g1⁻¹g2)/2 = ±sin t.
    """
    m = inv_arr(g1) @ g2
    c = 0.5 * np.trace(m, axis1=-2, axis2=-1)
    s = -0.5 * np.trace(u1 @ m, axis1=-2, axis2=-1)
    return wrap_half_pi(np.arctan2(s, c))


@dataclass(frozen=True)
class FrameHomotopy:
    """λ ∈ [0, 1] ↦ (g1, u1, g2, u2) arrays, two frames on a common fiber"""

    frames: Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]


def _common_fiber_residual(g1, u1, g2, u2) -> np.ndarray:
    l1, r1 = project_arr(g1, u1)
    l2, r2 = project_arr(g2, u2)
    return np.maximum(hyperbolic_distance_arr(l1, l2), hyperbolic_distance_arr(r1, r2))


def fiber_gap(f1: FramePoint, f2: FramePoint, homotopy: Optional[FrameHomotopy] = None,
              numerics: Numerics = DEFAULT_NUMERICS) -> float:
    """Flow time t with f2 = φ_t(f1), lifted to the universal cover.

    Without a homotopy the principal value in [-π/2, π/2) is returned. With
    one, the gap is tracked continuously from λ = 0 (principal value) to
    λ = 1, where the homotopy must end at (f1, f2).

    Raises:
        NotOnCommonFiberError: frames (or homotopy samples) project apart
        HomotopyTooCoarseError: the gap jumps more than numerics.gap_jump
        EndpointMismatchError: the homotopy does not end at (f1, f2)
    """
    if homotopy is None:
        if float(_common_fiber_residual(f1.g.m, f1.u0.m, f2.g.m, f2.u0.m)) > 1e-9:
            raise NotOnCommonFiberError("frames do not project to the same point of H2 x H2")
        return float(raw_gap_arr(f1.g.m, f1.u0.m, f2.g.m))

    lam = np.linspace(0.0, 1.0, numerics.homotopy_samples + 1)
    g1, u1, g2, u2 = homotopy.frames(lam)
    end_error = max(float(psl_distance_arr(g1[-1], f1.g.m)), float(np.abs(u1[-1] - f1.u0.m).max()),
                    float(psl_distance_arr(g2[-1], f2.g.m)), float(np.abs(u2[-1] - f2.u0.m).max()))
    if end_error > 1e-9:
        raise EndpointMismatchError(f"homotopy ends {end_error:.3e} away from the given frames")
    residual = _common_fiber_residual(g1, u1, g2, u2)
    if np.any(residual > 1e-9):
        raise NotOnCommonFiberError(f"homotopy leaves the common fiber (residual {residual.max():.3e})")
    return float(unwrap_gaps(raw_gap_arr(g1, u1, g2), numerics)[-1])


def unwrap_gaps(raw: np.ndarray, numerics: Numerics = DEFAULT_NUMERICS) -> np.ndarray:
    """Continuous lift of a sequence of gaps known modulo π.

    Raises:
        HomotopyTooCoarseError: if a step exceeds numerics.gap_jump
    """
    steps = wrap_half_pi(np.diff(raw))
    if steps.size and np.max(np.abs(steps)) > numerics.gap_jump:
        raise HomotopyTooCoarseError(f"fiber gap jumps by {np.max(np.abs(steps)):.3f} between samples")
    return raw[0] + np.concatenate([[0.0], np.cumsum(steps)])


def deck_gap_homotopy(a: IsomPair, connector: BasePath) -> FrameHomotopy:
    """Frames (act(a, Σ(b)), Σ(a·b)) along a connector path b(λ)."""
    alpha, beta = a.left.m, a.right.m
    beta_inv = inv_arr(beta)

    def frames(lam):
        zl, zr = connector.evaluate(lam)
        g, u0 = canonical_section_arr(zl, zr)
        g1 = alpha @ g @ beta_inv
        u1 = beta @ u0 @ beta_inv
        g2, u2 = canonical_section_arr(mobius_arr(alpha, zl), mobius_arr(beta, zr))
        return g1, u1, g2, u2

    return FrameHomotopy(frames)


def deck_gaps(a: IsomPair, connector: BasePath, numerics: Numerics = DEFAULT_NUMERICS) -> np.ndarray:
    """Continuously tracked gaps between act(a, Σ(b)) and Σ(a·b) along a connector."""
    lam = np.linspace(0.0, 1.0, numerics.homotopy_samples + 1)
    g1, u1, g2, _ = deck_gap_homotopy(a, connector).frames(lam)
    return unwrap_gaps(raw_gap_arr(g1, u1, g2), numerics)
