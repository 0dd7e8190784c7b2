#!/usr/bin/env python3
"""
Lagrangian Lab: equivariant surfaces, Gauss maps, flux and holonomy

A ρ-equivariant spacelike surface σ̃: H2 → AdS3 has a unit normal lift to the
unit tangent bundle that is horizontal for the geodesic-flow connection; its
projection to H2 x H2 (the Gauss map) is Lagrangian for Ω_ρ = Ω_l - Ω_r. For
paths of equivariant Lagrangian maps the flux of the swept cylinders equals
the change of holonomy of the flat bundle over them.

Architecture:
- Surfaces: SurfaceAdS, geodesic_plane_surface, bent_plane_surface
- Normal lifts: normal_field, normal_lift, gauss_map, normal_flow_residual,
  horizontality_residual, projection_rank
- Lagrangian condition: lagrangian_defect
- Flux: flux (Simpson rule for smooth families, geodesic cells otherwise)
- Holonomy: relative_holonomy, anchored_holonomy, section_closure
- Flow diagnostics: area_distortion

Representations, loop words and the octagon domain live in fuchsian, the
genus-two mesh and harmonic forms in surface_mesh, isotopy families in
isotopies; their public names are re-exported here.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .adsgeom import (
    FramePath,
    FramePoint,
    act,
    canonical_section,
    connection_along,
    normalize_timelike,
    project_arr,
)
from .bundle_transport import (
    BasePath,
    PathPiece,
    deck_gaps,
    fiber_gap,
    geodesic_triangle_area,
    omega_half_plane,
    transport_offset,
    wrap_half_pi,
)
from .errors import (
    DegenerateSurfaceError,
    NonLagrangianError,
    NotUnitTimelikeError,
    QuadratureError,
    UnsupportedRepresentationError,
)
from .fuchsian import (
    GENERATOR_NAMES,
    DomainPath,
    EquivMap,
    LoopWord,
    OctagonDomain,
    RepClass,
    RepPair,
    conjugate_rep,
    diagonal_map,
    explicit_rep,
    generator_words,
    graph_map,
    octagon_rep,
    scaled_map,
    shear_map,
)
from .isotopies import (
    BumpProfile,
    ConstantIsotopy,
    HamiltonianKind,
    HamiltonianSpec,
    InterpolationIsotopy,
    IsotopyPath,
    closed_form_isotopy,
    hamiltonian_isotopy,
    interpolation_isotopy,
)
from .lie_core import (
    AlgVec,
    GroupElt,
    align_sign_arr,
    cross_arr,
    exp_arr,
    f_embed_arr,
    f_partials_arr,
    hyperbolic_distance_arr,
    inv_arr,
    mobius_arr,
    pairing_arr,
    psl_distance_arr,
)
from .quadrature import refine_sampled, simpson_grid
from .settings import DEFAULT_NUMERICS, Numerics
from .surface_mesh import DiscreteOneForm, MeshFlow, SurfaceMesh, harmonic_one_form

_logger = logging.getLogger(__name__)

# one-sided partials farther apart than this mark a crease of a piecewise map
CREASE_GATE = 1e-4


# =============================================================================
# SURFACES
# =============================================================================

@dataclass(frozen=True)
class SurfaceAdS:
    """Map σ̃: H2 → PSL(2,R), vectorized over complex arrays.

    Attributes:
        evaluate: z ↦ (..., 2, 2) group elements
        rep: ρ with σ̃(γ·x) = ρ_l(γ)·σ̃(x)·ρ_r(γ)⁻¹
        partials: optional z ↦ (∂x σ̃, ∂y σ̃)
        name: label used in reports
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    rep: Optional[RepPair] = None
    partials: Optional[Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]] = None
    name: str = "surface"

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return self.evaluate(np.asarray(z, dtype=complex))

    def derivatives(self, z: np.ndarray, h: float = 1e-5) -> Tuple[np.ndarray, np.ndarray]:
        z = np.asarray(z, dtype=complex)
        if self.partials is not None:
            return self.partials(z)
        g = self.evaluate(z)

        def diff(dz):
            plus = align_sign_arr(self.evaluate(z + dz), g)
            minus = align_sign_arr(self.evaluate(z - dz), g)
            return (plus - minus) / (2 * h)

        return diff(h), diff(1j * h)

    def body_tangents(self, z: np.ndarray, h: float = 1e-5) -> Tuple[np.ndarray, np.ndarray]:
        """Left-translated coordinate tangents g⁻¹∂x g and g⁻¹∂y g."""
        g_inv = inv_arr(self.evaluate(np.asarray(z, dtype=complex)))
        gx, gy = self.derivatives(z, h)
        w1, w2 = g_inv @ gx, g_inv @ gy
        # drop the trace left over by finite differences
        w1 = w1 - 0.5 * np.trace(w1, axis1=-2, axis2=-1)[..., None, None] * np.eye(2)
        w2 = w2 - 0.5 * np.trace(w2, axis1=-2, axis2=-1)[..., None, None] * np.eye(2)
        return w1, w2

    def induced_metric(self, z: np.ndarray, h: float = 1e-5) -> np.ndarray:
        """First fundamental form in the coordinate basis, shape (..., 2, 2)."""
        w1, w2 = self.body_tangents(z, h)
        off = pairing_arr(w1, w2)
        return np.stack([np.stack([pairing_arr(w1, w1), off], axis=-1),
                         np.stack([off, pairing_arr(w2, w2)], axis=-1)], axis=-2)

    def equivariance_residual(self, z: np.ndarray, domain: OctagonDomain) -> float:
        """Largest PSL distance between σ̃(γ·z) and ρ_l(γ)·σ̃(z)·ρ_r(γ)⁻¹."""
        if self.rep is None:
            raise UnsupportedRepresentationError(f"surface '{self.name}' carries no representation")
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        g = self.evaluate(z)
        worst = 0.0
        for gamma, image in zip(domain.generators, self.rep.generators):
            moved = self.evaluate(mobius_arr(gamma.m, z))
            expected = image.left.m @ g @ inv_arr(image.right.m)
            worst = max(worst, float(np.max(psl_distance_arr(moved, expected))))
        return worst


def geodesic_plane_surface(rep: RepPair) -> SurfaceAdS:
    """Totally geodesic plane σ̃(x) = exp(π/2·f(x))·β⁻¹ for ρ_r = β·ρ_l·β⁻¹.

    exp(π/2·f(x)) = f(x) because f(x)² = -1. Its Gauss map is the graph
    x ↦ (x, β·x).

    Raises:
        UnsupportedRepresentationError: for general-class representations
    """
    if rep.rep_class is RepClass.GENERAL:
        raise UnsupportedRepresentationError("geodesic planes need a diagonal or conjugate representation")
    beta_inv = inv_arr(rep.beta.m) if rep.beta is not None else np.eye(2)

    def evaluate(z):
        return f_embed_arr(z) @ beta_inv

    def partials(z):
        fx, fy = f_partials_arr(z)
        return fx @ beta_inv, fy @ beta_inv

    return SurfaceAdS(evaluate, rep, partials, "geodesic_plane")


def bent_plane_surface(amplitude: float = 0.15) -> SurfaceAdS:
    """Local curved surface σ̃(x+iy) = f(x+iy)·exp(s·H), s = amplitude·sin(x)·cos(y - 1).

    H = diag(½, -½). The surface carries no representation; it is spacelike
    near i for small amplitudes and has a non-isometric Gauss map.
    """
    def bend(z):
        s = amplitude * np.sin(z.real) * np.cos(z.imag - 1.0)
        d = np.zeros(z.shape + (2, 2))
        d[..., 0, 0] = np.exp(0.5 * s)
        d[..., 1, 1] = np.exp(-0.5 * s)
        return d

    def evaluate(z):
        return f_embed_arr(z) @ bend(z)

    def partials(z):
        fz, d = f_embed_arr(z), bend(z)
        fx, fy = f_partials_arr(z)
        sx = amplitude * np.cos(z.real) * np.cos(z.imag - 1.0)
        sy = -amplitude * np.sin(z.real) * np.sin(z.imag - 1.0)
        hd = np.zeros_like(d)
        hd[..., 0, 0] = 0.5 * d[..., 0, 0]
        hd[..., 1, 1] = -0.5 * d[..., 1, 1]
        return (fx @ d + sx[..., None, None] * (fz @ hd),
                fy @ d + sy[..., None, None] * (fz @ hd))

    return SurfaceAdS(evaluate, None, partials, f"bent_plane({amplitude:g})")


def anchor_map(rep: RepPair) -> EquivMap:
    """Gauss map of the geodesic plane of an anchored class, in closed form."""
    if rep.rep_class is RepClass.GENERAL:
        raise UnsupportedRepresentationError("anchored holonomy needs a diagonal or conjugate representation")
    return graph_map(rep, rep.beta, "anchor")


# =============================================================================
# NORMAL LIFTS AND GAUSS MAPS
# =============================================================================

def normal_field(sigma: SurfaceAdS, z: np.ndarray,
                 numerics: Numerics = DEFAULT_NUMERICS) -> Tuple[np.ndarray, np.ndarray]:
    """Arrays (g, N0) of the future unit normal in body frame.

    N0 is the normalized cross product of the body tangents, flipped into
    the future cone when needed.

    Raises:
        DegenerateSurfaceError: if the induced metric is not positive definite
    """
    z = np.asarray(z, dtype=complex)
    h = sigma.induced_metric(z, numerics.fd_step)
    min_eig = np.linalg.eigvalsh(h)[..., 0]
    if np.any(min_eig <= numerics.spacelike_min_eig):
        raise DegenerateSurfaceError(
            f"surface '{sigma.name}' is not spacelike (min eigenvalue {float(np.min(min_eig)):.3e})"
        )
    w1, w2 = sigma.body_tangents(z, numerics.fd_step)
    try:
        n0 = normalize_timelike(cross_arr(w1, w2))
    except NotUnitTimelikeError as e:
        raise DegenerateSurfaceError(str(e)) from e
    return sigma.evaluate(z), n0


def normal_lift(sigma: SurfaceAdS, p: complex, numerics: Numerics = DEFAULT_NUMERICS) -> FramePoint:
    """σ_N(p) = (σ̃(p), N0(p))."""
    g, n0 = normal_field(sigma, np.array(complex(p)), numerics)
    return FramePoint(GroupElt(g), AlgVec(n0))


def gauss_map(sigma: SurfaceAdS, numerics: Numerics = DEFAULT_NUMERICS) -> EquivMap:
    """π∘σ_N: x ↦ (f⁻¹(g·N0·g⁻¹), f⁻¹(N0))."""
    def evaluate(z):
        g, n0 = normal_field(sigma, z, numerics)
        return project_arr(g, n0)

    return EquivMap(evaluate, sigma.rep, None, True, f"gauss({sigma.name})")


def normal_flow_residual(sigma: SurfaceAdS, z: np.ndarray, t: float,
                         numerics: Numerics = DEFAULT_NUMERICS) -> float:
    """Distance between the Gauss map and the projection of the φ_t-flowed normal lift."""
    g, n0 = normal_field(sigma, z, numerics)
    zl, zr = project_arr(g, n0)
    fl, fr = project_arr(g @ exp_arr(n0, t), n0)
    return float(max(np.max(hyperbolic_distance_arr(zl, fl)), np.max(hyperbolic_distance_arr(zr, fr))))


def horizontality_residual(sigma: SurfaceAdS, p: complex, direction: complex,
                           numerics: Numerics = DEFAULT_NUMERICS) -> float:
    """|ω| on the velocity of the normal lift along p + s·direction at s = 0."""
    def frame_at(s: float) -> FramePoint:
        return normal_lift(sigma, complex(p) + s * complex(direction), numerics)

    return abs(connection_along(FramePath(frame_at), 0.0, numerics))


def projection_rank(sigma: SurfaceAdS, z: np.ndarray, threshold: float = 1e-6,
                    numerics: Numerics = DEFAULT_NUMERICS) -> np.ndarray:
    """Numerical rank of d(Π∘σ_N) = dσ̃ at each sample, from the body tangents."""
    w1, w2 = sigma.body_tangents(np.atleast_1d(np.asarray(z, dtype=complex)), numerics.fd_step)
    rows = np.stack([w1.reshape(w1.shape[:-2] + (4,)), w2.reshape(w2.shape[:-2] + (4,))], axis=-2)
    sv = np.linalg.svd(rows, compute_uv=False)
    return np.sum(sv > threshold * np.maximum(1.0, sv[..., :1]), axis=-1)


# =============================================================================
# LAGRANGIAN CONDITION
# =============================================================================

def _defect_from_partials(zl, zr, lx, ly, rx, ry) -> np.ndarray:
    omega = omega_half_plane(zl, lx, ly) - omega_half_plane(zr, rx, ry)

    def metric(z, u, v):
        return (u.real * v.real + u.imag * v.imag) / z.imag ** 2

    gxx = metric(zl, lx, lx) + metric(zr, rx, rx)
    gxy = metric(zl, lx, ly) + metric(zr, rx, ry)
    gyy = metric(zl, ly, ly) + metric(zr, ry, ry)
    return np.abs(omega) / np.sqrt(gxx * gyy - gxy ** 2)


def _one_sided_partials(lam: EquivMap, z: np.ndarray, h: float, sign: float):
    zl, zr = lam(z)
    lx, rx = lam(z + sign * h)
    ly, ry = lam(z + sign * 1j * h)
    return ((lx - zl) / (sign * h), (ly - zl) / (sign * h),
            (rx - zr) / (sign * h), (ry - zr) / (sign * h))


def lagrangian_defect(lam: EquivMap, z: np.ndarray, numerics: Numerics = DEFAULT_NUMERICS) -> np.ndarray:
    """|Λ*Ω_ρ(∂x, ∂y)| divided by the area element of h_l ⊕ h_r.

    Piecewise-smooth maps are differentiated one-sidedly in both quadrant
    directions and the larger defect is reported, so creases do not pollute
    the value.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zl, zr = lam(z)
    if lam.smooth:
        return _defect_from_partials(zl, zr, *lam.partials(z, numerics.fd_step))
    h = 0.01 * numerics.fd_step
    forward = _defect_from_partials(zl, zr, *_one_sided_partials(lam, z, h, 1.0))
    backward = _defect_from_partials(zl, zr, *_one_sided_partials(lam, z, h, -1.0))
    return np.maximum(forward, backward)


def _gate(lam: EquivMap, numerics: Numerics) -> float:
    return numerics.lagrangian_gate if lam.smooth else numerics.lagrangian_gate_mesh


def check_lagrangian(lam: EquivMap, z: np.ndarray, numerics: Numerics = DEFAULT_NUMERICS) -> float:
    """Largest defect over z.

    Raises:
        NonLagrangianError: if it exceeds the analytic or mesh gate
    """
    worst = float(np.max(lagrangian_defect(lam, z, numerics)))
    if worst > _gate(lam, numerics):
        raise NonLagrangianError(f"map '{lam.name}' has Lagrangian defect {worst:.3e}")
    return worst


# =============================================================================
# FLUX
# =============================================================================

def _loop_lift(word: LoopWord, domain: OctagonDomain, base: complex) -> DomainPath:
    return word.lift(domain.generators, base)


def _base_of(lam_rep: Optional[RepPair]) -> complex:
    return lam_rep.base_point.z if lam_rep is not None else 1j


def _smooth_piece_density(path: IsotopyPath, evaluate, s: np.ndarray, ts: np.ndarray, h: float) -> np.ndarray:
    z = evaluate(s)
    n1 = len(s)
    left, right = path.evaluate_times(np.concatenate([z, evaluate(s + h), evaluate(s - h)]), ts)
    l0, r0 = left[:, :n1], right[:, :n1]
    dsl = (left[:, n1:2 * n1] - left[:, 2 * n1:]) / (2 * h)
    dsr = (right[:, n1:2 * n1] - right[:, 2 * n1:]) / (2 * h)
    vl, vr = path.time_derivatives(z, ts, (l0, r0))
    return omega_half_plane(l0, dsl, vl) - omega_half_plane(r0, dsr, vr)


def _smooth_flux(path: IsotopyPath, lift: DomainPath, numerics: Numerics) -> float:
    """Tensor Simpson rule on each letter of the loop, doubled to tolerance."""
    n = max(4, numerics.quad_min_nodes + (-numerics.quad_min_nodes) % 4)
    m = max(4, numerics.flux_t_panels + (-numerics.flux_t_panels) % 4)
    pieces = [lift.piece(k)[0] for k in range(lift.n_pieces)]
    while True:
        s = np.linspace(0.0, 1.0, n + 1)
        ts = np.linspace(0.0, 1.0, m + 1)
        fine = coarse = 0.0
        for evaluate in pieces:
            density = _smooth_piece_density(path, evaluate, s, ts, numerics.fd_step)
            fine += float(simpson_grid(simpson_grid(density, axis=1), axis=0))
            coarse += float(simpson_grid(simpson_grid(density[::2, ::2], axis=1), axis=0))
        error = abs(fine - coarse) / 15.0
        if error <= numerics.flux_tol * max(1.0, abs(fine)):
            _logger.debug("flux accepted on %d x %d nodes (error %.2e)", n, m, error)
            return fine + (fine - coarse) / 15.0
        if max(n, m) >= numerics.flux_max_intervals:
            raise QuadratureError(f"flux did not converge: error {error:.3e} at {n} x {m} intervals")
        n *= 2
        m *= 2


def _cell_flux(path: IsotopyPath, lift: DomainPath, numerics: Numerics) -> float:
    """Sum of signed geodesic-cell areas of the swept cylinder in both factors."""
    pieces = [lift.piece(k)[0] for k in range(lift.n_pieces)]

    def estimate(n: int) -> float:
        m = max(2, n * numerics.flux_t_panels // numerics.sampled_nodes)
        ts = np.linspace(0.0, 1.0, m + 1)
        total = 0.0
        for evaluate in pieces:
            left, right = path.evaluate_times(evaluate(np.linspace(0.0, 1.0, n + 1)), ts)
            for factor, sign in ((left, 1.0), (right, -1.0)):
                p00, p10 = factor[:-1, :-1], factor[:-1, 1:]
                p01, p11 = factor[1:, :-1], factor[1:, 1:]
                cells = geodesic_triangle_area(p00, p10, p11) + geodesic_triangle_area(p00, p11, p01)
                total += sign * float(np.sum(cells))
        return total

    return refine_sampled(estimate, numerics.quad_tol_sampled, numerics.sampled_nodes,
                          numerics.quad_max_nodes).value


def flux(path: IsotopyPath, word: LoopWord, numerics: Numerics = DEFAULT_NUMERICS,
         domain: Optional[OctagonDomain] = None, base: Optional[complex] = None) -> float:
    """∫∫ F*Ω_ρ(∂s, ∂t) for F(s, t) = Λ_t(ℓ̃(s)), ℓ̃ the lifted loop of word.

    Families smooth in both variables use a tensor Simpson rule with the
    analytic t-velocity; piecewise-smooth ones sum signed geodesic cell
    areas with Richardson refinement. Concatenations are integrated piece
    by piece.

    Raises:
        QuadratureError: if the integration does not converge
    """
    domain = domain if domain is not None else OctagonDomain()
    base = base if base is not None else _base_of(path.rep)
    lift = _loop_lift(word, domain, base)
    total = 0.0
    for segment in path.segments():
        if segment.smooth:
            total += _smooth_flux(segment, lift, numerics)
        else:
            total += _cell_flux(segment, lift, numerics)
    _logger.debug("flux of %s around %s: %.9g", path.name, word, total)
    return total


# =============================================================================
# HOLONOMY
# =============================================================================

def _mapped_piece(lam: EquivMap, evaluate, derivative, h: float) -> PathPiece:
    def piece_eval(s):
        return lam(evaluate(np.asarray(s, dtype=float)))

    if not lam.smooth:
        return PathPiece(piece_eval)

    def piece_derivative(s):
        z = evaluate(np.asarray(s, dtype=float))
        dz = derivative(np.asarray(s, dtype=float))
        lx, ly, rx, ry = lam.partials(z, h)
        return lx * dz.real + ly * dz.imag, rx * dz.real + ry * dz.imag

    return PathPiece(piece_eval, piece_derivative)


def mapped_loop(lam: EquivMap, word: LoopWord, domain: Optional[OctagonDomain] = None,
                base: Optional[complex] = None, numerics: Numerics = DEFAULT_NUMERICS) -> BasePath:
    """Λ̃∘ℓ̃ as a base path, one piece per letter."""
    domain = domain if domain is not None else OctagonDomain()
    base = base if base is not None else _base_of(lam.rep)
    lift = _loop_lift(word, domain, base)
    return BasePath(tuple(_mapped_piece(lam, *lift.piece(k), numerics.fd_step) for k in range(lift.n_pieces)))


def _loop_samples(word: LoopWord, domain: OctagonDomain, base: complex, per_piece: int = 8) -> np.ndarray:
    lift = _loop_lift(word, domain, base)
    s = np.linspace(0.0, 1.0, per_piece, endpoint=False)
    return np.concatenate([lift.piece(k)[0](s) for k in range(lift.n_pieces)])


def relative_holonomy(lam: EquivMap, ref: EquivMap, word: LoopWord, connector: Optional[BasePath] = None,
                      numerics: Numerics = DEFAULT_NUMERICS, domain: Optional[OctagonDomain] = None,
                      rep: Optional[RepPair] = None) -> float:
    """hol_Λ(τ) - hol_ref(τ), in units where the fiber period is π.

    With T the transport offsets along Λ̃∘ℓ̃ and ref∘ℓ̃, and c(b) the fiber gap
    from ρ(τ)·Σ(b) to Σ(ρ(τ)·b) tracked along the connector from ref(x̃0)
    to Λ̃(x̃0), the result is 2·[(T_Λ - T_ref) + (c_end - c_start)].

    Raises:
        NonLagrangianError: if either map fails the Lagrangian gate on the loop
        HomotopyTooCoarseError: if the gap cannot be tracked along the connector
        UnsupportedRepresentationError: if no representation is available
    """
    domain = domain if domain is not None else OctagonDomain()
    rep = rep if rep is not None else (lam.rep if lam.rep is not None else ref.rep)
    if rep is None:
        raise UnsupportedRepresentationError("relative holonomy needs the representation ρ")
    base = rep.base_point.z
    samples = _loop_samples(word, domain, base)
    for m in (lam, ref):
        check_lagrangian(m, samples, numerics)

    offset = (transport_offset(mapped_loop(lam, word, domain, base, numerics), numerics)
              - transport_offset(mapped_loop(ref, word, domain, base, numerics), numerics))
    if connector is None:
        connector = BasePath.geodesic(ref.at(base), lam.at(base))
    gaps = deck_gaps(rep.element(word), connector, numerics)
    value = 2.0 * (offset + float(gaps[-1] - gaps[0]))
    _logger.debug("relative holonomy of %s vs %s around %s: %.9g", lam.name, ref.name, word, value)
    return value


def anchored_holonomy(rep: RepPair, lam: EquivMap, word: LoopWord, numerics: Numerics = DEFAULT_NUMERICS,
                      domain: Optional[OctagonDomain] = None) -> float:
    """Holonomy relative to the Gauss map of the geodesic plane, whose holonomy vanishes.

    Raises:
        UnsupportedRepresentationError: for general-class representations
    """
    return relative_holonomy(lam, anchor_map(rep), word, None, numerics, domain, rep)


def section_closure(rep: RepPair, lam: EquivMap, word: LoopWord, numerics: Numerics = DEFAULT_NUMERICS,
                    domain: Optional[OctagonDomain] = None) -> float:
    """Fiber offset between the transported canonical frame and its deck image, modulo π.

    Zero exactly when the parallel section along Λ̃∘ℓ̃ closes up equivariantly.
    """
    domain = domain if domain is not None else OctagonDomain()
    base = rep.base_point.z
    b0 = lam.at(base)
    offset = transport_offset(mapped_loop(lam, word, domain, base, numerics), numerics)
    a = rep.element(word)
    gap = fiber_gap(act(a, canonical_section(b0)), canonical_section(b0.act(a)), numerics=numerics)
    return float(wrap_half_pi(offset + gap))


def holonomy_table(lam: EquivMap, ref: EquivMap, words: Sequence[LoopWord],
                   numerics: Numerics = DEFAULT_NUMERICS, domain: Optional[OctagonDomain] = None,
                   rep: Optional[RepPair] = None) -> List[float]:
    return [relative_holonomy(lam, ref, w, None, numerics, domain, rep) for w in words]


# =============================================================================
# FLOW DIAGNOSTICS
# =============================================================================

def _flow_jacobian(flow: MeshFlow, z: np.ndarray, duration: float, h: float, sign: float):
    w = flow.flow(z, duration)
    wx = flow.flow(z + sign * h, duration)
    wy = flow.flow(z + sign * 1j * h, duration)
    dx = (wx - w) / (sign * h)
    dy = (wy - w) / (sign * h)
    return w, np.stack([np.stack([dx.real, dy.real], -1), np.stack([dx.imag, dy.imag], -1)], -2)


def area_distortion(flow: MeshFlow, z: np.ndarray, duration: float, h: float = 1e-7) -> np.ndarray:
    """|det Dψ·y0²/y1² - 1| of the time-duration flow map at each sample.

    Samples on a crease (one-sided Jacobians disagreeing by more than
    CREASE_GATE) are reported as NaN.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w, forward = _flow_jacobian(flow, z, duration, h, 1.0)
    _, backward = _flow_jacobian(flow, z, duration, h, -1.0)
    crease = np.max(np.abs(forward - backward), axis=(-2, -1)) > CREASE_GATE
    det = np.linalg.det(0.5 * (forward + backward))
    out = np.abs(det * z.imag ** 2 / w.imag ** 2 - 1.0)
    if np.any(crease):
        _logger.warning("skipping %d of %d area samples on creases", int(np.sum(crease)), z.size)
    return np.where(crease, np.nan, out)


__all__ = [
    # surfaces and Gauss maps
    "SurfaceAdS", "geodesic_plane_surface", "bent_plane_surface", "anchor_map", "normal_field", "normal_lift",
    "gauss_map", "normal_flow_residual", "horizontality_residual", "projection_rank",
    # Lagrangian condition, flux and holonomy
    "lagrangian_defect", "check_lagrangian", "flux", "mapped_loop", "relative_holonomy",
    "anchored_holonomy", "section_closure", "holonomy_table", "area_distortion",
    # representations and loops
    "RepClass", "RepPair", "octagon_rep", "conjugate_rep", "explicit_rep", "LoopWord", "DomainPath",
    "GENERATOR_NAMES", "generator_words", "OctagonDomain", "EquivMap", "graph_map", "diagonal_map",
    "shear_map", "scaled_map",
    # meshes and isotopies
    "SurfaceMesh", "DiscreteOneForm", "MeshFlow", "harmonic_one_form", "IsotopyPath", "ConstantIsotopy",
    "InterpolationIsotopy", "HamiltonianKind", "HamiltonianSpec", "BumpProfile", "hamiltonian_isotopy",
    "closed_form_isotopy", "interpolation_isotopy",
]
