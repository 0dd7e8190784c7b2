#!/usr/bin/env python3
"""
Isotopies: one-parameter families t ∈ [0, 1] ↦ Λ_t of equivariant maps

Families:
- ConstantIsotopy: Λ_t = Λ0
- InterpolationIsotopy: factorwise constant-speed geodesics from Λ0(x) to Λ1(x)
- HamiltonianIsotopy: the flow of an invariant Hamiltonian on H2 x H2
- ClosedFormIsotopy: graph of the flow of a discrete harmonic 1-form
- ReversedIsotopy, ConcatenatedIsotopy

Symplectic conventions: Ω_ρ = Ω_l - Ω_r with Ω = dx∧dy/y² on each factor
and ι_ξ Ω_ρ = dH, so the left component of ξ is y²(∂_y H, -∂_x H) and the
right component is -y²(∂_y H, -∂_x H).

Invariant Hamiltonians:
- bump: H = Φ(cosh d(x, c)) summed over the deck orbit of c; its support
  stays inside the inscribed disk of the octagon, so the flow reduces points
  into the fundamental domain and rotates them about c.
- distance: H(x, y) = Φ(cosh d(x, β⁻¹·y)), invariant under the conjugate
  class ρ_r = β·ρ_l·β⁻¹.
- constant: H ≡ const, zero field.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, EndpointMismatchError, FlowDomainError, UnsupportedRepresentationError
from .fuchsian import EquivMap, OctagonDomain, RepClass, RepPair
from .lie_core import (
    exp_arr,
    f_embed_arr,
    geodesic_interp_arr,
    hyperbolic_distance_arr,
    inv_arr,
    mobius_arr,
)
from .settings import DEFAULT_NUMERICS, Numerics
from .surface_mesh import DiscreteOneForm, MeshFlow

_logger = logging.getLogger(__name__)

PointPair = Tuple[np.ndarray, np.ndarray]


# =============================================================================
# HAMILTONIANS
# =============================================================================

class HamiltonianKind(Enum):
    """Invariant Hamiltonian families"""

    BUMP = "bump"
    DISTANCE = "distance"
    CONSTANT = "constant"

    @classmethod
    def from_string(cls, value: str) -> "HamiltonianKind":
        normalized = value.lower().strip()
        for member in cls:
            if member.value == normalized:
                return member
        raise ValueError(f"Invalid Hamiltonian kind: {value}")


@dataclass(frozen=True)
class BumpProfile:
    """Φ(q) = A·exp(1 - 1/(1 - s)) for s = (q - 1)/(cosh ρ - 1) < 1, else 0.

    q is the hyperbolic cosine of the distance to the center, ρ the support
    radius and A the peak value at the center.
    """

    amplitude: float = 0.2
    radius: float = 0.8

    @property
    def scale(self) -> float:
        return math.cosh(self.radius) - 1.0

    def value(self, q: np.ndarray) -> np.ndarray:
        s = (np.asarray(q, dtype=float) - 1.0) / self.scale
        inside = s < 1.0
        safe = np.where(inside, s, 0.0)
        return np.where(inside, self.amplitude * np.exp(1.0 - 1.0 / (1.0 - safe)), 0.0)

    def derivative(self, q: np.ndarray) -> np.ndarray:
        s = (np.asarray(q, dtype=float) - 1.0) / self.scale
        inside = s < 1.0
        safe = np.where(inside, s, 0.0)
        core = self.amplitude * np.exp(1.0 - 1.0 / (1.0 - safe)) / (1.0 - safe) ** 2
        return np.where(inside, -core / self.scale, 0.0)


@dataclass(frozen=True)
class HamiltonianSpec:
    """Invariant Hamiltonian description.

    Attributes:
        kind: bump, distance or constant
        profile: radial profile Φ
        center: bump center c in the fundamental domain
        sides: factors moved by a bump ("left", "right" or "both")
        method: "rk4" or "exact" (bump rotations in closed form)
    """

    kind: HamiltonianKind = HamiltonianKind.BUMP
    profile: BumpProfile = field(default_factory=BumpProfile)
    center: complex = 1j
    sides: str = "left"
    method: str = "rk4"

    def validate(self, domain: OctagonDomain) -> "HamiltonianSpec":
        """Raises ConfigError when the bump support can leave the inscribed disk."""
        if self.sides not in ("left", "right", "both"):
            raise ConfigError(f"invalid bump sides: {self.sides}")
        if self.method not in ("rk4", "exact"):
            raise ConfigError(f"invalid integration method: {self.method}")
        if self.kind is HamiltonianKind.BUMP:
            if not (self.center.imag > 0):
                raise ConfigError("bump center must lie in the upper half-plane")
            reach = float(hyperbolic_distance_arr(np.array(self.center), np.array(1j))) + self.profile.radius
            if reach > domain.inradius:
                raise ConfigError(
                    f"bump support reaches {reach:.4f}, beyond the octagon inradius {domain.inradius:.4f}"
                )
        return self


def cosh_distance_gradient(z: np.ndarray, c: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """q = cosh d(z, c) = 1 + |z - c|²/(2·Im z·Im c) and its z-partials."""
    z = np.asarray(z, dtype=complex)
    c = np.asarray(c, dtype=complex)
    y, cy = z.imag, c.imag
    diff = z - c
    d2 = np.abs(diff) ** 2
    q = 1.0 + d2 / (2.0 * y * cy)
    qx = diff.real / (y * cy)
    qy = diff.imag / (y * cy) - d2 / (2.0 * y * y * cy)
    return q, qx, qy


def symplectic_gradient(z: np.ndarray, hx: np.ndarray, hy: np.ndarray) -> np.ndarray:
    """Field X with Ω(X, ·) = dh for Ω = dx∧dy/y², as a complex number."""
    y2 = np.asarray(z).imag ** 2
    return y2 * (hy - 1j * hx)


def rk4(field_fn: Callable[[np.ndarray, np.ndarray], PointPair], zl: np.ndarray, zr: np.ndarray,
        duration: float, step: float) -> PointPair:
    """Classical RK4 for (zl, zr) over the given duration with steps ≤ step.

    Raises:
        FlowDomainError: if the state leaves the half-plane or becomes non-finite
    """
    if duration == 0.0:
        return zl, zr
    n = max(1, int(math.ceil(abs(duration) / step - 1e-9)))
    h = duration / n
    for _ in range(n):
        k1l, k1r = field_fn(zl, zr)
        k2l, k2r = field_fn(zl + 0.5 * h * k1l, zr + 0.5 * h * k1r)
        k3l, k3r = field_fn(zl + 0.5 * h * k2l, zr + 0.5 * h * k2r)
        k4l, k4r = field_fn(zl + h * k3l, zr + h * k3r)
        zl = zl + h / 6.0 * (k1l + 2 * k2l + 2 * k3l + k4l)
        zr = zr + h / 6.0 * (k1r + 2 * k2r + 2 * k3r + k4r)
    if not (np.all(np.isfinite(zl)) and np.all(np.isfinite(zr))) or np.any(zl.imag <= 0) or np.any(zr.imag <= 0):
        raise FlowDomainError("Hamiltonian flow left the upper half-plane")
    return zl, zr


class HamiltonianFlow:
    """Time-t flow of an invariant Hamiltonian on H2 x H2"""

    def __init__(self, rep: RepPair, spec: HamiltonianSpec, domain: Optional[OctagonDomain] = None,
                 numerics: Numerics = DEFAULT_NUMERICS):
        if rep.rep_class is RepClass.GENERAL:
            raise UnsupportedRepresentationError("invariant Hamiltonians need a diagonal or conjugate representation")
        self.rep = rep
        self.domain = domain if domain is not None else OctagonDomain()
        self.spec = spec.validate(self.domain)
        self.numerics = numerics
        beta = rep.beta.m if rep.beta is not None else np.eye(2)
        self.beta = beta
        self.beta_inv = inv_arr(beta)

    # ---- fields --------------------------------------------------------------

    def _bump_field(self, z: np.ndarray) -> np.ndarray:
        q, qx, qy = cosh_distance_gradient(z, self.spec.center)
        dphi = self.spec.profile.derivative(q)
        return symplectic_gradient(z, dphi * qx, dphi * qy)

    def _distance_field(self, zl: np.ndarray, zr: np.ndarray) -> PointPair:
        q, qxl, qyl = cosh_distance_gradient(zl, mobius_arr(self.beta_inv, zr))
        _, qxr, qyr = cosh_distance_gradient(zr, mobius_arr(self.beta, zl))
        dphi = self.spec.profile.derivative(q)
        return (symplectic_gradient(zl, dphi * qxl, dphi * qyl),
                -symplectic_gradient(zr, dphi * qxr, dphi * qyr))

    def field(self, zl: np.ndarray, zr: np.ndarray) -> PointPair:
        """Hamiltonian vector field ξ at (zl, zr)."""
        zl = np.asarray(zl, dtype=complex)
        zr = np.asarray(zr, dtype=complex)
        kind = self.spec.kind
        if kind is HamiltonianKind.CONSTANT:
            return np.zeros_like(zl), np.zeros_like(zr)
        if kind is HamiltonianKind.DISTANCE:
            return self._distance_field(zl, zr)
        left = np.zeros_like(zl)
        right = np.zeros_like(zr)
        sides = self.spec.sides
        if sides in ("left", "both"):
            z_fd, deck, _ = self.domain.reduce(zl)
            left = self._transport_field(deck, z_fd, self._bump_field(z_fd))
        if sides in ("right", "both"):
            w = mobius_arr(self.beta_inv, zr)
            w_fd, deck, _ = self.domain.reduce(w)
            # pushed forward by β·deck
            right = -self._transport_field(self.beta @ deck, w_fd, self._bump_field(w_fd))
        return left, right

    @staticmethod
    def _transport_field(g: np.ndarray, z: np.ndarray, v: np.ndarray) -> np.ndarray:
        return v / (g[..., 1, 0] * z + g[..., 1, 1]) ** 2

    # ---- flows ---------------------------------------------------------------

    def _rotate(self, z_fd: np.ndarray, t: float) -> np.ndarray:
        angle = bump_rotation_angle(self.spec, z_fd, t)
        rot = exp_arr(f_embed_arr(np.array(self.spec.center)), 0.5 * angle)
        return mobius_arr(rot, z_fd)

    def _bump_factor(self, z: np.ndarray, t: float, conj: np.ndarray) -> np.ndarray:
        w = mobius_arr(inv_arr(conj), z)
        w_fd, deck, _ = self.domain.reduce(w)
        if self.spec.method == "exact":
            moved = self._rotate(w_fd, t)
        else:
            def single(a, b):
                return self._bump_field(a), np.zeros_like(b)
            moved, _ = rk4(single, w_fd, np.zeros_like(w_fd), t, self.numerics.ode_step)
        return mobius_arr(conj @ deck, moved)

    def flow(self, zl: np.ndarray, zr: np.ndarray, t: float) -> PointPair:
        """Ψ_t(zl, zr)."""
        zl = np.atleast_1d(np.asarray(zl, dtype=complex))
        zr = np.atleast_1d(np.asarray(zr, dtype=complex))
        kind = self.spec.kind
        if kind is HamiltonianKind.CONSTANT or t == 0.0:
            return zl.copy(), zr.copy()
        if kind is HamiltonianKind.DISTANCE:
            return rk4(self._distance_field, zl, zr, t, self.numerics.ode_step)
        sides = self.spec.sides
        left = self._bump_factor(zl, t, np.eye(2)) if sides in ("left", "both") else zl.copy()
        right = self._bump_factor(zr, -t, self.beta) if sides in ("right", "both") else zr.copy()
        return left, right

    def hamiltonian(self, zl: np.ndarray, zr: np.ndarray) -> np.ndarray:
        """Value of the invariant Hamiltonian."""
        zl = np.atleast_1d(np.asarray(zl, dtype=complex))
        zr = np.atleast_1d(np.asarray(zr, dtype=complex))
        profile = self.spec.profile
        if self.spec.kind is HamiltonianKind.CONSTANT:
            return np.zeros(zl.shape)
        if self.spec.kind is HamiltonianKind.DISTANCE:
            q, _, _ = cosh_distance_gradient(zl, mobius_arr(self.beta_inv, zr))
            return profile.value(q)
        total = np.zeros(zl.shape)
        if self.spec.sides in ("left", "both"):
            total += profile.value(cosh_distance_gradient(self.domain.reduce(zl)[0], self.spec.center)[0])
        if self.spec.sides in ("right", "both"):
            w_fd = self.domain.reduce(mobius_arr(self.beta_inv, zr))[0]
            total += profile.value(cosh_distance_gradient(w_fd, self.spec.center)[0])
        return total


# =============================================================================
# ISOTOPY PATHS
# =============================================================================

class IsotopyPath(ABC):
    """Family t ∈ [0, 1] ↦ Λ_t of equivariant maps.

    Only the endpoints are required to be Lagrangian.
    """

    rep: Optional[RepPair] = None
    smooth: bool = True
    name: str = "isotopy"

    @abstractmethod
    def evaluate_times(self, z: np.ndarray, times: Sequence[float]) -> PointPair:
        """(len(times), len(z)) arrays of Λ_t(z) for nondecreasing times."""

    def velocity(self, z: np.ndarray, t: float) -> Optional[PointPair]:
        """∂_t Λ_t(z) when available in closed form, else None."""
        return None

    def evaluate(self, z: np.ndarray, t: float) -> PointPair:
        zl, zr = self.evaluate_times(np.atleast_1d(z), [t])
        return zl[0], zr[0]

    def time_derivative(self, z: np.ndarray, t: float, h: float = 1e-5) -> PointPair:
        """∂_t Λ_t(z), analytic or by one-sided-safe central differences."""
        v = self.velocity(z, t)
        if v is not None:
            return v
        lo, hi = max(0.0, t - h), min(1.0, t + h)
        zl, zr = self.evaluate_times(np.atleast_1d(z), [lo, hi])
        return (zl[1] - zl[0]) / (hi - lo), (zr[1] - zr[0]) / (hi - lo)

    def time_derivatives(self, z: np.ndarray, times: Sequence[float],
                         values: Optional[PointPair] = None) -> PointPair:
        """Stacked ∂_t Λ_t(z) for several times; values = evaluate_times(z, times) if known."""
        parts = [self.time_derivative(np.atleast_1d(z), float(t)) for t in times]
        return np.stack([p[0] for p in parts]), np.stack([p[1] for p in parts])

    def segments(self) -> List["IsotopyPath"]:
        """Pieces that are smooth in t, each parametrized by [0, 1]."""
        return [self]

    def at(self, t: float) -> EquivMap:
        return EquivMap(lambda z: self.evaluate(z, t), self.rep, None, self.smooth, f"{self.name}@{t:g}")

    @property
    def start(self) -> EquivMap:
        return self.at(0.0)

    @property
    def end(self) -> EquivMap:
        return self.at(1.0)

    def reversed(self) -> "IsotopyPath":
        return ReversedIsotopy(self)

    def concatenate(self, other: "IsotopyPath", base: complex = 1j) -> "IsotopyPath":
        return ConcatenatedIsotopy(self, other, base)


def _sorted_times(times: Sequence[float]) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be nondecreasing")
    return times


class ConstantIsotopy(IsotopyPath):
    def __init__(self, start: EquivMap):
        self.map = start
        self.rep = start.rep
        self.smooth = start.smooth
        self.name = f"constant({start.name})"

    def evaluate_times(self, z, times):
        times = _sorted_times(times)
        zl, zr = self.map(np.atleast_1d(z))
        return np.tile(zl, (len(times), 1)), np.tile(zr, (len(times), 1))

    def velocity(self, z, t):
        z = np.atleast_1d(z)
        return np.zeros(z.shape, dtype=complex), np.zeros(z.shape, dtype=complex)


class InterpolationIsotopy(IsotopyPath):
    """Λ_t(x): the factorwise geodesic from Λ0(x) to Λ1(x) at time t."""

    def __init__(self, start: EquivMap, end: EquivMap):
        self.first = start
        self.last = end
        self.rep = start.rep
        self.smooth = start.smooth and end.smooth
        self.name = f"interp({start.name}->{end.name})"

    def _ends(self, z):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        l0, r0 = self.first(z)
        l1, r1 = self.last(z)
        return l0, r0, l1, r1

    def evaluate_times(self, z, times):
        times = _sorted_times(times)[:, None]
        l0, r0, l1, r1 = self._ends(z)
        return geodesic_interp_arr(l0, l1, times)[0], geodesic_interp_arr(r0, r1, times)[0]

    def velocity(self, z, t):
        l0, r0, l1, r1 = self._ends(z)
        return geodesic_interp_arr(l0, l1, t)[1], geodesic_interp_arr(r0, r1, t)[1]


class HamiltonianIsotopy(IsotopyPath):
    """Λ_t = Ψ_{t·duration} ∘ Λ0 for an invariant Hamiltonian flow Ψ."""

    def __init__(self, flow: HamiltonianFlow, duration: float, start: EquivMap):
        self.flow = flow
        self.duration = float(duration)
        self.first = start
        self.rep = flow.rep
        self.smooth = start.smooth
        self.name = f"hamiltonian({flow.spec.kind.value},{duration:g})"

    def evaluate_times(self, z, times):
        times = _sorted_times(times)
        zl, zr = self.first(np.atleast_1d(z))
        out_l = np.empty((len(times),) + zl.shape, dtype=complex)
        out_r = np.empty_like(out_l)
        if self.flow.spec.method == "exact":
            for i, t in enumerate(times):
                out_l[i], out_r[i] = self.flow.flow(zl, zr, t * self.duration)
            return out_l, out_r
        # autonomous flow: step from the previous time
        current = 0.0
        for i, t in enumerate(times):
            zl, zr = self.flow.flow(zl, zr, (t - current) * self.duration)
            current = t
            out_l[i], out_r[i] = zl, zr
        return out_l, out_r

    def velocity(self, z, t):
        zl, zr = self.evaluate(z, t)
        vl, vr = self.flow.field(zl, zr)
        return self.duration * vl, self.duration * vr

    def time_derivatives(self, z, times, values=None):
        zl, zr = values if values is not None else self.evaluate_times(z, times)
        vl, vr = self.flow.field(zl, zr)
        return self.duration * vl, self.duration * vr


class ClosedFormIsotopy(IsotopyPath):
    """Λ_t(x) = (x, ψ_{t·duration}(x)) for the flow ψ of a harmonic form."""

    def __init__(self, rep: RepPair, form: DiscreteOneForm, duration: float,
                 numerics: Numerics = DEFAULT_NUMERICS):
        if rep.rep_class is not RepClass.DIAGONAL:
            raise UnsupportedRepresentationError("closed-form isotopies need the diagonal representation")
        self.rep = rep
        self.form = form
        self.duration = float(duration)
        self.flow = MeshFlow(form, 1.0 if duration >= 0 else -1.0, numerics)
        self.smooth = form.is_zero() or duration == 0.0
        self.name = f"closed_form({duration:g})"

    def evaluate_times(self, z, times):
        times = _sorted_times(times)
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        left = np.tile(z, (len(times), 1))
        if self.form.is_zero() or self.duration == 0.0:
            return left, left.copy()
        if np.any(times < 0):
            raise ValueError("closed-form isotopies are parametrized by t ∈ [0, 1]")
        return left, self.flow.flow_times(z, times * abs(self.duration))

    def velocity(self, z, t):
        zl, zr = self.evaluate(z, t)
        return np.zeros_like(zl), abs(self.duration) * self.flow.velocity(zr)


class ReversedIsotopy(IsotopyPath):
    def __init__(self, path: IsotopyPath):
        self.path = path
        self.rep = path.rep
        self.smooth = path.smooth
        self.name = f"reversed({path.name})"

    def evaluate_times(self, z, times):
        times = _sorted_times(times)
        zl, zr = self.path.evaluate_times(z, (1.0 - times)[::-1])
        return zl[::-1], zr[::-1]

    def velocity(self, z, t):
        v = self.path.velocity(z, 1.0 - t)
        return None if v is None else (-v[0], -v[1])


class ConcatenatedIsotopy(IsotopyPath):
    """First path on [0, ½], second on [½, 1].

    Raises:
        EndpointMismatchError: if the first path does not end where the
            second starts (checked at the base point)
    """

    def __init__(self, first: IsotopyPath, second: IsotopyPath, base: complex = 1j):
        end_l, end_r = first.evaluate(np.array([base]), 1.0)
        start_l, start_r = second.evaluate(np.array([base]), 0.0)
        gap = max(float(hyperbolic_distance_arr(end_l, start_l).max()),
                  float(hyperbolic_distance_arr(end_r, start_r).max()))
        if gap > 1e-8:
            raise EndpointMismatchError(f"isotopies do not match at the junction (gap {gap:.3e})")
        self.first = first
        self.second = second
        self.rep = first.rep
        self.smooth = first.smooth and second.smooth
        self.name = f"{first.name}+{second.name}"

    def evaluate_times(self, z, times):
        times = _sorted_times(times)
        z = np.atleast_1d(z)
        early = times <= 0.5
        parts_l, parts_r = [], []
        if np.any(early):
            zl, zr = self.first.evaluate_times(z, 2.0 * times[early])
            parts_l.append(zl)
            parts_r.append(zr)
        if np.any(~early):
            zl, zr = self.second.evaluate_times(z, 2.0 * times[~early] - 1.0)
            parts_l.append(zl)
            parts_r.append(zr)
        return np.concatenate(parts_l), np.concatenate(parts_r)

    def velocity(self, z, t):
        v = self.first.velocity(z, 2.0 * t) if t <= 0.5 else self.second.velocity(z, 2.0 * t - 1.0)
        return None if v is None else (2.0 * v[0], 2.0 * v[1])

    def segments(self):
        return self.first.segments() + self.second.segments()


# =============================================================================
# CONSTRUCTORS
# =============================================================================

def hamiltonian_isotopy(rep: RepPair, spec: HamiltonianSpec, duration: float, start: EquivMap,
                        domain: Optional[OctagonDomain] = None,
                        numerics: Numerics = DEFAULT_NUMERICS) -> HamiltonianIsotopy:
    """Isotopy generated by an invariant Hamiltonian.

    Raises:
        UnsupportedRepresentationError: for general-class representations
        ConfigError: if the bump support does not fit the fundamental domain
    """
    _logger.debug("Hamiltonian isotopy: %s on %s, duration %g", spec.kind.value, spec.sides, duration)
    return HamiltonianIsotopy(HamiltonianFlow(rep, spec, domain, numerics), duration, start)


def closed_form_isotopy(rep: RepPair, form: DiscreteOneForm, duration: float,
                        numerics: Numerics = DEFAULT_NUMERICS) -> ClosedFormIsotopy:
    """Graph of the symplectic flow with ι_X Ω_r = θ on the right factor.

    Raises:
        UnsupportedRepresentationError: unless rep is diagonal
    """
    return ClosedFormIsotopy(rep, form, duration, numerics)


def interpolation_isotopy(start: EquivMap, end: EquivMap) -> InterpolationIsotopy:
    return InterpolationIsotopy(start, end)


def bump_rotation_angle(spec: HamiltonianSpec, z: np.ndarray, t: float) -> np.ndarray:
    """Counterclockwise angle about the center by which the bump flow turns z."""
    q, _, _ = cosh_distance_gradient(z, spec.center)
    return -t * spec.profile.derivative(q)
