#!/usr/bin/env python3
"""
Surface Mesh: triangulated octagon, discrete harmonic 1-forms and their flows

The genus-two surface is meshed as the regular octagon fundamental domain cut
into eight wedges (center, V_{j-1}, V_j), each subdivided into n² triangles
that are straight in Klein coordinates, hence geodesic. Boundary vertices are
identified through the side pairings; the quotient carries the cotangent
Laplacian whose weights are computed in the conformal Poincaré-disk chart.

Architecture:
- SurfaceMesh: construction, plain-text serialization, Euler characteristic,
  point location, quotient classes with deck offsets, cotangent Laplacian
- harmonic_one_form: harmonic representative with prescribed periods, as a
  DiscreteOneForm carrying the quasi-periodic primitive u with
  u(h·w) = u(w) + period(h)
- MeshFlow: exact trajectories of the symplectic field X with ι_XΩ = du

Inside a triangle the primitive interpolates vertex values rationally,
u = Σ u_i·w_i·μ_i / Σ w_i·μ_i with w_i = sqrt(1 - |k_i|²) and μ the Klein
barycentrics. Its level sets are straight Klein segments, so the flow moves
points along chords and the elapsed time has a closed form.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix
from scipy.sparse.linalg import spsolve
from scipy.spatial import cKDTree

from .errors import FlowDomainError, MeshFormatError, SingularSolveError
from .fuchsian import (
    LoopWord,
    OctagonDomain,
    from_klein,
    klein_to_disk,
    to_klein,
)
from .lie_core import mobius_arr, mobius_derivative_arr
from .settings import DEFAULT_NUMERICS, Numerics

_logger = logging.getLogger(__name__)

MATCH_TOLERANCE = 1e-8
OVERSHOOT = 1e-12
SIDE_SLACK = 1e-14


# =============================================================================
# MESH
# =============================================================================

class SurfaceMesh:
    """Triangulated fundamental domain with boundary identifications.

    Attributes:
        vertices: complex half-plane coordinates of the domain lift
        triangles: (F, 3) vertex indices, counterclockwise
        identifications: (m, 3) rows (i, j, code) meaning vertex j = code·vertex i
        domain: the octagon domain whose side pairings define the codes
    """

    def __init__(self, vertices: np.ndarray, triangles: np.ndarray, identifications: np.ndarray,
                 domain: Optional[OctagonDomain] = None, subdivision: Optional[int] = None):
        self.vertices = np.asarray(vertices, dtype=complex)
        self.triangles = np.asarray(triangles, dtype=int).reshape(-1, 3)
        self.identifications = np.asarray(identifications, dtype=int).reshape(-1, 3)
        self.domain = domain if domain is not None else OctagonDomain()
        self.subdivision = subdivision
        self.klein = to_klein(self.vertices)
        self._lookup: Optional[np.ndarray] = None
        self._wedge_inverse: Optional[np.ndarray] = None
        self._classes: Optional[Tuple[np.ndarray, np.ndarray]] = None
        self._centroid_tree: Optional[cKDTree] = None
        self._barycentric: Optional[np.ndarray] = None

    # ---- construction --------------------------------------------------------

    @classmethod
    def octagon(cls, subdivision: int = DEFAULT_NUMERICS.mesh_subdivision,
                domain: Optional[OctagonDomain] = None) -> "SurfaceMesh":
        """Mesh of the octagon with subdivision² triangles per wedge."""
        domain = domain if domain is not None else OctagonDomain()
        n = int(subdivision)
        if n < 1:
            raise ValueError("subdivision must be positive")
        corners = domain.vertices
        index: Dict[Tuple[int, int], int] = {}
        points: List[np.ndarray] = []

        def vertex_id(k: np.ndarray) -> int:
            key = (int(round(k[0] * 1e11)), int(round(k[1] * 1e11)))
            if key not in index:
                index[key] = len(points)
                points.append(k)
            return index[key]

        lookup = np.full((8, 2, n, n), -1, dtype=int)
        triangles = []
        for j in range(8):
            v_prev, v_next = corners[(j - 1) % 8], corners[j]
            grid = np.full((n + 1, n + 1), -1, dtype=int)
            for i1 in range(n + 1):
                for i2 in range(n + 1 - i1):
                    grid[i1, i2] = vertex_id((i1 * v_prev + i2 * v_next) / n)
            for i1 in range(n):
                for i2 in range(n - i1):
                    lookup[j, 0, i1, i2] = len(triangles)
                    triangles.append((grid[i1, i2], grid[i1 + 1, i2], grid[i1, i2 + 1]))
                    if i1 + i2 <= n - 2:
                        lookup[j, 1, i1, i2] = len(triangles)
                        triangles.append((grid[i1 + 1, i2], grid[i1 + 1, i2 + 1], grid[i1, i2 + 1]))

        klein = np.array(points)
        vertices = from_klein(klein)
        identifications = cls._match_sides(klein, vertices, domain)
        mesh = cls(vertices, np.array(triangles), identifications, domain, n)
        mesh._lookup = lookup
        _logger.debug("octagon mesh: %d vertices, %d triangles, %d identifications",
                      len(vertices), len(triangles), len(identifications))
        return mesh

    @staticmethod
    def _match_sides(klein: np.ndarray, vertices: np.ndarray, domain: OctagonDomain) -> np.ndarray:
        excess = domain.side_excess(klein)
        tree = cKDTree(klein)
        rows = []
        for side, code in enumerate(domain.SIDE_CODES):
            if code < 0:
                continue
            on_side = np.nonzero(np.abs(excess[:, side]) <= 1e-12)[0]
            images = to_klein(mobius_arr(domain.reduction[side], vertices[on_side]))
            distance, partner = tree.query(images)
            if np.any(distance > MATCH_TOLERANCE * np.maximum(1.0, np.linalg.norm(images, axis=-1))):
                raise MeshFormatError(f"side {side} vertices have no partner on the paired side")
            rows.extend((int(i), int(p), code) for i, p in zip(on_side, partner))
        return np.array(rows, dtype=int)

    # ---- serialization -------------------------------------------------------

    def to_text(self) -> str:
        """Plain-text form: `v x y`, `t i j k` and `e i j g` lines."""
        lines = ["# adsflux surface mesh"]
        lines.extend(f"v {z.real:.17g} {z.imag:.17g}" for z in self.vertices)
        lines.extend(f"t {a} {b} {c}" for a, b, c in self.triangles)
        lines.extend(f"e {i} {j} {g}" for i, j, g in self.identifications)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, domain: Optional[OctagonDomain] = None) -> "SurfaceMesh":
        """Parse the plain-text form.

        Raises:
            MeshFormatError: on an unknown record, a malformed field or an
                out-of-range index
        """
        vertices, triangles, identifications = [], [], []
        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            try:
                if fields[0] == "v" and len(fields) == 3:
                    vertices.append(complex(float(fields[1]), float(fields[2])))
                elif fields[0] == "t" and len(fields) == 4:
                    triangles.append(tuple(int(f) for f in fields[1:]))
                elif fields[0] == "e" and len(fields) == 4:
                    identifications.append(tuple(int(f) for f in fields[1:]))
                else:
                    raise MeshFormatError(f"line {number}: unrecognized record '{line}'")
            except ValueError as e:
                raise MeshFormatError(f"line {number}: {e}") from e
        n_vertices = len(vertices)
        for row in triangles:
            if min(row) < 0 or max(row) >= n_vertices:
                raise MeshFormatError(f"triangle {row} references a missing vertex")
        for i, j, g in identifications:
            if not (0 <= i < n_vertices and 0 <= j < n_vertices) or abs(g) not in (1, 2, 3, 4):
                raise MeshFormatError(f"identification ({i}, {j}, {g}) is invalid")
        if any(z.imag <= 0 for z in vertices):
            raise MeshFormatError("vertex outside the upper half-plane")
        subdivision = int(round(math.sqrt(len(triangles) / 8))) if triangles else None
        return cls(np.array(vertices), np.array(triangles, dtype=int),
                   np.array(identifications, dtype=int), domain, subdivision)

    # ---- topology ------------------------------------------------------------

    def edges(self) -> np.ndarray:
        """Unique undirected edges as sorted index pairs."""
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    def boundary_edges(self) -> np.ndarray:
        t = self.triangles
        e = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
        unique, counts = np.unique(e, axis=0, return_counts=True)
        return unique[counts == 1]

    def identified_edge_pairs(self) -> int:
        """Number of boundary edges glued to a partner; all must be glued.

        Raises:
            MeshFormatError: if some boundary edge has no partner
        """
        partners: Dict[int, Dict[int, int]] = {}
        for i, j, code in self.identifications:
            partners.setdefault(int(code), {})[int(i)] = int(j)
        boundary = {tuple(e) for e in self.boundary_edges().tolist()}
        glued = 0
        for a, b in boundary:
            for partner in partners.values():
                if a in partner and b in partner:
                    image = tuple(sorted((partner[a], partner[b])))
                    if image in boundary and image != (a, b):
                        glued += 1
                        break
        if 2 * glued != len(boundary):
            raise MeshFormatError(f"{len(boundary) - 2 * glued} boundary edges are not identified")
        return glued

    def vertex_classes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Quotient vertex class of each vertex and its deck offset.

        Returns (cls, offsets) where cls[v] is the class index and offsets[v]
        the exponent sums (4,) with u_v = u_class + offsets[v]·periods.

        Raises:
            MeshFormatError: if the identifications are inconsistent
        """
        if self._classes is not None:
            return self._classes
        n = len(self.vertices)
        parent = np.arange(n)
        offset = np.zeros((n, 4))

        def find(v: int) -> Tuple[int, np.ndarray]:
            total = np.zeros(4)
            path = []
            while parent[v] != v:
                path.append(v)
                total = total + offset[v]
                v = parent[v]
            root = v
            # path compression
            acc = total.copy()
            for w in path:
                o = offset[w].copy()
                parent[w] = root
                offset[w] = acc
                acc = acc - o
            return root, total

        for i, j, code in self.identifications:
            ri, oi = find(int(i))
            rj, oj = find(int(j))
            c = OctagonDomain.code_counts(int(code))
            if ri != rj:
                parent[rj] = ri
                offset[rj] = oi + c - oj
            elif np.abs(oj - oi - c).max() > 0.5:
                raise MeshFormatError(f"inconsistent identification of vertices {i} and {j}")

        roots = np.empty(n, dtype=int)
        offsets = np.empty((n, 4))
        for v in range(n):
            roots[v], offsets[v] = find(v)
        _, cls = np.unique(roots, return_inverse=True)
        self._classes = (cls, offsets)
        return self._classes

    def euler_characteristic(self) -> int:
        cls, _ = self.vertex_classes()
        n_classes = int(cls.max()) + 1
        n_edges = len(self.edges()) - self.identified_edge_pairs()
        return n_classes - n_edges + len(self.triangles)

    # ---- geometry ------------------------------------------------------------

    def cotangent_weights(self) -> Tuple[np.ndarray, np.ndarray]:
        """Half-cotangent weights of every triangle edge in disk coordinates.

        Returns (edges (3F, 2), weights (3F,)); edge (a, b) of a triangle gets
        ½·cot of the angle opposite to it.
        """
        w = klein_to_disk(self.klein)
        p = np.stack([w.real, w.imag], axis=-1)
        t = self.triangles
        edges, weights = [], []
        for i in range(3):
            a, b, c = t[:, i], t[:, (i + 1) % 3], t[:, (i + 2) % 3]
            u = p[a] - p[c]
            v = p[b] - p[c]
            cross = np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
            edges.append(np.stack([a, b], axis=-1))
            weights.append(0.5 * np.sum(u * v, axis=-1) / cross)
        return np.concatenate(edges), np.concatenate(weights)

    def laplacian(self) -> Tuple[csr_matrix, np.ndarray]:
        """Quotient cotangent Laplacian L and the period coupling B.

        The Dirichlet energy of the lifted primitive u_v = f_class(v) +
        offsets[v]·p is stationary when L·f + B·p = 0.
        """
        cls, offsets = self.vertex_classes()
        n = int(cls.max()) + 1
        edges, weights = self.cotangent_weights()
        ra, rb = cls[edges[:, 0]], cls[edges[:, 1]]
        rows = np.concatenate([ra, rb, ra, rb])
        cols = np.concatenate([ra, rb, rb, ra])
        data = np.concatenate([weights, weights, -weights, -weights])
        lap = coo_matrix((data, (rows, cols)), shape=(n, n)).tocsr()
        delta = weights[:, None] * (offsets[edges[:, 0]] - offsets[edges[:, 1]])
        coupling = np.zeros((n, 4))
        np.add.at(coupling, ra, delta)
        np.add.at(coupling, rb, -delta)
        return lap, coupling

    def barycentric_matrices(self) -> np.ndarray:
        """(F, 3, 3) maps (kx, ky, 1) ↦ Klein barycentrics of each triangle."""
        if self._barycentric is None:
            k = self.klein[self.triangles]
            m = np.ones((len(self.triangles), 3, 3))
            m[:, 0, :] = k[:, :, 0]
            m[:, 1, :] = k[:, :, 1]
            self._barycentric = np.linalg.inv(m)
        return self._barycentric

    def locate(self, k: np.ndarray) -> np.ndarray:
        """Index of the triangle containing each Klein point of the domain."""
        k = np.atleast_2d(np.asarray(k, dtype=float))
        if self._lookup is None:
            return self._locate_search(k)
        n = self._lookup.shape[2]
        if self._wedge_inverse is None:
            corners = self.domain.vertices
            basis = np.stack([np.stack([corners[(j - 1) % 8], corners[j]], axis=-1) for j in range(8)])
            self._wedge_inverse = np.linalg.inv(basis)
        phi = np.arctan2(-k[:, 0], k[:, 1])
        wedge = np.floor((phi + math.pi / 8) / (math.pi / 4)).astype(int) % 8
        ab = np.einsum("nij,nj->ni", self._wedge_inverse[wedge], k) * n
        ab = np.maximum(ab, 0.0)
        i1 = np.clip(np.floor(ab[:, 0]).astype(int), 0, n - 1)
        i2 = np.clip(np.floor(ab[:, 1]).astype(int), 0, n - 1 - i1)
        upper = (ab[:, 0] - i1 + ab[:, 1] - i2 > 1.0) & (i1 + i2 <= n - 2)
        return self._lookup[wedge, upper.astype(int), i1, i2]

    def _locate_search(self, k: np.ndarray) -> np.ndarray:
        if self._centroid_tree is None:
            self._centroid_tree = cKDTree(self.klein[self.triangles].mean(axis=1))
        bary = self.barycentric_matrices()
        _, candidates = self._centroid_tree.query(k, k=min(12, len(self.triangles)))
        candidates = np.atleast_2d(candidates)
        homogeneous = np.concatenate([k, np.ones((len(k), 1))], axis=-1)
        mu = np.einsum("nmij,nj->nmi", bary[candidates], homogeneous)
        best = np.argmax(mu.min(axis=-1), axis=-1)
        return candidates[np.arange(len(k)), best]

    def reduce(self, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Reduce points into the domain: (klein, triangle, deck, counts)."""
        z_fd, deck, counts = self.domain.reduce(z)
        k = to_klein(z_fd)
        return k, self.locate(k), deck, counts


# =============================================================================
# HARMONIC 1-FORMS
# =============================================================================

@dataclass
class DiscreteOneForm:
    """Harmonic 1-form du given by its quasi-periodic primitive on the mesh.

    Attributes:
        mesh: the surface mesh
        periods: prescribed periods on (a1, b1, a2, b2)
        values: primitive u at every mesh vertex of the domain lift
        residual: co-closedness residual ‖L·f + B·p‖
    """

    mesh: SurfaceMesh
    periods: np.ndarray
    values: np.ndarray
    residual: float

    def __post_init__(self):
        weights = np.sqrt(np.maximum(0.0, 1.0 - np.sum(self.mesh.klein ** 2, axis=-1)))
        bary = self.mesh.barycentric_matrices()
        tri = self.mesh.triangles
        self.coef_b = np.einsum("fi,fij->fj", weights[tri], bary)
        self.coef_a = np.einsum("fi,fij->fj", (self.values * weights)[tri], bary)

    def local_value(self, k: np.ndarray, tri: np.ndarray) -> np.ndarray:
        homogeneous = np.concatenate([k, np.ones(k.shape[:-1] + (1,))], axis=-1)
        la = np.sum(self.coef_a[tri] * homogeneous, axis=-1)
        lb = np.sum(self.coef_b[tri] * homogeneous, axis=-1)
        return la / lb

    def value(self, z: np.ndarray) -> np.ndarray:
        """Quasi-periodic primitive at arbitrary half-plane points."""
        k, tri, _, counts = self.mesh.reduce(z)
        return self.local_value(k, tri) + counts @ self.periods

    def period(self, word: LoopWord, base: complex = 1j) -> float:
        """Period along a loop word: u(word·base) - u(base)."""
        end = mobius_arr(self.mesh.domain.word_matrix(word), np.array(base))
        start_value, end_value = self.value(np.array([base, complex(end)]))
        return float(end_value - start_value)

    def scaled(self, factor: float) -> "DiscreteOneForm":
        return DiscreteOneForm(self.mesh, self.periods * factor, self.values * factor, self.residual * abs(factor))

    def is_zero(self) -> bool:
        return not np.any(self.periods) and not np.any(self.values)


def harmonic_one_form(mesh: SurfaceMesh, periods: Sequence[float]) -> DiscreteOneForm:
    """Harmonic representative with prescribed generator periods.

    Solves the quotient cotangent system with one class pinned, then removes
    the mean of the class values.

    Raises:
        SingularSolveError: if the reduced system is singular
    """
    periods = np.asarray(periods, dtype=float)
    if periods.shape != (4,):
        raise ValueError("exactly four periods are required")
    cls, offsets = mesh.vertex_classes()
    lap, coupling = mesh.laplacian()
    rhs = -(coupling @ periods)
    n = lap.shape[0]
    f = np.zeros(n)
    if np.any(rhs):
        reduced = lap[1:, 1:].tocsc()
        try:
            f[1:] = spsolve(reduced, rhs[1:])
        except RuntimeError as e:
            raise SingularSolveError(f"cotangent Laplacian system is singular: {e}") from e
        if not np.all(np.isfinite(f)):
            raise SingularSolveError("cotangent Laplacian system is singular")
        f -= f.mean()
    residual = float(np.linalg.norm(lap @ f + coupling @ periods))
    _logger.debug("harmonic form periods=%s residual=%.3e", periods.tolist(), residual)
    values = f[cls] + offsets @ periods
    return DiscreteOneForm(mesh, periods, values, residual)


# =============================================================================
# EXACT MESH FLOW
# =============================================================================

def klein_jacobian(z: np.ndarray) -> np.ndarray:
    """(…, 2, 2) Jacobian of the half-plane to Klein chart at z."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    s = np.abs(z) ** 2 + 1.0
    out = np.empty(z.shape + (2, 2))
    out[..., 0, 0] = 2.0 / s - 4.0 * x * x / s ** 2
    out[..., 0, 1] = -4.0 * x * y / s ** 2
    out[..., 1, 0] = 4.0 * x / s ** 2
    out[..., 1, 1] = 4.0 * y / s ** 2
    return out


@dataclass
class FlowState:
    """Points of the flow: Klein position in the domain, triangle and deck"""

    klein: np.ndarray
    triangle: np.ndarray
    deck: np.ndarray

    def copy(self) -> "FlowState":
        return FlowState(self.klein.copy(), self.triangle.copy(), self.deck.copy())

    def points(self) -> np.ndarray:
        return mobius_arr(self.deck, from_klein(self.klein))


class MeshFlow:
    """Flow of the symplectic field X with Ω(X, ·) = du for a discrete form.

    Within a triangle u = ℓ_A/ℓ_B with affine ℓ_A, ℓ_B in Klein coordinates.
    Trajectories follow the level chords ℓ_A - U·ℓ_B = 0 with Klein velocity
    (g_y, -g_x)/(ℓ_B·ρ), g = ∇ℓ_A - U·∇ℓ_B and ρ the Klein area density.
    Along the chord k = P + s·e, with σ = s + P·e and c² = 1 - |P|² + (P·e)²,
    elapsed time is [H(σ1) - H(σ0)]/|g| where
        H(σ) = (β0·σ/c² + β1)/sqrt(c² - σ²),
    β1 = ∇ℓ_B·e and β0 = ℓ_B(P) - β1·(P·e).
    """

    def __init__(self, form: DiscreteOneForm, direction: float = 1.0,
                 numerics: Numerics = DEFAULT_NUMERICS):
        self.form = form
        self.mesh = form.mesh
        self.direction = 1.0 if direction >= 0 else -1.0
        self.numerics = numerics
        self.coef_a = self.direction * form.coef_a
        self.coef_b = form.coef_b
        self.bary = self.mesh.barycentric_matrices()

    def reversed(self) -> "MeshFlow":
        return MeshFlow(self.form, -self.direction, self.numerics)

    def start(self, z: np.ndarray) -> FlowState:
        k, tri, deck, _ = self.mesh.reduce(np.atleast_1d(z))
        return FlowState(k, tri, deck)

    def _gradient(self, k: np.ndarray, tri: np.ndarray):
        ca, cb = self.coef_a[tri], self.coef_b[tri]
        la = np.sum(ca[:, :2] * k, axis=-1) + ca[:, 2]
        lb = np.sum(cb[:, :2] * k, axis=-1) + cb[:, 2]
        g = ca[:, :2] - (la / lb)[:, None] * cb[:, :2]
        return g, lb, cb

    def velocity(self, z: np.ndarray) -> np.ndarray:
        """X at half-plane points, as complex numbers."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        k, tri, deck, _ = self.mesh.reduce(z)
        g, lb, _ = self._gradient(k, tri)
        density = (1.0 - np.sum(k * k, axis=-1)) ** -1.5
        vk = np.stack([g[:, 1], -g[:, 0]], axis=-1) / (lb * density)[:, None]
        z_fd = from_klein(k)
        vz = np.linalg.solve(klein_jacobian(z_fd), vk[..., None])[..., 0]
        return mobius_derivative_arr(deck, z_fd) * (vz[:, 0] + 1j * vz[:, 1])

    def advance(self, state: FlowState, duration: float) -> FlowState:
        """Flow every point of state for the given nonnegative time.

        Raises:
            FlowDomainError: if trajectories need more than
                numerics.max_tracer_iterations chord segments
        """
        if duration < 0:
            raise ValueError("advance needs a nonnegative duration; use reversed() instead")
        state = state.copy()
        remaining = np.full(len(state.klein), float(duration))
        active = remaining > 0.0
        iterations = 0
        while np.any(active):
            iterations += 1
            if iterations > self.numerics.max_tracer_iterations:
                raise FlowDomainError(f"mesh flow exceeded {self.numerics.max_tracer_iterations} segments")
            idx = np.nonzero(active)[0]
            k = state.klein[idx]
            tri = state.triangle[idx]
            g, lb, cb = self._gradient(k, tri)
            gnorm = np.hypot(g[:, 0], g[:, 1])
            moving = gnorm > 1e-14
            active[idx[~moving]] = False
            idx, k, tri, g, lb, cb, gnorm = (a[moving] for a in (idx, k, tri, g, lb, cb, gnorm))
            if idx.size == 0:
                break
            e = np.stack([g[:, 1], -g[:, 0]], axis=-1) / gnorm[:, None]

            bary = self.bary[tri]
            mu = np.einsum("nij,nj->ni", bary[:, :, :2], k) + bary[:, :, 2]
            rate = np.einsum("nij,nj->ni", bary[:, :, :2], e)
            with np.errstate(divide="ignore", invalid="ignore"):
                hits = np.where(rate < -1e-15, -mu / rate, np.inf)
            s_exit = np.maximum(hits.min(axis=-1), 0.0)
            if np.any(~np.isfinite(s_exit)):
                raise FlowDomainError("trajectory does not leave its triangle")

            p = np.sum(k * e, axis=-1)
            c2 = 1.0 - np.sum(k * k, axis=-1) + p * p
            beta1 = np.sum(cb[:, :2] * e, axis=-1)
            beta0 = lb - beta1 * p

            def primitive(sigma, sel=slice(None)):
                return (beta0[sel] * sigma / c2[sel] + beta1[sel]) / np.sqrt(c2[sel] - sigma * sigma)

            h0 = primitive(p)
            span = primitive(p + s_exit) - h0
            need = remaining[idx] * gnorm
            finish = span >= need

            if np.any(finish):
                sel = np.nonzero(finish)[0]
                lo = p[sel].copy()
                hi = p[sel] + s_exit[sel]
                target = h0[sel] + need[sel]
                for _ in range(64):
                    mid = 0.5 * (lo + hi)
                    below = primitive(mid, sel) < target
                    lo = np.where(below, mid, lo)
                    hi = np.where(below, hi, mid)
                sigma = 0.5 * (lo + hi)
                rows = idx[sel]
                state.klein[rows] = k[sel] + (sigma - p[sel])[:, None] * e[sel]
                remaining[rows] = 0.0
                active[rows] = False

            cross = np.nonzero(~finish)[0]
            if cross.size:
                rows = idx[cross]
                remaining[rows] -= span[cross] / gnorm[cross]
                moved = k[cross] + (s_exit[cross] + OVERSHOOT)[:, None] * e[cross]
                self._relocate(state, rows, moved)
        _logger.debug("mesh flow of %d points used %d segment sweeps", len(state.klein), iterations)
        return state

    def _relocate(self, state: FlowState, rows: np.ndarray, moved: np.ndarray) -> None:
        outside = np.any(self.mesh.domain.side_excess(moved) > SIDE_SLACK, axis=-1)
        if np.any(outside):
            z_fd, deck, _ = self.mesh.domain.reduce(from_klein(moved[outside]), tol=SIDE_SLACK)
            moved[outside] = to_klein(z_fd)
            out_rows = rows[outside]
            state.deck[out_rows] = state.deck[out_rows] @ deck
        state.klein[rows] = moved
        state.triangle[rows] = self.mesh.locate(moved)

    def flow(self, z: np.ndarray, duration: float) -> np.ndarray:
        """Time-duration flow of half-plane points (negative times run backwards)."""
        if duration < 0:
            return self.reversed().flow(z, -duration)
        return self.advance(self.start(z), duration).points()

    def flow_times(self, z: np.ndarray, times: Sequence[float]) -> np.ndarray:
        """Dense output: (len(times), len(z)) flowed points for sorted nonnegative times."""
        times = np.asarray(times, dtype=float)
        if np.any(times < 0) or np.any(np.diff(times) < 0):
            raise ValueError("times must be sorted and nonnegative")
        state = self.start(z)
        out = np.empty((len(times), len(state.klein)), dtype=complex)
        current = 0.0
        for i, t in enumerate(times):
            state = self.advance(state, t - current)
            current = t
            out[i] = state.points()
        return out
