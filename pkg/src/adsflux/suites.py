#!/usr/bin/env python3
"""
Verification suites and convergence scans.

Architecture:
- SuiteContext: validated scenario plus the shared objects every suite uses
  (representation, octagon domain, mesh, harmonic form, seeded generators)
- SuiteRun: times each check, records failures per check and keeps going
- Nine suites: metric, fiber, sasaki, foliation, curvature, gauss,
  flux_holonomy, orbit, infrastructure
- run_verify / run_scan: the entry points used by the command line

Every random sample comes from numpy generators seeded by (seed, suite), so a
suite produces the same records whether it runs alone or with the others.
"""

import logging
import math
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .adsgeom import (
    BiPoint,
    FramePath,
    FramePoint,
    FrameTangent,
    connection_form,
    distribution_ranks,
    flow_pushforward,
    frame_curve,
    geodesic_flow,
    project_arr,
    sasaki_pairing,
    tangent_of_path,
)
from .bundle_transport import coordinate_square, curvature_scan, loop_defect, mixed_square, symplectic_area
from .config import SUITE_NAMES, ScenarioConfig, ToleranceConfig
from .errors import AdsFluxError, UnsupportedRepresentationError
from .lagrangian_lab import (
    EquivMap,
    IsotopyPath,
    LoopWord,
    MeshFlow,
    OctagonDomain,
    RepClass,
    RepPair,
    SurfaceMesh,
    anchor_map,
    anchored_holonomy,
    area_distortion,
    bent_plane_surface,
    closed_form_isotopy,
    conjugate_rep,
    flux,
    gauss_map,
    geodesic_plane_surface,
    hamiltonian_isotopy,
    harmonic_one_form,
    horizontality_residual,
    interpolation_isotopy,
    lagrangian_defect,
    normal_field,
    normal_flow_residual,
    octagon_rep,
    projection_rank,
    relative_holonomy,
    scaled_map,
    section_closure,
    shear_map,
)
from .lie_core import (
    BASIS,
    J,
    AlgVec,
    GroupElt,
    exp_arr,
    f_embed_arr,
    f_invert_arr,
    from_coords_arr,
    hyperbolic_distance_arr,
    inv_arr,
    killing_form,
    mobius_arr,
    pairing_arr,
    psl_distance_arr,
)
from .report import Record, Report, ScanTable, SuiteReport
from .settings import Numerics

_logger = logging.getLogger(__name__)


# =============================================================================
# RANDOM SAMPLES
# =============================================================================

def random_points(rng: np.random.Generator, n: int, spread: float = 1.0) -> np.ndarray:
    """Half-plane points with |x| ≤ 2·spread and log y uniform in [-spread, spread]."""
    x = rng.uniform(-2.0 * spread, 2.0 * spread, n)
    y = np.exp(rng.uniform(-spread, spread, n))
    return x + 1j * y


def random_algebra(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    return from_coords_arr(scale * rng.normal(size=(n, 3)))


def random_group(rng: np.random.Generator, n: int, scale: float = 0.5) -> np.ndarray:
    """Products of two exponentials, which reach every class of PSL(2,R)."""
    return exp_arr(random_algebra(rng, n, scale)) @ exp_arr(random_algebra(rng, n, scale))


def random_frames(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    return random_group(rng, n), f_embed_arr(random_points(rng, n))


def random_tangent(rng: np.random.Generator, frame: FramePoint) -> FrameTangent:
    w = random_algebra(rng, 1)[0]
    v = random_algebra(rng, 1)[0]
    v = v + pairing_arr(v, frame.u0.m) * frame.u0.m
    return FrameTangent(AlgVec(w), AlgVec(v))


# =============================================================================
# CONTEXT AND RUNNER
# =============================================================================

@dataclass
class SuiteContext:
    """Scenario state shared by all suites of one run"""

    config: ScenarioConfig
    seed: int
    tol_scale: float = 1.0

    @cached_property
    def tolerances(self) -> ToleranceConfig:
        return self.config.tolerances.scaled(self.tol_scale)

    @property
    def flag_tolerance(self) -> float:
        """Tolerance of yes/no checks recorded as 0 (pass) or 1 (fail)."""
        return 0.5 * self.tol_scale

    @cached_property
    def numerics(self) -> Numerics:
        return self.config.numerics.build()

    @cached_property
    def rep(self) -> RepPair:
        return self.config.representation.build()

    @cached_property
    def domain(self) -> OctagonDomain:
        return OctagonDomain()

    @cached_property
    def mesh(self) -> SurfaceMesh:
        return SurfaceMesh.octagon(self.numerics.mesh_subdivision, self.domain)

    @cached_property
    def form(self):
        return harmonic_one_form(self.mesh, self.config.closed_form.periods)

    @cached_property
    def anchor(self) -> EquivMap:
        return anchor_map(self.rep)

    @property
    def loops(self) -> List[LoopWord]:
        return self.config.loop_words()

    def rng(self, suite: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, SUITE_NAMES.index(suite)])

    def require_diagonal(self) -> RepPair:
        if self.rep.rep_class is not RepClass.DIAGONAL:
            raise UnsupportedRepresentationError("closed-form families need the diagonal representation")
        return self.rep

    def hamiltonian_path(self, index: int, method: Optional[str] = None) -> IsotopyPath:
        h = self.config.hamiltonians[index]
        return hamiltonian_isotopy(self.rep, h.spec(method), h.duration, self.anchor, self.domain, self.numerics)

    def closed_form_path(self, duration: float) -> IsotopyPath:
        return closed_form_isotopy(self.require_diagonal(), self.form, duration, self.numerics)

    def period_of(self, word: LoopWord) -> float:
        return float(np.dot(self.config.closed_form.periods, word.abelianization()))

    def relative_tolerance(self, oracle: float) -> float:
        t = self.tolerances
        return max(t.flux_absolute, t.flux_relative * abs(oracle))


class SuiteRun:
    """Collect timed records for one suite"""

    def __init__(self, name: str):
        self.report = SuiteReport(name)

    def check(self, name: str, compute: Callable[[], float], oracle: float,
              tolerance: float) -> Optional[float]:
        """Record |compute() - oracle| < tolerance.

        Unsupported representation classes skip the check with a warning;
        any other library error becomes a failed record.
        """
        start = time.perf_counter()
        try:
            value = float(compute())
        except UnsupportedRepresentationError as e:
            _logger.warning("%s.%s skipped: %s", self.report.name, name, e)
            self.report.skipped.append(name)
            return None
        except AdsFluxError as e:
            _logger.warning("%s.%s failed: %s", self.report.name, name, e)
            self.report.add(Record.failure(name, e, tolerance, time.perf_counter() - start))
            return None
        record = self.report.add(Record(name, value, oracle, tolerance, time.perf_counter() - start))
        if not record.passed:
            _logger.info("%s.%s: %.6g vs %.6g (tol %.3g)", self.report.name, name, value, oracle, tolerance)
        return value


# =============================================================================
# SUITES
# =============================================================================

def metric_suite(ctx: SuiteContext) -> SuiteReport:
    """Signature of the pairing, Killing normalization, the embedding f."""
    run = SuiteRun("metric")
    rng = ctx.rng("metric")
    tol = ctx.tolerances
    n = ctx.config.samples.embedding

    def signature():
        gram = np.array([[pairing_arr(x, y) for y in BASIS] for x in BASIS])
        return np.abs(gram - np.diag([-1.0, 1.0, 1.0])).max()

    def killing():
        xs, ys = random_algebra(rng, 20), random_algebra(rng, 20)
        return max(abs(killing_form(AlgVec(x), AlgVec(y)) - 8.0 * pairing_arr(x, y)) for x, y in zip(xs, ys))

    z = random_points(rng, n)
    g = random_group(rng, n)

    def unit():
        return np.abs(pairing_arr(f_embed_arr(z), f_embed_arr(z)) + 1.0).max()

    def equivariance():
        lhs = f_embed_arr(mobius_arr(g, z))
        rhs = g @ f_embed_arr(z) @ inv_arr(g)
        return np.abs(lhs - rhs).max()

    def inverse():
        return hyperbolic_distance_arr(f_invert_arr(f_embed_arr(z)), z).max()

    def group_law():
        x = random_algebra(rng, n)
        s, t = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
        return psl_distance_arr(exp_arr(x, s) @ exp_arr(x, t), exp_arr(x, s + t)).max()

    run.check("basis_signature", signature, 0.0, tol.embedding)
    run.check("killing_normalization", killing, 0.0, tol.embedding)
    run.check("embedding_unit", unit, 0.0, tol.embedding)
    run.check("embedding_equivariance", equivariance, 0.0, tol.embedding)
    run.check("embedding_inverse", inverse, 0.0, tol.fiber)
    run.check("exponential_group_law", group_law, 0.0, tol.fiber)
    return run.report


def fiber_suite(ctx: SuiteContext) -> SuiteReport:
    """The geodesic flow preserves fibers of the projection and has period π."""
    run = SuiteRun("fiber")
    rng = ctx.rng("fiber")
    tol = ctx.tolerances.fiber
    n = ctx.config.samples.fiber
    g, u0 = random_frames(rng, n)
    t = rng.uniform(-2 * math.pi, 2 * math.pi, n)

    def distance(a, b):
        return max(hyperbolic_distance_arr(a[0], b[0]).max(), hyperbolic_distance_arr(a[1], b[1]).max())

    def flow_invariance():
        return distance(project_arr(g @ exp_arr(u0, t), u0), project_arr(g, u0))

    def equivariance():
        left, right = random_group(rng, n), random_group(rng, n)
        moved = project_arr(left @ g @ inv_arr(right), right @ u0 @ inv_arr(right))
        zl, zr = project_arr(g, u0)
        return distance(moved, (mobius_arr(left, zl), mobius_arr(right, zr)))

    def period():
        return psl_distance_arr(g @ exp_arr(u0, math.pi), g).max()

    def half_period_moves():
        # exp(π/2·u0) = u0 is never ±I, so π is the least period
        return 1.0 if psl_distance_arr(exp_arr(u0, 0.5 * math.pi), np.eye(2)).min() > 0.5 else 0.0

    run.check("flow_invariance", flow_invariance, 0.0, tol)
    run.check("projection_equivariance", equivariance, 0.0, tol)
    run.check("flow_period", period, 0.0, tol)
    run.check("least_period", half_period_moves, 1.0, ctx.flag_tolerance)
    return run.report


def sasaki_suite(ctx: SuiteContext) -> SuiteReport:
    """φ_t acts by Sasaki isometries and preserves the connection form."""
    run = SuiteRun("sasaki")
    rng = ctx.rng("sasaki")
    numerics = ctx.numerics
    tol = ctx.tolerances.sasaki
    g, u0 = random_frames(rng, ctx.config.samples.sasaki)
    cases = []
    for gi, ui in zip(g, u0):
        frame = FramePoint.from_arrays(gi, ui)
        cases.append((frame, random_tangent(rng, frame), random_tangent(rng, frame),
                      float(rng.uniform(0.0, math.pi))))

    def pushed(frame: FramePoint, tangent: FrameTangent, t: float) -> FrameTangent:
        curve = frame_curve(frame, tangent)
        return tangent_of_path(FramePath(lambda s: geodesic_flow(curve(s), t)), 0.0, numerics)

    def isometry():
        worst = 0.0
        for frame, t1, t2, t in cases:
            before = sasaki_pairing(frame, t1, t2)
            after = sasaki_pairing(geodesic_flow(frame, t), pushed(frame, t1, t), pushed(frame, t2, t))
            worst = max(worst, abs(after - before))
        return worst

    def closed_form():
        return max(np.abs(flow_pushforward(frame, t1, t).as_vector() - pushed(frame, t1, t).as_vector()).max()
                   for frame, t1, _, t in cases)

    def connection():
        return max(abs(connection_form(geodesic_flow(frame, t), flow_pushforward(frame, t1, t))
                       - connection_form(frame, t1))
                   for frame, t1, _, t in cases)

    run.check("pushforward_isometry", isometry, 0.0, tol)
    run.check("pushforward_closed_form", closed_form, 0.0, tol)
    run.check("connection_invariance", connection, 0.0, tol)
    return run.report


def foliation_suite(ctx: SuiteContext) -> SuiteReport:
    """D^L + D^R has rank 5 and D^L ∩ D^R rank 1 (the flow direction)."""
    run = SuiteRun("foliation")
    rng = ctx.rng("foliation")
    g, u0 = random_frames(rng, ctx.config.samples.foliation)
    ranks = []

    def collect():
        ranks.extend(distribution_ranks(FramePoint.from_arrays(gi, ui), numerics=ctx.numerics)
                     for gi, ui in zip(g, u0))
        return sum(1 for r in ranks if r[0] != 5)

    run.check("sum_rank_mismatches", collect, 0.0, ctx.flag_tolerance)
    run.check("intersection_rank_mismatches", lambda: sum(1 for r in ranks if r[1] != 1),
              0.0, ctx.flag_tolerance)
    return run.report


def curvature_suite(ctx: SuiteContext) -> SuiteReport:
    """Transport defect around small loops is -½ of the enclosed symplectic area."""
    run = SuiteRun("curvature")
    rng = ctx.rng("curvature")
    numerics = ctx.numerics
    tol = ctx.tolerances
    n = ctx.config.samples.squares

    def relative_defect(disk, loop):
        area = symplectic_area(disk)
        return abs(loop_defect(loop, numerics=numerics) + 0.5 * area) / abs(area)

    for side in ("left", "right"):
        corners = random_points(rng, n, 0.5)
        fixed = random_points(rng, n, 0.5)
        eps = rng.uniform(0.01, 0.05, n)
        run.check(f"{side}_squares",
                  lambda side=side, corners=corners, fixed=fixed, eps=eps: max(
                      relative_defect(*coordinate_square(side, c, e, f)) for c, f, e in zip(corners, fixed, eps)),
                  0.0, tol.curvature_relative)

    def mixed():
        worst = 0.0
        for zl, zr in zip(random_points(rng, n, 0.5), random_points(rng, n, 0.5)):
            p, q = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
            # Ω_l(p, ip) > 0 and -Ω_r(q, -iq) > 0, so the area is bounded away from zero
            disk, loop = mixed_square(BiPoint.from_complex(zl, zr), (p, q), (1j * p, -1j * q),
                                      float(rng.uniform(0.01, 0.04)))
            worst = max(worst, relative_defect(disk, loop))
        return worst

    def section_independence():
        disk, loop = coordinate_square("left", 0.2 + 1.1j, 0.03, 0.5 + 0.8j)
        shift = lambda zl, zr: 0.3 * np.sin(zl.real) + 0.2 * zr.imag
        return abs(loop_defect(loop, shift, numerics) - loop_defect(loop, numerics=numerics))

    run.check("mixed_squares", mixed, 0.0, tol.curvature_relative)
    run.check("section_independence", section_independence, 0.0, tol.sasaki)

    rows = []

    def scan() -> int:
        rows.extend(curvature_scan(ctx.config.scans.curvature_eps, numerics=numerics))
        return len(rows)

    run.check("scan_rows", scan, len(ctx.config.scans.curvature_eps), ctx.flag_tolerance)
    for row in rows:
        scan_tol = 0.5 * tol.curvature_scan_slope * row.eps
        run.check(f"scan_defect_over_area[{row.eps:g}]", lambda row=row: row.defect_over_area, -0.5, scan_tol)
        run.check(f"scan_defect_over_eps2[{row.eps:g}]", lambda row=row: row.defect_over_eps2, -0.5, scan_tol)
    return run.report


def gauss_suite(ctx: SuiteContext) -> SuiteReport:
    """Gauss maps of geodesic and bent planes: graphs, horizontal lifts, Lagrangian images."""
    run = SuiteRun("gauss")
    rng = ctx.rng("gauss")
    numerics = ctx.numerics
    tol = ctx.tolerances
    domain = ctx.domain
    samples = domain.sample(ctx.config.samples.gauss, rng, margin=0.01)
    base = octagon_rep()
    plane = geodesic_plane_surface(base)

    def graph_random_beta():
        z = samples[:ctx.config.samples.gauss_graph]
        worst = 0.0
        for beta in random_group(rng, 5):
            sigma = geodesic_plane_surface(conjugate_rep(base, GroupElt(beta)))
            zl, zr = gauss_map(sigma, numerics)(z)
            worst = max(worst, hyperbolic_distance_arr(zl, z).max(),
                        hyperbolic_distance_arr(zr, mobius_arr(beta, z)).max())
        return worst

    def graph_scenario():
        z = samples[:ctx.config.samples.gauss_graph]
        zl, zr = gauss_map(geodesic_plane_surface(ctx.rep), numerics)(z)
        el, er = ctx.anchor(z)
        return max(hyperbolic_distance_arr(zl, el).max(), hyperbolic_distance_arr(zr, er).max())

    def induced_metric():
        h = plane.induced_metric(samples, numerics.fd_step)
        return np.abs(h * (samples.imag ** 2)[:, None, None] - np.eye(2)).max()

    def horizontality():
        points = samples[:ctx.config.samples.horizontality]
        angles = rng.uniform(0.0, 2 * math.pi, len(points))
        return max(horizontality_residual(plane, p, np.exp(1j * a), numerics) for p, a in zip(points, angles))

    def defect():
        return lagrangian_defect(gauss_map(plane, numerics), samples, numerics).max()

    def normal_at_i():
        _, n0 = normal_field(plane, np.array(1j), numerics)
        return np.abs(n0 - J).max()

    run.check("graph_random_beta", graph_random_beta, 0.0, tol.gauss)
    run.check("graph_scenario", graph_scenario, 0.0, tol.gauss)
    run.check("induced_metric", induced_metric, 0.0, tol.gauss)
    run.check("horizontality", horizontality, 0.0, tol.horizontality)
    run.check("lagrangian_defect", defect, 0.0, tol.lagrangian)
    for t in (0.3, 0.5 * math.pi):
        run.check(f"normal_flow[{t:.4g}]", lambda t=t: normal_flow_residual(plane, samples[:100], t, numerics),
                  0.0, tol.gauss)
    run.check("surface_equivariance", lambda: plane.equivariance_residual(samples[:100], domain),
              0.0, tol.equivariance)
    run.check("gauss_equivariance",
              lambda: gauss_map(plane, numerics).equivariance_residual(samples[:100], domain),
              0.0, tol.equivariance)
    run.check("normal_at_i", normal_at_i, 0.0, tol.gauss)
    run.check("projection_rank", lambda: float(projection_rank(plane, samples[:100], numerics=numerics).min()),
              2.0, tol.gauss)
    run.check("scaled_map_defect", lambda: float(lagrangian_defect(scaled_map(2.0, 1.0), 1j, numerics)[0]),
              1.0 / math.sqrt(10.0), tol.gauss)
    run.check("shear_map_defect", lambda: lagrangian_defect(shear_map(0.7), samples, numerics).max(),
              0.0, tol.lagrangian)

    bent = bent_plane_surface()
    near_i = np.concatenate([[1j], samples[hyperbolic_distance_arr(samples, 1j) < 0.6]])

    def bent_horizontality():
        points = near_i[:ctx.config.samples.horizontality]
        angles = rng.uniform(0.0, 2 * math.pi, len(points))
        return max(horizontality_residual(bent, p, np.exp(1j * a), numerics) for p, a in zip(points, angles))

    run.check("bent_surface_lagrangian_defect",
              lambda: lagrangian_defect(gauss_map(bent, numerics), near_i[:100], numerics).max(),
              0.0, tol.lagrangian)
    run.check("bent_surface_horizontality", bent_horizontality, 0.0, tol.horizontality)
    return run.report


def flux_holonomy_suite(ctx: SuiteContext) -> SuiteReport:
    """Flux of Lagrangian paths equals the change of holonomy."""
    run = SuiteRun("flux_holonomy")
    numerics = ctx.numerics
    tol = ctx.tolerances
    domain = ctx.domain

    def flux_minus_holonomy(path: IsotopyPath, word: LoopWord) -> float:
        return (flux(path, word, numerics, domain)
                - relative_holonomy(path.end, path.start, word, None, numerics, domain))

    rng = ctx.rng("flux_holonomy")
    for index, h in enumerate(ctx.config.hamiltonians):
        for word in ctx.loops:
            run.check(f"hamiltonian.{h.name}.{word}.flux",
                      lambda w=word, i=index: flux(ctx.hamiltonian_path(i), w, numerics, domain),
                      0.0, tol.flux_zero)
            run.check(f"hamiltonian.{h.name}.{word}.holonomy",
                      lambda w=word, i=index: relative_holonomy(ctx.hamiltonian_path(i).end, ctx.anchor, w, None,
                                                               numerics, domain),
                      0.0, tol.flux_zero)
            run.check(f"interpolation.{h.name}.{word}.flux_minus_holonomy",
                      lambda w=word, i=index: flux_minus_holonomy(
                          interpolation_isotopy(ctx.anchor, ctx.hamiltonian_path(i).end), w),
                      0.0, tol.flux_zero)

        def rk4_defect(i=index):
            rk4 = ctx.hamiltonian_path(i, "rk4")
            z = domain.sample(50, rng, margin=0.01)
            return lagrangian_defect(rk4.end, z, numerics).max()

        run.check(f"hamiltonian.{h.name}.rk4_defect", rk4_defect, 0.0, tol.lagrangian_flow)

    durations = ctx.config.closed_form.durations
    for duration in durations:
        for word in ctx.loops:
            oracle = duration * ctx.period_of(word)
            band = ctx.relative_tolerance(oracle)
            name = f"closed_form[{duration:g}].{word}"
            value = run.check(f"{name}.flux",
                              lambda d=duration, w=word: flux(ctx.closed_form_path(d), w, numerics, domain),
                              oracle, band)
            hol = run.check(f"{name}.holonomy",
                            lambda d=duration, w=word: relative_holonomy(
                                ctx.closed_form_path(d).end, ctx.anchor, w, None, numerics, domain),
                            oracle, band)
            if value is not None and hol is not None:
                run.check(f"{name}.flux_minus_holonomy", lambda a=value, b=hol: a - b, 0.0,
                          ctx.relative_tolerance(value))

    if durations:
        longest = max(durations, key=abs)
        word = ctx.loops[0]
        run.check(f"interpolation.closed_form[{longest:g}].{word}.flux_minus_holonomy",
                  lambda: flux_minus_holonomy(
                      interpolation_isotopy(ctx.anchor, ctx.closed_form_path(longest).end), word),
                  0.0, ctx.relative_tolerance(longest * ctx.period_of(word)))

        for first, second in ctx.config.products:
            w1, w2 = LoopWord.parse(first), LoopWord.parse(second)

            def homomorphism(w1=w1, w2=w2):
                path = ctx.closed_form_path(longest)
                return (flux(path, w1 * w2, numerics, domain)
                        - flux(path, w1, numerics, domain) - flux(path, w2, numerics, domain))

            run.check(f"homomorphism.{w1}*{w2}", homomorphism, 0.0, tol.homomorphism)
    return run.report


def orbit_suite(ctx: SuiteContext) -> SuiteReport:
    """Hamiltonian deformations of the anchor have vanishing anchored holonomy."""
    run = SuiteRun("orbit")
    numerics = ctx.numerics
    tol = ctx.tolerances
    domain = ctx.domain

    for word in ctx.loops:
        run.check(f"anchor.{word}.closure", lambda w=word: section_closure(ctx.rep, ctx.anchor, w, numerics, domain),
                  0.0, tol.closure)

    for index, h in enumerate(ctx.config.hamiltonians):
        for word in ctx.loops:
            run.check(f"{h.name}.{word}.anchored_holonomy",
                      lambda w=word, i=index: anchored_holonomy(ctx.rep, ctx.hamiltonian_path(i).end, w,
                                                                numerics, domain),
                      0.0, tol.closure)
            run.check(f"{h.name}.{word}.closure",
                      lambda w=word, i=index: section_closure(ctx.rep, ctx.hamiltonian_path(i).end, w,
                                                              numerics, domain),
                      0.0, tol.closure)

    durations = ctx.config.closed_form.durations
    if durations:
        longest = max(durations, key=abs)
        for word in ctx.loops:
            oracle = longest * ctx.period_of(word)
            run.check(f"closed_form[{longest:g}].{word}.anchored_holonomy",
                      lambda w=word: anchored_holonomy(ctx.rep, ctx.closed_form_path(longest).end, w,
                                                       numerics, domain),
                      oracle, ctx.relative_tolerance(oracle))
    return run.report


def infrastructure_suite(ctx: SuiteContext) -> SuiteReport:
    """Representation invariants, mesh topology, harmonic forms and mesh flows."""
    run = SuiteRun("infrastructure")
    rng = ctx.rng("infrastructure")
    tol = ctx.tolerances
    rep = ctx.rep

    def trace_match():
        if rep.rep_class is RepClass.GENERAL:
            raise UnsupportedRepresentationError("general representations have unrelated factors")
        return max(abs(abs(g.left.trace()) - abs(g.right.trace())) for g in rep.generators)

    run.check("relator_residual", rep.relator_residual, 0.0, tol.relator)
    run.check("trace_match", trace_match, 0.0, tol.relator)
    run.check("fuchsian", lambda: 0.0 if rep.is_fuchsian() else 1.0, 0.0, ctx.flag_tolerance)

    run.check("mesh_euler_characteristic", lambda: ctx.mesh.euler_characteristic(), -2.0, ctx.flag_tolerance)
    run.check("mesh_unglued_edges",
              lambda: len(ctx.mesh.boundary_edges()) - 2 * ctx.mesh.identified_edge_pairs(),
              0.0, ctx.flag_tolerance)

    def laplacian_symmetry():
        lap, _ = ctx.mesh.laplacian()
        return abs(lap - lap.T).max()

    def laplacian_constants():
        lap, _ = ctx.mesh.laplacian()
        return np.abs(lap @ np.ones(lap.shape[0])).max()

    def text_round_trip():
        copy = SurfaceMesh.from_text(ctx.mesh.to_text(), ctx.domain)
        if copy.triangles.shape != ctx.mesh.triangles.shape or np.any(copy.triangles != ctx.mesh.triangles):
            return 1.0
        return np.abs(copy.vertices - ctx.mesh.vertices).max()

    run.check("laplacian_symmetry", laplacian_symmetry, 0.0, tol.linearity)
    run.check("laplacian_constants", laplacian_constants, 0.0, tol.linearity)
    run.check("mesh_text_round_trip", text_round_trip, 0.0, tol.linearity)

    periods = np.asarray(ctx.config.closed_form.periods)

    def period_error():
        return max(abs(ctx.form.period(LoopWord.generator(k)) - periods[k]) for k in range(4))

    def linearity():
        p1, p2 = rng.normal(size=4), rng.normal(size=4)
        f1, f2 = harmonic_one_form(ctx.mesh, p1), harmonic_one_form(ctx.mesh, p2)
        return np.abs(harmonic_one_form(ctx.mesh, p1 + p2).values - f1.values - f2.values).max()

    def area():
        z = ctx.domain.sample(ctx.config.samples.area, rng, margin=0.05)
        return np.nanmax(area_distortion(MeshFlow(ctx.form, 1.0, ctx.numerics), z, 0.1))

    run.check("form_periods", period_error, 0.0, tol.periods)
    run.check("form_coclosed", lambda: ctx.form.residual, 0.0, tol.coclosed)
    run.check("form_linearity", linearity, 0.0, tol.linearity)
    run.check("form_zero", lambda: 0.0 if harmonic_one_form(ctx.mesh, np.zeros(4)).is_zero() else 1.0,
              0.0, ctx.flag_tolerance)
    run.check("mesh_flow_area", area, 0.0, tol.area)
    return run.report


SUITES: Dict[str, Callable[[SuiteContext], SuiteReport]] = {
    "metric": metric_suite,
    "fiber": fiber_suite,
    "sasaki": sasaki_suite,
    "foliation": foliation_suite,
    "curvature": curvature_suite,
    "gauss": gauss_suite,
    "flux_holonomy": flux_holonomy_suite,
    "orbit": orbit_suite,
    "infrastructure": infrastructure_suite,
}


# =============================================================================
# ENTRY POINTS
# =============================================================================

def run_verify(config: ScenarioConfig, seed: Optional[int] = None, tol_scale: float = 1.0,
               suites: Optional[Sequence[str]] = None) -> Report:
    """Run the selected suites (default: those named in the scenario)."""
    seed = config.seed if seed is None else seed
    ctx = SuiteContext(config, seed, tol_scale)
    report = Report(seed, tolerance_scale=tol_scale)
    for name in suites or config.suites:
        if name not in SUITES:
            raise KeyError(f"unknown suite: {name}")
        _logger.info("running suite %s", name)
        report.suites.append(SUITES[name](ctx))
        _logger.info("suite %s: %s", name, "pass" if report.suites[-1].passed else "FAIL")
    return report


CURVATURE_COLUMNS = ("eps", "area", "defect", "defect_over_area", "defect_over_eps2")
FLUX_HOLONOMY_COLUMNS = ("duration", "flux", "relative_holonomy", "oracle")


def curvature_rows(ctx: SuiteContext, table: ScanTable) -> None:
    for row in curvature_scan(ctx.config.scans.curvature_eps, numerics=ctx.numerics):
        table.rows.append((row.eps, row.area, row.defect, row.defect_over_area, row.defect_over_eps2))


def flux_holonomy_rows(ctx: SuiteContext, table: ScanTable) -> None:
    word = LoopWord.parse(ctx.config.scans.loop)
    for duration in ctx.config.scans.flux_durations:
        path = ctx.closed_form_path(duration)
        table.rows.append((duration,
                           flux(path, word, ctx.numerics, ctx.domain),
                           relative_holonomy(path.end, path.start, word, None, ctx.numerics, ctx.domain),
                           duration * ctx.period_of(word)))


SCANS = {
    "curvature": (CURVATURE_COLUMNS, curvature_rows),
    "flux-holonomy": (FLUX_HOLONOMY_COLUMNS, flux_holonomy_rows),
}


def run_scan(config: ScenarioConfig, scan: str, seed: Optional[int] = None,
             tol_scale: float = 1.0) -> Tuple[Report, ScanTable]:
    """Sweep one parameter and check every row against its oracle.

    Curvature rows must have defect/area within 1.25·ε (relative) of -½;
    flux-holonomy rows must match duration·period in both columns.
    """
    if scan not in SCANS:
        raise KeyError(f"unknown scan: {scan}")
    seed = config.seed if seed is None else seed
    ctx = SuiteContext(config, seed, tol_scale)
    columns, fill = SCANS[scan]
    name = scan.replace("-", "_")
    table = ScanTable(name, columns)
    run = SuiteRun(f"scan_{name}")
    expected = config.scans.curvature_eps if scan == "curvature" else config.scans.flux_durations

    def build() -> int:
        fill(ctx, table)
        return len(table.rows)

    run.check("rows", build, len(expected), ctx.flag_tolerance)
    tol = ctx.tolerances
    for row in table.rows:
        if scan == "curvature":
            eps, _, _, ratio, _ = row
            run.check(f"defect_over_area[{eps:g}]", lambda r=ratio: r, -0.5, 0.5 * tol.curvature_scan_slope * eps)
        else:
            duration, value, hol, oracle = row
            band = ctx.relative_tolerance(oracle)
            run.check(f"flux[{duration:g}]", lambda v=value: v, oracle, band)
            run.check(f"holonomy[{duration:g}]", lambda v=hol: v, oracle, band)
    return Report(seed, [run.report], tol_scale), table
