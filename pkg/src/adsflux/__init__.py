"""
adsflux

A numerical toolkit for the geodesic-flow principal bundle of Anti-de Sitter
3-space over H2 x H2: its connection and curvature, Gauss maps of equivariant
spacelike surfaces, and the flux/holonomy correspondence for Lagrangian
submanifolds of H2 x H2 on a genus-two surface.
"""

__version__ = "0.1.0"
__author__ = "adsflux contributors"
__license__ = "MIT"

# Errors and numerical controls
from .errors import (
    AdsFluxError,
    GeometryError,
    NotUnitTimelikeError,
    PastDirectedError,
    NotInHalfPlaneError,
    TangentError,
    NonDifferentiablePathError,
    StepBoundError,
    EndpointMismatchError,
    NotOnCommonFiberError,
    HomotopyTooCoarseError,
    DegenerateSurfaceError,
    NonLagrangianError,
    RepresentationError,
    UnsupportedRepresentationError,
    FlowDomainError,
    NumericalError,
    QuadratureError,
    SingularSolveError,
    MeshFormatError,
    ConfigError,
)
from .settings import DEFAULT_NUMERICS, Numerics

# Lie group PSL(2,R) and its algebra
from .lie_core import (
    J, K, KP,
    AlgVec,
    GroupElt,
    HPoint,
    IsomPair,
    TraceClass,
    pairing,
    cross,
    exp_alg,
    f_embed,
    f_invert,
    mobius,
    translation_along,
    hyperbolic_distance,
    killing_form,
)

# Unit tangent bundle, geodesic flow, connection
from .adsgeom import (
    BiPoint,
    FramePoint,
    FrameTangent,
    FramePath,
    Side,
    geodesic_flow,
    project,
    act,
    canonical_section,
    sasaki_pairing,
    connection_form,
    connection_along,
    flow_pushforward,
    distribution_ranks,
)

# Transport, curvature and fiber gaps
from .bundle_transport import (
    BasePath,
    PathPiece,
    Disk,
    FiberCoord,
    transport_offset,
    loop_defect,
    symplectic_area,
    geodesic_triangle_area,
    coordinate_square,
    mixed_square,
    curvature_scan,
    fiber_gap,
    deck_gaps,
)

# Surfaces, Lagrangians, flux and holonomy
from .lagrangian_lab import (
    RepClass,
    RepPair,
    LoopWord,
    OctagonDomain,
    EquivMap,
    SurfaceAdS,
    SurfaceMesh,
    DiscreteOneForm,
    MeshFlow,
    IsotopyPath,
    HamiltonianSpec,
    octagon_rep,
    conjugate_rep,
    explicit_rep,
    graph_map,
    geodesic_plane_surface,
    anchor_map,
    gauss_map,
    normal_lift,
    lagrangian_defect,
    harmonic_one_form,
    hamiltonian_isotopy,
    closed_form_isotopy,
    interpolation_isotopy,
    flux,
    relative_holonomy,
    anchored_holonomy,
    section_closure,
)

# Scenario runner
from .config import ScenarioConfig, load_config
from .report import Record, Report, ScanTable
from .suites import run_verify, run_scan

__all__ = [
    # Errors and settings
    "AdsFluxError", "GeometryError", "NotUnitTimelikeError", "PastDirectedError", "NotInHalfPlaneError",
    "TangentError", "NonDifferentiablePathError", "StepBoundError", "EndpointMismatchError",
    "NotOnCommonFiberError", "HomotopyTooCoarseError", "DegenerateSurfaceError", "NonLagrangianError",
    "RepresentationError", "UnsupportedRepresentationError", "FlowDomainError", "NumericalError",
    "QuadratureError", "SingularSolveError", "MeshFormatError", "ConfigError",
    "DEFAULT_NUMERICS", "Numerics",

    # Lie group
    "J", "K", "KP", "AlgVec", "GroupElt", "HPoint", "IsomPair", "TraceClass",
    "pairing", "cross", "exp_alg", "f_embed", "f_invert", "mobius", "translation_along",
    "hyperbolic_distance", "killing_form",

    # Bundle geometry
    "BiPoint", "FramePoint", "FrameTangent", "FramePath", "Side", "geodesic_flow", "project", "act",
    "canonical_section", "sasaki_pairing", "connection_form", "connection_along", "flow_pushforward",
    "distribution_ranks",

    # Transport
    "BasePath", "PathPiece", "Disk", "FiberCoord", "transport_offset", "loop_defect", "symplectic_area",
    "geodesic_triangle_area", "coordinate_square", "mixed_square", "curvature_scan", "fiber_gap", "deck_gaps",

    # Lagrangians
    "RepClass", "RepPair", "LoopWord", "OctagonDomain", "EquivMap", "SurfaceAdS", "SurfaceMesh",
    "DiscreteOneForm", "MeshFlow", "IsotopyPath", "HamiltonianSpec", "octagon_rep", "conjugate_rep",
    "explicit_rep", "graph_map", "geodesic_plane_surface", "anchor_map", "gauss_map", "normal_lift",
    "lagrangian_defect", "harmonic_one_form", "hamiltonian_isotopy", "closed_form_isotopy",
    "interpolation_isotopy", "flux", "relative_holonomy", "anchored_holonomy", "section_closure",

    # Runner
    "ScenarioConfig", "load_config", "Record", "Report", "ScanTable", "run_verify", "run_scan",
]
