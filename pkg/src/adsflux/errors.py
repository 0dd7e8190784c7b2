#!/usr/bin/env python3
"""
Error hierarchy for adsflux.

Every failure condition the library can detect has its own exception class so
that callers (and the verification suites) can tell them apart. All classes
derive from AdsFluxError; domain violations derive from GeometryError and
numerical breakdowns from NumericalError.
"""


class AdsFluxError(Exception):
    """Base class for all adsflux errors"""


# =============================================================================
# GEOMETRIC DOMAIN ERRORS
# =============================================================================

class GeometryError(AdsFluxError):
    """An input lies outside the domain of a geometric operation"""


class NotUnitTimelikeError(GeometryError):
    """An algebra element expected to have pairing -1 does not"""


class PastDirectedError(GeometryError):
    """A unit timelike element lies in the past cone (opposite to J)"""


class NotInHalfPlaneError(GeometryError):
    """A point of H2 has non-positive imaginary part"""


class TangentError(GeometryError):
    """A frame tangent has a vertical part not orthogonal to u0"""


class NonDifferentiablePathError(GeometryError):
    """Finite differences at two step sizes disagree beyond tolerance"""


class StepBoundError(GeometryError):
    """Consecutive path samples are further apart than the step bound"""


class EndpointMismatchError(GeometryError):
    """A loop does not close, or a homotopy does not end at the given frames"""


class NotOnCommonFiberError(GeometryError):
    """Two frame points do not project to the same point of H2xH2"""


class HomotopyTooCoarseError(GeometryError):
    """The tracked fiber gap jumps too far between consecutive samples"""


class DegenerateSurfaceError(GeometryError):
    """A surface in AdS3 is not spacelike at a sampled point"""


class NonLagrangianError(GeometryError):
    """An equivariant map exceeds the Lagrangian defect gate"""


class RepresentationError(GeometryError):
    """A representation fails the relator or Fuchsian checks"""


class UnsupportedRepresentationError(RepresentationError):
    """The operation is not available for this representation class"""


class FlowDomainError(GeometryError):
    """A flow left the region where its vector field is defined"""


# =============================================================================
# NUMERICAL ERRORS
# =============================================================================

class NumericalError(AdsFluxError):
    """A numerical method failed to reach its accuracy target"""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge within the node budget"""


class SingularSolveError(NumericalError):
    """A linear solve failed (degenerate mesh or inconsistent system)"""


# =============================================================================
# I/O AND CONFIGURATION ERRORS
# =============================================================================

class MeshFormatError(AdsFluxError):
    """A serialized mesh could not be parsed"""


class LoopWordError(AdsFluxError, ValueError):
    """A loop word names an unknown generator or is empty"""


class ConfigError(AdsFluxError):
    """A scenario configuration failed schema validation"""
