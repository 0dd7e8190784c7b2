#!/usr/bin/env python3
"""
Scenario configuration for the adsflux runner.

A scenario is a JSON document validated by pydantic models that reject unknown
keys and non-positive tolerances. Every section has defaults, so an empty
document (or no document at all) selects the default acceptance scenario on
the octagon representation.
"""

import json
import logging
from pathlib import Path
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError, model_validator

from .errors import AdsFluxError, ConfigError
from .fuchsian import LoopWord, RepPair, conjugate_rep, explicit_rep, octagon_rep
from .isotopies import BumpProfile, HamiltonianKind, HamiltonianSpec
from .lie_core import GroupElt
from .settings import DEFAULT_NUMERICS, Numerics

_logger = logging.getLogger(__name__)

Matrix2 = Tuple[Tuple[float, float], Tuple[float, float]]

SUITE_NAMES = (
    "metric", "fiber", "sasaki", "foliation", "curvature",
    "gauss", "flux_holonomy", "orbit", "infrastructure",
)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# =============================================================================
# SECTIONS
# =============================================================================

class RepresentationConfig(StrictModel):
    """Builtin octagon, its conjugate by β, or explicit generator matrices"""

    kind: Literal["octagon", "conjugate", "explicit"] = "octagon"
    beta: Optional[Matrix2] = None
    left: Optional[List[Matrix2]] = None
    right: Optional[List[Matrix2]] = None

    @model_validator(mode="after")
    def _check_fields(self) -> "RepresentationConfig":
        if self.kind == "conjugate" and self.beta is None:
            raise ValueError("conjugate representations need beta")
        if self.kind == "explicit" and (self.left is None or self.right is None):
            raise ValueError("explicit representations need left and right generator matrices")
        return self

    def build(self) -> RepPair:
        base = octagon_rep()
        if self.kind == "octagon":
            return base
        try:
            if self.kind == "conjugate":
                return conjugate_rep(base, GroupElt(np.array(self.beta, dtype=float)))
            return explicit_rep([np.array(m, dtype=float) for m in self.left],
                                [np.array(m, dtype=float) for m in self.right])
        except (AdsFluxError, ValueError) as e:
            raise ConfigError(f"invalid representation: {e}") from e


class HamiltonianConfig(StrictModel):
    """One invariant Hamiltonian deformation of the anchor"""

    name: str
    kind: Literal["bump", "distance", "constant"] = "bump"
    amplitude: float = 0.2
    radius: PositiveFloat = 0.8
    center: Tuple[float, PositiveFloat] = (0.0, 1.0)
    sides: Literal["left", "right", "both"] = "left"
    method: Literal["rk4", "exact"] = "exact"
    duration: float = 0.5

    def spec(self, method: Optional[str] = None) -> HamiltonianSpec:
        return HamiltonianSpec(
            kind=HamiltonianKind.from_string(self.kind),
            profile=BumpProfile(self.amplitude, self.radius),
            center=complex(*self.center),
            sides=self.sides,
            method=method or self.method,
        )


def _default_hamiltonians() -> List[HamiltonianConfig]:
    return [
        HamiltonianConfig(name="bump_center_left"),
        HamiltonianConfig(name="bump_offset_right", amplitude=0.3, radius=0.7, center=(0.3, 1.1), sides="right"),
        HamiltonianConfig(name="bump_both", amplitude=0.25, radius=0.6, center=(-0.2, 0.9), sides="both",
                          duration=0.4),
        HamiltonianConfig(name="bump_high_left", radius=0.9, center=(0.0, 1.2)),
        HamiltonianConfig(name="bump_negative_both", amplitude=-0.2, radius=0.5, center=(0.1, 1.0), sides="both"),
    ]


class ClosedFormConfig(StrictModel):
    """Harmonic-form flows on the genus-two mesh"""

    periods: Tuple[float, float, float, float] = (1.0, 0.0, 0.0, 0.0)
    durations: List[float] = Field(default_factory=lambda: [0.05, 0.1, 0.2])


class ToleranceConfig(StrictModel):
    """Acceptance tolerances; a check passes when |computed - oracle| < tolerance"""

    embedding: PositiveFloat = 1e-10
    fiber: PositiveFloat = 1e-9
    sasaki: PositiveFloat = 1e-6
    curvature_relative: PositiveFloat = 1e-3
    curvature_scan_slope: PositiveFloat = 1.25
    gauss: PositiveFloat = 1e-8
    horizontality: PositiveFloat = 1e-7
    lagrangian: PositiveFloat = 1e-6
    lagrangian_flow: PositiveFloat = 1e-5
    equivariance: PositiveFloat = 1e-8
    flux_zero: PositiveFloat = 1e-4
    flux_absolute: PositiveFloat = 1e-4
    flux_relative: PositiveFloat = 0.02
    homomorphism: PositiveFloat = 1e-4
    closure: PositiveFloat = 1e-4
    relator: PositiveFloat = 1e-9
    periods: PositiveFloat = 1e-6
    coclosed: PositiveFloat = 1e-8
    linearity: PositiveFloat = 1e-9
    area: PositiveFloat = 1e-4

    def scaled(self, factor: float) -> "ToleranceConfig":
        """Multiply every tolerance by factor; 0 makes every comparison fail."""
        return ToleranceConfig.model_construct(**{k: v * factor for k, v in self.model_dump().items()})


class NumericsConfig(StrictModel):
    """Overrides of the numerical controls"""

    fd_step: PositiveFloat = DEFAULT_NUMERICS.fd_step
    step_bound: PositiveFloat = DEFAULT_NUMERICS.step_bound
    quad_tol: PositiveFloat = DEFAULT_NUMERICS.quad_tol
    quad_tol_sampled: PositiveFloat = DEFAULT_NUMERICS.quad_tol_sampled
    sampled_nodes: PositiveInt = DEFAULT_NUMERICS.sampled_nodes
    flux_t_panels: PositiveInt = DEFAULT_NUMERICS.flux_t_panels
    flux_tol: PositiveFloat = DEFAULT_NUMERICS.flux_tol
    ode_step: PositiveFloat = DEFAULT_NUMERICS.ode_step
    homotopy_samples: PositiveInt = DEFAULT_NUMERICS.homotopy_samples
    mesh_subdivision: PositiveInt = DEFAULT_NUMERICS.mesh_subdivision

    def build(self) -> Numerics:
        return Numerics(**self.model_dump())


class SampleConfig(StrictModel):
    """Random sample counts per check"""

    embedding: PositiveInt = 1000
    fiber: PositiveInt = 1000
    sasaki: PositiveInt = 50
    foliation: PositiveInt = 100
    squares: PositiveInt = 20
    gauss: PositiveInt = 1000
    gauss_graph: PositiveInt = 100
    horizontality: PositiveInt = 20
    area: PositiveInt = 200


class ScanConfig(StrictModel):
    curvature_eps: List[PositiveFloat] = Field(default_factory=lambda: [0.04, 0.02, 0.01])
    flux_durations: List[PositiveFloat] = Field(default_factory=lambda: [0.05, 0.1, 0.2])
    loop: str = "a1"


class OutputConfig(StrictModel):
    directory: str = "adsflux-out"
    report: str = "report.json"
    timings: str = "timings.json"


# =============================================================================
# SCENARIO
# =============================================================================

class ScenarioConfig(StrictModel):
    """Complete scenario: representation, families, loops, tolerances and outputs"""

    representation: RepresentationConfig = Field(default_factory=RepresentationConfig)
    hamiltonians: List[HamiltonianConfig] = Field(default_factory=_default_hamiltonians)
    closed_form: ClosedFormConfig = Field(default_factory=ClosedFormConfig)
    loops: List[str] = Field(default_factory=lambda: ["a1", "b1", "a2", "b2"], min_length=1)
    products: List[Tuple[str, str]] = Field(default_factory=lambda: [("a1", "b1"), ("a2", "b2^-1")])
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    numerics: NumericsConfig = Field(default_factory=NumericsConfig)
    samples: SampleConfig = Field(default_factory=SampleConfig)
    scans: ScanConfig = Field(default_factory=ScanConfig)
    outputs: OutputConfig = Field(default_factory=OutputConfig)
    seed: int = 0
    suites: List[Literal[SUITE_NAMES]] = Field(default_factory=lambda: list(SUITE_NAMES))

    @model_validator(mode="after")
    def _check_words(self) -> "ScenarioConfig":
        words = list(self.loops) + [w for pair in self.products for w in pair] + [self.scans.loop]
        for word in words:
            LoopWord.parse(word)
        names = [h.name for h in self.hamiltonians]
        if len(set(names)) != len(names):
            raise ValueError("Hamiltonian names must be unique")
        return self

    def loop_words(self) -> List[LoopWord]:
        return [LoopWord.parse(w) for w in self.loops]


def parse_config(text: str) -> ScenarioConfig:
    """Validate a JSON scenario document.

    Raises:
        ConfigError: on malformed JSON or a schema violation
    """
    try:
        return ScenarioConfig.model_validate(json.loads(text))
    except (json.JSONDecodeError, ValidationError) as e:
        raise ConfigError(str(e)) from e


def load_config(path: Optional[str] = None) -> ScenarioConfig:
    """Load a scenario file, or the default scenario when path is None.

    Raises:
        ConfigError: if the file cannot be read or fails validation
    """
    if path is None:
        return ScenarioConfig()
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    _logger.info("loaded scenario from %s", path)
    return parse_config(text)
