#!/usr/bin/env python3
"""
Numerical controls shared by every adsflux module.

A single frozen Numerics instance carries step sizes, step bounds, quadrature
tolerances and acceptance gates. Library operations take it as an optional
argument defaulting to DEFAULT_NUMERICS; the scenario configuration builds its
own instance from validated JSON.
"""

import math
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Numerics:
    """Step sizes, bounds and tolerances used throughout the toolkit"""

    # Finite differences
    fd_step: float = 1e-5
    fd_gate: float = 1e-6

    # Paths and quadrature
    step_bound: float = 0.05
    quad_tol: float = 1e-10
    quad_tol_sampled: float = 1e-3
    quad_min_nodes: int = 16
    quad_max_nodes: int = 4096
    sampled_nodes: int = 256
    flux_t_panels: int = 16
    flux_tol: float = 1e-8
    flux_max_intervals: int = 256

    # Flows
    ode_step: float = 1e-3
    max_tracer_iterations: int = 20000

    # Fiber tracking
    gap_jump: float = 0.9 * math.pi / 2
    homotopy_samples: int = 64

    # Acceptance gates
    unit_tol: float = 1e-9
    equivariance_tol: float = 1e-8
    lagrangian_gate: float = 1e-6
    lagrangian_gate_mesh: float = 1e-4
    spacelike_min_eig: float = 1e-8

    # Mesh
    mesh_subdivision: int = 23

    def scaled(self, factor: float) -> "Numerics":
        """Return a copy with every tolerance and gate multiplied by factor.

        Step sizes, node counts and bounds are left unchanged.
        """
        tolerance_names = (
            "fd_gate", "quad_tol", "quad_tol_sampled", "flux_tol", "unit_tol",
            "equivariance_tol", "lagrangian_gate", "lagrangian_gate_mesh",
        )
        return replace(self, **{name: getattr(self, name) * factor for name in tolerance_names})

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_NUMERICS = Numerics()
