"""Shared fixtures: the octagon representation, a coarse mesh and small scenarios."""

import numpy as np
import pytest

from adsflux.config import ScenarioConfig
from adsflux.fuchsian import OctagonDomain, octagon_rep
from adsflux.settings import DEFAULT_NUMERICS
from adsflux.surface_mesh import SurfaceMesh, harmonic_one_form

COARSE_SUBDIVISION = 6


@pytest.fixture(scope="session")
def rep():
    return octagon_rep()


@pytest.fixture(scope="session")
def domain():
    return OctagonDomain()


@pytest.fixture(scope="session")
def numerics():
    return DEFAULT_NUMERICS


@pytest.fixture(scope="session")
def coarse_mesh(domain):
    return SurfaceMesh.octagon(COARSE_SUBDIVISION, domain)


@pytest.fixture(scope="session")
def a1_form(coarse_mesh):
    return harmonic_one_form(coarse_mesh, (1.0, 0.0, 0.0, 0.0))


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


@pytest.fixture
def small_scenario():
    """Scenario with few samples and a coarse mesh, for runner tests"""
    return ScenarioConfig.model_validate({
        "hamiltonians": [{"name": "bump", "amplitude": 0.2, "radius": 0.6}],
        "loops": ["a1", "b1"],
        "products": [["a1", "b1"]],
        "closed_form": {"durations": [0.1]},
        "samples": {
            "embedding": 50, "fiber": 50, "sasaki": 5, "foliation": 5, "squares": 3,
            "gauss": 50, "gauss_graph": 5, "horizontality": 3, "area": 20,
        },
        "numerics": {"mesh_subdivision": COARSE_SUBDIVISION},
        "scans": {"curvature_eps": [0.04, 0.02], "flux_durations": [0.1]},
    })
