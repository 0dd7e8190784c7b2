#!/usr/bin/env python3
"""
Quadrature helpers: composite Simpson rules with Richardson acceptance.

Two refinement drivers are provided. adaptive_simpson integrates a vectorized
integrand on uniform grids of [0, 1], doubling the grid until the Simpson
values on the grid and on its every-other-node subgrid agree. refine_sampled
drives derivative-free estimates that converge at second order (chord sums,
geodesic-cell sums) the same way.
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import simpson

from .errors import QuadratureError

_logger = logging.getLogger(__name__)

GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(3)
# mapped to [0, 1]
GAUSS_NODES = 0.5 * (GAUSS_NODES + 1.0)
GAUSS_WEIGHTS = 0.5 * GAUSS_WEIGHTS


@dataclass(frozen=True)
class QuadratureResult:
    """Integral value with its Richardson error estimate and grid size"""

    value: float
    error: float
    intervals: int


def even_intervals(n: int) -> int:
    return max(2, n + (n % 2))


def simpson_grid(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Composite Simpson rule on a uniform grid of [0, 1] along axis."""
    n = values.shape[axis] - 1
    return simpson(values, dx=1.0 / n, axis=axis)


def adaptive_simpson(integrand: Callable[[np.ndarray], np.ndarray], tol: float,
                     min_intervals: int = 16, max_intervals: int = 4096) -> QuadratureResult:
    """Integrate a vectorized integrand over [0, 1].

    The grid starts at min_intervals (rounded up to a multiple of 4) and
    doubles until |S_n - S_{n/2}| <= tol·max(1, |S_n|); the accepted value
    carries the Richardson correction (S_n - S_{n/2})/15.

    Raises:
        QuadratureError: if max_intervals is reached without acceptance
    """
    n = max(4, min_intervals + (-min_intervals) % 4)
    while True:
        s = np.linspace(0.0, 1.0, n + 1)
        values = np.asarray(integrand(s), dtype=float)
        fine = float(simpson_grid(values))
        coarse = float(simpson_grid(values[::2]))
        error = abs(fine - coarse) / 15.0
        if error <= tol * max(1.0, abs(fine)):
            _logger.debug("simpson accepted with %d intervals (error %.2e)", n, error)
            return QuadratureResult(fine + (fine - coarse) / 15.0, error, n)
        if n >= max_intervals:
            raise QuadratureError(
                f"Simpson rule did not converge: error {error:.3e} > tol {tol:.3e} at {n} intervals"
            )
        n *= 2


def refine_sampled(estimate: Callable[[int], float], tol: float,
                   start: int = 256, max_intervals: int = 4096) -> QuadratureResult:
    """Drive a second-order derivative-free estimate to tolerance.

    estimate(n) must return the approximation on n uniform intervals and be
    consistent with estimate(n // 2) on the coarser grid. The accepted value
    is the Richardson extrapolation E_n + (E_n - E_{n/2})/3.

    Raises:
        QuadratureError: if max_intervals is reached without acceptance
    """
    n = even_intervals(start)
    coarse = estimate(n // 2)
    while True:
        fine = estimate(n)
        error = abs(fine - coarse) / 3.0
        if error <= tol * max(1.0, abs(fine)):
            _logger.debug("sampled estimate accepted with %d intervals (error %.2e)", n, error)
            return QuadratureResult(fine + (fine - coarse) / 3.0, error, n)
        if n >= max_intervals:
            raise QuadratureError(
                f"sampled estimate did not converge: error {error:.3e} > tol {tol:.3e} at {n} intervals"
            )
        coarse = fine
        n *= 2
