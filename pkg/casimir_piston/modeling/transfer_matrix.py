# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""Eigenfrequencies of one side cavity filled with a layered dielectric.

The profile is replaced by ``n_layers`` homogeneous slabs sampled at their
midpoints. Inside a slab the transverse amplitude obeys ``f'' + beta^2 f = 0``
with ``beta^2 = omega^2 eps - k_par^2``; the 2x2 slab matrices carry

* TE (polarization 1): ``(E, E')`` from ``(0, 1)``, root condition ``E(s) = 0``;
* TM (polarization 2): ``(H, H'/eps)`` from ``(1, 0)``, root condition
  ``H'(s)/eps = 0`` (tangential E vanishes on the mirrors).

Roots are bracketed on a frequency grid and refined with ``brentq``.
"""

import math
from dataclasses import dataclass
from typing import List, Union

import numpy as np
from scipy.optimize import brentq
from transformers.utils import logging

from ..errors import BracketingError, DomainError, ResourceError
from .piston import DielectricProfile, PistonGeometry, Side


logger = logging.get_logger(__name__)

MAX_GRID_POINTS = 2_000_000
_GRID_REFINEMENT = 10


@dataclass(frozen=True)
class LayeredCavity:
    """Slabs of equal ``width`` with relative permittivities ``eps``."""

    width: float
    eps: np.ndarray

    @classmethod
    def from_profile(
        cls,
        geometry: PistonGeometry,
        side: Union[str, Side],
        profile: DielectricProfile,
        n_layers: int,
    ) -> "LayeredCavity":
        if int(n_layers) != n_layers or n_layers < 1:
            raise DomainError(f"n_layers must be a positive integer, got {n_layers}")
        lo, hi = geometry.side_interval(side)
        width = (hi - lo) / n_layers
        midpoints = lo + width * (np.arange(n_layers) + 0.5)
        eps = 1.0 + np.asarray(profile(midpoints), dtype=float)
        if not np.all(np.isfinite(eps)):
            raise DomainError("Dielectric profile is not finite on the cavity")
        if np.any(eps <= 0.0):
            raise DomainError("Relative permittivity must stay positive on the cavity")
        return cls(width=width, eps=eps)

    @property
    def length(self) -> float:
        return self.width * self.eps.size


def dispersion(cavity: LayeredCavity, omega, k_par: float, polarization: int) -> np.ndarray:
    """Boundary residual whose zeros in ``omega`` are the cavity eigenfrequencies.

    Vectorized over ``omega``. The state is rescaled after every slab, which
    keeps evanescent growth finite without moving the zeros.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    d = cavity.width
    if polarization == 1:
        f, g = np.zeros_like(omega), np.ones_like(omega)
    elif polarization == 2:
        f, g = np.ones_like(omega), np.zeros_like(omega)
    else:
        raise DomainError(f"Polarization must be 1 or 2, got {polarization}")

    for eps in cavity.eps:
        beta2 = omega * omega * eps - k_par * k_par
        beta = np.sqrt(beta2.astype(complex))
        cos = np.cos(beta * d).real
        # sin(beta d) / beta, finite at beta = 0
        sinc = (d * np.sinc(beta * d / np.pi)).real
        if polarization == 1:
            f, g = cos * f + sinc * g, -beta2 * sinc * f + cos * g
        else:
            f, g = cos * f + eps * sinc * g, -(beta2 / eps) * sinc * f + cos * g
        scale = np.maximum(np.abs(f), np.abs(g))
        scale[scale == 0.0] = 1.0
        f, g = f / scale, g / scale

    return f if polarization == 1 else g


def _slab_functions(beta2: float, d: float):
    # cos(beta d) and sin(beta d) / beta for either sign of beta^2
    if beta2 > 0.0:
        beta = math.sqrt(beta2)
        return math.cos(beta * d), math.sin(beta * d) / beta
    if beta2 < 0.0:
        kappa = math.sqrt(-beta2)
        return math.cosh(kappa * d), math.sinh(kappa * d) / kappa
    return 1.0, d


def dispersion_scalar(cavity: LayeredCavity, omega: float, k_par: float, polarization: int) -> float:
    """Scalar `dispersion`, used inside the root refinement."""
    d = cavity.width
    f, g = (0.0, 1.0) if polarization == 1 else (1.0, 0.0)
    for eps in cavity.eps.tolist():
        beta2 = omega * omega * eps - k_par * k_par
        cos, sinc = _slab_functions(beta2, d)
        if polarization == 1:
            f, g = cos * f + sinc * g, -beta2 * sinc * f + cos * g
        else:
            f, g = cos * f + eps * sinc * g, -(beta2 / eps) * sinc * f + cos * g
        scale = max(abs(f), abs(g)) or 1.0
        f, g = f / scale, g / scale
    return f if polarization == 1 else g


def _uniform_roots(length: float, eps: float, k_par: float, polarization: int, omega_max: float):
    m_start = 1 if polarization == 1 or k_par == 0.0 else 0
    m_max = int(math.floor(length * math.sqrt(max(omega_max ** 2 * eps - k_par ** 2, 0.0)) / math.pi))
    m = np.arange(m_start, m_max + 2)
    roots = np.sqrt((m * math.pi / length) ** 2 + k_par ** 2) / math.sqrt(eps)
    return roots


def _grid_step(length, eps_bounds, k_par, polarization, omega_max) -> float:
    spacings = []
    for eps in eps_bounds:
        roots = np.concatenate(([0.0], _uniform_roots(length, eps, k_par, polarization, omega_max)))
        spacings.append(np.min(np.diff(roots)))
    return min(spacings) / _GRID_REFINEMENT


def transfer_matrix_eigenfrequencies(
    geometry: PistonGeometry,
    side: Union[str, Side],
    profile: DielectricProfile,
    k_par: float,
    polarization: int,
    omega_max: float,
    n_layers: int,
) -> List[float]:
    """All eigenfrequencies below ``omega_max`` of one side cavity at fixed ``k_par``.

    Args:
        geometry (`PistonGeometry`): the piston.
        side (`Side` or `str`): which sub-cavity.
        profile (`DielectricProfile`): ``delta_eps(x)`` over the chamber.
        k_par (`float`): transverse wavenumber.
        polarization (`int`): 1 for TE, 2 for TM.
        omega_max (`float`): upper end of the scan.
        n_layers (`int`): number of midpoint-sampled slabs.

    Returns:
        Sorted list of eigenfrequencies in ``(0, omega_max)``.
    """
    if not (math.isfinite(omega_max) and omega_max > 0.0):
        raise DomainError(f"omega_max must be positive, got {omega_max}")
    if not (math.isfinite(k_par) and k_par >= 0.0):
        raise DomainError(f"k_par must be finite and nonnegative, got {k_par}")
    if polarization not in (1, 2):
        raise DomainError(f"Polarization must be 1 or 2, got {polarization}")

    cavity = LayeredCavity.from_profile(geometry, side, profile, n_layers)
    eps_bounds = (float(cavity.eps.min()), float(cavity.eps.max()))
    step = _grid_step(cavity.length, eps_bounds, k_par, polarization, omega_max)
    n_grid = int(math.ceil(omega_max / step)) + 1
    if n_grid > MAX_GRID_POINTS:
        raise ResourceError(
            f"Frequency scan needs {n_grid} points (cap {MAX_GRID_POINTS}); lower omega_max"
        )

    grid = np.linspace(omega_max * 1e-9, omega_max, n_grid)
    values = dispersion(cavity, grid, k_par, polarization)

    def residual(omega):
        return dispersion_scalar(cavity, omega, k_par, polarization)

    roots = []
    for i in np.flatnonzero(values[:-1] == 0.0):
        roots.append(float(grid[i]))
    for i in np.flatnonzero(values[:-1] * values[1:] < 0.0):
        roots.append(brentq(residual, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps))
    roots.sort()

    expected = np.count_nonzero(
        _uniform_roots(cavity.length, eps_bounds[0], k_par, polarization, omega_max) < omega_max
    )
    logger.debug(
        f"Transfer-matrix scan: {n_grid} grid points, {len(roots)} roots, at least {expected} expected"
    )
    if len(roots) < expected:
        raise BracketingError(
            f"Found {len(roots)} eigenfrequencies below {omega_max}, expected at least {expected}",
            grid=grid.tolist(),
            found=roots,
        )
    return roots
