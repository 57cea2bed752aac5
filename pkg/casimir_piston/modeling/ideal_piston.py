# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""Cutoff-regularized vacuum energy per area of the empty piston.

Per side of length ``s`` (``s = a`` or ``L - a``) the energy is

    (1/2 pi) sum_{m>=0} int k dk omega exp(-xi omega),   omega = sqrt((m pi/s)^2 + k^2)

evaluated three ways: term by term (`energy_numeric`), through the closed
form in ``f(u) = e^u cosech(u)`` with ``u = pi xi / 2s`` (`energy_closed`), and
by its small-xi expansion (`energy_asymptotic`).
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Union

import numpy as np
from transformers.utils import logging

from ..errors import DomainError, ResourceError
from .piston import PistonGeometry, Regulator, Side
from .specfun import COTH_SERIES_TERMS, coth_remainder, coth_series_coefficient, exp_cosech_kernel


logger = logging.get_logger(__name__)

ENERGY_UNITS = "1/length^3"
PRESSURE_UNITS = "1/length^4"

DEFAULT_ACCURACY = 1e-16
DEFAULT_MAX_TERMS = 100_000_000

_CHUNK = 1_000_000
_ASYMPTOTIC_VALIDITY = 0.5
# position_energy switches from its series to the closed remainder at this u
_SERIES_LIMIT = 1.0


@dataclass(frozen=True)
class EnergyPerArea:
    """Regularized energy per unit transverse area, with the per-side split."""

    value: float
    method: str
    xi: float
    left: float
    right: float

    def to_dict(self):
        return {
            "value": self.value,
            "method": self.method,
            "xi": self.xi,
            "left": self.left,
            "right": self.right,
            "units": ENERGY_UNITS,
        }


def regularized_mode_integral(u0: float, xi: float) -> float:
    """``int_{u0}^inf u^2 exp(-xi u) du``, the k_par integral of one longitudinal mode."""
    return math.exp(-xi * u0) * (u0 * u0 / xi + 2.0 * u0 / xi ** 2 + 2.0 / xi ** 3)


def cutoff_antiderivative(omega, xi: float):
    """``exp(-xi omega) (omega/xi + 1/xi^2)``; its k_par derivative is ``-k_par exp(-xi omega)``."""
    omega = np.asarray(omega, dtype=float)
    return np.exp(-xi * omega) * (omega / xi + 1.0 / xi ** 2)


def _truncation_index(s: float, xi: float, accuracy: float, max_terms: int) -> int:
    m_max = int(math.ceil(math.log(1.0 / accuracy) * s / (math.pi * xi)))
    if m_max > max_terms:
        raise ResourceError(
            f"Mode sum needs {m_max} terms for s={s}, xi={xi} (cap {max_terms}); "
            f"use the closed form instead"
        )
    return m_max


def _side_numeric(s: float, xi: float, m_max: int, zero_mode_weight: float) -> float:
    partials = []
    for start in range(0, m_max + 1, _CHUNK):
        m = np.arange(start, min(start + _CHUNK, m_max + 1), dtype=float)
        u0 = m * math.pi / s
        terms = np.exp(-xi * u0) * (u0 * u0 / xi + 2.0 * u0 / xi ** 2 + 2.0 / xi ** 3)
        if start == 0:
            terms[0] *= zero_mode_weight
        partials.append(math.fsum(terms.tolist()))
    return math.fsum(partials) / (2.0 * math.pi)


def energy_numeric(
    geometry: PistonGeometry,
    regulator: Regulator,
    accuracy: float = DEFAULT_ACCURACY,
    max_terms: int = DEFAULT_MAX_TERMS,
    zero_mode_weight: float = 1.0,
) -> EnergyPerArea:
    """Sum the exact k_par integrals over ``m``, both sides.

    The sum runs to ``m_max = ceil(log(1/accuracy) s / (pi xi))``, past which
    the cutoff weight is below ``accuracy``. The ``m = 0`` term enters with
    ``zero_mode_weight`` (1 matches the closed form).
    """
    if not 0.0 < accuracy < 1.0:
        raise DomainError(f"accuracy must lie in (0, 1), got {accuracy}")
    xi = regulator.xi
    sides = []
    for side in (Side.LEFT, Side.RIGHT):
        s = geometry.side_length(side)
        m_max = _truncation_index(s, xi, accuracy, max_terms)
        logger.debug(f"energy_numeric: {side.value} side truncated at m_max={m_max}")
        sides.append(_side_numeric(s, xi, m_max, zero_mode_weight))
    left, right = sides
    return EnergyPerArea(value=left + right, method="numeric", xi=xi, left=left, right=right)


def _side_closed(s: float, xi: float) -> float:
    kappa = math.pi / (2.0 * s)
    u = kappa * xi
    f0 = exp_cosech_kernel(u, 0)
    f1 = exp_cosech_kernel(u, 1)
    f2 = exp_cosech_kernel(u, 2)
    return (f0 / xi ** 3 - kappa * f1 / xi ** 2 + kappa ** 2 * f2 / (2.0 * xi)) / (2.0 * math.pi)


def energy_closed(geometry: PistonGeometry, regulator: Regulator) -> EnergyPerArea:
    xi = regulator.xi
    left = _side_closed(geometry.a, xi)
    right = _side_closed(geometry.L - geometry.a, xi)
    return EnergyPerArea(value=left + right, method="closed", xi=xi, left=left, right=right)


def _side_asymptotic(s: float, xi: float) -> float:
    return 3.0 * s / (math.pi ** 2 * xi ** 4) + 1.0 / (2.0 * math.pi * xi ** 3) - math.pi ** 2 / (720.0 * s ** 3)


def energy_asymptotic(geometry: PistonGeometry, regulator: Regulator) -> EnergyPerArea:
    """``3L/(pi^2 xi^4) + 1/(pi xi^3) - pi^2/720 (a^-3 + (L-a)^-3)``, split per side."""
    xi = regulator.xi
    ratio = xi / min(geometry.a, geometry.L - geometry.a)
    if ratio >= _ASYMPTOTIC_VALIDITY:
        logger.warning(
            f"Small-xi energy used at xi/min(a, L-a)={ratio:.3g}; it is only valid well below "
            f"{_ASYMPTOTIC_VALIDITY}"
        )
    left = _side_asymptotic(geometry.a, xi)
    right = _side_asymptotic(geometry.L - geometry.a, xi)
    return EnergyPerArea(value=left + right, method="asymptotic", xi=xi, left=left, right=right)


def side_position_energy(s: float, xi: float) -> float:
    """One side of `position_energy`: the closed form with its ``xi^-4`` and ``xi^-3`` poles removed."""
    kappa = math.pi / (2.0 * s)
    u = kappa * xi
    if u >= _SERIES_LIMIT:
        g0, g1, g2 = (coth_remainder(u, d) for d in range(3))
        return (g0 / xi ** 3 - kappa * g1 / xi ** 2 + kappa ** 2 * g2 / (2.0 * xi)) / (2.0 * math.pi)

    # the bracket operator maps u^(2n-1) to kappa^(2n-1) xi^(2n-4) (n-1)(2n-3)
    value = 0.0
    for n in range(COTH_SERIES_TERMS, 1, -1):
        c = coth_series_coefficient(n)
        value += c * kappa ** (2 * n - 1) * xi ** (2 * n - 4) * (n - 1) * (2 * n - 3)
    return value / (2.0 * math.pi)


def position_energy(geometry: PistonGeometry, regulator: Regulator) -> EnergyPerArea:
    """Closed-form energy minus its a-independent part ``3L/(pi^2 xi^4) + 1/(pi xi^3)``.

    Built from the regular part of ``coth``, so nothing cancels as ``xi -> 0``;
    it tends to ``-pi^2/720 (a^-3 + (L-a)^-3)``.
    """
    xi = regulator.xi
    left = side_position_energy(geometry.a, xi)
    right = side_position_energy(geometry.L - geometry.a, xi)
    return EnergyPerArea(value=left + right, method="position", xi=xi, left=left, right=right)


def energy_principal_part(geometry: PistonGeometry, side: Optional[Union[str, Side]] = None) -> Dict[str, float]:
    """Pole coefficients ``{"-4": 3s/pi^2, "-3": 1/(2 pi)}`` of the closed form, summed over ``side`` or both.

    ``energy_closed`` equals these poles plus `position_energy` exactly.
    """
    sides = (Side.LEFT, Side.RIGHT) if side is None else (Side.parse(side),)
    return {
        "-4": sum(3.0 * geometry.side_length(sd) / math.pi ** 2 for sd in sides),
        "-3": len(sides) / (2.0 * math.pi),
    }


def force_per_area(geometry: PistonGeometry) -> float:
    """``pi^2/240 ((L-a)^-4 - a^-4)``; positive pushes the piston toward larger ``a``."""
    a, L = geometry.a, geometry.L
    return math.pi ** 2 / 240.0 * ((L - a) ** -4 - a ** -4)


def force_finite_difference(
    geometry: PistonGeometry, regulator: Regulator, step: float = 1e-4
) -> float:
    """``-dE/da`` by a centered difference of `position_energy`."""
    a, L = geometry.a, geometry.L
    if not (step > 0.0 and a - step > 0.0 and a + step < L):
        raise DomainError(f"Finite-difference step {step} leaves the chamber at a={a}, L={L}")
    upper = position_energy(PistonGeometry(L=L, a=a + step), regulator).value
    lower = position_energy(PistonGeometry(L=L, a=a - step), regulator).value
    return -(upper - lower) / (2.0 * step)
