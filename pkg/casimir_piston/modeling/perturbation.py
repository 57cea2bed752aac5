# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""First-order response of the piston to a weak dielectric ``delta_eps(x)``.

Eigenfrequency shifts ``omega1 = -omega0/2 int |E0|^2 delta_eps A dx``, their
cutoff-weighted ``k_par`` integrals, and the derivative of the regularized
energy per area with respect to the amplitude ``alpha`` of the sinusoidal
profile ``alpha sin(pi x / L)``. Everything sinusoidal is reported per unit
``alpha``.

Side factors: ``C = 1 - cos(pi a / L)`` on the left and ``1 + cos(pi a / L)``
on the right, ``r = (2 m L / s)^2`` and ``v = s / 2L``. The closed shift
formulas are used as printed, including the polarization-2, ``m = 0`` mode
whose braces equal 2; the normalized mode integral gives half of that.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Union

import numpy as np
from scipy.integrate import quad
from transformers.utils import logging

from ..errors import DomainError, QuadratureError, ResourceError
from .ideal_piston import (
    DEFAULT_ACCURACY,
    DEFAULT_MAX_TERMS,
    ENERGY_UNITS,
    PRESSURE_UNITS,
    regularized_mode_integral,
    side_position_energy,
)
from .piston import (
    DielectricProfile,
    Mode,
    PistonGeometry,
    Regulator,
    Side,
    longitudinal_wavenumber,
    mode_intensity,
    omega0,
)
from .specfun import EULER_GAMMA, digamma, exp_cosech_kernel, lerch_difference_derivative
from .transfer_matrix import transfer_matrix_eigenfrequencies


logger = logging.get_logger(__name__)

SHIFT_RTOL = 1e-10
INTEGRAL_RTOL = 1e-11
DEFAULT_ORACLE_ALPHA = 1e-4
DEFAULT_ORACLE_LAYERS = 400

_ASYMPTOTIC_VALIDITY = 0.1
_MAX_CHUNKS = 2000


@dataclass(frozen=True)
class ShiftResult:
    """First-order eigenfrequency shift of ``mode``.

    ``alpha`` is the sinusoidal amplitude the shift was evaluated at, or
    ``None`` for a tabulated profile.
    """

    mode: Mode
    omega1: float
    method: str
    alpha: Optional[float] = None

    @property
    def per_unit_alpha(self) -> float:
        if not self.alpha:
            return self.omega1
        return self.omega1 / self.alpha

    def to_dict(self):
        return {
            "mode": self.mode.to_dict(),
            "omega1": self.omega1,
            "method": self.method,
            "alpha": self.alpha,
            "units": "1/length",
        }


@dataclass(frozen=True)
class IntegralResult:
    """``int k dk omega1 exp(-xi omega0)`` for one ``(side, m, polarization)``, per unit alpha."""

    side: Side
    m: int
    polarization: int
    xi: float
    value: float
    method: str

    def to_dict(self):
        return {
            "side": self.side.value,
            "m": self.m,
            "polarization": self.polarization,
            "xi": self.xi,
            "value": self.value,
            "method": self.method,
            "units": ENERGY_UNITS,
        }


@dataclass(frozen=True)
class EnergyDerivative:
    """``(1/A) dE/dalpha`` with the per-side split.

    ``zero_mode`` is the part carried by the polarization-2, ``m = 0`` modes of
    both sides; it is included in ``value``.
    """

    value: float
    method: str
    xi: float
    left: float
    right: float
    zero_mode: Optional[float] = None

    def to_dict(self):
        return {
            "value": self.value,
            "method": self.method,
            "xi": self.xi,
            "left": self.left,
            "right": self.right,
            "zero_mode": self.zero_mode,
            "units": ENERGY_UNITS,
        }


@dataclass(frozen=True)
class ForceDerivative:
    """``-d/da`` of ``(1/A) dE/dalpha``: the first-order change of the force per area, per unit alpha."""

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
            "units": PRESSURE_UNITS,
        }


@dataclass(frozen=True)
class ShiftComparison:
    """Closed and quadrature shifts of one mode side by side."""

    mode: Mode
    closed: ShiftResult
    quadrature: ShiftResult
    relative_difference: float
    discrepancy: bool
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "mode": self.mode.to_dict(),
            "closed": self.closed.to_dict(),
            "quadrature": self.quadrature.to_dict(),
            "relative_difference": self.relative_difference,
            "discrepancy": self.discrepancy,
            "notes": list(self.notes),
        }


def side_cosine_factor(geometry: PistonGeometry, side: Union[str, Side]) -> float:
    """``int_side sin(pi x / L) dx`` in units of ``L / pi``."""
    c = math.cos(math.pi * geometry.a / geometry.L)
    return 1.0 - c if Side.parse(side) is Side.LEFT else 1.0 + c


def _ratio_r(geometry: PistonGeometry, side: Side, m):
    s = geometry.side_length(side)
    return (2.0 * np.asarray(m, dtype=float) * geometry.L / s) ** 2


def _closed_bracket(q: float, k: float, r: float, polarization: int) -> float:
    # omega1 / (omega0 alpha C L / (2 pi s))
    if polarization == 1:
        return r / (1.0 - r)
    if q == 0.0:
        ratio = -1.0
    else:
        ratio = (q * q - k * k) / (q * q + k * k)
    return -(1.0 - ratio / (1.0 - r))


def first_order_shift_closed(geometry: PistonGeometry, mode: Mode, alpha: float = 1.0) -> ShiftResult:
    """Shift of ``mode`` under ``alpha sin(pi x / L)`` from the closed side formulas."""
    s = geometry.side_length(mode.side)
    q = longitudinal_wavenumber(geometry, mode)
    r = float(_ratio_r(geometry, mode.side, mode.m))
    c = side_cosine_factor(geometry, mode.side)
    bracket = _closed_bracket(q, mode.k_par, r, mode.polarization)
    omega1 = omega0(geometry, mode) * alpha * c * geometry.L / (2.0 * math.pi * s) * bracket
    return ShiftResult(mode=mode, omega1=omega1, method="closed", alpha=alpha)


def first_order_shift_quadrature(
    geometry: PistonGeometry, mode: Mode, profile: DielectricProfile
) -> ShiftResult:
    """``-omega0/2 int |E0|^2 delta_eps A dx`` over the mode's side by adaptive quadrature."""
    lo, hi = geometry.side_interval(mode.side)

    def integrand(x):
        return float(mode_intensity(geometry, mode, x) * profile(x))

    points = [p for p in profile.breakpoints if lo < p < hi] or None
    result = quad(
        integrand,
        lo,
        hi,
        epsabs=1e-14,
        epsrel=SHIFT_RTOL,
        limit=500,
        points=points,
        full_output=1,
    )
    value, abserr, info = result[:3]
    if len(result) > 3:
        raise QuadratureError(
            f"Mode integral for {mode.to_dict()} did not converge: {result[3]}",
            trace={key: np.asarray(val).tolist() for key, val in info.items()},
        )
    logger.debug(f"Shift quadrature used {info['neval']} evaluations, error estimate {abserr:.3g}")

    omega1 = -0.5 * omega0(geometry, mode) * value
    alpha = profile.alpha if profile.is_sinusoidal else None
    return ShiftResult(mode=mode, omega1=omega1, method="quadrature", alpha=alpha)


def compare_shift(geometry: PistonGeometry, mode: Mode, alpha: float = 1.0) -> ShiftComparison:
    """Closed versus quadrature shift for ``alpha sin(pi x / L)``; mismatches are logged, not fixed."""
    closed = first_order_shift_closed(geometry, mode, alpha)
    quadrature = first_order_shift_quadrature(
        geometry, mode, DielectricProfile.sinusoidal(geometry.L, alpha)
    )
    scale = max(abs(closed.omega1), abs(quadrature.omega1))
    rel = abs(closed.omega1 - quadrature.omega1) / scale if scale else 0.0
    notes = []
    discrepancy = rel > 1e-8
    if discrepancy:
        if mode.m == 0 and mode.polarization == 2:
            notes.append(
                "closed m=0 polarization-2 shift counts the constant mode twice; "
                "the normalized mode integral gives half"
            )
        notes.append(f"closed={closed.omega1!r} quadrature={quadrature.omega1!r}")
        logger.warning(f"Shift discrepancy for {mode.to_dict()}: " + "; ".join(notes))
    return ShiftComparison(
        mode=mode,
        closed=closed,
        quadrature=quadrature,
        relative_difference=rel,
        discrepancy=discrepancy,
        notes=notes,
    )


def oracle_shift(
    geometry: PistonGeometry,
    mode: Mode,
    alpha: float = DEFAULT_ORACLE_ALPHA,
    n_layers: int = DEFAULT_ORACLE_LAYERS,
) -> ShiftResult:
    """``(omega(alpha) - omega(0)) / alpha`` from the layered-cavity eigenfrequencies."""
    if alpha == 0.0:
        raise DomainError("Oracle shift needs a nonzero alpha")
    s = geometry.side_length(mode.side)
    target = omega0(geometry, mode)
    upper = math.hypot((mode.m + 1) * math.pi / s, mode.k_par)
    omega_max = 0.5 * (target + upper)

    def nearest(amplitude):
        roots = transfer_matrix_eigenfrequencies(
            geometry,
            mode.side,
            DielectricProfile.sinusoidal(geometry.L, amplitude),
            mode.k_par,
            mode.polarization,
            omega_max,
            n_layers,
        )
        if not roots:
            raise DomainError(f"No eigenfrequency found near {target} for {mode.to_dict()}")
        return min(roots, key=lambda root: abs(root - target))

    perturbed = nearest(alpha)
    bare = nearest(0.0)
    logger.debug(f"Oracle for {mode.to_dict()}: omega(0)={bare!r}, omega(alpha)={perturbed!r}")
    return ShiftResult(mode=mode, omega1=(perturbed - bare) / alpha, method="transfer-matrix", alpha=1.0)


def _validate_integral_mode(m: int, polarization: int):
    # Mode carries the validation of (m, polarization)
    Mode(side=Side.LEFT, m=m, k_par=0.0, polarization=polarization)


def _appendix_terms(geometry: PistonGeometry, side: Side, m, polarization: int, xi: float):
    """Closed appendix integrals for an array of ``m`` at one polarization."""
    s = geometry.side_length(side)
    m = np.asarray(m, dtype=float)
    q = m * math.pi / s
    r = _ratio_r(geometry, side, m)
    p = side_cosine_factor(geometry, side) * geometry.L / (math.pi * s)
    e = np.exp(-xi * q)
    d0 = 1.0 / xi ** 3
    d1 = -q / xi ** 2
    d2 = q * q / (2.0 * xi)
    geometric = r / (1.0 - r)
    if polarization == 1:
        return p * geometric * (d0 - d1 + d2) * e
    return p * ((1.0 / (1.0 - r) + 1.0) * (d1 - d0) + geometric * d2) * e


def appendix_integral_closed(
    geometry: PistonGeometry, side: Union[str, Side], m: int, polarization: int, regulator: Regulator
) -> IntegralResult:
    """``int k dk omega1 exp(-xi omega0)`` with the xi-derivatives applied to ``exp(-xi m pi / s)``."""
    side = Side.parse(side)
    _validate_integral_mode(m, polarization)
    value = float(_appendix_terms(geometry, side, m, polarization, regulator.xi))
    return IntegralResult(
        side=side, m=int(m), polarization=polarization, xi=regulator.xi, value=value, method="closed"
    )


def appendix_integral_quadrature(
    geometry: PistonGeometry, side: Union[str, Side], m: int, polarization: int, regulator: Regulator
) -> IntegralResult:
    """The same integral done numerically in ``k_par`` with the closed per-mode shift.

    Chunks of width ``10/xi`` are added until the tail bound
    ``|omega1| <= C L/(pi s) omega0`` puts the rest below ``1e-11`` of the total.
    """
    side = Side.parse(side)
    _validate_integral_mode(m, polarization)
    xi = regulator.xi
    s = geometry.side_length(side)
    q = m * math.pi / s
    r = float(_ratio_r(geometry, side, m))
    prefactor = side_cosine_factor(geometry, side) * geometry.L / (2.0 * math.pi * s)
    bound = 2.0 * prefactor

    def integrand(k):
        omega = math.hypot(q, k)
        shift = omega * prefactor * _closed_bracket(q, k, r, polarization)
        return k * shift * math.exp(-xi * omega)

    width = 10.0 / xi
    partials = []
    n_evals = 0
    for chunk in range(_MAX_CHUNKS):
        lo, hi = chunk * width, (chunk + 1) * width
        running = abs(math.fsum(partials))
        result = quad(
            integrand,
            lo,
            hi,
            epsabs=INTEGRAL_RTOL * running,
            epsrel=INTEGRAL_RTOL,
            limit=200,
            full_output=1,
        )
        value, _, info = result[:3]
        n_evals += info["neval"]
        if len(result) > 3:
            raise QuadratureError(
                f"k_par integral on [{lo}, {hi}] for m={m}, polarization={polarization} did not "
                f"converge: {result[3]}",
                trace={key: np.asarray(val).tolist() for key, val in info.items()},
            )
        partials.append(value)
        total = math.fsum(partials)
        tail = bound * regularized_mode_integral(math.hypot(q, hi), xi)
        if tail <= INTEGRAL_RTOL * abs(total):
            break
    else:
        raise QuadratureError(
            f"k_par integral for m={m} did not reach its tail bound in {_MAX_CHUNKS} chunks",
            trace={"partials": partials},
        )
    logger.debug(f"Appendix quadrature: {chunk + 1} chunks, {n_evals} evaluations")
    return IntegralResult(
        side=side, m=int(m), polarization=polarization, xi=xi, value=total, method="quadrature"
    )


def denergy_dalpha_sum(
    geometry: PistonGeometry,
    regulator: Regulator,
    accuracy: float = DEFAULT_ACCURACY,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> EnergyDerivative:
    """``(1/4 pi) sum over polarizations, m and sides`` of the closed appendix integrals."""
    xi = regulator.xi
    sides = []
    zero_mode = 0.0
    for side in (Side.LEFT, Side.RIGHT):
        s = geometry.side_length(side)
        m_max = int(math.ceil(math.log(1.0 / accuracy) * s / (math.pi * xi)))
        if m_max > max_terms:
            raise ResourceError(
                f"Mode sum needs {m_max} terms for s={s}, xi={xi} (cap {max_terms}); "
                f"use the closed form instead"
            )
        m = np.arange(1, m_max + 1)
        zero = float(_appendix_terms(geometry, side, 0, 2, xi))
        terms = [zero]
        terms.extend(_appendix_terms(geometry, side, m, 1, xi).tolist())
        terms.extend(_appendix_terms(geometry, side, m, 2, xi).tolist())
        sides.append(math.fsum(terms) / (4.0 * math.pi))
        zero_mode += zero / (4.0 * math.pi)
        logger.debug(f"denergy_dalpha_sum: {side.value} side truncated at m_max={m_max}")
    left, right = sides
    return EnergyDerivative(
        value=left + right, method="sum", xi=xi, left=left, right=right, zero_mode=zero_mode
    )


def lerch_difference_d2_over_xi(s: float, xi: float, v: float) -> float:
    """``(v / 2 xi) d^2/dxi^2 [Phi(z, 1, v) - Phi(z, 1, -v)]`` at ``z = exp(-pi xi / s)``."""
    beta = math.pi / s
    eps = beta * xi
    return v / (2.0 * xi) * beta * beta * lerch_difference_derivative(eps, v, 2)


def lerch_difference_asymptotic(s: float, xi: float, v: float) -> float:
    """Small-xi form of `lerch_difference_d2_over_xi` through ``xi^0``; the rest is ``O(xi)``."""
    beta = math.pi / s
    psi_p, psi_m = digamma(v), digamma(-v)
    return (
        -v * v * beta / xi ** 2
        - 0.5 * v * v * beta ** 2 * (1.0 + v * (psi_p - psi_m)) / xi
        - v ** 4 * beta ** 3 * math.log(beta * xi)
        - 0.5 * v * v * beta ** 3 * (v * v * (2.0 * (EULER_GAMMA - 1.0) + psi_p + psi_m) + 1.0 / 6.0)
    )


def _side_denergy_closed(geometry: PistonGeometry, side: Side, xi: float) -> float:
    s = geometry.side_length(side)
    kappa = math.pi / (2.0 * s)
    u = kappa * xi
    v = s / (2.0 * geometry.L)
    f0, f1, f2 = (exp_cosech_kernel(u, d) for d in range(3))
    kernel = -f0 / xi ** 3 + kappa * f1 / xi ** 2 - kappa ** 2 * f2 / (2.0 * xi)
    prefactor = side_cosine_factor(geometry, side) * geometry.L / (4.0 * math.pi ** 2 * s)
    return prefactor * (kernel + lerch_difference_d2_over_xi(s, xi, v))


def denergy_dalpha_closed(geometry: PistonGeometry, regulator: Regulator) -> EnergyDerivative:
    """Closed form in ``e^u cosech(u)`` and the Lerch difference at ``v = +-s/2L``."""
    xi = regulator.xi
    left = _side_denergy_closed(geometry, Side.LEFT, xi)
    right = _side_denergy_closed(geometry, Side.RIGHT, xi)
    zero_mode = sum(
        float(_appendix_terms(geometry, side, 0, 2, xi)) for side in (Side.LEFT, Side.RIGHT)
    ) / (4.0 * math.pi)
    return EnergyDerivative(
        value=left + right, method="closed", xi=xi, left=left, right=right, zero_mode=zero_mode
    )


def _side_denergy_regular(geometry: PistonGeometry, side: Side, xi: float) -> float:
    s = geometry.side_length(side)
    v = s / (2.0 * geometry.L)
    prefactor = side_cosine_factor(geometry, side) * geometry.L / (4.0 * math.pi ** 2 * s)
    # the kernel minus its poles is -2 pi times the ideal position energy
    return prefactor * (-2.0 * math.pi * side_position_energy(s, xi) + lerch_difference_d2_over_xi(s, xi, v))


def denergy_dalpha_regular(geometry: PistonGeometry, regulator: Regulator) -> EnergyDerivative:
    """`denergy_dalpha_closed` minus `denergy_principal_part`, evaluated without the poles."""
    xi = regulator.xi
    left = _side_denergy_regular(geometry, Side.LEFT, xi)
    right = _side_denergy_regular(geometry, Side.RIGHT, xi)
    return EnergyDerivative(value=left + right, method="regular", xi=xi, left=left, right=right)


def denergy_principal_part(geometry: PistonGeometry, side: Optional[Union[str, Side]] = None) -> Dict[str, float]:
    """Exact ``xi^-4`` and ``xi^-3`` coefficients of ``(1/A) dE/dalpha``, for ``side`` or both."""
    sides = (Side.LEFT, Side.RIGHT) if side is None else (Side.parse(side),)
    out = {"-4": 0.0, "-3": 0.0}
    for sd in sides:
        pre = side_cosine_factor(geometry, sd) / (4.0 * math.pi ** 2)
        out["-4"] -= pre * 6.0 * geometry.L / math.pi
        out["-3"] -= pre * geometry.L / geometry.side_length(sd)
    return out


def side_laurent_coefficients(geometry: PistonGeometry, side: Union[str, Side]) -> Dict[str, float]:
    """One side's share of `denergy_laurent_coefficients`, with ``log(pi/s)`` folded into ``"0"``."""
    L = geometry.L
    s = geometry.side_length(side)
    v = s / (2.0 * L)
    psi_p, psi_m = digamma(v), digamma(-v)
    pre = side_cosine_factor(geometry, side) / (4.0 * math.pi ** 2)
    log_coeff = -pre * math.pi ** 3 / (16.0 * L ** 3)
    return {
        "-4": -pre * 6.0 * L / math.pi,
        "-3": -pre * L / s,
        "-2": -pre * math.pi / (4.0 * L),
        "-1": -pre * math.pi ** 2 / (8.0 * s * L) * (1.0 + v * (psi_p - psi_m)),
        "log": log_coeff,
        "0": log_coeff * math.log(math.pi / s)
        - pre * math.pi ** 3 / (8.0 * s * s * L) * (v * v * (2.0 * (EULER_GAMMA - 1.0) + psi_p + psi_m) + 1.0 / 6.0)
        + pre * L * math.pi ** 3 / (360.0 * s ** 4),
    }


def denergy_laurent_coefficients(geometry: PistonGeometry) -> Dict[str, float]:
    """Small-xi coefficients of ``(1/A) dE/dalpha``, both sides.

    Keys are the powers of xi as strings plus ``"log"`` for the ``log(xi)``
    coefficient; the ``log(pi/s)`` constants sit in ``"0"``.
    """
    left = side_laurent_coefficients(geometry, Side.LEFT)
    right = side_laurent_coefficients(geometry, Side.RIGHT)
    return {key: left[key] + right[key] for key in left}


def denergy_dalpha_asymptotic(geometry: PistonGeometry, regulator: Regulator) -> EnergyDerivative:
    """Small-xi expansion of ``(1/A) dE/dalpha`` through ``xi^0``, split per side."""
    xi = regulator.xi
    ratio = xi / min(geometry.a, geometry.L - geometry.a)
    if ratio >= _ASYMPTOTIC_VALIDITY:
        logger.warning(
            f"Small-xi dE/dalpha used at xi/min(a, L-a)={ratio:.3g}; it is only valid well below "
            f"{_ASYMPTOTIC_VALIDITY}"
        )
    parts = []
    for side in (Side.LEFT, Side.RIGHT):
        c = side_laurent_coefficients(geometry, side)
        parts.append(
            c["-4"] / xi ** 4
            + c["-3"] / xi ** 3
            + c["-2"] / xi ** 2
            + c["-1"] / xi
            + c["log"] * math.log(xi)
            + c["0"]
        )
    left, right = parts
    return EnergyDerivative(value=left + right, method="asymptotic", xi=xi, left=left, right=right)


def _force_step(geometry: PistonGeometry, step: Optional[float]) -> float:
    if step is None:
        step = 1e-4 * geometry.L
    a, L = geometry.a, geometry.L
    if not (step > 0.0 and a - step > 0.0 and a + step < L):
        raise DomainError(f"Finite-difference step {step} leaves the chamber at a={a}, L={L}")
    return step


def _shifted(geometry: PistonGeometry, da: float) -> PistonGeometry:
    return PistonGeometry(L=geometry.L, a=geometry.a + da)


def dforce_principal_part(geometry: PistonGeometry, side: Optional[Union[str, Side]] = None) -> Dict[str, float]:
    """``-d/da`` of `denergy_principal_part`, differentiated analytically.

    The ``xi^-4`` shares of the two sides cancel; ``"-4"`` of the total is zero.
    """
    L = geometry.L
    sides = (Side.LEFT, Side.RIGHT) if side is None else (Side.parse(side),)
    dcos = math.pi / L * math.sin(math.pi * geometry.a / L)
    out = {"-4": 0.0, "-3": 0.0}
    for sd in sides:
        s = geometry.side_length(sd)
        c = side_cosine_factor(geometry, sd)
        dc, ds = (dcos, 1.0) if sd is Side.LEFT else (-dcos, -1.0)
        out["-4"] += 6.0 * L / (4.0 * math.pi ** 3) * dc
        out["-3"] += L / (4.0 * math.pi ** 2) * (dc / s - c * ds / (s * s))
    return out


def dforce_dalpha_regular(
    geometry: PistonGeometry, regulator: Regulator, step: Optional[float] = None
) -> ForceDerivative:
    """Centered difference in ``a`` of `denergy_dalpha_regular`."""
    h = _force_step(geometry, step)
    upper = denergy_dalpha_regular(_shifted(geometry, h), regulator)
    lower = denergy_dalpha_regular(_shifted(geometry, -h), regulator)
    left = -(upper.left - lower.left) / (2.0 * h)
    right = -(upper.right - lower.right) / (2.0 * h)
    return ForceDerivative(value=left + right, method="regular", xi=regulator.xi, left=left, right=right)


def dforce_dalpha_closed(
    geometry: PistonGeometry, regulator: Regulator, step: Optional[float] = None
) -> ForceDerivative:
    """``-d/da (1/A) dE/dalpha``: exact poles plus the differenced regular part.

    Only the pole-free remainder is differenced, so the step error does not
    scale with ``xi^-4``.
    """
    xi = regulator.xi
    regular = dforce_dalpha_regular(geometry, regulator, step)
    parts = []
    for side, rest in ((Side.LEFT, regular.left), (Side.RIGHT, regular.right)):
        poles = dforce_principal_part(geometry, side)
        parts.append(poles["-4"] / xi ** 4 + poles["-3"] / xi ** 3 + rest)
    left, right = parts
    # per-side xi^-4 shares cancel; the total takes the summed poles
    poles = dforce_principal_part(geometry)
    value = poles["-4"] / xi ** 4 + poles["-3"] / xi ** 3 + regular.value
    return ForceDerivative(value=value, method="closed", xi=xi, left=left, right=right)


def side_dforce_coefficients(
    geometry: PistonGeometry, side: Union[str, Side], step: Optional[float] = None
) -> Dict[str, float]:
    """Centered difference in ``a`` of `side_laurent_coefficients`, negated."""
    h = _force_step(geometry, step)
    upper = side_laurent_coefficients(_shifted(geometry, h), side)
    lower = side_laurent_coefficients(_shifted(geometry, -h), side)
    return {key: -(upper[key] - lower[key]) / (2.0 * h) for key in upper}


def dforce_laurent_coefficients(geometry: PistonGeometry, step: Optional[float] = None) -> Dict[str, float]:
    """Small-xi coefficients of `dforce_dalpha_closed`, keyed like `denergy_laurent_coefficients`.

    The ``xi^-4`` and ``log(xi)`` coefficients of the energy derivative do not
    depend on ``a``, so both vanish here up to rounding.
    """
    left = side_dforce_coefficients(geometry, Side.LEFT, step)
    right = side_dforce_coefficients(geometry, Side.RIGHT, step)
    return {key: left[key] + right[key] for key in left}


def dforce_dalpha_asymptotic(
    geometry: PistonGeometry, regulator: Regulator, step: Optional[float] = None
) -> ForceDerivative:
    """Small-xi expansion of `dforce_dalpha_closed` through ``xi^0``, split per side."""
    xi = regulator.xi
    ratio = xi / min(geometry.a, geometry.L - geometry.a)
    if ratio >= _ASYMPTOTIC_VALIDITY:
        logger.warning(
            f"Small-xi dforce/dalpha used at xi/min(a, L-a)={ratio:.3g}; it is only valid well below "
            f"{_ASYMPTOTIC_VALIDITY}"
        )
    parts = []
    for side in (Side.LEFT, Side.RIGHT):
        c = side_dforce_coefficients(geometry, side, step)
        parts.append(
            c["-4"] / xi ** 4
            + c["-3"] / xi ** 3
            + c["-2"] / xi ** 2
            + c["-1"] / xi
            + c["log"] * math.log(xi)
            + c["0"]
        )
    left, right = parts
    return ForceDerivative(value=left + right, method="asymptotic", xi=xi, left=left, right=right)
