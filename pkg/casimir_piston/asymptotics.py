# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""Laurent structure of cutoff-dependent quantities.

`laurent_fit` fits ``value(xi) ~ sum_p c_p xi^p + c_log log(xi)`` by weighted
least squares, `extract_c0` keeps only the constant term, and
`divergence_report` tabulates the fitted coefficients of ``(1/A) dE/dalpha``
against piston position next to the empty-piston control. Samples carry their
closed-form poles separately (`LaurentSamples`), so only the regular remainder
is fitted.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from transformers.utils import logging

from .errors import DomainError, FitError
from .modeling import (
    PistonGeometry,
    Regulator,
    denergy_dalpha_regular,
    denergy_principal_part,
    dforce_dalpha_regular,
    dforce_laurent_coefficients,
    dforce_principal_part,
    energy_principal_part,
    position_energy,
    side_laurent_coefficients,
)
from .modeling.piston import Side


logger = logging.get_logger(__name__)

DEFAULT_POWERS = (-4, -3, -2, -1, 0)
MAX_CONDITION = 1e10
LOG_ATOL = 1e-4
SPREAD_RTOL = 1e-3
SPREAD_ATOL = 1e-6
LOG_CONTENT = "log_content"

QUANTITIES = ("ideal-energy", "denergy-dalpha", "dforce-dalpha")


def coefficient_name(power) -> str:
    return "log" if power == "log" else str(int(power))


@dataclass(frozen=True)
class LaurentSamples:
    """Samples ``value(xi) = sum_p exact[p] xi^p + remainder(xi)``.

    ``exact`` holds pole coefficients known in closed form, keyed like
    `LaurentFit.coefficients`. Only ``remainder`` enters the least squares, so
    the large poles never cancel in floating point. Unpacks as ``xi, values``.
    """

    xi: np.ndarray
    remainder: np.ndarray
    exact: Dict[str, float] = field(default_factory=dict)

    @property
    def values(self) -> np.ndarray:
        return _exact_part(self.xi, self.exact) + self.remainder

    def __len__(self) -> int:
        return int(self.xi.size)

    def __iter__(self):
        return iter((self.xi, self.values))


def _exact_part(xi: np.ndarray, exact: Dict[str, float]) -> np.ndarray:
    total = np.zeros_like(xi, dtype=float)
    for key, c in exact.items():
        total = total + c * (np.log(xi) if key == "log" else xi ** int(key))
    return total


@dataclass(frozen=True)
class LaurentFit:
    """Fitted small-xi coefficients with diagnostics.

    Args:
        powers (`Tuple[int]`): powers of xi in the basis.
        include_log (`bool`): whether ``log(xi)`` is a column.
        coefficients (`Dict[str, float]`): keyed by ``str(power)`` and ``"log"``.
        uncertainties (`Dict[str, float]`): one standard deviation per coefficient.
        residual_rms (`float`): rms misfit relative to the largest sampled magnitude.
        condition_estimate (`float`): singular value ratio of the column-scaled design matrix.
    """

    powers: Tuple[int, ...]
    include_log: bool
    coefficients: Dict[str, float]
    uncertainties: Dict[str, float]
    residual_rms: float
    condition_estimate: float
    n_samples: int
    xi_range: Tuple[float, float]

    @property
    def c_log(self) -> float:
        return self.coefficients.get("log", 0.0)

    @property
    def c_log_sigma(self) -> float:
        return self.uncertainties.get("log", 0.0)

    @property
    def reliable(self) -> bool:
        return math.isfinite(self.condition_estimate) and self.condition_estimate <= MAX_CONDITION

    def coefficient(self, power) -> float:
        return self.coefficients[coefficient_name(power)]

    def uncertainty(self, power) -> float:
        return self.uncertainties[coefficient_name(power)]

    def evaluate(self, xi):
        xi = np.asarray(xi, dtype=float)
        value = sum(self.coefficients[str(p)] * xi ** p for p in self.powers)
        if self.include_log:
            value = value + self.c_log * np.log(xi)
        return value

    def to_dict(self):
        return {
            "powers": list(self.powers),
            "include_log": self.include_log,
            "coefficients": dict(self.coefficients),
            "uncertainties": dict(self.uncertainties),
            "residual_rms": self.residual_rms,
            "condition_estimate": self.condition_estimate,
            "reliable": self.reliable,
            "n_samples": self.n_samples,
            "xi_range": list(self.xi_range),
        }


@dataclass(frozen=True)
class C0Extraction:
    value: float
    c_log: float
    c_log_sigma: float
    warnings: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "c0": self.value,
            "c_log": self.c_log,
            "c_log_sigma": self.c_log_sigma,
            "warnings": list(self.warnings),
        }


def log_xi_grid(xi_min: float, xi_max: float, points: int) -> np.ndarray:
    if not (0.0 < xi_min < xi_max):
        raise DomainError(f"Need 0 < xi_min < xi_max, got {xi_min}, {xi_max}")
    if points < 2:
        raise DomainError(f"Need at least two grid points, got {points}")
    return np.geomspace(xi_min, xi_max, int(points))


def sample_quantity(
    name: str,
    geometry: PistonGeometry,
    xi_grid: Sequence[float],
    side: Optional[Union[str, Side]] = None,
) -> LaurentSamples:
    """Samples of a named quantity from its closed form, split into exact poles and a remainder.

    ``side`` restricts the samples to one sub-cavity's share.
    """
    if name == "ideal-energy":
        exact = energy_principal_part(geometry, side)
        regular = position_energy
    elif name == "denergy-dalpha":
        exact = denergy_principal_part(geometry, side)
        regular = denergy_dalpha_regular
    elif name == "dforce-dalpha":
        exact = dforce_principal_part(geometry, side)
        regular = dforce_dalpha_regular
    else:
        raise DomainError(f"Unknown quantity {name!r}, expected one of {', '.join(QUANTITIES)}")
    attr = "value" if side is None else Side.parse(side).value
    xi = np.asarray(xi_grid, dtype=float)
    remainder = np.array([getattr(regular(geometry, Regulator(float(x))), attr) for x in xi])
    return LaurentSamples(xi=xi, remainder=remainder, exact=exact)


def _column_names(powers, include_log):
    names = [str(p) for p in powers]
    if include_log:
        names.append("log")
    return names


def laurent_fit(
    samples,
    powers: Sequence[int] = DEFAULT_POWERS,
    include_log: bool = True,
) -> LaurentFit:
    """Least-squares fit of ``sum_p c_p xi^p + c_log log(xi)``.

    Rows are weighted by ``1/|value|`` so residuals are relative, columns are
    scaled to unit norm, and the system is solved through its SVD. For
    `LaurentSamples` only the remainder is fitted; exact coefficients in the
    basis are added back afterwards, those outside it are left out of the result.

    Args:
        samples: `LaurentSamples`, pairs ``(xi, value)`` or a tuple of two arrays.
        powers: integer powers of xi, distinct.
        include_log: add a ``log(xi)`` column.
    """
    xi, y, remainder, exact = _as_samples(samples)
    powers = tuple(int(p) for p in powers)
    if len(set(powers)) != len(powers):
        raise DomainError(f"Powers must be distinct, got {powers}")
    names = _column_names(powers, include_log)
    n_cols = len(names)

    if xi.size < 2 + n_cols:
        raise DomainError(f"Need at least {2 + n_cols} samples for {n_cols} columns, got {xi.size}")
    if np.any(xi <= 0.0) or np.unique(xi).size != xi.size:
        raise DomainError("xi samples must be positive and distinct")
    if xi.max() / xi.min() < 10.0 * (1.0 - 1e-12):
        raise DomainError(f"xi samples must span at least one decade, got [{xi.min()}, {xi.max()}]")
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(remainder))):
        raise DomainError("Sampled values must be finite")

    columns = [xi ** p for p in powers]
    if include_log:
        columns.append(np.log(xi))
    design = np.stack(columns, axis=1)

    scale_y = np.max(np.abs(y))
    if scale_y == 0.0:
        scale_y = 1.0
    weights = 1.0 / np.maximum(np.abs(y), 1e-300 + 1e-12 * scale_y)
    a_w = design * weights[:, None]
    b_w = remainder * weights
    norms = np.linalg.norm(a_w, axis=0)
    degenerate = [name for name, norm in zip(names, norms) if not (np.isfinite(norm) and norm > 0.0)]
    if degenerate:
        raise FitError(f"Laurent columns vanish or overflow on this grid: {degenerate}", columns=degenerate)
    a_s = a_w / norms

    _, singular, vt = np.linalg.svd(a_s, full_matrices=False)
    tol = singular[0] * max(a_s.shape) * np.finfo(float).eps
    if singular[-1] <= tol:
        null = np.abs(vt[-1])
        collinear = [names[i] for i in np.flatnonzero(null > 1e-3 * null.max())]
        raise FitError(f"Laurent basis is rank deficient; collinear columns: {collinear}", columns=collinear)
    condition = float(singular[0] / singular[-1])

    solution, _, _, _ = np.linalg.lstsq(a_s, b_w, rcond=None)
    fitted = solution / norms

    weighted_residual = b_w - a_s @ solution
    dof = max(xi.size - n_cols, 1)
    sigma2 = float(weighted_residual @ weighted_residual) / dof
    cov_scaled = (vt.T / singular ** 2) @ vt * sigma2
    sigmas = np.sqrt(np.diag(cov_scaled)) / norms

    residual = remainder - design @ fitted
    residual_rms = float(np.sqrt(np.mean(residual ** 2)) / scale_y)

    logger.debug(f"Laurent fit over {names}: condition {condition:.3g}, residual rms {residual_rms:.3g}")
    if condition > MAX_CONDITION:
        logger.warning(f"Laurent fit is ill-conditioned (condition {condition:.3g}); marking it unreliable")

    return LaurentFit(
        powers=powers,
        include_log=include_log,
        coefficients={name: float(c) + exact.get(name, 0.0) for name, c in zip(names, fitted)},
        uncertainties={name: float(s) for name, s in zip(names, sigmas)},
        residual_rms=residual_rms,
        condition_estimate=condition,
        n_samples=int(xi.size),
        xi_range=(float(xi.min()), float(xi.max())),
    )


def _as_samples(samples):
    if isinstance(samples, LaurentSamples):
        xi = np.asarray(samples.xi, dtype=float)
        remainder = np.asarray(samples.remainder, dtype=float)
        if xi.shape != remainder.shape or xi.ndim != 1:
            raise DomainError("LaurentSamples needs matching one-dimensional xi and remainder")
        return xi, samples.values, remainder, dict(samples.exact)
    if isinstance(samples, tuple) and len(samples) == 2 and np.ndim(samples[0]) == 1:
        xi, y = samples
    else:
        pairs = np.asarray(samples, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise DomainError("samples must be (xi, value) pairs")
        xi, y = pairs[:, 0], pairs[:, 1]
    xi, y = np.asarray(xi, dtype=float), np.asarray(y, dtype=float)
    return xi, y, y, {}


def extract_c0(fit: LaurentFit, log_atol: float = LOG_ATOL) -> C0Extraction:
    """The constant term of a reliable fit.

    Warns when the fitted ``log(xi)`` coefficient is significant, since dropping
    the principal part then still leaves a logarithmic divergence.
    """
    if not fit.reliable:
        raise FitError(
            f"Refusing to extract c0 from an unreliable fit (condition {fit.condition_estimate:.3g}, "
            f"residual rms {fit.residual_rms:.3g})"
        )
    if "0" not in fit.coefficients:
        raise FitError("Fit basis has no constant column", columns=list(fit.coefficients))

    warnings = []
    if fit.include_log and abs(fit.c_log) > max(3.0 * fit.c_log_sigma, log_atol):
        message = (
            f"log(xi) coefficient {fit.c_log:.6g} (+/- {fit.c_log_sigma:.2g}) is nonzero: "
            f"c0 is ill-defined, a logarithmic divergence remains after removing the principal part"
        )
        warnings.append(message)
        logger.warning(message)
    return C0Extraction(
        value=fit.coefficient(0), c_log=fit.c_log, c_log_sigma=fit.c_log_sigma, warnings=warnings
    )


@dataclass
class DivergenceReport:
    """Fitted coefficients against piston position.

    ``rows`` hold the inhomogeneous piston fits, ``control_rows`` the empty
    piston and ``force_rows`` the first-order force change. ``flags`` and
    ``control_flags`` mark coefficients, and the fitted ``log_content``, that
    vary with ``a`` beyond fit uncertainty. Only rows whose fits are reliable
    enter the flags.
    """

    L: float
    a_grid: List[float]
    xi_grid: List[float]
    powers: Tuple[int, ...]
    include_log: bool
    rows: List[dict] = field(default_factory=list)
    control_rows: List[dict] = field(default_factory=list)
    force_rows: List[dict] = field(default_factory=list)
    flags: Dict[str, bool] = field(default_factory=dict)
    control_flags: Dict[str, bool] = field(default_factory=dict)

    @property
    def columns(self) -> List[str]:
        return _column_names(self.powers, self.include_log)

    def varying(self, control: bool = False) -> List[str]:
        flags = self.control_flags if control else self.flags
        return [name for name in self.columns + [LOG_CONTENT] if flags.get(name)]

    def to_dict(self):
        return {
            "L": self.L,
            "a_grid": list(self.a_grid),
            "xi_grid": list(self.xi_grid),
            "powers": list(self.powers),
            "include_log": self.include_log,
            "rows": self.rows,
            "control_rows": self.control_rows,
            "force_rows": self.force_rows,
            "flags": dict(self.flags),
            "control_flags": dict(self.control_flags),
        }

    def table(self):
        """Header and rows for text/CSV rendering, one row per (quantity, a)."""
        header = ["quantity", "a"]
        for name in self.columns:
            header += [f"c[{name}]", f"sigma[{name}]"]
        header += [
            "log_content",
            "log_content_reference",
            "c0_force_from_energy",
            "reliable",
            "condition",
            "residual_rms",
        ]
        body = []
        for quantity, rows in (
            ("denergy-dalpha", self.rows),
            ("ideal-energy", self.control_rows),
            ("dforce-dalpha", self.force_rows),
        ):
            for row in rows:
                line = [quantity, row["a"]]
                for name in self.columns:
                    line += [row["coefficients"][name], row["uncertainties"][name]]
                line += [
                    row.get("log_content"),
                    row.get("log_content_reference"),
                    row.get("c0_from_energy"),
                    row.get("reliable"),
                    row["condition"],
                    row["residual_rms"],
                ]
                body.append(line)
        return header, body


def _flag_varying(rows: List[dict], columns: List[str], rtol: float, atol: float) -> Dict[str, bool]:
    names = list(columns) + [LOG_CONTENT]
    usable = [row for row in rows if row.get("reliable", True)]
    if len(usable) < 2:
        logger.warning(
            f"Only {len(usable)} of {len(rows)} fits are reliable; no coefficient is flagged as varying"
        )
        return {name: False for name in names}
    flags = {}
    for name in columns:
        values = np.array([row["coefficients"][name] for row in usable])
        sigmas = np.array([row["uncertainties"][name] for row in usable])
        flags[name] = _spread_exceeds(values, sigmas, rtol, atol)
    if all(row.get(LOG_CONTENT) is not None for row in usable):
        values = np.array([row[LOG_CONTENT] for row in usable])
        sigmas = np.array([row[f"{LOG_CONTENT}_sigma"] for row in usable])
        flags[LOG_CONTENT] = _spread_exceeds(values, sigmas, rtol, atol)
    else:
        flags[LOG_CONTENT] = False
    return flags


def _spread_exceeds(values: np.ndarray, sigmas: np.ndarray, rtol: float, atol: float) -> bool:
    spread = float(values.max() - values.min())
    threshold = max(3.0 * float(sigmas.max()), rtol * float(np.abs(values).max()), atol)
    return spread > threshold


def _fit_row(a: float, fit: LaurentFit, **extra) -> dict:
    row = {
        "a": a,
        "coefficients": dict(fit.coefficients),
        "uncertainties": dict(fit.uncertainties),
        "condition": fit.condition_estimate,
        "residual_rms": fit.residual_rms,
        "reliable": fit.reliable,
    }
    row.update(extra)
    return row


def _side_log_row(
    name: str, geometry: PistonGeometry, xi_grid, powers, include_log: bool
) -> Tuple[LaurentFit, dict]:
    """Fit ``name`` for both sides together and for each side alone.

    The basis uses ``log(xi)``, so a side's ``c_log log(pi/s)`` constant lands
    in ``c0``; ``log_content`` sums it from the per-side fits.
    """
    fit = laurent_fit(sample_quantity(name, geometry, xi_grid), powers, include_log)
    extra = {"reliable": fit.reliable}
    if not include_log:
        extra.update(c_log_sides=None, log_content=None, log_content_sigma=None)
        return fit, extra

    c_log_sides, content, variance = {}, 0.0, 0.0
    for side in (Side.LEFT, Side.RIGHT):
        side_fit = laurent_fit(sample_quantity(name, geometry, xi_grid, side), powers, include_log)
        weight = math.log(math.pi / geometry.side_length(side))
        c_log_sides[side.value] = side_fit.c_log
        content += side_fit.c_log * weight
        variance += (side_fit.c_log_sigma * weight) ** 2
        extra["reliable"] = extra["reliable"] and side_fit.reliable
    extra.update(c_log_sides=c_log_sides, log_content=content, log_content_sigma=math.sqrt(variance))
    return fit, extra


def _c0_step(geometry: PistonGeometry) -> float:
    return min(1e-3 * geometry.L, 0.5 * min(geometry.a, geometry.L - geometry.a))


def _force_row(geometry: PistonGeometry, xi_grid, powers, include_log: bool) -> dict:
    """Fit of the force change next to ``-d c0 / da`` of the energy-derivative fits."""
    fit = laurent_fit(sample_quantity("dforce-dalpha", geometry, xi_grid), powers, include_log)
    extra = {"c0_from_energy": None, "c0_reference": dforce_laurent_coefficients(geometry)["0"]}
    if 0 in powers:
        h = _c0_step(geometry)
        c0 = []
        for da in (h, -h):
            shifted = PistonGeometry(L=geometry.L, a=geometry.a + da)
            shifted_fit = laurent_fit(sample_quantity("denergy-dalpha", shifted, xi_grid), powers, include_log)
            c0.append(shifted_fit.coefficient(0))
        extra["c0_from_energy"] = -(c0[0] - c0[1]) / (2.0 * h)
    return _fit_row(geometry.a, fit, **extra)


def divergence_report(
    L: float,
    a_grid: Sequence[float],
    xi_grid: Sequence[float],
    powers: Sequence[int] = DEFAULT_POWERS,
    include_log: bool = True,
    rtol: float = SPREAD_RTOL,
    atol: float = SPREAD_ATOL,
    include_force: bool = True,
) -> DivergenceReport:
    """Fit ``(1/A) dE/dalpha`` and the empty-piston energy at every ``a`` and compare.

    Each row carries the fitted per-side ``log(xi)`` coefficients, the fitted
    ``log_content = sum_sides c_log,side log(pi/s)`` and its closed-form
    ``log_content_reference``. With ``include_force`` the force change is fitted
    too, and its constant term is set against ``-d c0 / da`` of the energy
    derivative and against its closed-form coefficient.
    """
    if len(a_grid) < 2:
        raise DomainError("divergence_report needs at least two piston positions")
    powers = tuple(int(p) for p in powers)
    report = DivergenceReport(
        L=float(L),
        a_grid=[float(a) for a in a_grid],
        xi_grid=[float(x) for x in xi_grid],
        powers=powers,
        include_log=include_log,
    )
    for a in report.a_grid:
        geometry = PistonGeometry(L=report.L, a=a)
        fit, extra = _side_log_row("denergy-dalpha", geometry, xi_grid, powers, include_log)
        reference = 0.0
        for side in (Side.LEFT, Side.RIGHT):
            reference += side_laurent_coefficients(geometry, side)["log"] * math.log(
                math.pi / geometry.side_length(side)
            )
        report.rows.append(_fit_row(a, fit, log_content_reference=reference, **extra))

        control, extra = _side_log_row("ideal-energy", geometry, xi_grid, powers, include_log)
        report.control_rows.append(_fit_row(a, control, log_content_reference=0.0, **extra))

        if include_force:
            report.force_rows.append(_force_row(geometry, xi_grid, powers, include_log))
        logger.info(f"divergence_report: fitted a={a}")

    report.flags = _flag_varying(report.rows, report.columns, rtol, atol)
    report.control_flags = _flag_varying(report.control_rows, report.columns, rtol, atol)
    return report
