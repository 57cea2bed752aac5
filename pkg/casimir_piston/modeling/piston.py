# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""Piston geometry, cavity modes and dielectric profiles.

Natural units (hbar = c = 1) throughout. The transverse cross section is taken
in the continuum limit, so a mode is labelled by its side, the longitudinal
index ``m``, the transverse wavenumber ``k_par`` and the polarization.
"""

import csv
import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Tuple, Union

import numpy as np
from transformers.utils import logging

from ..errors import DomainError


logger = logging.get_logger(__name__)

# slack when deciding whether a position lies on a side interval
_POSITION_SLACK = 1e-12


class Side(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    @classmethod
    def parse(cls, value: Union[str, "Side"]) -> "Side":
        if isinstance(value, Side):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"Unknown side {value!r}, expected 'left' or 'right'") from None


@dataclass(frozen=True)
class PistonGeometry:
    """Chamber of length ``L`` divided by a mirror at ``a``.

    Args:
        L (`float`): chamber length.
        a (`float`): piston position, ``0 < a < L``.
    """

    L: float
    a: float

    def __post_init__(self):
        if not (math.isfinite(self.L) and math.isfinite(self.a)):
            raise DomainError(f"Geometry must be finite, got L={self.L}, a={self.a}")
        if not 0.0 < self.a < self.L:
            raise DomainError(f"Piston position must satisfy 0 < a < L, got L={self.L}, a={self.a}")

    def side_length(self, side: Union[str, Side]) -> float:
        side = Side.parse(side)
        return self.a if side is Side.LEFT else self.L - self.a

    def side_interval(self, side: Union[str, Side]) -> Tuple[float, float]:
        side = Side.parse(side)
        return (0.0, self.a) if side is Side.LEFT else (self.a, self.L)

    def mirrored(self) -> "PistonGeometry":
        """The geometry with ``a`` replaced by ``L - a``."""
        return PistonGeometry(L=self.L, a=self.L - self.a)

    def scaled(self, factor: float) -> "PistonGeometry":
        return PistonGeometry(L=self.L * factor, a=self.a * factor)

    def to_dict(self):
        return {"L": self.L, "a": self.a}


@dataclass(frozen=True)
class Mode:
    """A cavity mode of one side of the piston.

    Args:
        side (`Side`): which sub-cavity.
        m (`int`): longitudinal index, ``m >= 0``.
        k_par (`float`): transverse wavenumber, ``k_par >= 0``.
        polarization (`int`): 1 (field transverse to x) or 2. ``(m=0, 1)`` does
            not exist.
    """

    side: Side
    m: int
    k_par: float = 0.0
    polarization: int = 1

    def __post_init__(self):
        object.__setattr__(self, "side", Side.parse(self.side))
        if int(self.m) != self.m or self.m < 0:
            raise DomainError(f"Mode index m must be a nonnegative integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        if not (math.isfinite(self.k_par) and self.k_par >= 0.0):
            raise DomainError(f"k_par must be finite and nonnegative, got {self.k_par}")
        if self.polarization not in (1, 2):
            raise DomainError(f"Polarization must be 1 or 2, got {self.polarization}")
        if self.m == 0 and self.polarization == 1:
            raise DomainError("The (m=0, polarization=1) mode is not an allowed cavity mode")

    def to_dict(self):
        return {
            "side": self.side.value,
            "m": self.m,
            "k_par": self.k_par,
            "polarization": self.polarization,
        }


@dataclass(frozen=True)
class Regulator:
    """Exponential cutoff ``exp(-xi * omega)`` with cutoff length ``xi``."""

    xi: float

    def __post_init__(self):
        if not (math.isfinite(self.xi) and self.xi > 0.0):
            raise DomainError(f"Cutoff length xi must be positive and finite, got {self.xi}")

    def weight(self, omega):
        return np.exp(-self.xi * np.asarray(omega, dtype=float))

    def scaled(self, factor: float) -> "Regulator":
        return Regulator(xi=self.xi * factor)


@dataclass(frozen=True)
class DielectricProfile:
    """Relative permittivity change ``delta_eps(x)`` over the chamber ``[0, L]``.

    ``kind == "sinusoidal"`` evaluates ``alpha * sin(pi x / L)``;
    ``kind == "tabulated"`` interpolates linearly between samples that are
    strictly increasing in x and cover ``[0, L]``.
    """

    length: float
    kind: str = "sinusoidal"
    alpha: float = 1.0
    x: Tuple[float, ...] = field(default=())
    delta_eps: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0.0):
            raise DomainError(f"Profile length must be positive, got {self.length}")
        if self.kind == "sinusoidal":
            if not math.isfinite(self.alpha):
                raise DomainError(f"Sinusoidal amplitude must be finite, got {self.alpha}")
            return
        if self.kind != "tabulated":
            raise DomainError(f"Unknown profile kind {self.kind!r}")

        x = np.asarray(self.x, dtype=float)
        values = np.asarray(self.delta_eps, dtype=float)
        if x.ndim != 1 or x.shape != values.shape or x.size < 2:
            raise DomainError("Tabulated profile needs at least two (x, delta_eps) samples")
        if not np.all(np.isfinite(x)) or not np.all(np.isfinite(values)):
            raise DomainError("Tabulated profile samples must be finite")
        if np.any(np.diff(x) <= 0.0):
            raise DomainError("Tabulated profile x samples must be strictly increasing")
        tol = _POSITION_SLACK * self.length
        if x[0] > tol or x[-1] < self.length - tol:
            raise DomainError(
                f"Tabulated profile must cover [0, {self.length}], samples span [{x[0]}, {x[-1]}]"
            )
        object.__setattr__(self, "x", tuple(float(v) for v in x))
        object.__setattr__(self, "delta_eps", tuple(float(v) for v in values))

    @classmethod
    def sinusoidal(cls, length: float, alpha: float = 1.0) -> "DielectricProfile":
        return cls(length=length, kind="sinusoidal", alpha=alpha)

    @classmethod
    def tabulated(cls, length: float, x, delta_eps) -> "DielectricProfile":
        return cls(length=length, kind="tabulated", x=tuple(x), delta_eps=tuple(delta_eps))

    @classmethod
    def constant(cls, length: float, value: float) -> "DielectricProfile":
        return cls.tabulated(length, (0.0, length), (value, value))

    @classmethod
    def from_csv(cls, path: Union[str, Path], length: float) -> "DielectricProfile":
        """Read a two-column ``x,delta_eps`` file; a non-numeric first row is a header."""
        xs, values = [], []
        with open(path, newline="") as f:
            for row in csv.reader(f):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    xs.append(float(row[0]))
                    values.append(float(row[1]))
                except (ValueError, IndexError):
                    if xs:
                        raise DomainError(f"Malformed profile row {row!r} in {path}") from None
        return cls.tabulated(length, xs, values)

    @property
    def is_sinusoidal(self) -> bool:
        return self.kind == "sinusoidal"

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return self.x if self.kind == "tabulated" else ()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "sinusoidal":
            return self.alpha * np.sin(np.pi * x / self.length)
        return np.interp(x, self.x, self.delta_eps)

    def eps_bounds(self) -> Tuple[float, float]:
        """Min and max of the relative permittivity ``1 + delta_eps`` over the chamber."""
        if self.kind == "sinusoidal":
            values = (0.0, self.alpha)
        else:
            values = self.delta_eps
        return 1.0 + min(values), 1.0 + max(values)

    def to_dict(self):
        if self.kind == "sinusoidal":
            return {"kind": self.kind, "length": self.length, "alpha": self.alpha}
        return {
            "kind": self.kind,
            "length": self.length,
            "x": list(self.x),
            "delta_eps": list(self.delta_eps),
        }


def longitudinal_wavenumber(geometry: PistonGeometry, mode: Mode) -> float:
    return mode.m * math.pi / geometry.side_length(mode.side)


def omega0(geometry: PistonGeometry, mode: Mode) -> float:
    """Unperturbed eigenfrequency ``sqrt((m pi / s)^2 + k_par^2)``; independent of polarization."""
    return math.hypot(longitudinal_wavenumber(geometry, mode), mode.k_par)


def _local_position(geometry: PistonGeometry, mode: Mode, x):
    lo, hi = geometry.side_interval(mode.side)
    x = np.asarray(x, dtype=float)
    tol = _POSITION_SLACK * geometry.L
    if np.any(x < lo - tol) or np.any(x > hi + tol):
        raise DomainError(
            f"Position {x} lies outside the {mode.side.value} cavity [{lo}, {hi}]"
        )
    return np.clip(x, lo, hi) - lo


def mode_intensity(geometry: PistonGeometry, mode: Mode, x):
    """``A |E^(0)(x)|^2`` for global position(s) ``x``; integrates to one over the side."""
    s = geometry.side_length(mode.side)
    q = longitudinal_wavenumber(geometry, mode)
    xl = _local_position(geometry, mode, x)
    if mode.polarization == 1:
        return (2.0 / s) * np.sin(q * xl) ** 2 * np.ones_like(xl)
    if mode.m == 0:
        return np.full_like(xl, 1.0 / s)
    k = mode.k_par
    return (2.0 / s) * (k * k * np.cos(q * xl) ** 2 + q * q * np.sin(q * xl) ** 2) / (k * k + q * q)


def mode_field(geometry: PistonGeometry, mode: Mode, x: float, area: float = 1.0) -> np.ndarray:
    """Complex amplitude of ``E^(0)`` at ``x`` along ``(x_hat, k_hat, x_hat cross k_hat)``.

    The transverse phase ``exp(i k_par . x)`` is set to one; only ``|E|^2`` is
    used downstream. The m=0, polarization-2 mode carries ``sqrt(1 / (s A))``
    so that it is normalized like every other mode.
    """
    s = geometry.side_length(mode.side)
    q = longitudinal_wavenumber(geometry, mode)
    xl = float(_local_position(geometry, mode, x))
    field_ = np.zeros(3, dtype=complex)

    if mode.polarization == 1:
        field_[2] = math.sqrt(2.0 / (s * area)) * math.sin(q * xl)
        return field_

    if mode.m == 0:
        field_[0] = math.sqrt(1.0 / (s * area))
        return field_

    k = mode.k_par
    norm = math.sqrt((2.0 / (s * area)) / (k * k + q * q))
    field_[0] = norm * k * math.cos(q * xl)
    field_[1] = -1j * norm * q * math.sin(q * xl)
    return field_
