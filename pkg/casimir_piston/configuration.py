# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""Run configuration shared by every CLI command."""

import dataclasses
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml
from transformers.utils import logging

from .errors import DomainError


logger = logging.get_logger(__name__)

OUTPUT_FORMATS = ("json", "csv", "text")

LIBRARY_NAME = "casimir_piston"
VERBOSITY_ENV = "CASIMIR_PISTON_VERBOSITY"

# config-file keys that differ from the attribute name
_KEY_ALIASES = {"lambda": "polarization"}


@dataclass
class RunConfig:
    r"""
    Parameters of a single command. YAML keys mirror the long CLI flags with
    ``-`` replaced by ``_``; flags given on the command line win.

    Args:
        L (`float`, *optional*, defaults to 1.0):
            Chamber length.
        a (`float`, *optional*, defaults to 0.5):
            Piston position.
        xi (`float`, *optional*, defaults to 0.1):
            Cutoff length of the exponential regulator.
        method (`str`, *optional*, defaults to `"all"`):
            Which route to evaluate; the accepted names depend on the command.
        side (`str`, *optional*, defaults to `"left"`):
            Sub-cavity of the mode for `perturb` commands.
        m (`int`, *optional*, defaults to 1):
            Longitudinal mode index.
        polarization (`int`, *optional*, defaults to 1):
            Polarization 1 or 2 (`lambda` in config files and on the command line).
        kpar (`float`, *optional*, defaults to 0.0):
            Transverse wavenumber.
        profile (`str`, *optional*, defaults to `"sin"`):
            `sin`, `file:PATH.csv` or `const:VALUE`.
        alpha (`float`, *optional*):
            Dielectric amplitude: 1.0 for `perturb shift`, 1e-4 for `perturb oracle`.
        layers (`int`, *optional*, defaults to 400):
            Slab count of the transfer-matrix oracle.
        quantity (`str`, *optional*, defaults to `"ideal-energy"`):
            `ideal-energy` or `denergy-dalpha` for `laurent fit`.
        xi_min, xi_max (`float`, *optional*, default to 1e-3 and 1e-2):
            Log-spaced fit window.
        points (`int`, *optional*, defaults to 20):
            Samples in the fit window.
        basis (`str`, *optional*):
            Comma list of powers plus `log`, e.g. `-4,-3,-2,-1,0,log`.
        a_grid (`str`, *optional*, defaults to `"0.2:0.8:7"`):
            `start:stop:count` piston positions for `laurent report`.
        output (`str`, *optional*):
            Output file; relative paths resolve under `CASIMIR_PISTON_OUTPUT_DIR`.
        format (`str`, *optional*, defaults to `"json"`):
            `json`, `csv` or `text`.
        seed (`int`, *optional*, defaults to 0):
            Seed for randomized property grids.
        si (`bool`, *optional*, defaults to `False`):
            Multiply energies and pressures by `hbar_c`.
        hbar_c (`float`, *optional*):
            hbar times c in J m; defaults to the CODATA value.
        emit_plot_data (`str`, *optional*):
            Path of the tidy `a,xi,method,quantity,value` CSV.
    """

    L: float = 1.0
    a: float = 0.5
    xi: float = 0.1
    method: str = "all"
    side: str = "left"
    m: int = 1
    polarization: int = 1
    kpar: float = 0.0
    profile: str = "sin"
    alpha: Optional[float] = None
    layers: int = 400
    quantity: str = "ideal-energy"
    xi_min: float = 1e-3
    xi_max: float = 1e-2
    points: int = 20
    basis: Optional[str] = None
    a_grid: str = "0.2:0.8:7"
    output: Optional[str] = None
    format: str = "json"
    seed: int = 0
    si: bool = False
    hbar_c: Optional[float] = None
    emit_plot_data: Optional[str] = None

    def __post_init__(self):
        if self.format not in OUTPUT_FORMATS:
            raise DomainError(f"Unknown output format {self.format!r}, expected one of {OUTPUT_FORMATS}")
        for name in ("L", "a", "xi", "kpar", "alpha", "xi_min", "xi_max", "hbar_c"):
            value = getattr(self, name)
            if value is None and name in ("alpha", "hbar_c"):
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
                raise DomainError(f"{name} must be a finite number, got {value!r}")
        if self.polarization not in (1, 2):
            raise DomainError(f"lambda must be 1 or 2, got {self.polarization}")
        if self.hbar_c is not None and not self.hbar_c > 0.0:
            raise DomainError(f"hbar_c must be positive, got {self.hbar_c}")
        if int(self.seed) != self.seed:
            raise DomainError(f"seed must be an integer, got {self.seed}")

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in dataclasses.fields(cls)]

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any], **kwargs) -> "RunConfig":
        """Build a config from a mapping; ``kwargs`` override its entries."""
        values = {}
        known = set(cls.field_names())
        for key, value in list(config_dict.items()) + list(kwargs.items()):
            name = _KEY_ALIASES.get(str(key).replace("-", "_"), str(key).replace("-", "_"))
            if name not in known:
                raise DomainError(f"Unknown configuration key {key!r}")
            values[name] = value
        return cls(**values)

    @classmethod
    def from_yaml_file(cls, path: Union[str, Path], **kwargs) -> "RunConfig":
        try:
            with open(path) as f:
                config_dict = yaml.safe_load(f) or {}
        except OSError as e:
            raise DomainError(f"Cannot read config file {path}: {e}") from None
        except yaml.YAMLError as e:
            raise DomainError(f"Config file {path} is not valid YAML: {e}") from None
        if not isinstance(config_dict, dict):
            raise DomainError(f"Config file {path} must hold a mapping")
        logger.info(f"Loaded configuration from {path}")
        return cls.from_dict(config_dict, **kwargs)

    def to_dict(self) -> Dict[str, Any]:
        output = dataclasses.asdict(self)
        output["lambda"] = output.pop("polarization")
        return output

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


def parse_basis(text: str) -> Tuple[Tuple[int, ...], bool]:
    """``"-4,-3,-2,-1,0,log"`` -> ``((-4, -3, -2, -1, 0), True)``."""
    powers = []
    include_log = False
    for item in str(text).split(","):
        item = item.strip()
        if item == "log":
            if include_log:
                raise DomainError(f"Basis {text!r} lists log twice")
            include_log = True
            continue
        try:
            power = int(item)
        except ValueError:
            raise DomainError(f"Malformed basis {text!r}: {item!r} is neither an integer nor 'log'") from None
        if power in powers:
            raise DomainError(f"Basis {text!r} lists power {power} twice")
        powers.append(power)
    if not powers:
        raise DomainError(f"Basis {text!r} has no powers")
    return tuple(powers), include_log


def parse_a_grid(text: str) -> List[float]:
    """``"start:stop:count"`` -> evenly spaced positions, endpoints included."""
    parts = str(text).split(":")
    if len(parts) != 3:
        raise DomainError(f"Malformed a-grid {text!r}, expected start:stop:count")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"Malformed a-grid {text!r}, expected start:stop:count") from None
    if count < 2 or not start < stop:
        raise DomainError(f"a-grid {text!r} needs start < stop and count >= 2")
    step = (stop - start) / (count - 1)
    return [start + i * step for i in range(count)]


def env_verbosity() -> int:
    """Log level named by ``CASIMIR_PISTON_VERBOSITY``, WARNING when unset or unknown."""
    env_level_str = os.getenv(VERBOSITY_ENV, None)
    if env_level_str:
        if env_level_str.lower() in logging.log_levels:
            return logging.log_levels[env_level_str.lower()]
        logger.warning(
            f"Unknown option {VERBOSITY_ENV}={env_level_str}, "
            f"has to be one of: { ', '.join(logging.log_levels.keys()) }"
        )
    return logging.WARNING


def set_verbosity(verbosity: Union[int, str]) -> None:
    """Set the level of the ``casimir_piston`` logger tree; accepts a level or its name."""
    if isinstance(verbosity, str):
        if verbosity.lower() not in logging.log_levels:
            raise DomainError(f"Unknown verbosity {verbosity!r}, expected one of {tuple(logging.log_levels)}")
        verbosity = logging.log_levels[verbosity.lower()]
    logging.get_logger(LIBRARY_NAME).setLevel(verbosity)


def get_verbosity() -> int:
    return logging.get_logger(LIBRARY_NAME).getEffectiveLevel()
