# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0


import csv
import io
import json
import os
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np
from transformers.utils import logging

from ..errors import DomainError
from ..modeling.piston import DielectricProfile


logger = logging.get_logger(__name__)

PLOT_DATA_HEADER = ("a", "xi", "method", "quantity", "value")

# natural-unit dimension -> SI unit once multiplied by hbar c
SI_UNITS = {
    "1/length^3": "J/m^2",
    "1/length^4": "Pa",
}


def quantity(value: float, units: str, method: str) -> Dict[str, Any]:
    return {"value": _plain(value), "units": units, "method": method}


def to_si(payload: Any, hbar_c: float) -> Any:
    """Multiply every energy-per-area and pressure quantity by ``hbar_c``."""
    if isinstance(payload, dict):
        if payload.get("units") in SI_UNITS and "value" in payload:
            converted = dict(payload)
            converted["value"] = payload["value"] * hbar_c
            converted["units"] = SI_UNITS[payload["units"]]
            return converted
        return {key: to_si(value, hbar_c) for key, value in payload.items()}
    if isinstance(payload, list):
        return [to_si(item, hbar_c) for item in payload]
    return payload


def _plain(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def dump_json(payload: Any) -> str:
    """Canonical output: sorted keys, shortest round-trip float repr."""
    return json.dumps(payload, sort_keys=True, indent=2, default=_plain) + "\n"


def format_value(value: Any) -> str:
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    if value is None:
        return ""
    return str(value)


def flatten(payload: Any, prefix: str = "") -> List[List[str]]:
    """``[path, value, units, method]`` rows for every leaf of a JSON payload."""
    rows = []
    if isinstance(payload, dict):
        if "value" in payload and "units" in payload and not isinstance(payload["value"], (dict, list)):
            return [[prefix, format_value(payload["value"]), payload["units"], payload.get("method", "")]]
        for key in sorted(payload):
            path = f"{prefix}.{key}" if prefix else str(key)
            rows.extend(flatten(payload[key], path))
    elif isinstance(payload, list):
        for i, item in enumerate(payload):
            rows.extend(flatten(item, f"{prefix}[{i}]"))
    else:
        rows.append([prefix, format_value(payload), "", ""])
    return rows


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def render_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    cells = [list(header)] + [[format_value(v) for v in row] for row in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(header))]
    lines = ["  ".join(cell.rjust(width) for cell, width in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def render(payload: Any, fmt: str, table=None) -> str:
    """Render a command result as ``json``, ``csv`` or ``text``.

    ``table`` is an optional ``(header, rows)`` projection; without it CSV and
    text fall back to the flattened payload.
    """
    if fmt == "json":
        return dump_json(payload)
    if table is None:
        table = (["field", "value", "units", "method"], flatten(payload))
    header, rows = table
    if fmt == "csv":
        return render_csv(header, rows)
    if fmt == "text":
        return render_text(header, rows)
    raise DomainError(f"Unknown output format {fmt!r}")


def resolve_output_path(path: Union[str, Path]) -> Path:
    """Relative paths land under ``CASIMIR_PISTON_OUTPUT_DIR`` when it is set."""
    path = Path(path)
    base = os.getenv("CASIMIR_PISTON_OUTPUT_DIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    return path


def write_text(text: str, path: Optional[Union[str, Path]]) -> Optional[Path]:
    if path is None:
        return None
    target = resolve_output_path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)
    logger.info(f"Wrote {target}")
    return target


def write_plot_data(path: Union[str, Path], records: Iterable[Sequence[Any]]) -> Path:
    """Tidy CSV with one ``(a, xi, method, quantity, value)`` row per record."""
    return write_text(render_csv(PLOT_DATA_HEADER, records), path)


def parse_profile(text: str, length: float, alpha: float = 1.0) -> DielectricProfile:
    """``sin``, ``file:PATH.csv`` or ``const:VALUE``."""
    if text == "sin":
        return DielectricProfile.sinusoidal(length, alpha)
    if text.startswith("file:"):
        path = text[len("file:"):]
        if not Path(path).is_file():
            raise DomainError(f"Profile file {path!r} does not exist")
        return DielectricProfile.from_csv(path, length)
    if text.startswith("const:"):
        try:
            value = float(text[len("const:"):])
        except ValueError:
            raise DomainError(f"Malformed constant profile {text!r}") from None
        return DielectricProfile.constant(length, value)
    raise DomainError(f"Unknown profile {text!r}, expected sin, file:PATH or const:VALUE")
