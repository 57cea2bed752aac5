# Copyright 2025 The casimir-piston authors.
# SPDX-License-Identifier: Apache-2.0

"""``casimir-piston`` command line.

Exit codes: 0 success, 1 computation or acceptance failure (a JSON error object
is printed), 2 usage error.
"""

import argparse
import logging as py_logging
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import scipy.constants
from transformers.utils import logging

from .asymptotics import (
    QUANTITIES,
    divergence_report,
    extract_c0,
    laurent_fit,
    log_xi_grid,
    sample_quantity,
)
from .configuration import OUTPUT_FORMATS, RunConfig, parse_a_grid, parse_basis, set_verbosity
from .data.data_utils import dump_json, parse_profile, quantity, render, to_si, write_plot_data, write_text
from .errors import CasimirPistonError, DomainError, FitError
from .modeling import (
    ENERGY_UNITS,
    DEFAULT_ORACLE_ALPHA,
    PRESSURE_UNITS,
    Mode,
    PistonGeometry,
    Regulator,
    Side,
    appendix_integral_closed,
    appendix_integral_quadrature,
    compare_shift,
    denergy_dalpha_asymptotic,
    denergy_dalpha_closed,
    denergy_dalpha_sum,
    dforce_dalpha_asymptotic,
    dforce_dalpha_closed,
    energy_asymptotic,
    energy_closed,
    energy_numeric,
    first_order_shift_closed,
    first_order_shift_quadrature,
    force_finite_difference,
    force_per_area,
    omega0,
    oracle_shift,
)
from .reproduce import Reproducer


logger = logging.get_logger(__name__)

FREQUENCY_UNITS = "1/length"
SHIFT_ALPHA = 1.0

# plot-data quantities that carry energy-per-area or pressure units
SI_QUANTITIES = ("ideal-energy", "denergy-dalpha", "dforce-dalpha", "mode-integral", "force")

QUANTITY_UNITS = {"ideal-energy": ENERGY_UNITS, "denergy-dalpha": ENERGY_UNITS, "dforce-dalpha": PRESSURE_UNITS}

METHODS = {
    ("ideal", "energy"): ("numeric", "closed", "asymptotic"),
    ("ideal", "force"): ("closed", "finite-difference"),
    ("perturb", "shift"): ("closed", "quadrature"),
    ("perturb", "integral"): ("closed", "quadrature"),
    ("perturb", "denergy"): ("sum", "closed", "asymptotic"),
    ("perturb", "dforce"): ("closed", "asymptotic"),
}


@dataclass
class CommandResult:
    payload: Dict[str, Any]
    exit_code: int = 0
    table: Optional[Tuple[List[str], List[list]]] = None
    plot_records: List[tuple] = field(default_factory=list)


def _add_common(parser):
    parser.add_argument("--config", default=argparse.SUPPRESS, help="YAML file with defaults for every flag")
    parser.add_argument("--output", default=argparse.SUPPRESS, help="write the result here instead of stdout")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, default=argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    parser.add_argument("--si", action="store_true", default=argparse.SUPPRESS, help="report energies in J/m^2, pressures in Pa")
    parser.add_argument("--hbar-c", dest="hbar_c", type=float, default=argparse.SUPPRESS, help="hbar*c in J m")
    parser.add_argument("--emit-plot-data", dest="emit_plot_data", default=argparse.SUPPRESS, metavar="PATH")
    parser.add_argument("--verbosity", choices=tuple(logging.log_levels), default=argparse.SUPPRESS)


def _add_geometry(parser, with_a=True):
    parser.add_argument("--L", dest="L", type=float, default=argparse.SUPPRESS, help="chamber length")
    if with_a:
        parser.add_argument("--a", dest="a", type=float, default=argparse.SUPPRESS, help="piston position")


def _add_mode(parser, with_kpar=True):
    parser.add_argument("--side", choices=[s.value for s in Side], default=argparse.SUPPRESS)
    parser.add_argument("--m", dest="m", type=int, default=argparse.SUPPRESS)
    parser.add_argument("--lambda", dest="polarization", type=int, choices=(1, 2), default=argparse.SUPPRESS)
    if with_kpar:
        parser.add_argument("--kpar", type=float, default=argparse.SUPPRESS)


def _add_window(parser):
    parser.add_argument("--xi-min", dest="xi_min", type=float, default=argparse.SUPPRESS)
    parser.add_argument("--xi-max", dest="xi_max", type=float, default=argparse.SUPPRESS)
    parser.add_argument("--points", type=int, default=argparse.SUPPRESS)
    parser.add_argument("--basis", default=argparse.SUPPRESS, help="e.g. -4,-3,-2,-1,0,log")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir-piston",
        description="Cutoff-regularized vacuum energy of the Casimir piston, empty and with a weak dielectric.",
    )
    groups = parser.add_subparsers(dest="group", required=True)

    ideal = groups.add_parser("ideal", help="empty piston").add_subparsers(dest="action", required=True)
    p = ideal.add_parser("energy", help="regularized energy per area")
    _add_geometry(p)
    p.add_argument("--xi", type=float, default=argparse.SUPPRESS)
    p.add_argument("--method", choices=METHODS["ideal", "energy"] + ("all",), default=argparse.SUPPRESS)
    _add_common(p)
    p = ideal.add_parser("force", help="Casimir force per area on the piston")
    _add_geometry(p)
    p.add_argument("--xi", type=float, default=argparse.SUPPRESS, help="cutoff of the finite-difference check")
    p.add_argument("--method", choices=METHODS["ideal", "force"] + ("all",), default=argparse.SUPPRESS)
    _add_common(p)

    perturb = groups.add_parser("perturb", help="first order in the dielectric").add_subparsers(
        dest="action", required=True
    )
    p = perturb.add_parser("shift", help="first-order eigenfrequency shift of one mode")
    _add_geometry(p)
    _add_mode(p)
    p.add_argument("--profile", default=argparse.SUPPRESS, help="sin, file:PATH.csv or const:VALUE")
    p.add_argument("--alpha", type=float, default=argparse.SUPPRESS)
    p.add_argument("--method", choices=METHODS["perturb", "shift"] + ("all",), default=argparse.SUPPRESS)
    _add_common(p)
    p = perturb.add_parser("integral", help="k_par integral of one mode's regularized shift")
    _add_geometry(p)
    _add_mode(p, with_kpar=False)
    p.add_argument("--xi", type=float, default=argparse.SUPPRESS)
    p.add_argument("--method", choices=METHODS["perturb", "integral"] + ("all",), default=argparse.SUPPRESS)
    _add_common(p)
    p = perturb.add_parser("denergy", help="(1/A) dE/dalpha")
    _add_geometry(p)
    p.add_argument("--xi", type=float, default=argparse.SUPPRESS)
    p.add_argument("--method", choices=METHODS["perturb", "denergy"] + ("all",), default=argparse.SUPPRESS)
    _add_common(p)
    p = perturb.add_parser("dforce", help="-d/da of (1/A) dE/dalpha: first-order change of the force per area")
    _add_geometry(p)
    p.add_argument("--xi", type=float, default=argparse.SUPPRESS)
    p.add_argument("--method", choices=METHODS["perturb", "dforce"] + ("all",), default=argparse.SUPPRESS)
    _add_common(p)
    p = perturb.add_parser("oracle", help="transfer-matrix check of the closed shift")
    _add_geometry(p)
    _add_mode(p)
    p.add_argument("--alpha", type=float, default=argparse.SUPPRESS)
    p.add_argument("--layers", type=int, default=argparse.SUPPRESS)
    _add_common(p)

    laurent = groups.add_parser("laurent", help="small-xi structure").add_subparsers(dest="action", required=True)
    p = laurent.add_parser("fit", help="fit the Laurent coefficients of one quantity")
    p.add_argument("--quantity", default=argparse.SUPPRESS, help=", ".join(QUANTITIES))
    _add_geometry(p)
    _add_window(p)
    _add_common(p)
    p = laurent.add_parser("report", help="coefficients against piston position")
    _add_geometry(p, with_a=False)
    p.add_argument("--a-grid", dest="a_grid", default=argparse.SUPPRESS, help="start:stop:count")
    _add_window(p)
    _add_common(p)

    p = groups.add_parser("reproduce", help="run acceptance criteria")
    p.add_argument("criterion", choices=Reproducer.CRITERIA + ("all",))
    _add_common(p)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Config file values overridden by the flags given on the command line."""
    overrides = {
        key: value for key, value in vars(args).items() if key not in ("group", "action", "criterion", "config", "verbosity")
    }
    path = getattr(args, "config", None)
    if path is not None:
        return RunConfig.from_yaml_file(path, **overrides)
    return RunConfig.from_dict({}, **overrides)


def _as_float(config: RunConfig, name: str) -> float:
    try:
        return float(getattr(config, name))
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a number, got {getattr(config, name)!r}") from None


def _as_int(config: RunConfig, name: str) -> int:
    value = getattr(config, name)
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise DomainError(f"{name} must be an integer, got {value!r}")
    return int(value)


def _alpha(config: RunConfig, default: float) -> float:
    return default if config.alpha is None else _as_float(config, "alpha")


def _methods(command, config: RunConfig) -> Tuple[str, ...]:
    allowed = METHODS[command]
    if config.method == "all":
        return allowed
    if config.method not in allowed:
        raise DomainError(f"Unknown method {config.method!r} for {' '.join(command)}, expected one of {allowed + ('all',)}")
    return (config.method,)


def prepare_inputs(command: Tuple[str, Optional[str]], config: RunConfig) -> Dict[str, Any]:
    """Validate and build everything a command needs; raises `DomainError` on bad input."""
    group, action = command
    inputs: Dict[str, Any] = {}
    if command in METHODS:
        inputs["methods"] = _methods(command, config)
    if group in ("ideal", "perturb") or command == ("laurent", "fit"):
        inputs["geometry"] = PistonGeometry(L=_as_float(config, "L"), a=_as_float(config, "a"))
    if command in (("ideal", "energy"), ("perturb", "integral"), ("perturb", "denergy"), ("perturb", "dforce")):
        inputs["regulator"] = Regulator(_as_float(config, "xi"))
    if command == ("ideal", "force") and "finite-difference" in inputs["methods"]:
        inputs["regulator"] = Regulator(_as_float(config, "xi"))
    if command in (("perturb", "shift"), ("perturb", "oracle")):
        inputs["mode"] = Mode(
            side=config.side,
            m=_as_int(config, "m"),
            k_par=_as_float(config, "kpar"),
            polarization=_as_int(config, "polarization"),
        )
    if command == ("perturb", "shift"):
        inputs["profile"] = parse_profile(str(config.profile), inputs["geometry"].L, _alpha(config, SHIFT_ALPHA))
    if command == ("perturb", "integral"):
        # Mode checks (m, polarization); k_par is integrated over
        Mode(side=config.side, m=_as_int(config, "m"), polarization=_as_int(config, "polarization"))
    if command == ("perturb", "oracle"):
        if _alpha(config, DEFAULT_ORACLE_ALPHA) == 0.0:
            raise DomainError("Oracle needs a nonzero --alpha")
        if _as_int(config, "layers") < 1:
            raise DomainError(f"--layers must be positive, got {config.layers}")
    if group == "laurent":
        if command == ("laurent", "fit") and config.quantity not in QUANTITIES:
            raise DomainError(f"Unknown quantity {config.quantity!r}, expected one of {', '.join(QUANTITIES)}")
        if config.basis is None:
            powers, include_log = (-4, -3, -2, -1, 0), True
        else:
            powers, include_log = parse_basis(config.basis)
        inputs["powers"], inputs["include_log"] = powers, include_log
        inputs["xi_grid"] = log_xi_grid(
            _as_float(config, "xi_min"), _as_float(config, "xi_max"), _as_int(config, "points")
        )
    if command == ("laurent", "report"):
        L = _as_float(config, "L")
        inputs["a_grid"] = parse_a_grid(config.a_grid)
        for a in inputs["a_grid"]:
            PistonGeometry(L=L, a=a)
    return inputs


def _delta(values: Dict[str, float], units: str) -> Dict[str, Any]:
    deltas = {}
    names = list(values)
    for i, first in enumerate(names):
        for second in names[i + 1:]:
            a, b = values[first], values[second]
            scale = max(abs(a), abs(b))
            deltas[f"{first}-{second}"] = {
                "difference": quantity(a - b, units, "difference"),
                "relative": quantity(abs(a - b) / scale if scale else 0.0, "1", "relative-difference"),
            }
    return deltas


def cmd_ideal(action: str, config: RunConfig, inputs: Dict[str, Any]) -> CommandResult:
    geometry = inputs["geometry"]
    if action == "energy":
        regulator = inputs["regulator"]
        routes = {"numeric": energy_numeric, "closed": energy_closed, "asymptotic": energy_asymptotic}
        results = {name: routes[name](geometry, regulator) for name in inputs["methods"]}
        payload = {
            "geometry": geometry.to_dict(),
            "xi": regulator.xi,
            "energy": {
                name: {
                    "total": quantity(r.value, ENERGY_UNITS, name),
                    "left": quantity(r.left, ENERGY_UNITS, name),
                    "right": quantity(r.right, ENERGY_UNITS, name),
                }
                for name, r in results.items()
            },
        }
        if len(results) > 1:
            payload["deltas"] = _delta({name: r.value for name, r in results.items()}, ENERGY_UNITS)
        records = [(geometry.a, regulator.xi, name, "ideal-energy", r.value) for name, r in results.items()]
        return CommandResult(payload, plot_records=records)

    payload = {"geometry": geometry.to_dict(), "force": {}}
    values = {}
    if "closed" in inputs["methods"]:
        values["closed"] = force_per_area(geometry)
    if "finite-difference" in inputs["methods"]:
        values["finite-difference"] = force_finite_difference(geometry, inputs["regulator"])
        payload["xi"] = inputs["regulator"].xi
    payload["force"] = {name: quantity(value, PRESSURE_UNITS, name) for name, value in values.items()}
    if len(values) > 1:
        payload["deltas"] = _delta(values, PRESSURE_UNITS)
    xi = payload.get("xi")
    records = [(geometry.a, xi, name, "force", value) for name, value in values.items()]
    return CommandResult(payload, plot_records=records)


def _shift_payload(result):
    return {"omega1": quantity(result.omega1, FREQUENCY_UNITS, result.method), "alpha": result.alpha}


def cmd_perturb(action: str, config: RunConfig, inputs: Dict[str, Any]) -> CommandResult:
    geometry = inputs["geometry"]

    if action == "shift":
        mode, profile = inputs["mode"], inputs["profile"]
        payload = {
            "geometry": geometry.to_dict(),
            "mode": mode.to_dict(),
            "profile": profile.to_dict(),
            "omega0": quantity(omega0(geometry, mode), FREQUENCY_UNITS, "exact"),
            "shift": {},
        }
        methods = inputs["methods"]
        if profile.is_sinusoidal and len(methods) == 2:
            comparison = compare_shift(geometry, mode, profile.alpha)
            payload["shift"] = {
                "closed": _shift_payload(comparison.closed),
                "quadrature": _shift_payload(comparison.quadrature),
            }
            payload["relative_difference"] = quantity(comparison.relative_difference, "1", "relative-difference")
            payload["discrepancy"] = comparison.discrepancy
            payload["notes"] = comparison.notes
        else:
            if "closed" in methods:
                if profile.is_sinusoidal:
                    payload["shift"]["closed"] = _shift_payload(first_order_shift_closed(geometry, mode, profile.alpha))
                else:
                    payload.setdefault("notes", []).append("closed shift exists only for the sinusoidal profile")
            if "quadrature" in methods:
                payload["shift"]["quadrature"] = _shift_payload(first_order_shift_quadrature(geometry, mode, profile))
        records = [
            (geometry.a, None, name, "omega1", entry["omega1"]["value"]) for name, entry in payload["shift"].items()
        ]
        return CommandResult(payload, plot_records=records)

    if action == "integral":
        regulator = inputs["regulator"]
        routes = {"closed": appendix_integral_closed, "quadrature": appendix_integral_quadrature}
        values = {
            name: routes[name](geometry, config.side, _as_int(config, "m"), _as_int(config, "polarization"), regulator).value
            for name in inputs["methods"]
        }
        payload = {
            "geometry": geometry.to_dict(),
            "side": Side.parse(config.side).value,
            "m": _as_int(config, "m"),
            "lambda": _as_int(config, "polarization"),
            "xi": regulator.xi,
            "integral": {name: quantity(value, ENERGY_UNITS, name) for name, value in values.items()},
        }
        if len(values) > 1:
            payload["deltas"] = _delta(values, ENERGY_UNITS)
        records = [(geometry.a, regulator.xi, name, "mode-integral", value) for name, value in values.items()]
        return CommandResult(payload, plot_records=records)

    if action == "denergy":
        regulator = inputs["regulator"]
        routes = {"sum": denergy_dalpha_sum, "closed": denergy_dalpha_closed, "asymptotic": denergy_dalpha_asymptotic}
        results = {name: routes[name](geometry, regulator) for name in inputs["methods"]}
        entries = {}
        for name, r in results.items():
            entries[name] = {
                "total": quantity(r.value, ENERGY_UNITS, name),
                "left": quantity(r.left, ENERGY_UNITS, name),
                "right": quantity(r.right, ENERGY_UNITS, name),
            }
            if r.zero_mode is not None:
                entries[name]["zero_mode"] = quantity(r.zero_mode, ENERGY_UNITS, name)
        payload = {"geometry": geometry.to_dict(), "xi": regulator.xi, "denergy_dalpha": entries}
        if len(results) > 1:
            payload["deltas"] = _delta({name: r.value for name, r in results.items()}, ENERGY_UNITS)
        records = [(geometry.a, regulator.xi, name, "denergy-dalpha", r.value) for name, r in results.items()]
        return CommandResult(payload, plot_records=records)

    if action == "dforce":
        regulator = inputs["regulator"]
        routes = {"closed": dforce_dalpha_closed, "asymptotic": dforce_dalpha_asymptotic}
        results = {name: routes[name](geometry, regulator) for name in inputs["methods"]}
        entries = {
            name: {
                "total": quantity(r.value, PRESSURE_UNITS, name),
                "left": quantity(r.left, PRESSURE_UNITS, name),
                "right": quantity(r.right, PRESSURE_UNITS, name),
            }
            for name, r in results.items()
        }
        payload = {"geometry": geometry.to_dict(), "xi": regulator.xi, "dforce_dalpha": entries}
        if len(results) > 1:
            payload["deltas"] = _delta({name: r.value for name, r in results.items()}, PRESSURE_UNITS)
        records = [(geometry.a, regulator.xi, name, "dforce-dalpha", r.value) for name, r in results.items()]
        return CommandResult(payload, plot_records=records)

    mode = inputs["mode"]
    alpha, layers = _alpha(config, DEFAULT_ORACLE_ALPHA), _as_int(config, "layers")
    oracle = oracle_shift(geometry, mode, alpha, layers)
    closed = first_order_shift_closed(geometry, mode)
    scale = max(abs(oracle.omega1), abs(closed.omega1))
    payload = {
        "geometry": geometry.to_dict(),
        "mode": mode.to_dict(),
        "alpha": alpha,
        "layers": layers,
        "shift_per_alpha": {
            "transfer-matrix": quantity(oracle.omega1, FREQUENCY_UNITS, oracle.method),
            "closed": quantity(closed.omega1, FREQUENCY_UNITS, closed.method),
        },
        "relative_difference": quantity(
            abs(oracle.omega1 - closed.omega1) / scale if scale else 0.0, "1", "relative-difference"
        ),
    }
    records = [
        (geometry.a, None, oracle.method, "omega1-per-alpha", oracle.omega1),
        (geometry.a, None, closed.method, "omega1-per-alpha", closed.omega1),
    ]
    return CommandResult(payload, plot_records=records)


def cmd_laurent(action: str, config: RunConfig, inputs: Dict[str, Any]) -> CommandResult:
    powers, include_log, xi_grid = inputs["powers"], inputs["include_log"], inputs["xi_grid"]

    if action == "fit":
        geometry = inputs["geometry"]
        samples = sample_quantity(config.quantity, geometry, xi_grid)
        fit = laurent_fit(samples, powers, include_log)
        units = QUANTITY_UNITS[config.quantity]
        payload = {"geometry": geometry.to_dict(), "quantity": config.quantity, "fit": fit.to_dict()}
        if 0 in powers:
            try:
                c0 = extract_c0(fit)
            except FitError as e:
                logger.warning(str(e))
                payload["c0"], payload["warnings"] = None, [str(e)]
            else:
                payload["c0"] = quantity(c0.value, units, "laurent-fit")
                payload["c_log"] = quantity(c0.c_log, units, "laurent-fit")
                payload["warnings"] = c0.warnings
        records = [(geometry.a, float(x), "closed", config.quantity, float(y)) for x, y in zip(*samples)]
        return CommandResult(payload, plot_records=records)

    report = divergence_report(_as_float(config, "L"), inputs["a_grid"], xi_grid, powers, include_log)
    records = []
    for a in report.a_grid:
        geometry = PistonGeometry(L=report.L, a=a)
        for name in ("denergy-dalpha", "ideal-energy", "dforce-dalpha"):
            xi, values = sample_quantity(name, geometry, xi_grid)
            records.extend((a, float(x), "closed", name, float(y)) for x, y in zip(xi, values))
    payload = report.to_dict()
    payload["position_dependent"] = report.varying()
    payload["control_position_dependent"] = report.varying(control=True)
    return CommandResult(payload, table=report.table(), plot_records=records)


def cmd_reproduce(criterion: str, config: RunConfig) -> CommandResult:
    reproducer = Reproducer(seed=_as_int(config, "seed"))
    results = reproducer.run_all() if criterion == "all" else [reproducer.run(criterion)]
    summary = Reproducer.summary(results)
    table = (["criterion", "status"], [[r.name, "PASS" if r.passed else "FAIL"] for r in results])
    return CommandResult(summary, exit_code=0 if summary["passed"] else 1, table=table)


def _hbar_c(config: RunConfig) -> float:
    if config.hbar_c is not None:
        return float(config.hbar_c)
    return scipy.constants.hbar * scipy.constants.c


def _emit(result: CommandResult, config: RunConfig):
    payload = result.payload
    if config.si:
        hbar_c = _hbar_c(config)
        payload = to_si(payload, hbar_c)
        payload["hbar_c"] = quantity(hbar_c, "J m", "input")
    text = render(payload, config.format, result.table)
    if config.output is not None:
        write_text(text, config.output)
    else:
        sys.stdout.write(text)
    if config.emit_plot_data is not None:
        records = result.plot_records
        if config.si:
            hbar_c = _hbar_c(config)
            records = [
                (a, xi, method, name, value * hbar_c if name in SI_QUANTITIES else value)
                for a, xi, method, name, value in records
            ]
        write_plot_data(config.emit_plot_data, records)


def _error_object(error: Exception) -> Dict[str, str]:
    return {"error": type(error).__name__, "message": str(error)}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = (args.group, getattr(args, "action", None))
    if hasattr(args, "verbosity"):
        py_logging.basicConfig(format="[%(levelname)s|%(name)s:%(lineno)s] %(message)s")
        set_verbosity(args.verbosity)

    try:
        config = load_config(args)
        inputs = {} if args.group == "reproduce" else prepare_inputs(command, config)
    except DomainError as e:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"{parser.prog}: error: {e}\n")
        return 2

    logger.info(f"Running {' '.join(c for c in command if c)}")
    try:
        if args.group == "ideal":
            result = cmd_ideal(args.action, config, inputs)
        elif args.group == "perturb":
            result = cmd_perturb(args.action, config, inputs)
        elif args.group == "laurent":
            result = cmd_laurent(args.action, config, inputs)
        else:
            result = cmd_reproduce(args.criterion, config)
        _emit(result, config)
    except CasimirPistonError as e:
        logger.error(f"{type(e).__name__}: {e}")
        sys.stdout.write(dump_json(_error_object(e)))
        return 1
    return result.exit_code


def run():
    sys.exit(main())
