import logging

import numpy as np
import pytest

from casimir_piston.asymptotics import (
    DivergenceReport,
    LaurentFit,
    LaurentSamples,
    _flag_varying,
    divergence_report,
    extract_c0,
    laurent_fit,
    log_xi_grid,
    sample_quantity,
)
from casimir_piston.errors import DomainError, FitError
from casimir_piston.modeling import (
    PistonGeometry,
    Regulator,
    denergy_dalpha_closed,
    denergy_laurent_coefficients,
    dforce_dalpha_closed,
    energy_closed,
)


COEFFICIENTS = {-4: 2.0, -3: -1.0, -2: 0.5, -1: 3.0, 0: 0.7}


def synthetic(xi, log_coefficient=0.0):
    value = sum(c * xi ** p for p, c in COEFFICIENTS.items())
    return value + log_coefficient * np.log(xi)


def test_log_xi_grid():
    grid = log_xi_grid(1e-3, 1e-2, 20)
    assert grid.size == 20
    assert grid[0] == pytest.approx(1e-3) and grid[-1] == pytest.approx(1e-2)
    np.testing.assert_allclose(np.diff(np.log(grid)), np.log(10.0) / 19.0)


@pytest.mark.parametrize("args", [(0.0, 1e-2, 20), (1e-2, 1e-3, 20), (1e-3, 1e-2, 1)])
def test_log_xi_grid_domain(args):
    with pytest.raises(DomainError):
        log_xi_grid(*args)


def test_fit_recovers_synthetic_coefficients():
    xi = log_xi_grid(0.5, 5.0, 20)
    fit = laurent_fit((xi, synthetic(xi)), include_log=False)
    for power, value in COEFFICIENTS.items():
        assert fit.coefficient(power) == pytest.approx(value, rel=1e-7)
    assert fit.reliable
    assert fit.residual_rms < 1e-12
    assert fit.c_log == 0.0
    np.testing.assert_allclose(fit.evaluate(xi), synthetic(xi), rtol=1e-10)


def test_fit_recovers_log_coefficient():
    xi = log_xi_grid(0.5, 5.0, 20)
    fit = laurent_fit((xi, synthetic(xi, 0.3)))
    assert fit.c_log == pytest.approx(0.3, rel=1e-6)
    assert fit.coefficient(0) == pytest.approx(0.7, rel=1e-6)
    assert set(fit.to_dict()["coefficients"]) == {"-4", "-3", "-2", "-1", "0", "log"}


def test_fit_accepts_pairs():
    xi = log_xi_grid(0.5, 5.0, 12)
    pairs = list(zip(xi.tolist(), synthetic(xi).tolist()))
    fit = laurent_fit(pairs, include_log=False)
    assert fit.coefficient(-4) == pytest.approx(2.0, rel=1e-7)


def test_fit_input_domain():
    xi = log_xi_grid(0.5, 5.0, 20)
    y = synthetic(xi)
    with pytest.raises(DomainError):
        laurent_fit((xi[:6], y[:6]))
    with pytest.raises(DomainError):
        laurent_fit((xi, y), powers=(-4, -4, 0))
    narrow = np.linspace(1.0, 2.0, 20)
    with pytest.raises(DomainError):
        laurent_fit((narrow, synthetic(narrow)))
    bad = y.copy()
    bad[3] = np.nan
    with pytest.raises(DomainError):
        laurent_fit((xi, bad))
    with pytest.raises(DomainError):
        laurent_fit([(1.0, 2.0, 3.0)])


def test_vanishing_column_is_a_fit_error():
    xi = log_xi_grid(1e-3, 1e-2, 20)
    with pytest.raises(FitError) as excinfo:
        laurent_fit((xi, 1.0 + xi), powers=(0, 200), include_log=False)
    assert excinfo.value.columns == ["200"]


def test_extract_c0_without_log_divergence():
    xi = log_xi_grid(0.5, 5.0, 20)
    extraction = extract_c0(laurent_fit((xi, synthetic(xi))))
    assert extraction.value == pytest.approx(0.7, rel=1e-6)
    assert extraction.warnings == []


def test_extract_c0_warns_on_log_divergence(caplog):
    xi = log_xi_grid(0.5, 5.0, 20)
    with caplog.at_level(logging.WARNING):
        extraction = extract_c0(laurent_fit((xi, synthetic(xi, 0.3))))
    assert extraction.warnings
    assert "logarithmic divergence" in caplog.text
    assert extraction.to_dict()["c_log"] == pytest.approx(0.3, rel=1e-6)


def make_fit(**overrides):
    fields = dict(
        powers=(-4, 0),
        include_log=False,
        coefficients={"-4": 1.0, "0": 2.0},
        uncertainties={"-4": 0.0, "0": 0.0},
        residual_rms=0.0,
        condition_estimate=10.0,
        n_samples=20,
        xi_range=(0.1, 1.0),
    )
    fields.update(overrides)
    return LaurentFit(**fields)


def test_extract_c0_refuses_unreliable_fit():
    with pytest.raises(FitError):
        extract_c0(make_fit(condition_estimate=1e12))
    with pytest.raises(FitError):
        extract_c0(make_fit(condition_estimate=float("inf")))


def test_extract_c0_needs_constant_column():
    with pytest.raises(FitError):
        extract_c0(make_fit(powers=(-4,), coefficients={"-4": 1.0}, uncertainties={"-4": 0.0}))


def test_sample_quantity():
    geometry = PistonGeometry(L=1.0, a=0.3)
    xi, values = sample_quantity("denergy-dalpha", geometry, [0.01, 0.02])
    assert values[1] == pytest.approx(denergy_dalpha_closed(geometry, Regulator(0.02)).value, rel=1e-12)
    samples = sample_quantity("ideal-energy", geometry, [0.01, 0.02], side="left")
    assert len(samples) == 2
    assert samples.values[0] == pytest.approx(energy_closed(geometry, Regulator(0.01)).left, rel=1e-12)
    forces = sample_quantity("dforce-dalpha", geometry, [0.05])
    assert forces.values[0] == pytest.approx(dforce_dalpha_closed(geometry, Regulator(0.05)).value, rel=1e-12)
    with pytest.raises(DomainError):
        sample_quantity("pressure", geometry, [0.01])


def test_report_table_layout():
    row = {
        "a": 0.3,
        "coefficients": {"-4": 1.0, "0": 2.0, "log": 0.1},
        "uncertainties": {"-4": 0.0, "0": 0.0, "log": 0.0},
        "condition": 5.0,
        "residual_rms": 1e-14,
        "reliable": True,
        "log_content": 0.2,
        "log_content_reference": 0.21,
    }
    force_row = dict(row, c0_from_energy=0.5, c0_reference=0.51)
    report = DivergenceReport(
        L=1.0,
        a_grid=[0.3],
        xi_grid=[0.01],
        powers=(-4, 0),
        include_log=True,
        rows=[row],
        control_rows=[row],
        force_rows=[force_row],
    )
    header, body = report.table()
    assert header[:4] == ["quantity", "a", "c[-4]", "sigma[-4]"]
    assert header[-6:] == [
        "log_content",
        "log_content_reference",
        "c0_force_from_energy",
        "reliable",
        "condition",
        "residual_rms",
    ]
    assert [line[0] for line in body] == ["denergy-dalpha", "ideal-energy", "dforce-dalpha"]
    assert all(len(line) == len(header) for line in body)
    assert body[2][header.index("c0_force_from_energy")] == 0.5


def test_report_needs_two_positions():
    with pytest.raises(DomainError):
        divergence_report(1.0, [0.5], log_xi_grid(1e-3, 1e-2, 20))


@pytest.mark.slow
def test_divergence_report_flags_position_dependent_poles():
    report = divergence_report(
        1.0, [0.3, 0.5, 0.7], log_xi_grid(1e-3, 1e-2, 20), powers=(-4, -3, -2, -1, 0, 1, 2)
    )
    assert not report.flags["-4"]
    assert report.flags["-3"]
    assert report.flags["-1"]
    assert not report.control_flags["-3"]
    assert report.control_flags["0"]
    assert "-3" in report.varying()

    assert report.flags["log_content"]
    assert not report.control_flags["log_content"]
    for row in report.rows:
        assert row["reliable"]
        assert set(row["c_log_sides"]) == {"left", "right"}
        assert row["log_content"] == pytest.approx(row["log_content_reference"], rel=5e-2)
        reference = denergy_laurent_coefficients(PistonGeometry(L=1.0, a=row["a"]))
        assert sum(row["c_log_sides"].values()) == pytest.approx(reference["log"], rel=5e-2)

    scale = max(abs(row["c0_reference"]) for row in report.force_rows)
    assert [row["a"] for row in report.force_rows] == [0.3, 0.5, 0.7]
    for row in report.force_rows:
        assert row["c0_from_energy"] == pytest.approx(row["c0_reference"], abs=1e-2 * scale)
        assert row["coefficients"]["0"] == pytest.approx(row["c0_reference"], abs=2e-2 * scale)


def test_flags_skip_unreliable_rows():
    def row(c0, reliable):
        return {
            "coefficients": {"0": c0},
            "uncertainties": {"0": 0.0},
            "reliable": reliable,
            "log_content": 0.1,
            "log_content_sigma": 0.0,
        }

    flags = _flag_varying([row(1.0, True), row(5.0, False), row(1.0, True)], ["0"], 1e-3, 1e-6)
    assert flags == {"0": False, "log_content": False}
    flags = _flag_varying([row(1.0, True), row(5.0, True)], ["0"], 1e-3, 1e-6)
    assert flags["0"]


def test_flags_need_two_reliable_rows(caplog):
    rows = [
        {"coefficients": {"0": c}, "uncertainties": {"0": 0.0}, "reliable": r, "log_content": None}
        for c, r in ((1.0, True), (5.0, False))
    ]
    with caplog.at_level(logging.WARNING):
        flags = _flag_varying(rows, ["0"], 1e-3, 1e-6)
    assert flags == {"0": False, "log_content": False}
    assert "reliable" in caplog.text


def test_split_samples_recover_casimir_constant():
    L, a = 1.0, 0.3
    samples = sample_quantity("ideal-energy", PistonGeometry(L=L, a=a), log_xi_grid(1e-3, 1e-2, 20))
    assert isinstance(samples, LaurentSamples)
    assert samples.exact == pytest.approx({"-4": 3.0 * L / np.pi ** 2, "-3": 1.0 / np.pi})
    fit = laurent_fit(samples, (-4, -3, -2, -1, 0, 2))
    expected = -np.pi ** 2 / 720.0 * (a ** -3 + (L - a) ** -3)
    assert fit.coefficient(0) == pytest.approx(expected, rel=1e-5)
    assert fit.coefficient(-4) == pytest.approx(3.0 * L / np.pi ** 2, rel=1e-8)


def test_split_samples_keep_exact_terms_outside_basis():
    xi = log_xi_grid(0.5, 5.0, 20)
    poles = {"-4": COEFFICIENTS[-4], "-3": COEFFICIENTS[-3]}
    remainder = synthetic(xi) - (COEFFICIENTS[-4] * xi ** -4 + COEFFICIENTS[-3] * xi ** -3)
    samples = LaurentSamples(xi=xi, remainder=remainder, exact=poles)
    np.testing.assert_allclose(samples.values, synthetic(xi), rtol=1e-12)
    full = laurent_fit(samples, include_log=False)
    assert full.coefficient(-4) == pytest.approx(2.0, rel=1e-7)
    reduced = laurent_fit(samples, powers=(-3, -2, -1, 0), include_log=False)
    assert "-4" not in reduced.coefficients
    assert reduced.coefficient(0) == pytest.approx(0.7, rel=1e-6)


def test_fit_stable_under_denser_and_shifted_windows():
    rng = np.random.default_rng(0)
    noise = 1e-9

    def noisy_fit(xi_min, xi_max, points):
        xi = log_xi_grid(xi_min, xi_max, points)
        y = synthetic(xi, 0.3) * (1.0 + noise * rng.standard_normal(xi.size))
        return laurent_fit((xi, y))

    base = noisy_fit(0.5, 5.0, 20)
    for other in (noisy_fit(0.5, 5.0, 40), noisy_fit(1.0, 10.0, 20)):
        for name in base.coefficients:
            delta = abs(base.coefficients[name] - other.coefficients[name])
            assert delta < 5.0 * (base.uncertainties[name] + other.uncertainties[name])


def test_casimir_constant_stable_under_window_changes():
    geometry = PistonGeometry(L=1.0, a=0.3)
    powers = (-4, -3, -2, -1, 0, 2)

    def c0(xi_min, xi_max, points):
        return laurent_fit(sample_quantity("ideal-energy", geometry, log_xi_grid(xi_min, xi_max, points)), powers).coefficient(0)

    base = c0(1e-3, 1e-2, 20)
    assert c0(1e-3, 1e-2, 40) == pytest.approx(base, rel=1e-6)
    assert c0(2e-3, 2e-2, 20) == pytest.approx(base, rel=1e-4)


def test_condition_grows_as_window_shrinks():
    geometry = PistonGeometry(L=1.0, a=0.3)
    conditions = [
        laurent_fit(sample_quantity("ideal-energy", geometry, log_xi_grid(1e-3, xi_max, 20))).condition_estimate
        for xi_max in (1e-1, 3e-2, 1e-2)
    ]
    assert conditions[0] < conditions[1] < conditions[2]
