import logging
import math

import numpy as np
import pytest

from casimir_piston.errors import DomainError
from casimir_piston.modeling import (
    DielectricProfile,
    Mode,
    PistonGeometry,
    Regulator,
    Side,
    appendix_integral_closed,
    appendix_integral_quadrature,
    compare_shift,
    denergy_dalpha_asymptotic,
    ForceDerivative,
    denergy_dalpha_closed,
    denergy_dalpha_regular,
    denergy_dalpha_sum,
    denergy_laurent_coefficients,
    denergy_principal_part,
    dforce_dalpha_asymptotic,
    dforce_dalpha_closed,
    dforce_laurent_coefficients,
    dforce_principal_part,
    side_dforce_coefficients,
    first_order_shift_closed,
    first_order_shift_quadrature,
    lerch_difference_asymptotic,
    lerch_difference_d2_over_xi,
    oracle_shift,
    omega0,
    side_laurent_coefficients,
)
from casimir_piston.modeling.perturbation import side_cosine_factor


GEOMETRY = PistonGeometry(L=1.0, a=0.4)


@pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
@pytest.mark.parametrize("polarization", [1, 2])
@pytest.mark.parametrize("m", [1, 2, 4])
@pytest.mark.parametrize("k_par", [0.0, 3.0])
def test_closed_shift_matches_quadrature(side, polarization, m, k_par):
    comparison = compare_shift(GEOMETRY, Mode(side, m, k_par, polarization), alpha=0.5)
    assert not comparison.discrepancy
    assert comparison.closed.omega1 == pytest.approx(comparison.quadrature.omega1, rel=1e-8)
    assert comparison.closed.per_unit_alpha == pytest.approx(2.0 * comparison.closed.omega1)


def test_transverse_electric_closed_shift_value():
    mode = Mode(Side.LEFT, 1, 0.0, 1)
    r = (2.0 / 0.4) ** 2
    c = 1.0 - math.cos(0.4 * math.pi)
    expected = (math.pi / 0.4) * c / (2.0 * math.pi * 0.4) * r / (1.0 - r)
    assert first_order_shift_closed(GEOMETRY, mode).omega1 == pytest.approx(expected, rel=1e-13)


def test_zero_mode_closed_shift_is_twice_quadrature(caplog):
    mode = Mode(Side.RIGHT, 0, 2.0, 2)
    with caplog.at_level(logging.WARNING):
        comparison = compare_shift(GEOMETRY, mode)
    assert comparison.discrepancy
    assert comparison.closed.omega1 == pytest.approx(2.0 * comparison.quadrature.omega1, rel=1e-9)
    assert "counts the constant mode twice" in comparison.notes[0]
    assert "Shift discrepancy" in caplog.text


@pytest.mark.parametrize(
    "mode",
    [Mode(Side.LEFT, 1, 0.0, 1), Mode(Side.RIGHT, 3, 4.0, 2), Mode(Side.LEFT, 0, 1.0, 2)],
)
def test_constant_profile_gives_uniform_shift(mode):
    shift = first_order_shift_quadrature(GEOMETRY, mode, DielectricProfile.constant(GEOMETRY.L, 0.1))
    assert shift.omega1 == pytest.approx(-0.05 * omega0(GEOMETRY, mode), rel=1e-9)
    assert shift.alpha is None
    assert shift.per_unit_alpha == shift.omega1


def test_tabulated_sine_matches_sinusoidal():
    x = np.linspace(0.0, 1.0, 201)
    tabulated = DielectricProfile.tabulated(1.0, x, np.sin(np.pi * x))
    mode = Mode(Side.LEFT, 2, 1.0, 1)
    exact = first_order_shift_closed(GEOMETRY, mode).omega1
    assert first_order_shift_quadrature(GEOMETRY, mode, tabulated).omega1 == pytest.approx(exact, rel=1e-3)


def test_side_cosine_factors_sum_to_two():
    assert side_cosine_factor(GEOMETRY, "left") + side_cosine_factor(GEOMETRY, "right") == pytest.approx(2.0)


@pytest.mark.slow
@pytest.mark.parametrize("polarization, m, k_par", [(1, 1, 0.0), (1, 2, 2.0), (2, 1, 2.0), (2, 3, 0.0)])
def test_oracle_matches_closed_shift(polarization, m, k_par):
    mode = Mode(Side.LEFT, m, k_par, polarization)
    closed = first_order_shift_closed(GEOMETRY, mode).omega1
    oracle = oracle_shift(GEOMETRY, mode)
    assert oracle.method == "transfer-matrix"
    assert oracle.omega1 == pytest.approx(closed, rel=1e-3)


def test_oracle_needs_nonzero_alpha():
    with pytest.raises(DomainError):
        oracle_shift(GEOMETRY, Mode(Side.LEFT, 1), alpha=0.0)


@pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
@pytest.mark.parametrize("m, polarization", [(0, 2), (1, 1), (1, 2), (5, 1)])
def test_appendix_integral_closed_matches_quadrature(side, m, polarization):
    regulator = Regulator(0.2)
    closed = appendix_integral_closed(GEOMETRY, side, m, polarization, regulator)
    numeric = appendix_integral_quadrature(GEOMETRY, side, m, polarization, regulator)
    assert closed.value == pytest.approx(numeric.value, rel=1e-8)
    assert closed.to_dict()["side"] == side.value


def test_appendix_integral_rejects_transverse_electric_zero_mode():
    with pytest.raises(DomainError):
        appendix_integral_closed(GEOMETRY, Side.LEFT, 0, 1, Regulator(0.1))


@pytest.mark.parametrize("a", [0.3, 0.5, 0.7])
def test_denergy_sum_matches_closed(a):
    geometry = PistonGeometry(L=1.0, a=a)
    total = denergy_dalpha_sum(geometry, Regulator(0.1))
    closed = denergy_dalpha_closed(geometry, Regulator(0.1))
    assert total.value == pytest.approx(closed.value, rel=1e-9)
    assert total.zero_mode == pytest.approx(closed.zero_mode, rel=1e-12)


@pytest.mark.parametrize("xi", [0.01, 0.05, 0.1])
def test_denergy_is_negative(xi):
    assert denergy_dalpha_closed(GEOMETRY, Regulator(xi)).value < 0.0


def test_denergy_symmetric_under_mirroring():
    regulator = Regulator(0.08)
    direct = denergy_dalpha_closed(PistonGeometry(L=1.0, a=0.3), regulator)
    mirrored = denergy_dalpha_closed(PistonGeometry(L=1.0, a=0.7), regulator)
    assert direct.value == pytest.approx(mirrored.value, rel=1e-10)
    assert direct.left == pytest.approx(mirrored.right, rel=1e-10)


def test_lerch_difference_remainder_is_linear_in_xi():
    s, v = 0.5, 0.25
    xi = np.geomspace(1e-4, 1e-2, 9)
    remainder = [abs(lerch_difference_d2_over_xi(s, x, v) - lerch_difference_asymptotic(s, x, v)) for x in xi]
    slope = np.polyfit(np.log(xi), np.log(remainder), 1)[0]
    assert slope >= 0.9


def test_log_coefficient_is_position_independent():
    expected = -math.pi / (32.0 * 1.0 ** 3)
    for a in (0.2, 0.45, 0.8):
        coefficients = denergy_laurent_coefficients(PistonGeometry(L=1.0, a=a))
        assert coefficients["log"] == pytest.approx(expected, rel=1e-12)


def test_laurent_coefficients_split_per_side():
    geometry = PistonGeometry(L=1.0, a=0.35)
    total = denergy_laurent_coefficients(geometry)
    left = side_laurent_coefficients(geometry, "left")
    right = side_laurent_coefficients(geometry, "right")
    assert set(total) == {"-4", "-3", "-2", "-1", "log", "0"}
    for key in total:
        assert total[key] == pytest.approx(left[key] + right[key], rel=1e-14)
    assert total["-4"] == pytest.approx(-3.0 / math.pi ** 3, rel=1e-12)
    assert total["-2"] == pytest.approx(-1.0 / (8.0 * math.pi), rel=1e-12)


def test_asymptotic_tracks_closed_at_small_xi():
    regulator = Regulator(5e-3)
    closed = denergy_dalpha_closed(GEOMETRY, regulator).value
    asymptotic = denergy_dalpha_asymptotic(GEOMETRY, regulator).value
    assert closed == pytest.approx(asymptotic, rel=1e-8)


def test_asymptotic_validity_warning(caplog):
    with caplog.at_level(logging.WARNING):
        denergy_dalpha_asymptotic(PistonGeometry(L=1.0, a=0.2), Regulator(0.05))
    assert "only valid" in caplog.text


@pytest.mark.parametrize("a", [0.3, 0.6])
@pytest.mark.parametrize("xi", [0.02, 0.2])
def test_denergy_principal_plus_regular_is_closed(a, xi):
    geometry = PistonGeometry(L=1.0, a=a)
    closed = denergy_dalpha_closed(geometry, Regulator(xi))
    regular = denergy_dalpha_regular(geometry, Regulator(xi))
    for attr, side in (("value", None), ("left", "left"), ("right", "right")):
        poles = denergy_principal_part(geometry, side)
        rebuilt = poles["-4"] / xi ** 4 + poles["-3"] / xi ** 3 + getattr(regular, attr)
        assert rebuilt == pytest.approx(getattr(closed, attr), rel=1e-11)


def test_denergy_principal_part_matches_laurent_coefficients():
    geometry = PistonGeometry(L=1.3, a=0.5)
    poles = denergy_principal_part(geometry)
    reference = denergy_laurent_coefficients(geometry)
    assert poles["-4"] == pytest.approx(reference["-4"], rel=1e-14)
    assert poles["-3"] == pytest.approx(reference["-3"], rel=1e-14)


def test_force_change_matches_difference_of_denergy():
    regulator, h = Regulator(0.1), 1e-4
    upper = denergy_dalpha_closed(PistonGeometry(L=1.0, a=0.4 + h), regulator).value
    lower = denergy_dalpha_closed(PistonGeometry(L=1.0, a=0.4 - h), regulator).value
    result = dforce_dalpha_closed(GEOMETRY, regulator)
    assert isinstance(result, ForceDerivative)
    assert result.value == pytest.approx(-(upper - lower) / (2.0 * h), rel=1e-6)
    assert result.value == pytest.approx(result.left + result.right, rel=1e-9)
    assert result.to_dict()["units"] == "1/length^4"


def test_force_change_poles_are_exact_derivatives():
    total = dforce_principal_part(GEOMETRY)
    assert total["-4"] == pytest.approx(0.0, abs=1e-12)
    for side in ("left", "right"):
        analytic = dforce_principal_part(GEOMETRY, side)
        differenced = side_dforce_coefficients(GEOMETRY, side)
        assert analytic["-4"] == pytest.approx(differenced["-4"], rel=1e-6)
        assert analytic["-3"] == pytest.approx(differenced["-3"], rel=1e-6)


def test_force_change_has_no_log_divergence():
    coefficients = dforce_laurent_coefficients(PistonGeometry(L=1.0, a=0.3))
    assert coefficients["log"] == pytest.approx(0.0, abs=1e-8)
    assert coefficients["-4"] == pytest.approx(0.0, abs=1e-8)
    assert abs(coefficients["-3"]) > 1e-2


def test_force_change_is_odd_under_mirroring():
    regulator = Regulator(0.05)
    direct = dforce_dalpha_closed(PistonGeometry(L=1.0, a=0.3), regulator)
    mirrored = dforce_dalpha_closed(PistonGeometry(L=1.0, a=0.7), regulator)
    assert direct.value == pytest.approx(-mirrored.value, rel=1e-7)


def test_force_change_asymptotic_tracks_closed_at_small_xi():
    regulator = Regulator(5e-3)
    closed = dforce_dalpha_closed(GEOMETRY, regulator).value
    asymptotic = dforce_dalpha_asymptotic(GEOMETRY, regulator).value
    assert closed == pytest.approx(asymptotic, rel=1e-5)


def test_force_change_step_must_stay_in_chamber():
    with pytest.raises(DomainError):
        dforce_dalpha_closed(PistonGeometry(L=1.0, a=0.01), Regulator(0.01), step=0.02)


def test_force_change_asymptotic_validity_warning(caplog):
    with caplog.at_level(logging.WARNING):
        dforce_dalpha_asymptotic(PistonGeometry(L=1.0, a=0.2), Regulator(0.05))
    assert "only valid" in caplog.text
