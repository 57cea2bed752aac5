import logging
import math

import pytest
from scipy.integrate import quad

from casimir_piston.errors import DomainError, ResourceError
from casimir_piston.modeling import (
    ENERGY_UNITS,
    PistonGeometry,
    Regulator,
    cutoff_antiderivative,
    energy_asymptotic,
    energy_closed,
    energy_numeric,
    force_finite_difference,
    force_per_area,
    position_energy,
    regularized_mode_integral,
)


def casimir_constant(geometry):
    return -math.pi ** 2 / 720.0 * (geometry.a ** -3 + (geometry.L - geometry.a) ** -3)


@pytest.mark.parametrize("a", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("xi", [0.05, 0.1, 0.5])
def test_numeric_matches_closed(a, xi):
    geometry = PistonGeometry(L=1.0, a=a)
    numeric = energy_numeric(geometry, Regulator(xi))
    closed = energy_closed(geometry, Regulator(xi))
    assert numeric.value == pytest.approx(closed.value, rel=1e-9)
    assert numeric.left == pytest.approx(closed.left, rel=1e-9)
    assert numeric.method == "numeric" and closed.method == "closed"


def test_closed_splits_per_side():
    result = energy_closed(PistonGeometry(L=1.0, a=0.3), Regulator(0.1))
    assert result.value == result.left + result.right
    assert result.to_dict()["units"] == ENERGY_UNITS


def test_principal_part_and_position_energy():
    for xi in (0.1, 1.0):
        geometry = PistonGeometry(L=1.0, a=0.3)
        principal = 3.0 / (math.pi ** 2 * xi ** 4) + 1.0 / (math.pi * xi ** 3)
        position = position_energy(geometry, Regulator(xi)).value
        assert position + principal == pytest.approx(energy_closed(geometry, Regulator(xi)).value, rel=1e-12)


def test_position_energy_tends_to_casimir_term():
    geometry = PistonGeometry(L=1.0, a=0.3)
    assert position_energy(geometry, Regulator(1e-3)).value == pytest.approx(casimir_constant(geometry), rel=1e-4)


def test_asymptotic_close_to_closed():
    geometry = PistonGeometry(L=1.0, a=0.4)
    xi = 0.01
    closed = energy_closed(geometry, Regulator(xi)).value
    asymptotic = energy_asymptotic(geometry, Regulator(xi)).value
    # the difference is O(xi^2)
    assert abs(closed - asymptotic) < 1e-2


def test_asymptotic_validity_warning(caplog):
    with caplog.at_level(logging.WARNING):
        energy_asymptotic(PistonGeometry(L=1.0, a=0.1), Regulator(0.06))
    assert "only valid" in caplog.text


def test_force_values():
    assert force_per_area(PistonGeometry(L=1.0, a=0.5)) == 0.0
    assert force_per_area(PistonGeometry(L=1.0, a=0.25)) == pytest.approx(-10.3976, abs=1e-3)


def test_force_is_odd_under_mirroring(rng):
    for _ in range(10):
        geometry = PistonGeometry(L=1.0, a=float(rng.uniform(0.05, 0.95)))
        assert force_per_area(geometry.mirrored()) == pytest.approx(-force_per_area(geometry), rel=1e-12)


def test_force_from_energy_difference():
    geometry = PistonGeometry(L=1.0, a=0.25)
    difference = force_finite_difference(geometry, Regulator(1e-3))
    assert difference == pytest.approx(force_per_area(geometry), rel=1e-3)


def test_force_step_must_stay_inside():
    with pytest.raises(DomainError):
        force_finite_difference(PistonGeometry(L=1.0, a=0.25), Regulator(1e-3), step=0.3)


def test_energy_symmetric_under_mirroring(rng):
    for _ in range(10):
        geometry = PistonGeometry(L=float(rng.uniform(0.5, 2.0)), a=0.3)
        regulator = Regulator(float(rng.uniform(0.01, 0.5)))
        assert energy_closed(geometry.mirrored(), regulator).value == pytest.approx(
            energy_closed(geometry, regulator).value, rel=1e-12
        )


def test_energy_scaling():
    geometry, regulator = PistonGeometry(L=1.0, a=0.35), Regulator(0.07)
    factor = 2.5
    scaled = energy_closed(geometry.scaled(factor), regulator.scaled(factor)).value
    assert scaled == pytest.approx(energy_closed(geometry, regulator).value / factor ** 3, rel=1e-12)


def test_zero_mode_weight_is_position_independent():
    xi = 0.1
    for a in (0.3, 0.6):
        geometry = PistonGeometry(L=1.0, a=a)
        full = energy_numeric(geometry, Regulator(xi)).value
        half = energy_numeric(geometry, Regulator(xi), zero_mode_weight=0.5).value
        assert full - half == pytest.approx(1.0 / (math.pi * xi ** 3), rel=1e-9)


def test_numeric_truncation_cap():
    with pytest.raises(ResourceError, match="closed form"):
        energy_numeric(PistonGeometry(L=1.0, a=0.5), Regulator(1e-3), max_terms=1000)


@pytest.mark.parametrize("accuracy", [0.0, 1.0, -1e-3])
def test_numeric_accuracy_domain(accuracy):
    with pytest.raises(DomainError):
        energy_numeric(PistonGeometry(L=1.0, a=0.5), Regulator(0.1), accuracy=accuracy)


@pytest.mark.parametrize("u0, xi", [(0.0, 0.3), (4.0, 0.3), (12.5, 0.05)])
def test_regularized_mode_integral(u0, xi):
    value, _ = quad(lambda u: u * u * math.exp(-xi * u), u0, math.inf, epsabs=0.0, epsrel=1e-12)
    assert regularized_mode_integral(u0, xi) == pytest.approx(value, rel=1e-10)


def test_cutoff_antiderivative_identity(rng):
    for _ in range(20):
        m, a = int(rng.integers(0, 6)), float(rng.uniform(0.2, 0.8))
        xi, k = float(rng.uniform(0.05, 0.5)), float(rng.uniform(1.0, 10.0))
        q = m * math.pi / a
        h = 1e-6 * k
        derivative = (
            float(cutoff_antiderivative(math.hypot(q, k + h), xi)) - float(cutoff_antiderivative(math.hypot(q, k - h), xi))
        ) / (2.0 * h)
        assert derivative == pytest.approx(-k * math.exp(-xi * math.hypot(q, k)), rel=1e-5)
