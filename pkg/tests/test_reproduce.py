import json

import numpy as np
import pytest

from casimir_piston.data.data_utils import dump_json
from casimir_piston.errors import DomainError, ResourceError
from casimir_piston.reproduce import (
    ORACLE_MODES,
    Reproducer,
    property_bernoulli,
    property_cutoff_identity,
    property_digamma,
    property_geometric_series,
    property_lerch_shift,
    property_normalization,
    property_symmetry,
)


@pytest.mark.parametrize(
    "name",
    ["ideal-triangle", "ideal-force", "integral-equivalence", "denergy-sum-closed", "lerch-expansion", "casimir-coefficients"],
)
def test_fast_criteria_pass(name):
    result = Reproducer().run(name)
    assert result.passed, result.details
    assert result.to_dict()["name"] == name


@pytest.mark.parametrize(
    "prop",
    [
        property_normalization,
        property_lerch_shift,
        property_digamma,
        property_bernoulli,
        property_symmetry,
        property_cutoff_identity,
        property_geometric_series,
    ],
)
def test_properties_hold(prop, seed):
    assert prop(np.random.default_rng(seed)) == []


def test_properties_criterion_uses_three_seeds():
    result = Reproducer(seed=5).run("properties")
    assert result.passed
    assert result.details["seeds"] == [5, 6, 7]
    assert set(result.details["suites"]) == {"5", "6", "7"}


def test_unknown_criterion():
    with pytest.raises(DomainError):
        Reproducer().run("everything")


def test_failure_is_captured(monkeypatch):
    def exhausted(self):
        raise ResourceError("cap reached")

    monkeypatch.setattr(Reproducer, "_ideal_force", exhausted)
    result = Reproducer().run("ideal-force")
    assert not result.passed
    assert result.details == {"error": "ResourceError", "message": "cap reached"}


def test_summary_is_serializable_and_deterministic():
    first = Reproducer.summary([Reproducer().run("ideal-force")])
    second = Reproducer.summary([Reproducer().run("ideal-force")])
    assert first["passed"] is True
    assert dump_json(first) == dump_json(second)
    assert json.loads(dump_json(first))["criteria"]["ideal-force"]["passed"] is True


@pytest.mark.slow
@pytest.mark.parametrize("name", ["c0-log-warning", "oracle-chain", "denergy-coefficients"])
def test_fitting_and_oracle_criteria_pass(name):
    result = Reproducer().run(name)
    assert result.passed, result.details


def test_oracle_modes_grid():
    assert len(ORACLE_MODES) == 12
    assert {k_par for _, _, k_par in ORACLE_MODES} == {0.0, 1.0}
    assert {(polarization, m) for polarization, m, _ in ORACLE_MODES} == {(p, m) for p in (1, 2) for m in (1, 2, 3)}

