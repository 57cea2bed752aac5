import pytest
from transformers.utils import logging

from casimir_piston.configuration import (
    RunConfig,
    env_verbosity,
    get_verbosity,
    parse_a_grid,
    parse_basis,
    set_verbosity,
)
from casimir_piston.errors import DomainError


def test_defaults():
    config = RunConfig()
    assert config.L == 1.0 and config.a == 0.5
    assert config.alpha is None
    assert config.format == "json"
    assert config.to_dict()["lambda"] == 1
    assert "polarization" not in config.to_dict()


def test_from_dict_maps_aliases_and_dashes():
    config = RunConfig.from_dict({"lambda": 2, "xi-min": 1e-4, "kpar": 3.0})
    assert config.polarization == 2
    assert config.xi_min == 1e-4
    assert config.kpar == 3.0


def test_from_dict_overrides_win():
    config = RunConfig.from_dict({"a": 0.3, "xi": 0.2}, a=0.6)
    assert config.a == 0.6 and config.xi == 0.2


def test_unknown_key():
    with pytest.raises(DomainError, match="Unknown configuration key"):
        RunConfig.from_dict({"piston": 0.3})


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(format="xml"),
        dict(L="one"),
        dict(a=float("nan")),
        dict(xi=float("inf")),
        dict(alpha=True),
        dict(polarization=3),
        dict(hbar_c=-1.0),
        dict(seed=1.5),
    ],
)
def test_validation(kwargs):
    with pytest.raises(DomainError):
        RunConfig(**kwargs)


def test_yaml_file(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("L: 2.0\na: 0.5\nlambda: 2\nprofile: const:0.1\n")
    config = RunConfig.from_yaml_file(path, a=0.8)
    assert config.L == 2.0
    assert config.a == 0.8
    assert config.polarization == 2
    assert config.profile == "const:0.1"


def test_yaml_file_errors(tmp_path):
    with pytest.raises(DomainError):
        RunConfig.from_yaml_file(tmp_path / "missing.yaml")
    broken = tmp_path / "broken.yaml"
    broken.write_text("a: [0.1\n")
    with pytest.raises(DomainError):
        RunConfig.from_yaml_file(broken)
    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n")
    with pytest.raises(DomainError, match="mapping"):
        RunConfig.from_yaml_file(listing)


def test_empty_yaml_gives_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    assert RunConfig.from_yaml_file(path) == RunConfig()


def test_replace():
    config = RunConfig().replace(xi=0.3)
    assert config.xi == 0.3
    with pytest.raises(DomainError):
        RunConfig().replace(format="yaml")


def test_parse_basis():
    assert parse_basis("-4,-3,-2,-1,0,log") == ((-4, -3, -2, -1, 0), True)
    assert parse_basis(" -4, 0 ") == ((-4, 0), False)


@pytest.mark.parametrize("text", ["-4,x,0", "-4,-4,0", "log", "-4,log,log", "", "-4,,0"])
def test_parse_basis_errors(text):
    with pytest.raises(DomainError):
        parse_basis(text)


def test_parse_a_grid():
    assert parse_a_grid("0.2:0.8:7") == pytest.approx([0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
    assert parse_a_grid("0.25:0.75:2") == [0.25, 0.75]


@pytest.mark.parametrize("text", ["0.2:0.8", "0.2:0.8:1", "0.8:0.2:5", "a:b:c", "0.2:0.8:2.5"])
def test_parse_a_grid_errors(text):
    with pytest.raises(DomainError):
        parse_a_grid(text)


@pytest.mark.parametrize("value, level", [("debug", logging.DEBUG), ("ERROR", logging.ERROR), ("", logging.WARNING)])
def test_env_verbosity(monkeypatch, value, level):
    monkeypatch.setenv("CASIMIR_PISTON_VERBOSITY", value)
    assert env_verbosity() == level


def test_env_verbosity_unknown_falls_back(monkeypatch):
    monkeypatch.setenv("CASIMIR_PISTON_VERBOSITY", "chatty")
    assert env_verbosity() == logging.WARNING


def test_set_verbosity_by_name():
    try:
        set_verbosity("info")
        assert get_verbosity() == logging.INFO
        with pytest.raises(DomainError):
            set_verbosity("chatty")
    finally:
        set_verbosity(logging.WARNING)
