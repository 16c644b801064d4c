"""Tests for run configuration and coefficient parsing."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from pczaa.exceptions import ConfigurationError
from pczaa.fixtures import psi
from pczaa.models.config import ConvMode, RunConfig, Subcommand
from pczaa.services.coefficients import parse_coefficient, parse_kernel


def test_defaults() -> None:
    config = RunConfig.build(command="conv")
    assert config.command is Subcommand.CONV
    assert config.conv_mode is ConvMode.FULL
    assert config.precision == 17
    assert config.window == (-32, 32)
    assert "window" not in config.model_fields_set


def test_validation() -> None:
    with pytest.raises(ConfigurationError):
        RunConfig.build(command="depca", steps=7)
    with pytest.raises(ConfigurationError):
        RunConfig.build(command="depca", window=(3, 3))
    with pytest.raises(ConfigurationError):
        RunConfig.build(command="demo", precision=0)
    with pytest.raises(ConfigurationError):
        RunConfig.build(command="demo", colour="red")
    with pytest.raises(ConfigurationError):
        RunConfig.build(command="launch")


def test_from_config(tmp_path: Path) -> None:
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"command": "heat", "kernel": "gauss:2"}))
    config = RunConfig.from_config(path, trunc_eps=1e-6)
    assert config.kernel == "gauss:2"
    assert config.trunc_eps == 1e-6

    path.write_text("[1, 2]")
    with pytest.raises(ConfigurationError):
        RunConfig.from_config(path)
    path.write_text("{")
    with pytest.raises(ConfigurationError):
        RunConfig.from_config(path)


def test_parse_coefficient() -> None:
    t = np.array([0.0, 0.5, 2.25])
    assert np.array_equal(parse_coefficient("-1.5")(t), [-1.5] * 3)
    assert np.array_equal(parse_coefficient("psi")(t), psi(t))
    assert np.array_equal(
        parse_coefficient("psi-step")(t), psi(np.array([0.0, 0.0, 2.0]))
    )
    assert np.array_equal(
        parse_coefficient("2*sin:3")(t), 2 * np.sin(3 * t)
    )
    for bad in ("tan:1", "sin:x", "x*psi", "psi:2"):
        with pytest.raises(ConfigurationError):
            parse_coefficient(bad)


def test_parse_kernel() -> None:
    assert parse_kernel("gauss:0.5") == ("gauss", 0.5)
    assert parse_kernel("exp") == ("exp", 1.0)
    assert parse_kernel("exp:2") == ("exp", 2.0)
    for bad in ("gauss", "gauss:-1", "cauchy:1", "exp:x"):
        with pytest.raises(ConfigurationError):
            parse_kernel(bad)
