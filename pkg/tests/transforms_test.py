"""Tests for convolution operators and the heat solver."""

from __future__ import annotations

import math

import numpy as np
import pytest

from pczaa.exceptions import ConfigurationError, DomainError
from pczaa.models.grid import GridFunction
from pczaa.models.kernel import (
    HeatKernel,
    exponential_kernel,
    exponential_operator_kernel,
    gaussian_kernel,
)
from pczaa.services.algebra import add, scale
from pczaa.services.diagnostics import recurrence_defect
from pczaa.services.transforms import (
    compose_lipschitz,
    conv_causal,
    conv_full_line,
    conv_halfline_asymptotic,
    heat_solve,
)


def _max_error(f: GridFunction, exact: GridFunction) -> float:
    return max(
        float(np.abs(f.values - exact.values).max()),
        float(np.abs(f.left_limits - exact.left_limits).max()),
    )


def test_radius() -> None:
    assert gaussian_kernel(1.0).radius(1e-8) == 6
    assert exponential_kernel().radius(1e-8) == 19
    with pytest.raises(ConfigurationError):
        exponential_kernel().radius(0.0)


def test_gaussian_on_sine() -> None:
    f = GridFunction.from_rule(lambda t: np.sin(2 * np.pi * t), (-16, 16), 64)
    out = conv_full_line(gaussian_kernel(1.0), f)
    assert out.window == (-10, 10)
    assert out.metadata["radius"] == 6.0
    decay = math.exp(-2 * math.pi**2)
    exact = GridFunction.from_rule(
        lambda t: decay * np.sin(2 * np.pi * t), (-10, 10), 64
    )
    assert _max_error(out, exact) <= 1e-6


def test_full_line_smooths_jumps(psi_step: GridFunction) -> None:
    out = conv_full_line(gaussian_kernel(0.5), psi_step)
    assert out.norm_report().jump_bound <= 1e-6


def test_window_too_short() -> None:
    f = GridFunction.constant(1.0, (0, 8), 16)
    with pytest.raises(DomainError) as excinfo:
        conv_full_line(gaussian_kernel(1.0), f)
    assert excinfo.value.required_radius == 6


def test_odd_samples_rejected() -> None:
    f = GridFunction.constant(1.0, (-16, 16), 15)
    with pytest.raises(ConfigurationError):
        conv_full_line(gaussian_kernel(1.0), f)


def test_support_mismatch() -> None:
    f = GridFunction.constant(1.0, (0, 32), 16)
    with pytest.raises(ConfigurationError):
        conv_full_line(exponential_kernel(), f)
    with pytest.raises(ConfigurationError):
        conv_causal(gaussian_kernel(1.0), f)


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0, 4.0])
def test_heat_mass(t: float) -> None:
    assert HeatKernel(t).mass(64) == pytest.approx(1.0, abs=1e-10)


def test_heat_solve() -> None:
    u0 = GridFunction.from_rule(np.sin, (-32, 32), 64)
    u = heat_solve(u0, 0.5)
    exact = GridFunction.from_rule(
        lambda x: math.exp(-0.5) * np.sin(x), u.window, 64
    )
    assert _max_error(u, exact) <= 1e-6


def test_heat_rejects(psi_step: GridFunction) -> None:
    with pytest.raises(DomainError):
        heat_solve(psi_step, 0.5)
    with pytest.raises(DomainError):
        HeatKernel(0.0)


def test_causal_exponential() -> None:
    wave = GridFunction.from_rule(
        lambda t: np.stack([np.cos(t), np.sin(t)], axis=-1),
        (-32, 16),
        64,
        dim=2,
    )
    out = conv_causal(exponential_kernel(), wave)
    assert out.window == (-13, 16)
    exact = GridFunction.from_rule(
        lambda t: np.stack(
            [np.cos(t) + np.sin(t), np.sin(t) - np.cos(t)], axis=-1
        )
        / 2,
        out.window,
        64,
        dim=2,
    )
    assert _max_error(out, exact) <= 1e-6


def test_halfline_ones() -> None:
    ones = GridFunction.constant(1.0, (0, 16), 64)
    out = conv_halfline_asymptotic(exponential_kernel(), ones)
    assert out.window == (0, 16)
    assert out.evaluate(0.0)[0] == 0.0
    exact = GridFunction.from_rule(lambda t: -np.expm1(-t), (0, 16), 64)
    assert _max_error(out, exact) <= 1e-8

    with pytest.raises(DomainError):
        conv_halfline_asymptotic(
            exponential_kernel(), GridFunction.constant(1.0, (-1, 4), 64)
        )


def test_halfline_operator_kernel() -> None:
    kernel = exponential_operator_kernel(np.diag([-1.0, -2.0]))
    ones = GridFunction.constant([1.0, 1.0], (0, 8), 64)
    out = conv_halfline_asymptotic(kernel, ones)
    exact = GridFunction.from_rule(
        lambda t: np.stack([-np.expm1(-t), -np.expm1(-2 * t) / 2], axis=-1),
        (0, 8),
        64,
        dim=2,
    )
    assert _max_error(out, exact) <= 1e-7
    with pytest.raises(ConfigurationError):
        exponential_operator_kernel(np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_compose_lipschitz(psi_step: GridFunction) -> None:
    out = compose_lipschitz(lambda t, x: np.abs(x), psi_step, 1.0)
    assert out.metadata["lipschitz"] == 1.0
    assert np.array_equal(out.values, np.abs(psi_step.values))
    assert np.array_equal(out.left_limits, np.abs(psi_step.left_limits))

    # A rule that jumps in t reads its left branch at the integers.
    ramp = GridFunction.constant(0.0, (0, 3), 4)
    stepped = compose_lipschitz(lambda t, x: np.floor(t), ramp, 0.0)
    assert np.array_equal(stepped.left_limits[:, 0], [0.0, 1.0, 2.0])
    with pytest.raises(ConfigurationError):
        compose_lipschitz(lambda t, x: x, ramp, -1.0)


def test_l1_norm() -> None:
    assert exponential_kernel().l1_norm(64, 19) == pytest.approx(
        -math.expm1(-19), abs=1e-9
    )
    assert gaussian_kernel(1.0).l1_norm(64, 6) == pytest.approx(1, abs=1e-8)
    kernel = exponential_operator_kernel(np.diag([-1.0, -2.0]))
    assert kernel.l1_norm(64, 8) == pytest.approx(-math.expm1(-8), abs=1e-8)


def test_causal_constant() -> None:
    threes = GridFunction.constant(3.0, (-32, 16), 64)
    out = conv_causal(exponential_kernel(), threes)
    exact = GridFunction.constant(3.0, out.window, 64)
    assert _max_error(out, exact) <= 4e-8


def test_halfline_exponential() -> None:
    decay = GridFunction.from_rule(lambda t: np.exp(-t), (0, 16), 64)
    out = conv_halfline_asymptotic(exponential_kernel(), decay)
    exact = GridFunction.from_rule(lambda t: t * np.exp(-t), (0, 16), 64)
    assert _max_error(out, exact) <= 1e-8


def test_full_line_linear(
    psi_linear: GridFunction, psi_step: GridFunction
) -> None:
    kernel = gaussian_kernel(1.0)
    combined = conv_full_line(
        kernel, add(scale(psi_linear, 2.0), scale(psi_step, -0.5))
    )
    separate = add(
        scale(conv_full_line(kernel, psi_linear), 2.0),
        scale(conv_full_line(kernel, psi_step), -0.5),
    )
    assert _max_error(combined, separate) <= 2e-8


def test_constants_preserved() -> None:
    threes = GridFunction.constant(3.0, (-32, 32), 64)
    full = conv_full_line(gaussian_kernel(1.0), threes)
    exact = GridFunction.constant(3.0, full.window, 64)
    assert _max_error(full, exact) <= 3e-8
    heated = heat_solve(threes, 0.5)
    exact = GridFunction.constant(3.0, heated.window, 64)
    assert _max_error(heated, exact) <= 3e-8


def test_heat_maximum_principle(psi_linear: GridFunction) -> None:
    u = heat_solve(psi_linear, 1.0)
    closed = psi_linear.closed_pieces()
    heated = u.closed_pieces()
    assert heated.max() <= closed.max() + 1e-8
    assert heated.min() >= closed.min() - 1e-8


@pytest.mark.parametrize("s", range(1, 17))
def test_full_line_contracts_defect(psi_linear: GridFunction, s: int) -> None:
    kernel = gaussian_kernel(1.0)
    out = conv_full_line(kernel, psi_linear)
    assert out.window == (-26, 26)
    norm = kernel.l1_norm(psi_linear.samples_per_unit, 6)
    smoothed = recurrence_defect(out, s, (-10, 10)).defect
    # The output on (-10, 10) reads the input on (-16, 16).
    original = recurrence_defect(psi_linear, s, (-16, 16)).defect
    slack = 2 * 1e-8 * psi_linear.sup_norm()
    assert smoothed <= norm * original + slack


@pytest.mark.parametrize("s", range(1, 17))
def test_compose_lipschitz_contracts_defect(
    psi_linear: GridFunction, s: int
) -> None:
    out = compose_lipschitz(lambda t, x: np.sin(x), psi_linear, 1.0)
    composed = recurrence_defect(out, s, (-16, 16)).defect
    original = recurrence_defect(psi_linear, s, (-16, 16)).defect
    assert composed <= original + 1e-15
