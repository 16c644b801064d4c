"""Tests for the DEPCA solvers."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
import pytest
import scipy.optimize

from pczaa.exceptions import (
    ConfigurationError,
    IllPosedError,
    IncompatibleShapeError,
    NonConvergenceError,
    UnsupportedCaseError,
)
from pczaa.fixtures import psi
from pczaa.models.depca import DepcaSystem
from pczaa.services.depca import (
    bounded_solution,
    fundamental_matrix,
    lasota_wazewska,
    picard_bounded_solution,
    reduce_to_difference,
    solve_ivp,
)
from pczaa.utils import expm1_ratio


def test_fundamental_matrix() -> None:
    phi = fundamental_matrix(-0.5, 3, 64)
    assert phi(3.0, 3.0)[0, 0] == 1.0
    assert phi(4.0, 3.0)[0, 0] == pytest.approx(math.exp(-0.5), rel=1e-9)
    assert phi(3.5, 4.0)[0, 0] == pytest.approx(math.exp(0.25), rel=1e-9)

    rotation = fundamental_matrix(np.array([[0.0, 1.0], [-1.0, 0.0]]), 0)
    np.testing.assert_allclose(
        rotation(1.0, 0.0),
        [[math.cos(1), math.sin(1)], [-math.sin(1), math.cos(1)]],
        atol=1e-10,
    )


@pytest.mark.parametrize(
    ("a", "b"), [(1.0, 0.5), (-1.0, 0.25), (1e-8, 0.5), (0.0, 0.0)]
)
def test_reduction_constant(a: float, b: float) -> None:
    system = DepcaSystem(1, a, b, 0.0)
    reduced = reduce_to_difference(system, (0, 2))
    expected = math.exp(a) + b * expm1_ratio(a)
    assert reduced.c_at(1)[0, 0] == pytest.approx(expected, abs=1e-9)
    assert reduced.h_at(0)[0] == 0.0
    assert np.all(reduced.certificates > 0)


def test_reduction_forcing() -> None:
    # y' = f gives h(n) = ∫_n^{n+1} f.
    system = DepcaSystem(1, 0.0, 0.0, np.cos)
    reduced = reduce_to_difference(system, (0, 1))
    assert reduced.h_at(0)[0] == pytest.approx(math.sin(1), abs=1e-10)
    assert reduced.step(0, np.array([1.0]))[0] == pytest.approx(
        1 + math.sin(1), abs=1e-10
    )


def test_ill_posed() -> None:
    # I + ∫ B vanishes across a whole piece when A = 0 and B = -1.
    system = DepcaSystem(1, 0.0, -1.0, 0.0)
    with pytest.raises(IllPosedError) as excinfo:
        reduce_to_difference(system, (2, 4))
    assert excinfo.value.interval == 2
    reduced = reduce_to_difference(system, (2, 4), check_certificates=False)
    assert reduced.c_at(2)[0, 0] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(IllPosedError):
        solve_ivp(system, 1.0, (0, 2), backward=True)


def test_solve_ivp_decay() -> None:
    system = DepcaSystem(1, -1.0, 0.0, 0.0)
    solution = solve_ivp(system, 1.0, (0, 4))
    expected = np.exp(-np.arange(5.0))
    np.testing.assert_allclose(
        solution.integer_values.values[:, 0], expected, rtol=1e-9
    )
    assert solution.continuity_defect <= 1e-12
    assert solution.report.max_residual <= 1e-4
    assert solution.trajectory.window == (0, 4)
    assert solution.uc is None

    back = solve_ivp(system, expected[-1], (0, 4), backward=True)
    assert back.integer_values.values[0, 0] == pytest.approx(1.0, rel=1e-9)

    with pytest.raises(IncompatibleShapeError):
        solve_ivp(system, np.array([1.0, 2.0]), (0, 4))


def test_solve_ivp_piecewise_argument() -> None:
    # y' = y([t]) from y(0) = 1 doubles at every integer.
    system = DepcaSystem(1, 0.0, 1.0, 0.0)
    solution = solve_ivp(system, 1.0, (0, 5), 64)
    np.testing.assert_allclose(
        solution.integer_values.values[:, 0], 2.0 ** np.arange(6), rtol=1e-12
    )
    assert solution.trajectory.evaluate(0.5)[0] == pytest.approx(1.5)


def test_bounded_constant() -> None:
    solution = bounded_solution(DepcaSystem(1, -1.0, 0.0, 2.0), (-8, 8))
    np.testing.assert_allclose(
        solution.integer_values.values, 2.0, atol=1e-7
    )
    assert solution.uc is not None


def test_bounded_unstable() -> None:
    # y' = y - 1 has the single bounded solution y = 1.
    solution = bounded_solution(DepcaSystem(1, 1.0, 0.0, -1.0), (-4, 4))
    np.testing.assert_allclose(
        solution.integer_values.values, 1.0, atol=1e-7
    )


def test_bounded_shadows_ivp() -> None:
    system = DepcaSystem(1, -1.0, 0.5, psi)
    bounded = bounded_solution(system, (-8, 8), 128)
    ivp = solve_ivp(system, 3.0, (-200, 8), 128)
    np.testing.assert_allclose(
        bounded.integer_values.values,
        ivp.integer_values.values[-17:],
        atol=1e-6,
    )
    assert bounded.continuity_defect <= 1e-9


def test_bounded_needs_dichotomy() -> None:
    with pytest.raises(UnsupportedCaseError):
        bounded_solution(DepcaSystem(1, 0.0, 0.0, 1.0), (0, 4))
    coupled = np.array([[-1.0, 0.5], [0.0, -2.0]])
    with pytest.raises(UnsupportedCaseError):
        bounded_solution(DepcaSystem(2, coupled, 0.0, 0.0), (0, 4))


def test_lasota_wazewska() -> None:
    root = scipy.optimize.brentq(
        lambda y: y - math.exp(-0.5 * y), 0.0, 1.0, xtol=1e-15
    )
    solution = lasota_wazewska(1.0, 1.0, 0.5, (-8, 8), 128)
    np.testing.assert_allclose(
        solution.integer_values.values, root, atol=1e-8
    )
    assert solution.report.contraction == pytest.approx(0.5, rel=1e-6)
    assert solution.iterations[-1] <= 1e-10
    assert len(solution.iterations) >= 2


def test_lasota_wazewska_linear() -> None:
    solution = lasota_wazewska(2.0, 1.0, 0.0, (-8, 8), 128)
    np.testing.assert_allclose(
        solution.integer_values.values, 0.5, atol=1e-8
    )
    assert solution.report.contraction == 0.0


def test_lasota_wazewska_rejects() -> None:
    with pytest.raises(ConfigurationError):
        lasota_wazewska(-1.0, 1.0, 0.5, (0, 4))
    with pytest.raises(ConfigurationError):
        lasota_wazewska(1.0, -1.0, 0.5, (0, 4))
    with pytest.raises(ConfigurationError):
        lasota_wazewska(1.0, 1.0, -0.5, (0, 4))
    with pytest.raises(UnsupportedCaseError):
        lasota_wazewska(1.0, 1.0, 5.0, (0, 4))


def test_picard_budget() -> None:
    system = DepcaSystem(1, -1.0, 0.0, 0.0)
    with pytest.raises(NonConvergenceError) as excinfo:
        picard_bounded_solution(
            system,
            lambda t, x: 1 + 0.5 * np.sin(x[:, 0]),
            0.5,
            (0, 4),
            64,
            max_iter=2,
            tol=1e-15,
        )
    assert excinfo.value.iterations == 2
    assert excinfo.value.contraction == pytest.approx(0.5, rel=1e-6)


@pytest.mark.parametrize(
    ("a", "b", "expected"),
    [
        (1.0, 0.5, math.e + 0.5 * math.expm1(1.0)),
        (lambda t: -1 + 0.5 * t, 0.0, math.exp(-0.75)),
    ],
)
def test_reduction_fourth_order(
    a: float | Callable[[np.ndarray], np.ndarray], b: float, expected: float
) -> None:
    system = DepcaSystem(1, a, b, 0.0)
    errors = [
        abs(reduce_to_difference(system, (0, 1), steps).c[0, 0, 0] - expected)
        for steps in (4, 8, 16)
    ]
    assert errors[0] / errors[1] >= 8
    assert errors[1] / errors[2] >= 8


def test_fundamental_matrix_cocycle() -> None:
    flow = fundamental_matrix(
        lambda t: np.array(
            [[-t, np.ones_like(t)], [-np.ones_like(t), np.sin(t)]]
        ).transpose(2, 0, 1),
        0,
        64,
        dim=2,
    )
    np.testing.assert_allclose(
        flow(1.0, 0.5) @ flow(0.5, 0.25),
        flow(1.0, 0.25),
        atol=1e-8,
    )


def test_ivp_matches_difference_equation() -> None:
    system = DepcaSystem(1, -1.0, 0.5, psi)
    reduced = reduce_to_difference(system, (0, 8), 128)
    solution = solve_ivp(system, 1.0, (0, 8), 128)
    values = solution.integer_values.values
    for n in range(8):
        assert abs(values[n + 1] - reduced.step(n, values[n]))[0] <= 1e-9


def test_ivp_with_piecewise_argument() -> None:
    # y' = y + 0.5 y([t]) from y(0) = 1 reaches e + 0.5 (e - 1).
    solution = solve_ivp(DepcaSystem(1, 1.0, 0.5, 0.0), 1.0, (0, 1))
    assert solution.integer_values.values[1, 0] == pytest.approx(
        math.e + 0.5 * math.expm1(1.0), abs=1e-8
    )


@pytest.mark.parametrize(
    ("a", "f", "steps"), [(-3.0, 30.0, 256), (-1.0, 5.0, 64)]
)
def test_bounded_equilibrium(a: float, f: float, steps: int) -> None:
    solution = bounded_solution(DepcaSystem(1, a, 0.0, f), (-8, 8), steps)
    np.testing.assert_allclose(
        solution.integer_values.values, -f / a, atol=1e-7
    )
    np.testing.assert_allclose(
        solution.trajectory.values, -f / a, atol=1e-7
    )


def test_lasota_wazewska_differences_contract() -> None:
    solution = lasota_wazewska(1.0, 1.0, 0.5, (-8, 8), 128)
    contraction = solution.report.contraction
    differences = solution.iterations
    for before, after in zip(differences, differences[1:], strict=False):
        if before > 1e-12:
            assert after <= contraction * before + 1e-14
