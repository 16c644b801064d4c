"""Tests for pointwise algebra."""

from __future__ import annotations

import numpy as np
import pytest

from pczaa.exceptions import IncompatibleShapeError
from pczaa.fixtures import noise_samples
from pczaa.models.grid import GridFunction
from pczaa.services.algebra import (
    add,
    multiply,
    piecewise_constant_argument,
    poly_apply,
    scale,
)


def test_add_and_multiply(psi_step: GridFunction) -> None:
    total = add(psi_step, psi_step)
    assert total == scale(psi_step, 2.0)
    square = multiply(psi_step, psi_step)
    assert np.array_equal(square.left_limits, psi_step.left_limits**2)


def test_shape_mismatch() -> None:
    f = GridFunction.constant(1.0, (0, 4), 8)
    with pytest.raises(IncompatibleShapeError):
        add(f, GridFunction.constant(1.0, (0, 5), 8))
    with pytest.raises(IncompatibleShapeError):
        multiply(f, GridFunction.constant(1.0, (0, 4), 4))
    with pytest.raises(IncompatibleShapeError):
        add(f, GridFunction.constant([1.0, 2.0], (0, 4), 8))


def test_submultiplicative() -> None:
    for seed in range(100):
        f = noise_samples((0, 4), 16, 2 * seed)
        g = noise_samples((0, 4), 16, 2 * seed + 1)
        assert multiply(f, g).sup_norm() <= f.sup_norm() * g.sup_norm()


def test_poly_apply() -> None:
    x = GridFunction.from_rule(np.sin, (0, 3), 8)
    y = GridFunction.from_rule(np.cos, (0, 3), 8)
    # x^2 + y^2 = 1
    one = poly_apply([(1.0, (2, 0)), (1.0, (0, 2))], [x, y])
    np.testing.assert_allclose(one.values, 1.0, atol=1e-15)
    np.testing.assert_allclose(one.left_limits, 1.0, atol=1e-15)
    with pytest.raises(IncompatibleShapeError):
        poly_apply([(1.0, (1,))], [x, y])
    with pytest.raises(IncompatibleShapeError):
        poly_apply([(1.0, (1, 0))], [x, GridFunction.constant(0.0, (0, 2), 8)])


def test_piecewise_constant_argument() -> None:
    f = piecewise_constant_argument(np.sin, (-2, 3), 4)
    for n in range(-2, 3):
        assert np.all(f.values[n + 2] == f.left_limit(n + 1))
        assert f.left_limit(n + 1)[0] == pytest.approx(np.sin(n), abs=1e-15)


def test_triangle_unit_and_zero() -> None:
    one = GridFunction.constant(1.0, (0, 4), 16)
    zero = GridFunction.constant(0.0, (0, 4), 16)
    for seed in range(100):
        f = noise_samples((0, 4), 16, 2 * seed)
        g = noise_samples((0, 4), 16, 2 * seed + 1)
        assert add(f, g).sup_norm() <= f.sup_norm() + g.sup_norm()
        assert multiply(f, one) == f
        assert add(f, zero) == f
        assert multiply(f, zero).sup_norm() == 0.0
