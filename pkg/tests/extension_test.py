"""Tests for sequence extensions."""

from __future__ import annotations

import numpy as np
import pytest

from pczaa.exceptions import ConfigurationError, DomainError
from pczaa.models.grid import GridFunction
from pczaa.models.sequence import AASequence
from pczaa.services.diagnostics import uc_modulus
from pczaa.services.extension import (
    ExtensionKind,
    extend,
    linear_extension,
    step_extension,
    two_segment_extension,
)


def _midpoints(sequence: AASequence) -> list[AASequence]:
    start, end = sequence.values[:-1], sequence.values[1:]
    window = (sequence.window[0], sequence.window[1] - 1)
    return [
        AASequence(window, (start + end) / 2),
        AASequence(window, start + 0.5 * (end - start)),
    ]


def test_integer_values_exact(psi_sequence: AASequence) -> None:
    base = psi_sequence.take(-32, 31)
    for f in (
        step_extension(psi_sequence, 16),
        linear_extension(psi_sequence, 16),
    ):
        assert np.array_equal(f.restrict_to_integers().values, base)


def test_linear_has_no_jumps(psi_linear: GridFunction) -> None:
    assert psi_linear.norm_report().jump_bound == 0.0
    assert psi_linear.left_limit(5)[0] == psi_linear.evaluate(5.0)[0]


def test_step_jumps(psi_sequence: AASequence, psi_step: GridFunction) -> None:
    expected = np.abs(np.diff(psi_sequence.take(-32, 31)[:, 0]))
    np.testing.assert_allclose(psi_step.jump_sizes(), expected, rtol=1e-15)


def test_two_segment_collinear(psi_sequence: AASequence) -> None:
    linear = linear_extension(psi_sequence, 64)
    for midpoint in _midpoints(psi_sequence):
        assert two_segment_extension(psi_sequence, midpoint, 64) == linear

    # A midpoint off the chord by more than rounding bends the piece.
    bent = _midpoints(psi_sequence)[0].values + 1e-12
    window = (psi_sequence.window[0], psi_sequence.window[1] - 1)
    f = two_segment_extension(psi_sequence, AASequence(window, bent), 64)
    assert f != linear


def test_two_segment_midpoint(psi_sequence: AASequence) -> None:
    f = two_segment_extension(psi_sequence, lambda n: np.full(len(n), 5.0), 4)
    assert f.evaluate(0.5)[0] == 5.0
    assert f.evaluate(0.0)[0] == psi_sequence[0][0]
    assert f.left_limit(1)[0] == psi_sequence[1][0]
    assert f.norm_report().jump_bound == 0.0


def test_two_segment_needs_even_m(psi_sequence: AASequence) -> None:
    with pytest.raises(ConfigurationError):
        two_segment_extension(psi_sequence, _midpoints(psi_sequence)[0], 5)


def test_window(psi_sequence: AASequence) -> None:
    f = step_extension(psi_sequence, 4, (0, 8))
    assert f.window == (0, 8)
    with pytest.raises(DomainError):
        linear_extension(psi_sequence, 4, (0, 40))
    with pytest.raises(DomainError):
        step_extension(psi_sequence, 4, (3, 3))


def test_extend_dispatch(psi_sequence: AASequence) -> None:
    assert extend(psi_sequence, ExtensionKind.STEP, 4) == step_extension(
        psi_sequence, 4
    )
    with pytest.raises(ConfigurationError):
        extend(psi_sequence, ExtensionKind.TWO_SEGMENT, 4)


def test_two_segment_tent() -> None:
    zeros = AASequence((0, 1), np.zeros(2))
    f = two_segment_extension(zeros, lambda n: np.ones(len(n)), 4)
    assert f.evaluate(0.25)[0] == 0.5
    assert f.evaluate(0.5)[0] == 1.0
    assert f.left_limit(1)[0] == 0.0


def test_linear_modulus_bound(
    psi_sequence: AASequence, psi_linear: GridFunction
) -> None:
    bound = 4 * float(np.abs(psi_sequence.values).max())
    for delta, omega in uc_modulus(psi_linear).modulus_table:
        assert omega <= bound * delta + 1e-12
