"""Extensions of integer sequences to piecewise-continuous functions.

Three constructions are available.  The step extension ``S([t])`` is
Z-almost automorphic whenever ``S`` is almost automorphic but jumps at
every integer where ``S`` changes.  The linear extension interpolates
``S`` and is compact almost automorphic.  The two-segment extension
passes through a caller-supplied midpoint value on every piece, giving
other continuous extensions of the same sequence.
"""

from __future__ import annotations

from collections.abc import Callable
from enum import StrEnum

import numpy as np
import structlog

from ..constants import APP_NAME
from ..exceptions import ConfigurationError, DomainError
from ..models.grid import GridFunction, Window
from ..models.sequence import AASequence
from ..utils import as_vectors

__all__ = [
    "ExtensionKind",
    "MidpointRule",
    "extend",
    "linear_extension",
    "step_extension",
    "two_segment_extension",
]

MidpointRule = AASequence | Callable[[np.ndarray], np.ndarray]
"""Midpoint values ``m(n)`` on ``[n, n+1]``, as a sequence or a
vectorized map on integers.
"""

COLLINEAR_ULPS = 4
"""Units in the last place, relative to the larger endpoint, within which
a midpoint counts as lying on the chord of its piece.
"""


class ExtensionKind(StrEnum):
    """Available extension constructions."""

    STEP = "step"
    LINEAR = "linear"
    TWO_SEGMENT = "two-segment"


def _check_window(sequence: AASequence, window: Window | None) -> Window:
    if window is None:
        window = sequence.window
    lo, hi = window
    if hi <= lo:
        raise DomainError(f"Window {window} contains no piece")
    k_lo, k_hi = sequence.window
    if lo < k_lo or hi > k_hi:
        raise DomainError(
            f"Window {window} needs sequence values outside {sequence.window}"
        )
    return window


def step_extension(
    sequence: AASequence, samples_per_unit: int, window: Window | None = None
) -> GridFunction:
    """Build ``f(t) = S([t])``.

    Every piece is constant, so the left limit at ``n + 1`` is ``S(n)``.
    The window defaults to the sequence's window.
    """
    lo, hi = _check_window(sequence, window)
    base = sequence.take(lo, hi - 1)
    values = np.repeat(base[:, np.newaxis, :], samples_per_unit, axis=1)
    return GridFunction((lo, hi), samples_per_unit, values, base)


def linear_extension(
    sequence: AASequence, samples_per_unit: int, window: Window | None = None
) -> GridFunction:
    """Build ``f(t) = S(k) + (t - k)(S(k+1) - S(k))`` on ``[k, k+1)``.

    ``f(k) = S(k)`` and ``f(k^-) = S(k)`` hold exactly, so the result has
    no jumps on the lattice.
    """
    lo, hi = _check_window(sequence, window)
    start = sequence.take(lo, hi - 1)
    end = sequence.take(lo + 1, hi)
    frac = np.arange(samples_per_unit) / samples_per_unit
    values = start[:, np.newaxis, :] + frac[np.newaxis, :, np.newaxis] * (
        end - start
    )[:, np.newaxis, :]
    return GridFunction((lo, hi), samples_per_unit, values, end)


def two_segment_extension(
    sequence: AASequence,
    midpoint: MidpointRule,
    samples_per_unit: int,
    window: Window | None = None,
) -> GridFunction:
    """Join ``S(n)``, ``m(n)`` at ``n + 1/2`` and ``S(n+1)`` linearly.

    A piece whose midpoint value agrees with the linear extension's value
    at ``n + 1/2`` to within `COLLINEAR_ULPS` units in the last place of
    its endpoints is built with the linear formula, so collinear
    midpoints such as ``(S(n) + S(n+1)) / 2`` reproduce
    `linear_extension` sample for sample.

    Raises
    ------
    ConfigurationError
        Raised if ``samples_per_unit`` is odd, so ``n + 1/2`` would not be
        a lattice point.
    """
    if samples_per_unit % 2:
        raise ConfigurationError(
            f"Two-segment extension needs even M, got {samples_per_unit}"
        )
    lo, hi = _check_window(sequence, window)
    start = sequence.take(lo, hi - 1)
    end = sequence.take(lo + 1, hi)
    if isinstance(midpoint, AASequence):
        if midpoint.dim != sequence.dim:
            raise ConfigurationError("Midpoint and sequence dimensions differ")
        mid = midpoint.take(lo, hi - 1)
    else:
        n = np.arange(lo, hi, dtype=float)
        mid = as_vectors(midpoint(n), len(n), sequence.dim)
    if not np.all(np.isfinite(mid)):
        raise ConfigurationError("Midpoint values must be finite")

    frac = (np.arange(samples_per_unit) / samples_per_unit)[
        np.newaxis, :, np.newaxis
    ]
    first = start[:, np.newaxis, :] + 2 * frac * (mid - start)[
        :, np.newaxis, :
    ]
    second = mid[:, np.newaxis, :] + 2 * (frac - 0.5) * (end - mid)[
        :, np.newaxis, :
    ]
    values = np.where(frac < 0.5, first, second)

    scale = np.maximum(np.abs(start), np.abs(end))
    slack = COLLINEAR_ULPS * np.finfo(float).eps * scale
    linear_mid = start + 0.5 * (end - start)
    collinear = np.all(np.abs(mid - linear_mid) <= slack, axis=1)
    if np.any(collinear):
        linear = start[:, np.newaxis, :] + frac * (end - start)[
            :, np.newaxis, :
        ]
        values[collinear] = linear[collinear]
    structlog.get_logger(APP_NAME).debug(
        "Built two-segment extension",
        window=(lo, hi),
        collinear_pieces=int(collinear.sum()),
    )
    return GridFunction((lo, hi), samples_per_unit, values, end)


def extend(
    sequence: AASequence,
    kind: ExtensionKind,
    samples_per_unit: int,
    window: Window | None = None,
    midpoint: MidpointRule | None = None,
) -> GridFunction:
    """Dispatch to the constructor named by ``kind``."""
    match kind:
        case ExtensionKind.STEP:
            return step_extension(sequence, samples_per_unit, window)
        case ExtensionKind.LINEAR:
            return linear_extension(sequence, samples_per_unit, window)
        case ExtensionKind.TWO_SEGMENT:
            if midpoint is None:
                raise ConfigurationError(
                    "Two-segment extension needs midpoint values"
                )
            return two_segment_extension(
                sequence, midpoint, samples_per_unit, window
            )
