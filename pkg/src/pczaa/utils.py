"""Small numerical helpers shared across pczaa."""

import math

import numpy as np
import scipy.integrate

from .exceptions import ConfigurationError, IncompatibleShapeError

__all__ = [
    "as_vectors",
    "composite_weights",
    "expm1_ratio",
    "simpson_weights",
    "vector_norms",
]


def as_vectors(values: object, count: int, dim: int) -> np.ndarray:
    """Coerce rule output to a ``(count, dim)`` float array.

    Scalar rules may return shape ``(count,)`` or a bare scalar, which is
    broadcast; vector rules must return ``(count, dim)``.

    Raises
    ------
    IncompatibleShapeError
        Raised if the output cannot be read as ``count`` vectors of
        length ``dim``.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return np.full((count, dim), float(arr))
    if arr.ndim == 1 and dim == 1 and arr.shape[0] == count:
        return arr.reshape(count, 1)
    if arr.ndim == 1 and arr.shape[0] == dim:
        return np.broadcast_to(arr, (count, dim)).copy()
    if arr.shape != (count, dim):
        raise IncompatibleShapeError(
            f"Expected {count} vectors of dimension {dim}, got {arr.shape}"
        )
    return arr


def vector_norms(values: np.ndarray) -> np.ndarray:
    """Euclidean norms along the last axis."""
    return np.sqrt(np.sum(values * values, axis=-1))


def simpson_weights(intervals: int) -> np.ndarray:
    """Composite Simpson weights for ``intervals`` unit-spaced intervals.

    The weights integrate over ``[0, intervals]``; scale by the spacing.

    Raises
    ------
    ConfigurationError
        Raised if ``intervals`` is not a positive even number.
    """
    if intervals < 2 or intervals % 2:
        raise ConfigurationError(
            f"Simpson needs a positive even interval count, got {intervals}"
        )
    panel, _ = scipy.integrate.newton_cotes(2, 1)
    weights = np.zeros(intervals + 1)
    for start in range(0, intervals, 2):
        weights[start : start + 3] += panel
    return weights


def composite_weights(intervals: int) -> np.ndarray:
    """Weights for at least two unit-spaced intervals.

    Even counts use composite Simpson; odd counts use Simpson on all but
    the last three intervals and the 3/8 rule on those.
    """
    if intervals < 2:
        raise ConfigurationError(
            f"Need at least two intervals, got {intervals}"
        )
    if intervals % 2 == 0:
        return simpson_weights(intervals)
    weights = np.zeros(intervals + 1)
    head = intervals - 3
    if head:
        weights[: head + 1] = simpson_weights(head)
    tail, _ = scipy.integrate.newton_cotes(3, 1)
    weights[head:] += tail
    return weights


def expm1_ratio(a: float) -> float:
    """Return ``(e^a - 1) / a`` without cancellation near zero."""
    if abs(a) < 1e-6:
        return 1.0 + a / 2.0 + a * a / 6.0
    return math.expm1(a) / a
