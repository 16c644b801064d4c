"""Reference functions used by the demo, the CLI and the test suite."""

import numpy as np

from .constants import DEFAULT_SEED
from .models.grid import GridFunction, Window
from .models.sequence import AASequence

__all__ = [
    "noise_samples",
    "noise_sequence",
    "psi",
    "quasi_periodic",
]

_SQRT2 = np.sqrt(2.0)


def psi(t: np.ndarray) -> np.ndarray:
    """Almost automorphic but not almost periodic scalar function.

    ``psi(t) = sin(1 / (2 + cos t + cos(sqrt(2) t)))``.  The denominator
    never vanishes on the integers or on any lattice used here, but it
    comes arbitrarily close to zero, which is what destroys uniform
    recurrence.
    """
    t = np.asarray(t, dtype=float)
    return np.sin(1.0 / (2.0 + np.cos(t) + np.cos(_SQRT2 * t)))


def quasi_periodic(t: np.ndarray) -> np.ndarray:
    """``sin(2 pi t) + sin(2 pi sqrt(2) t)``."""
    t = np.asarray(t, dtype=float)
    return np.sin(2 * np.pi * t) + np.sin(2 * np.pi * _SQRT2 * t)


def noise_sequence(
    window: tuple[int, int], seed: int = DEFAULT_SEED
) -> AASequence:
    """Standard normal samples on the integers of ``window``."""
    rng = np.random.default_rng(seed)
    return AASequence(window, rng.standard_normal(window[1] - window[0] + 1))


def noise_samples(
    window: Window, samples_per_unit: int, seed: int = DEFAULT_SEED
) -> GridFunction:
    """Independent standard normal value at every lattice point.

    Left limits are drawn independently as well, so the result has a jump
    at almost every integer.
    """
    rng = np.random.default_rng(seed)
    pieces = window[1] - window[0]
    return GridFunction(
        window,
        samples_per_unit,
        rng.standard_normal((pieces, samples_per_unit)),
        rng.standard_normal(pieces),
    )
