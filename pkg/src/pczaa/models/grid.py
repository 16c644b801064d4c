"""Lattice representation of piecewise-continuous functions.

A function in the class handled here is continuous on every unit piece
``[n, n+1)`` and has a left limit at every integer.  The representation
stores ``M`` samples per piece at ``t = n + j/M`` and, separately, one
left-limit slot per integer, so discontinuities at integers are never
smoothed over.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any

import numpy as np

from ..constants import LATTICE_TOLERANCE
from ..exceptions import DomainError
from ..utils import as_vectors, vector_norms
from .reports import NormReport
from .sequence import AASequence

__all__ = [
    "ClosedGridFunction",
    "GridFunction",
    "PieceRule",
    "TimeRule",
    "Window",
]

Window = tuple[int, int]
"""Integer bounds ``(n_lo, n_hi)`` of the represented domain."""

TimeRule = Callable[[np.ndarray], Any]
"""Vectorized map from an array of times to values."""

PieceRule = Callable[[int, np.ndarray], Any]
"""Vectorized map ``(n, t)`` giving values on the closed piece
``[n, n+1]``.
"""


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Sampled function with unit-interval pieces and explicit left limits.

    Parameters
    ----------
    window
        Represented domain ``[n_lo, n_hi]``; pieces are ``[n, n+1)`` for
        ``n_lo <= n < n_hi``.
    samples_per_unit
        Number ``M`` of lattice points per piece.
    values
        Interior samples, shape ``(n_hi - n_lo, M, dim)``; entry
        ``[i, j]`` is the value at ``n_lo + i + j/M``.
    left_limits
        Shape ``(n_hi - n_lo, dim)``; row ``i`` is ``f((n_lo + i + 1)^-)``.
    metadata
        Free-form numeric annotations recorded by the operation that built
        the function (truncation radius, Lipschitz constant).
    """

    window: Window
    samples_per_unit: int
    values: np.ndarray
    left_limits: np.ndarray
    metadata: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n_lo, n_hi = int(self.window[0]), int(self.window[1])
        if n_hi <= n_lo:
            raise DomainError(f"Window {self.window} contains no piece")
        if self.samples_per_unit < 1:
            raise DomainError("samples_per_unit must be positive")
        values = np.array(self.values, dtype=float)
        left = np.array(self.left_limits, dtype=float)
        pieces = n_hi - n_lo
        if values.ndim == 2:
            values = values[..., np.newaxis]
        if left.ndim == 1:
            left = left[..., np.newaxis]
        if values.shape[:2] != (pieces, self.samples_per_unit):
            raise DomainError(
                f"Interior values have shape {values.shape}, expected"
                f" ({pieces}, {self.samples_per_unit}, dim)"
            )
        if left.shape != (pieces, values.shape[2]):
            raise DomainError(
                "Need one left limit per integer in"
                f" ({n_lo}, {n_hi}], got shape {left.shape}"
            )
        if not (np.all(np.isfinite(values)) and np.all(np.isfinite(left))):
            raise DomainError("Samples and left limits must be finite")
        values.flags.writeable = False
        left.flags.writeable = False
        object.__setattr__(self, "window", (n_lo, n_hi))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "left_limits", left)
        object.__setattr__(
            self, "metadata", MappingProxyType(dict(self.metadata))
        )

    @classmethod
    def from_pieces(
        cls,
        rule: PieceRule,
        window: Window,
        samples_per_unit: int,
        dim: int = 1,
    ) -> GridFunction:
        """Sample a function given piece by piece.

        ``rule(n, t)`` is evaluated on the closed piece ``[n, n+1]``; the
        value it gives at ``n + 1`` becomes the left limit there.
        """
        n_lo, n_hi = window
        frac = np.arange(samples_per_unit + 1) / samples_per_unit
        values = np.empty((n_hi - n_lo, samples_per_unit, dim))
        left = np.empty((n_hi - n_lo, dim))
        for i, n in enumerate(range(n_lo, n_hi)):
            closed = as_vectors(rule(n, n + frac), samples_per_unit + 1, dim)
            values[i] = closed[:-1]
            left[i] = closed[-1]
        return cls(window, samples_per_unit, values, left)

    @classmethod
    def from_rule(
        cls,
        rule: TimeRule,
        window: Window,
        samples_per_unit: int,
        dim: int = 1,
    ) -> GridFunction:
        """Sample a continuous rule; left limits are the rule's values."""
        return cls.from_pieces(
            lambda n, t: rule(t), window, samples_per_unit, dim
        )

    @classmethod
    def constant(
        cls,
        value: float | np.ndarray,
        window: Window,
        samples_per_unit: int,
    ) -> GridFunction:
        vector = np.atleast_1d(np.asarray(value, dtype=float))
        pieces = window[1] - window[0]
        return cls(
            window,
            samples_per_unit,
            np.broadcast_to(vector, (pieces, samples_per_unit, len(vector))),
            np.broadcast_to(vector, (pieces, len(vector))),
        )

    @property
    def dim(self) -> int:
        return self.values.shape[2]

    @property
    def n_pieces(self) -> int:
        return self.values.shape[0]

    def lattice(self) -> np.ndarray:
        """Sample times, shape ``(pieces, M)``."""
        starts = np.arange(self.window[0], self.window[1])[:, np.newaxis]
        m = self.samples_per_unit
        return starts + np.arange(m) / m

    def closed_pieces(self) -> np.ndarray:
        """Samples of each piece closed with its left limit.

        Shape ``(pieces, M + 1, dim)``; the last column of row ``i`` is
        the left limit at ``n_lo + i + 1``.
        """
        return np.concatenate(
            [self.values, self.left_limits[:, np.newaxis, :]], axis=1
        )

    def evaluate(self, t: float, *, interpolate: bool = False) -> np.ndarray:
        """Value at ``t``.

        Parameters
        ----------
        t
            Time in ``[n_lo, n_hi)``.
        interpolate
            Allow ``t`` off the lattice.  Interpolation is linear inside a
            piece, using the left limit as the right anchor of the last
            lattice cell, and never crosses an integer.

        Raises
        ------
        DomainError
            Raised if ``t`` is outside the window, or off the lattice
            without ``interpolate``.
        """
        n_lo, n_hi = self.window
        if not n_lo <= t < n_hi:
            raise DomainError(f"t={t} outside [{n_lo}, {n_hi})")
        m = self.samples_per_unit
        n = math.floor(t)
        row = n - n_lo
        position = (t - n) * m
        j = round(position)
        if abs(position - j) <= LATTICE_TOLERANCE:
            if j == m:
                return self.left_limits[row].copy()
            return self.values[row, j].copy()
        if not interpolate:
            raise DomainError(f"t={t} is not a lattice point")
        j0 = math.floor(position)
        lo = self.values[row, j0]
        hi = self.values[row, j0 + 1] if j0 + 1 < m else self.left_limits[row]
        return lo + (position - j0) * (hi - lo)

    def left_limit(self, n: int) -> np.ndarray:
        """Stored ``f(n^-)``.

        Raises
        ------
        DomainError
            Raised unless ``n_lo < n <= n_hi``.
        """
        n_lo, n_hi = self.window
        if not n_lo < n <= n_hi:
            raise DomainError(f"No left limit at {n} for window {self.window}")
        return self.left_limits[n - n_lo - 1].copy()

    def jump_sizes(self) -> np.ndarray:
        """``|f(n) - f(n^-)|`` for each integer with ``n_lo < n < n_hi``."""
        return vector_norms(self.values[1:, 0, :] - self.left_limits[:-1])

    def norm_report(self) -> NormReport:
        """Sup norm over samples and left limits, plus the jump bound."""
        interior = vector_norms(self.values)
        limits = vector_norms(self.left_limits)
        i, j = np.unravel_index(np.argmax(interior), interior.shape)
        k = int(np.argmax(limits))
        if limits[k] > interior[i, j]:
            sup, at = limits[k], float(self.window[0] + k + 1)
        else:
            sup = interior[i, j]
            at = self.window[0] + int(i) + int(j) / self.samples_per_unit
        jumps = self.jump_sizes()
        return NormReport(
            sup_norm=float(sup),
            attained_at=at,
            jump_bound=float(jumps.max()) if jumps.size else 0.0,
        )

    def sup_norm(self) -> float:
        return max(
            float(vector_norms(self.values).max()),
            float(vector_norms(self.left_limits).max()),
        )

    def restrict(self, window: Window) -> GridFunction:
        """Copy of the representation on a sub-window.

        Raises
        ------
        DomainError
            Raised if ``window`` is empty or not inside this window.
        """
        lo, hi = window
        n_lo, n_hi = self.window
        if not n_lo <= lo < hi <= n_hi:
            raise DomainError(f"Window {window} not inside {self.window}")
        return GridFunction(
            (lo, hi),
            self.samples_per_unit,
            self.values[lo - n_lo : hi - n_lo],
            self.left_limits[lo - n_lo : hi - n_lo],
            self.metadata,
        )

    def restrict_to_integers(self) -> AASequence:
        """The sequence ``f(n)`` for ``n_lo <= n < n_hi``."""
        return AASequence(
            (self.window[0], self.window[1] - 1), self.values[:, 0, :]
        )

    def with_metadata(self, **metadata: float) -> GridFunction:
        return replace(self, metadata={**self.metadata, **metadata})

    def same_shape(self, other: GridFunction) -> bool:
        return (
            self.window == other.window
            and self.samples_per_unit == other.samples_per_unit
            and self.dim == other.dim
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridFunction):
            return NotImplemented
        return (
            self.same_shape(other)
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.left_limits, other.left_limits)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class ClosedGridFunction(GridFunction):
    """A representation whose pieces are read as closed intervals.

    On ``[n, n+1]`` the value at the right endpoint is ``f((n+1)^-)``, so
    every piece is continuous up to and including both ends.
    """

    def evaluate_closed(
        self, n: int, t: float, *, interpolate: bool = False
    ) -> np.ndarray:
        """Value of the closed piece ``[n, n+1]`` at ``t``.

        Raises
        ------
        DomainError
            Raised if the piece is not in the window or ``t`` is not in
            ``[n, n+1]``.
        """
        if not self.window[0] <= n < self.window[1]:
            raise DomainError(f"No piece starting at {n}")
        if not n <= t <= n + 1:
            raise DomainError(f"t={t} outside the piece [{n}, {n + 1}]")
        if t >= n + 1 - LATTICE_TOLERANCE / self.samples_per_unit:
            return self.left_limit(n + 1)
        return self.evaluate(t, interpolate=interpolate)
