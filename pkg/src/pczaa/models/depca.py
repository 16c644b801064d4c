"""Data types for differential equations with piecewise constant argument.

The linear equation handled here is

    y'(t) = A(t) y(t) + B(t) y([t]) + f(t)

on a window of unit pieces.  A solution is continuous everywhere; on
each piece it is determined by its value at the left integer.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

import numpy as np

from ..exceptions import DomainError, IncompatibleShapeError
from ..utils import as_vectors
from .grid import GridFunction, Window
from .reports import ResidualReport, UCReport
from .sequence import AASequence

__all__ = [
    "CoefficientRegularity",
    "Coefficient",
    "DepcaSolution",
    "DepcaSystem",
    "DifferenceSystem",
    "FundamentalMatrix",
    "as_matrices",
]

Coefficient = Callable[[np.ndarray], Any] | float | np.ndarray
"""A constant, or a vectorized map from times to values."""


def as_matrices(values: object, count: int, dim: int) -> np.ndarray:
    """Coerce coefficient output to a ``(count, dim, dim)`` array.

    Scalars and single matrices are broadcast; scalar systems may return
    shape ``(count,)``.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        return np.full((count, dim, dim), float(arr))
    if arr.ndim == 1 and dim == 1 and arr.shape[0] == count:
        return arr.reshape(count, 1, 1)
    if arr.shape == (dim, dim):
        return np.broadcast_to(arr, (count, dim, dim)).copy()
    if arr.shape != (count, dim, dim):
        raise IncompatibleShapeError(
            f"Expected {count} matrices of size {dim}, got {arr.shape}"
        )
    return arr


def _sample(coefficient: Coefficient, t: np.ndarray) -> object:
    if callable(coefficient):
        return coefficient(t)
    return coefficient


class CoefficientRegularity(StrEnum):
    """How the coefficients behave at the integers."""

    CONTINUOUS = "continuous"
    PIECEWISE = "piecewise-continuous-at-integers"


@dataclass(frozen=True)
class DepcaSystem:
    """Coefficients of a linear DEPCA.

    Parameters
    ----------
    dim
        State dimension ``p``.
    a
        Coefficient of ``y(t)``; ``p x p`` matrices.
    b
        Coefficient of ``y([t])``; ``p x p`` matrices.
    forcing
        Inhomogeneity ``f(t)``; ``p``-vectors.
    regularity
        With piecewise coefficients, the right end of every piece is
        sampled just below the integer so the left branch is used.
    """

    dim: int
    a: Coefficient
    b: Coefficient
    forcing: Coefficient
    regularity: CoefficientRegularity = CoefficientRegularity.PIECEWISE

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DomainError("System dimension must be positive")

    def a_at(self, t: np.ndarray) -> np.ndarray:
        return as_matrices(_sample(self.a, t), len(t), self.dim)

    def b_at(self, t: np.ndarray) -> np.ndarray:
        return as_matrices(_sample(self.b, t), len(t), self.dim)

    def forcing_at(self, t: np.ndarray) -> np.ndarray:
        return as_vectors(_sample(self.forcing, t), len(t), self.dim)

    def with_forcing(self, forcing: Coefficient) -> DepcaSystem:
        return DepcaSystem(self.dim, self.a, self.b, forcing, self.regularity)

    def piece_nodes(self, window: Window, per_unit: int) -> np.ndarray:
        """Times ``n + j/per_unit`` for ``j = 0..per_unit`` on every piece.

        Shape ``(pieces, per_unit + 1)``.  With piecewise coefficients the
        last node of each piece is the largest float below ``n + 1``.
        """
        starts = np.arange(window[0], window[1], dtype=float)[:, np.newaxis]
        nodes = starts + np.arange(per_unit + 1) / per_unit
        if self.regularity is CoefficientRegularity.PIECEWISE:
            nodes[:, -1] = np.nextafter(starts[:, 0] + 1, starts[:, 0])
        return nodes

    def check_bounded(self, window: Window, per_unit: int) -> None:
        """Reject coefficients that are not finite on the window's nodes.

        Raises
        ------
        DomainError
            Raised if any sampled coefficient is NaN or infinite.
        """
        t = self.piece_nodes(window, per_unit).reshape(-1)
        for name, values in (
            ("A", self.a_at(t)),
            ("B", self.b_at(t)),
            ("f", self.forcing_at(t)),
        ):
            if not np.all(np.isfinite(values)):
                raise DomainError(
                    f"Coefficient {name} is not bounded on {window}"
                )


@dataclass(frozen=True)
class FundamentalMatrix:
    """Fundamental matrix of ``y' = A(t) y`` on one piece ``[n, n+1]``.

    Only lattice times ``n + k/steps`` are available.  ``propagators[k]``
    is ``Φ(n + k/steps, n)``.
    """

    n: int
    steps: int
    propagators: np.ndarray

    def _index(self, t: float) -> int:
        position = (t - self.n) * self.steps
        k = round(position)
        if not 0 <= k <= self.steps or abs(position - k) > 1e-9:
            raise DomainError(
                f"t={t} is not a lattice time of [{self.n}, {self.n + 1}]"
            )
        return k

    def __call__(self, t: float, s: float) -> np.ndarray:
        """``Φ(t, s)``; the identity exactly when ``t`` and ``s`` coincide."""
        i, j = self._index(t), self._index(s)
        if i == j:
            return np.eye(self.propagators.shape[-1])
        return self.propagators[i] @ np.linalg.inv(self.propagators[j])


@dataclass(frozen=True)
class DifferenceSystem:
    """``y(n+1) = C(n) y(n) + h(n)`` on the pieces of a window.

    Parameters
    ----------
    window
        Pieces ``[n, n+1]`` for ``n_lo <= n < n_hi``.
    c
        Shape ``(pieces, p, p)``.
    h
        Shape ``(pieces, p)``.
    certificates
        Per piece, the smallest singular value of
        ``I + ∫_τ^t Φ(τ, u) B(u) du`` found over a grid of ``τ, t`` in the
        piece.
    """

    window: Window
    c: np.ndarray
    h: np.ndarray
    certificates: np.ndarray

    def c_at(self, n: int) -> np.ndarray:
        return self.c[self._row(n)]

    def h_at(self, n: int) -> np.ndarray:
        return self.h[self._row(n)]

    def step(self, n: int, y: np.ndarray) -> np.ndarray:
        """Advance ``y(n)`` to ``y(n+1)``."""
        row = self._row(n)
        return self.c[row] @ y + self.h[row]

    def _row(self, n: int) -> int:
        if not self.window[0] <= n < self.window[1]:
            raise DomainError(f"No piece starting at {n} in {self.window}")
        return n - self.window[0]


@dataclass(frozen=True)
class DepcaSolution:
    """Continuous solution of a DEPCA on a window.

    Parameters
    ----------
    trajectory
        Solution sampled on the solver lattice, with left limits.
    integer_values
        ``y(n)`` for every integer of the window, ends included.
    report
        Residual, continuity and iteration statistics.
    uc
        Uniform-continuity modulus, for bounded solutions.
    """

    trajectory: GridFunction
    integer_values: AASequence
    report: ResidualReport
    uc: UCReport | None = None

    @property
    def continuity_defect(self) -> float:
        return self.report.continuity_defect

    @property
    def rhs_sup(self) -> float:
        return self.report.rhs_sup

    @property
    def iterations(self) -> list[float]:
        return self.report.iterations
