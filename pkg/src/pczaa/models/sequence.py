"""Integer-indexed sequences."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from ..exceptions import DomainError
from ..utils import as_vectors

__all__ = ["AASequence"]


@dataclass(frozen=True, eq=False)
class AASequence:
    """Vector sequence on the integer window ``[k_lo, k_hi]``.

    Candidate almost automorphic sequence; nothing about recurrence is
    assumed or checked here.

    Parameters
    ----------
    window
        Inclusive integer bounds ``(k_lo, k_hi)``.
    values
        Array of shape ``(k_hi - k_lo + 1, dim)``; a one-dimensional
        array is read as a scalar sequence.
    """

    window: tuple[int, int]
    values: np.ndarray

    def __post_init__(self) -> None:
        k_lo, k_hi = self.window
        if k_hi < k_lo:
            raise DomainError(f"Empty sequence window {self.window}")
        count = k_hi - k_lo + 1
        raw = np.asarray(self.values, dtype=float)
        dim = 1 if raw.ndim <= 1 else raw.shape[-1]
        values = as_vectors(raw, count, dim).copy()
        if not np.all(np.isfinite(values)):
            raise DomainError("Sequence values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "window", (int(k_lo), int(k_hi)))
        object.__setattr__(self, "values", values)

    @classmethod
    def from_rule(
        cls,
        rule: Callable[[np.ndarray], np.ndarray],
        window: tuple[int, int],
        dim: int = 1,
    ) -> AASequence:
        """Sample ``rule`` at every integer of ``window``."""
        k = np.arange(window[0], window[1] + 1, dtype=float)
        return cls(window, as_vectors(rule(k), len(k), dim))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.window[0], self.window[1] + 1)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __getitem__(self, k: int) -> np.ndarray:
        if not self.window[0] <= k <= self.window[1]:
            raise DomainError(f"Index {k} outside {self.window}")
        return self.values[k - self.window[0]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AASequence):
            return NotImplemented
        return self.window == other.window and np.array_equal(
            self.values, other.values
        )

    __hash__ = None  # type: ignore[assignment]

    def take(self, lo: int, hi: int) -> np.ndarray:
        """Values for the integers ``lo`` through ``hi`` inclusive.

        Raises
        ------
        DomainError
            Raised if the range is not inside the window.
        """
        if lo < self.window[0] or hi > self.window[1]:
            raise DomainError(
                f"Range [{lo}, {hi}] not inside sequence window"
                f" {self.window}"
            )
        return self.values[lo - self.window[0] : hi - self.window[0] + 1]
