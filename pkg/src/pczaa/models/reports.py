"""Diagnostic report models.

All reports serialize to JSON with stable field names through
``model_dump_json``.
"""

from __future__ import annotations

from enum import StrEnum
from typing import Self

from pydantic import BaseModel, ConfigDict, Field, model_validator

__all__ = [
    "ClassificationReport",
    "DecompositionReport",
    "DemoRow",
    "KAAVerdict",
    "NormReport",
    "RecurrenceReport",
    "ResidualReport",
    "ShiftDefect",
    "UCReport",
]


class NormReport(BaseModel):
    """Sup norm and jump statistics of a sampled function."""

    model_config = ConfigDict(frozen=True)

    sup_norm: float = Field(..., ge=0, title="Sup of Euclidean norms")

    attained_at: float = Field(..., title="Time of the maximal sample")

    jump_bound: float = Field(
        ..., ge=0, title="Largest |f(n) - f(n^-)| over interior integers"
    )


class ShiftDefect(BaseModel):
    """Recurrence defect of one integer translation."""

    model_config = ConfigDict(frozen=True)

    shift: int

    forward: float = Field(..., ge=0)

    backward: float = Field(..., ge=0)

    @property
    def defect(self) -> float:
        """Larger of the two directional defects."""
        return max(self.forward, self.backward)


class RecurrenceReport(BaseModel):
    """Outcome of an exhaustive scan over integer translations."""

    model_config = ConfigDict(frozen=True)

    shifts_tested: list[int]

    best_shift: int

    forward_defect: float = Field(..., ge=0)

    backward_defect: float = Field(..., ge=0)

    test_window: tuple[int, int]

    defect_profile: list[ShiftDefect] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_best_shift(self) -> Self:
        if self.best_shift not in self.shifts_tested:
            raise ValueError("best_shift must be one of shifts_tested")
        return self

    @property
    def min_defect(self) -> float:
        """Defect of the best shift."""
        return max(self.forward_defect, self.backward_defect)


class UCReport(BaseModel):
    """Tabulated uniform-continuity modulus.

    The table is sorted by increasing scale and always starts with
    ``(0.0, 0.0)``.
    """

    model_config = ConfigDict(frozen=True)

    modulus_table: list[tuple[float, float]]

    @model_validator(mode="after")
    def _check_monotone(self) -> Self:
        scales = [d for d, _ in self.modulus_table]
        moduli = [w for _, w in self.modulus_table]
        if scales != sorted(scales):
            raise ValueError("modulus_table must be sorted by scale")
        if any(b < a for a, b in zip(moduli, moduli[1:], strict=False)):
            raise ValueError("modulus must be nondecreasing")
        return self

    def is_uc_at(self, eps: float) -> bool:
        """Whether some tabulated positive scale has modulus at most
        ``eps``.
        """
        return any(d > 0 and w <= eps for d, w in self.modulus_table)

    def modulus(self, delta: float) -> float:
        """Tabulated modulus at exactly ``delta``.

        Raises
        ------
        KeyError
            Raised if ``delta`` was not tabulated.
        """
        for d, w in self.modulus_table:
            if d == delta:
                return w
        raise KeyError(delta)


class KAAVerdict(StrEnum):
    """One-sided compact almost automorphy verdicts.

    Failures are conclusive on the sampled data; success only means the
    data do not contradict the property.
    """

    CONSISTENT = "consistent-with-KAA"
    FAILS_UC = "fails-UC"
    FAILS_RECURRENCE = "fails-recurrence"


class ClassificationReport(BaseModel):
    """Verdict together with the evidence it was derived from."""

    model_config = ConfigDict(frozen=True)

    verdict: KAAVerdict

    eps: float = Field(..., gt=0)

    uc: UCReport

    recurrence: RecurrenceReport


class DecompositionReport(BaseModel):
    """Norms of an asymptotic decomposition ``f = g + h``."""

    model_config = ConfigDict(frozen=True)

    g_norm: float = Field(..., ge=0)

    h_norm: float = Field(..., ge=0)

    f_norm: float = Field(..., ge=0)

    bound_satisfied: bool = Field(
        ..., title="Whether g_norm + h_norm <= 3 f_norm"
    )


class ResidualReport(BaseModel):
    """Accuracy and regularity statistics of a DEPCA solution."""

    model_config = ConfigDict(frozen=True)

    intervals: list[int] = Field(..., title="Left ends n of the pieces")

    residual_sup: list[float] = Field(
        ...,
        title="Per-piece sup of |y' - rhs|",
        description=(
            "The derivative is a second-order finite difference on the"
            " solver lattice, so this measures discretization error rather"
            " than exact residuals."
        ),
    )

    continuity_defect: float = Field(
        ..., ge=0, title="Largest |y(n) - y(n^-)| over the window"
    )

    rhs_sup: float = Field(
        ..., ge=0, title="Sampled sup of the right-hand side"
    )

    contraction: float | None = Field(
        None, ge=0, title="Contraction estimate of the Picard map"
    )

    iterations: list[float] = Field(
        default_factory=list,
        title="Sup-norm difference between successive Picard iterates",
    )

    @property
    def max_residual(self) -> float:
        return max(self.residual_sup, default=0.0)


class DemoRow(BaseModel):
    """One worked example checked by the demo."""

    model_config = ConfigDict(frozen=True)

    name: str

    expected: str

    observed: str

    tolerance: float = Field(..., ge=0)

    passed: bool
