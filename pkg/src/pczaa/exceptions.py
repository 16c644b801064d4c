"""Exceptions for pczaa."""

from __future__ import annotations

__all__ = [
    "ConfigurationError",
    "ContractViolationError",
    "DomainError",
    "IllPosedError",
    "IncompatibleShapeError",
    "NonConvergenceError",
    "NumericalContractError",
    "PczaaError",
    "UnsupportedCaseError",
    "ValidationError",
]


class PczaaError(Exception):
    """Base class for all pczaa errors.

    Attributes
    ----------
    exit_code
        Process exit status the command-line front end reports for this
        class of failure.
    """

    exit_code = 1


class ValidationError(PczaaError):
    """Inputs do not satisfy the preconditions of an operation."""

    exit_code = 2


class NumericalContractError(PczaaError):
    """A numerical contract could not be established or was violated."""

    exit_code = 3


class DomainError(ValidationError):
    """A point, window or shift falls outside the represented domain.

    Parameters
    ----------
    msg
        Description of the failure.
    required_radius
        For convolution operators, the number of unit intervals the input
        window must extend beyond each output point.
    """

    def __init__(self, msg: str, required_radius: int | None = None) -> None:
        if required_radius is not None:
            msg = f"{msg} (required radius {required_radius})"
        super().__init__(msg)
        self.required_radius = required_radius


class IncompatibleShapeError(ValidationError):
    """Operands differ in window, lattice density, dimension or arity."""


class ConfigurationError(ValidationError):
    """A construction or run parameter is not allowed."""


class IllPosedError(NumericalContractError):
    """A per-interval invertibility certificate failed.

    Parameters
    ----------
    interval
        Integer ``n`` naming the interval ``[n, n+1]``.
    certificate
        Smallest singular value found on that interval.
    """

    def __init__(self, interval: int, certificate: float) -> None:
        msg = (
            f"Interval [{interval}, {interval + 1}] is ill-posed:"
            f" invertibility certificate {certificate:.3e}"
        )
        super().__init__(msg)
        self.interval = interval
        self.certificate = certificate


class UnsupportedCaseError(NumericalContractError):
    """The problem lies outside the class the solver can certify."""


class NonConvergenceError(NumericalContractError):
    """An iteration exhausted its budget.

    Parameters
    ----------
    iterations
        Number of iterations performed.
    last_difference
        Sup-norm difference between the last two iterates.
    contraction
        Contraction estimate at the time the iteration gave up.
    """

    def __init__(
        self, iterations: int, last_difference: float, contraction: float
    ) -> None:
        msg = (
            f"No convergence after {iterations} iterations: last difference"
            f" {last_difference:.3e}, contraction estimate {contraction:.3f}"
        )
        super().__init__(msg)
        self.iterations = iterations
        self.last_difference = last_difference
        self.contraction = contraction


class ContractViolationError(NumericalContractError):
    """A runtime-verified numerical contract does not hold."""
