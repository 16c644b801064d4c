"""Builtin coefficient expressions for the command-line front end."""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from ..exceptions import ConfigurationError
from ..fixtures import psi

__all__ = ["parse_coefficient", "parse_kernel"]


def _frequency(text: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigurationError(
            f"Bad frequency in coefficient {text!r}"
        ) from None


def parse_coefficient(text: str) -> Callable[[np.ndarray], np.ndarray]:
    """Turn an expression into a vectorized scalar rule.

    Accepted forms are a numeric constant, ``psi`` for ``ψ(t)``,
    ``psi-step`` for ``ψ([t])``, and ``sin:ω`` or ``cos:ω`` for
    ``sin(ωt)`` and ``cos(ωt)``.  Any of them may be prefixed by a
    factor, as in ``0.5*psi``.

    Raises
    ------
    ConfigurationError
        Raised if the expression is not recognized.
    """
    expression = text.strip()
    factor = 1.0
    if "*" in expression:
        head, _, expression = expression.partition("*")
        try:
            factor = float(head)
        except ValueError:
            raise ConfigurationError(
                f"Bad factor in coefficient {text!r}"
            ) from None
    name, _, argument = expression.partition(":")
    match name:
        case "psi" if not argument:
            return lambda t: factor * psi(t)
        case "psi-step" if not argument:
            return lambda t: factor * psi(np.floor(t))
        case "sin":
            omega = _frequency(text, argument)
            return lambda t: factor * np.sin(omega * np.asarray(t))
        case "cos":
            omega = _frequency(text, argument)
            return lambda t: factor * np.cos(omega * np.asarray(t))
    try:
        value = factor * float(expression)
    except ValueError:
        raise ConfigurationError(f"Unknown coefficient {text!r}") from None
    return lambda t: np.full(np.shape(t), value)


def parse_kernel(text: str) -> tuple[str, float]:
    """Split a kernel flag such as ``gauss:0.5`` or ``exp`` into its name
    and parameter.

    ``gauss:t`` is the heat kernel at time ``t``; ``exp:r`` the half-line
    exponential with rate ``r`` (1 when omitted).
    """
    name, _, argument = text.strip().partition(":")
    if name not in {"gauss", "exp"}:
        raise ConfigurationError(f"Unknown kernel {text!r}")
    if not argument:
        if name == "gauss":
            raise ConfigurationError("gauss kernel needs a time, as gauss:t")
        return name, 1.0
    try:
        parameter = float(argument)
    except ValueError:
        raise ConfigurationError(f"Bad kernel parameter in {text!r}") from None
    if parameter <= 0:
        raise ConfigurationError(f"Kernel parameter must be positive: {text}")
    return name, parameter
