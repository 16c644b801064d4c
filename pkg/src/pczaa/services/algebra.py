"""Pointwise algebra on lattice representations.

The class of piecewise-continuous Z-almost automorphic functions with
values in a Banach algebra is itself a Banach algebra under pointwise
operations.  Here the codomain is R^p with the entrywise product, whose
unit is the constant vector of ones.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence

import numpy as np

from ..exceptions import IncompatibleShapeError
from ..models.grid import ClosedGridFunction, GridFunction, TimeRule, Window

__all__ = [
    "Monomial",
    "add",
    "closure_completion",
    "multiply",
    "piecewise_constant_argument",
    "poly_apply",
    "scale",
]

Monomial = tuple[float, Sequence[int]]
"""Polynomial term ``(coefficient, exponents)``, one exponent per
variable.
"""


def closure_completion(f: GridFunction) -> ClosedGridFunction:
    """Close every piece with the left limit at its right endpoint.

    The samples are unchanged; the result reads piece ``[n, n+1]`` as a
    closed interval ending at ``f((n+1)^-)``, which makes each piece
    uniformly continuous.  Applying this twice gives the same result as
    applying it once.
    """
    return ClosedGridFunction(
        f.window, f.samples_per_unit, f.values, f.left_limits, f.metadata
    )


def _binary(
    f: GridFunction,
    g: GridFunction,
    op: Callable[[np.ndarray, np.ndarray], np.ndarray],
    name: str,
) -> GridFunction:
    if not f.same_shape(g):
        raise IncompatibleShapeError(
            f"Cannot {name} functions on {f.window}/M={f.samples_per_unit}"
            f"/dim={f.dim} and {g.window}/M={g.samples_per_unit}"
            f"/dim={g.dim}"
        )
    return GridFunction(
        f.window,
        f.samples_per_unit,
        op(f.values, g.values),
        op(f.left_limits, g.left_limits),
    )


def add(f: GridFunction, g: GridFunction) -> GridFunction:
    """Pointwise sum, applied to samples and left limits."""
    return _binary(f, g, np.add, "add")


def multiply(f: GridFunction, g: GridFunction) -> GridFunction:
    """Pointwise entrywise product, applied to samples and left limits."""
    return _binary(f, g, np.multiply, "multiply")


def scale(f: GridFunction, a: float) -> GridFunction:
    return GridFunction(
        f.window, f.samples_per_unit, a * f.values, a * f.left_limits
    )


def poly_apply(
    terms: Sequence[Monomial], fs: Sequence[GridFunction]
) -> GridFunction:
    """Evaluate a polynomial in several variables pointwise.

    Parameters
    ----------
    terms
        ``(coefficient, exponents)`` pairs; every exponent tuple has one
        entry per function in ``fs``.
    fs
        The functions substituted for the variables, all of one shape.

    Raises
    ------
    IncompatibleShapeError
        Raised if an exponent tuple does not match the number of
        functions, or if the functions differ in shape.
    """
    if not fs:
        raise IncompatibleShapeError("Need at least one function")
    base = fs[0]
    for other in fs[1:]:
        if not base.same_shape(other):
            raise IncompatibleShapeError(
                "Polynomial arguments differ in shape"
            )
    one = GridFunction.constant(
        np.ones(base.dim), base.window, base.samples_per_unit
    )
    result = scale(one, 0.0)
    for coefficient, exponents in terms:
        if len(exponents) != len(fs):
            raise IncompatibleShapeError(
                f"Term has {len(exponents)} exponents for {len(fs)} variables"
            )
        monomial = one
        for f, power in zip(fs, exponents, strict=True):
            if power < 0:
                raise IncompatibleShapeError("Exponents must be nonnegative")
            for _ in range(power):
                monomial = multiply(monomial, f)
        result = add(result, scale(monomial, coefficient))
    return result


def piecewise_constant_argument(
    rule: TimeRule, window: Window, samples_per_unit: int, dim: int = 1
) -> GridFunction:
    """Sample ``t -> rule([t])``.

    The result is constant on every piece, with left limit
    ``rule(n - 1)`` at ``n``.  This is the route from an almost
    automorphic function to a Z-almost automorphic one.
    """

    def piece(n: int, t: np.ndarray) -> np.ndarray:
        value = np.asarray(rule(np.array([float(n)])), dtype=float)
        return np.broadcast_to(value.reshape(-1), (len(t), dim))

    return GridFunction.from_pieces(piece, window, samples_per_unit, dim)
