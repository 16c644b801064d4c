"""Integrable convolution kernels."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
import scipy.integrate
import scipy.linalg
import scipy.special

from ..exceptions import ConfigurationError, DomainError

__all__ = [
    "HeatKernel",
    "Kernel",
    "Support",
    "exponential_kernel",
    "exponential_operator_kernel",
    "gaussian_kernel",
]

MAX_RADIUS = 100_000
"""Largest truncation radius searched before a tail bound is rejected."""


class Support(StrEnum):
    """Where a kernel may be nonzero."""

    FULL_LINE = "full_line"
    HALF_LINE = "half_line"


@dataclass(frozen=True)
class Kernel:
    """Closed-form integrable kernel with a certified tail bound.

    Parameters
    ----------
    name
        Tag used in logs and artifact metadata.
    rule
        Vectorized kernel values.  Scalar kernels return shape ``(T,)``;
        operator-valued kernels return ``(T, p, p)``.  Half-line kernels
        are only evaluated at nonnegative arguments, and the value at 0 is
        read as the limit from the right.
    support
        Full line or half line ``[0, ∞)``.
    l1_tail_bound
        ``R -> `` an upper bound on the L1 mass of the kernel outside
        ``[-R, R]``.  Must tend to zero.
    matrix_dim
        Size ``p`` of operator-valued kernels, `None` for scalar ones.
    """

    name: str
    rule: Callable[[np.ndarray], np.ndarray]
    support: Support
    l1_tail_bound: Callable[[float], float]
    matrix_dim: int | None = None

    def radius(self, trunc_eps: float) -> int:
        """Smallest integer radius whose tail bound is within
        ``trunc_eps``.

        Raises
        ------
        ConfigurationError
            Raised if ``trunc_eps`` is not positive or no radius up to
            `MAX_RADIUS` meets the bound.
        """
        if trunc_eps <= 0:
            raise ConfigurationError("trunc_eps must be positive")
        lo, hi = 0, 1
        while self.l1_tail_bound(hi) > trunc_eps:
            lo, hi = hi, 2 * hi
            if hi > MAX_RADIUS:
                raise ConfigurationError(
                    f"Tail bound of kernel {self.name} does not reach"
                    f" {trunc_eps} within radius {MAX_RADIUS}"
                )
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.l1_tail_bound(mid) > trunc_eps:
                lo = mid
            else:
                hi = mid
        return max(hi, 1)

    def lattice_samples(
        self, lo: int, hi: int, samples_per_unit: int
    ) -> np.ndarray:
        """Kernel values at ``k / M`` for integers ``lo <= k <= hi``.

        Half-line kernels are zero at negative arguments.
        """
        k = np.arange(lo, hi + 1)
        u = k / samples_per_unit
        if self.support is Support.FULL_LINE:
            return np.asarray(self.rule(u), dtype=float)
        shape: tuple[int, ...] = (len(k),)
        if self.matrix_dim is not None:
            shape = (len(k), self.matrix_dim, self.matrix_dim)
        out = np.zeros(shape)
        causal = k >= 0
        if np.any(causal):
            out[causal] = np.asarray(self.rule(u[causal]), dtype=float)
        return out

    def l1_norm(self, samples_per_unit: int, radius: int) -> float:
        """Simpson quadrature of ``|Φ|`` over ``[-R, R]`` (or ``[0, R]``).

        Operator-valued kernels use the spectral norm.
        """
        lo = 0 if self.support is Support.HALF_LINE else -radius
        samples = self.lattice_samples(
            lo * samples_per_unit, radius * samples_per_unit, samples_per_unit
        )
        if self.matrix_dim is None:
            magnitude = np.abs(samples)
        else:
            magnitude = np.linalg.norm(samples, ord=2, axis=(1, 2))
        return float(
            scipy.integrate.simpson(magnitude, dx=1.0 / samples_per_unit)
        )


def gaussian_kernel(variance: float) -> Kernel:
    """Normalized centered Gaussian density with the given variance."""
    if variance <= 0:
        raise DomainError(f"Variance must be positive, got {variance}")
    norm = 1.0 / math.sqrt(2 * math.pi * variance)
    scale = math.sqrt(2 * variance)
    return Kernel(
        name=f"gauss(var={variance:g})",
        rule=lambda u: norm * np.exp(-(u * u) / (2 * variance)),
        support=Support.FULL_LINE,
        l1_tail_bound=lambda r: float(scipy.special.erfc(r / scale)),
    )


def exponential_kernel(rate: float = 1.0) -> Kernel:
    """``Φ(s) = exp(-rate s)`` on ``[0, ∞)``."""
    if rate <= 0:
        raise DomainError(f"Rate must be positive, got {rate}")
    return Kernel(
        name=f"exp(rate={rate:g})",
        rule=lambda u: np.exp(-rate * u),
        support=Support.HALF_LINE,
        l1_tail_bound=lambda r: math.exp(-rate * r) / rate,
    )


def exponential_operator_kernel(generator: np.ndarray) -> Kernel:
    """Operator-valued ``R(s) = exp(A s)`` on ``[0, ∞)``.

    The tail is certified through the logarithmic norm
    ``mu = max eig((A + A^T) / 2)``, which gives ``||exp(A s)|| <=
    exp(mu s)``.

    Raises
    ------
    ConfigurationError
        Raised if ``A`` is not square or its logarithmic norm is not
        negative.
    """
    a = np.asarray(generator, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ConfigurationError(f"Generator must be square, got {a.shape}")
    mu = float(np.linalg.eigvalsh((a + a.T) / 2).max())
    if mu >= 0:
        raise ConfigurationError(
            f"Logarithmic norm {mu:.3g} is not negative; tail not certified"
        )
    return Kernel(
        name="expm",
        rule=lambda u: scipy.linalg.expm(u[:, np.newaxis, np.newaxis] * a),
        support=Support.HALF_LINE,
        l1_tail_bound=lambda r: math.exp(mu * r) / -mu,
        matrix_dim=a.shape[0],
    )


@dataclass(frozen=True)
class HeatKernel:
    """Fundamental solution of ``u_t = u_xx`` at diffusion time ``t``.

    ``Φ(t, x) = (4 pi t)^(-1/2) exp(-x^2 / (4t))``, a Gaussian with
    variance ``2t`` and unit mass.
    """

    t: float

    def __post_init__(self) -> None:
        if not self.t > 0:
            raise DomainError(f"Diffusion time must be positive, got {self.t}")

    def kernel(self) -> Kernel:
        base = gaussian_kernel(2 * self.t)
        return Kernel(
            name=f"heat(t={self.t:g})",
            rule=base.rule,
            support=base.support,
            l1_tail_bound=base.l1_tail_bound,
        )

    def mass(self, samples_per_unit: int, tail_eps: float = 1e-13) -> float:
        """Lattice Simpson quadrature of the kernel's total mass."""
        kernel = self.kernel()
        return kernel.l1_norm(samples_per_unit, kernel.radius(tail_eps))
