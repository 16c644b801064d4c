"""Convolution operators, the heat solver and Lipschitz composition.

Every integral is split at the integers, so each panel integrates a
function that is continuous on a closed piece (the piece closed with its
left limit).  Within a panel the quadrature is composite Simpson on the
sample lattice, which needs an even number of samples per unit.  The
partial panel ``[n, t]`` of the one-sided operators falls back to a
product interpolation rule when ``t`` is within a few cells of ``n``.

Output columns are computed for ``j = 0..M``; column ``M`` of a piece is
its left limit at the next integer.
"""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

import numpy as np
import structlog
from numpy.polynomial import Polynomial

from ..constants import (
    APP_NAME,
    CONTINUITY_TOLERANCE,
    DEFAULT_TRUNC_EPS,
    HEAT_MASS_TOLERANCE,
)
from ..exceptions import (
    ConfigurationError,
    ContractViolationError,
    DomainError,
    IncompatibleShapeError,
)
from ..models.grid import GridFunction
from ..models.kernel import HeatKernel, Kernel, Support
from ..utils import as_vectors, composite_weights, simpson_weights

__all__ = [
    "LipschitzMap",
    "compose_lipschitz",
    "conv_causal",
    "conv_full_line",
    "conv_halfline_asymptotic",
    "heat_solve",
]

LipschitzMap = Callable[[np.ndarray, np.ndarray], Any]
"""Vectorized ``(t, x) -> y`` with ``t`` of shape ``(T,)`` and ``x`` of
shape ``(T, p)``.
"""

PRODUCT_RULE_SPAN = 4
"""Partial panels shorter than this many lattice cells are integrated by
interpolating kernel and input on the first ``PRODUCT_RULE_SPAN + 1``
nodes of the piece.
"""


def _check_operands(kernel: Kernel, f: GridFunction) -> None:
    if f.samples_per_unit % 2:
        raise ConfigurationError(
            f"Convolution needs even M, got {f.samples_per_unit}"
        )
    if kernel.matrix_dim is not None and kernel.matrix_dim != f.dim:
        raise IncompatibleShapeError(
            f"Kernel acts on dimension {kernel.matrix_dim}, input has"
            f" dimension {f.dim}"
        )


def _offset_blocks(
    kernel: Kernel, samples_per_unit: int, offsets: np.ndarray
) -> np.ndarray:
    """Kernel weights per panel offset.

    Entry ``[d, a, b]`` is ``Φ(d + (a - b)/M)`` times the Simpson weight
    of sample ``b``, which is the weight of ``f(n - d + b/M)`` in the
    integral evaluated at ``n + a/M``.
    """
    m = samples_per_unit
    k_lo = int(offsets.min()) * m - m
    k_hi = int(offsets.max()) * m + m
    samples = kernel.lattice_samples(k_lo, k_hi, m)
    cols = np.arange(m + 1)
    index = (
        offsets[:, np.newaxis, np.newaxis] * m
        + cols[np.newaxis, :, np.newaxis]
        - cols[np.newaxis, np.newaxis, :]
        - k_lo
    )
    weights = simpson_weights(m) / m
    blocks = samples[index]
    if kernel.matrix_dim is None:
        return blocks * weights
    return blocks * weights[:, np.newaxis, np.newaxis]


def _product_rule(nodes: int, a: int) -> np.ndarray:
    """Weights ``W[k, b] = ∫_0^a L_k(a - x) L_b(x) dx``.

    ``L_k`` is the Lagrange basis on the unit-spaced nodes ``0..nodes-1``.
    Interpolating both the kernel (in the lag) and the input (in time)
    on those nodes integrates the product exactly over ``[0, a]``.
    """
    grid = np.arange(nodes)
    scales = [np.prod(k - np.delete(grid, k)) for k in grid]
    basis = [
        Polynomial.fromroots(np.delete(grid, k)) / scales[k] for k in grid
    ]
    sign = (-1) ** (nodes - 1)
    weights = np.empty((nodes, nodes))
    for k in grid:
        reflected = (
            Polynomial.fromroots(a - np.delete(grid, k)) * sign / scales[k]
        )
        for b, time in enumerate(basis):
            antiderivative = (reflected * time).integ()
            weights[k, b] = antiderivative(a) - antiderivative(0)
    return weights


def _partial_block(kernel: Kernel, samples_per_unit: int) -> np.ndarray:
    """Weights for ``∫_n^t`` with ``t = n + a/M`` inside one panel.

    Spans of fewer than `PRODUCT_RULE_SPAN` lattice cells use the product
    rule on the first nodes of the closed piece; longer spans use
    composite Newton–Cotes.
    """
    m = samples_per_unit
    samples = kernel.lattice_samples(0, m, m)
    block = np.zeros((m + 1, m + 1, *samples.shape[1:]))
    nodes = min(PRODUCT_RULE_SPAN + 1, m + 1)
    for a in range(1, m + 1):
        if a < PRODUCT_RULE_SPAN:
            weights = _product_rule(nodes, a) / m
            block[a, :nodes] = np.tensordot(
                weights, samples[:nodes], axes=([0], [0])
            )
            continue
        weights = composite_weights(a) / m
        lags = a - np.arange(a + 1)
        if kernel.matrix_dim is None:
            block[a, : a + 1] = samples[lags] * weights
        else:
            block[a, : a + 1] = (
                samples[lags] * weights[:, np.newaxis, np.newaxis]
            )
    return block


def _apply(block: np.ndarray, pieces: np.ndarray) -> np.ndarray:
    if block.ndim == 2:
        return np.einsum("ab,nbp->nap", block, pieces)
    return np.einsum("abqr,nbr->naq", block, pieces)


def _assemble(
    out: np.ndarray,
    window: tuple[int, int],
    samples_per_unit: int,
    **meta: float,
) -> GridFunction:
    return GridFunction(
        window, samples_per_unit, out[:, :-1, :], out[:, -1, :], meta
    )


def conv_full_line(
    kernel: Kernel, f: GridFunction, trunc_eps: float = DEFAULT_TRUNC_EPS
) -> GridFunction:
    """Compute ``(Lf)(t) = ∫ Φ(t - s) f(s) ds`` over the real line.

    The kernel is truncated to ``[-R, R]`` with ``R`` the smallest integer
    whose certified tail is within ``trunc_eps``, and the output window
    shrinks by ``R`` on both sides.  The error is at most
    ``trunc_eps * sup|f|`` plus quadrature error.  The output is
    continuous up to that error even when ``f`` jumps.

    Raises
    ------
    DomainError
        Raised if the window of ``f`` is shorter than ``2R + 1``; the
        error carries ``R``.
    """
    if kernel.support is not Support.FULL_LINE:
        raise ConfigurationError(f"Kernel {kernel.name} is not full-line")
    _check_operands(kernel, f)
    radius = kernel.radius(trunc_eps)
    rows = f.n_pieces - 2 * radius
    if rows < 1:
        raise DomainError(
            f"Window {f.window} too short for kernel {kernel.name}",
            required_radius=radius,
        )
    offsets = np.arange(-radius, radius + 1)
    blocks = _offset_blocks(kernel, f.samples_per_unit, offsets)
    closed = f.closed_pieces()
    out = np.zeros((rows, f.samples_per_unit + 1, f.dim))
    for d, block in zip(offsets, blocks, strict=True):
        out += _apply(block, closed[radius - d : radius - d + rows])
    structlog.get_logger(APP_NAME).debug(
        "Full-line convolution", kernel=kernel.name, radius=radius
    )
    window = (f.window[0] + radius, f.window[1] - radius)
    return _assemble(out, window, f.samples_per_unit, radius=float(radius))


def conv_causal(
    kernel: Kernel, f: GridFunction, trunc_eps: float = DEFAULT_TRUNC_EPS
) -> GridFunction:
    """Compute ``(Lf)(t) = ∫_{-∞}^t Φ(t - s) f(s) ds``.

    One-sided analogue of `conv_full_line`: only the left end of the
    window shrinks by ``R``.  The piece containing ``t`` contributes a
    partial panel ``[n, t]``.
    """
    if kernel.support is not Support.HALF_LINE:
        raise ConfigurationError(f"Kernel {kernel.name} is not half-line")
    _check_operands(kernel, f)
    radius = kernel.radius(trunc_eps)
    rows = f.n_pieces - radius
    if rows < 1:
        raise DomainError(
            f"Window {f.window} too short for kernel {kernel.name}",
            required_radius=radius,
        )
    m = f.samples_per_unit
    closed = f.closed_pieces()
    out = _apply(_partial_block(kernel, m), closed[radius:])
    offsets = np.arange(1, radius + 1)
    blocks = _offset_blocks(kernel, m, offsets)
    for d, block in zip(offsets, blocks, strict=True):
        out += _apply(block, closed[radius - d : radius - d + rows])
    structlog.get_logger(APP_NAME).debug(
        "Causal convolution", kernel=kernel.name, radius=radius
    )
    window = (f.window[0] + radius, f.window[1])
    return _assemble(out, window, m, radius=float(radius))


def conv_halfline_asymptotic(
    kernel: Kernel, f: GridFunction, trunc_eps: float = DEFAULT_TRUNC_EPS
) -> GridFunction:
    """Compute ``(Lf)(t) = ∫_0^t Φ(t - s) f(s) ds`` for ``f`` on
    ``[0, n_hi]``.

    The integral is finite, so nothing is truncated and the output
    covers the whole window.  ``trunc_eps`` only selects the radius
    recorded in the metadata, beyond which the kernel tail no longer
    affects the result by more than that amount.  Operator-valued kernels
    such as `~pczaa.models.kernel.exponential_operator_kernel` are
    supported.

    Raises
    ------
    DomainError
        Raised if the window of ``f`` does not start at 0.
    """
    if kernel.support is not Support.HALF_LINE:
        raise ConfigurationError(f"Kernel {kernel.name} is not half-line")
    if f.window[0] != 0:
        raise DomainError(f"Input must start at t = 0, got window {f.window}")
    _check_operands(kernel, f)
    m = f.samples_per_unit
    closed = f.closed_pieces()
    out = _apply(_partial_block(kernel, m), closed)
    offsets = np.arange(1, f.n_pieces)
    if offsets.size:
        blocks = _offset_blocks(kernel, m, offsets)
        for d, block in zip(offsets, blocks, strict=True):
            out[d:] += _apply(block, closed[: f.n_pieces - d])
    radius = kernel.radius(trunc_eps)
    structlog.get_logger(APP_NAME).debug(
        "Half-line convolution", kernel=kernel.name, pieces=f.n_pieces
    )
    return _assemble(out, f.window, m, radius=float(radius))


def heat_solve(
    u0: GridFunction, t: float, trunc_eps: float = DEFAULT_TRUNC_EPS
) -> GridFunction:
    """Solve ``u_t = u_xx`` on the line up to time ``t``.

    The solution is the full-line convolution of ``u0`` with the heat
    kernel.  The kernel's lattice mass is checked against one before it
    is used.

    Raises
    ------
    DomainError
        Raised if ``t <= 0`` or ``u0`` jumps at an integer.
    ContractViolationError
        Raised if the integrated kernel mass is off by more than
        `~pczaa.constants.HEAT_MASS_TOLERANCE`.
    """
    heat = HeatKernel(t)
    jump = u0.norm_report().jump_bound
    if jump > CONTINUITY_TOLERANCE:
        raise DomainError(f"Initial data must be continuous, jumps by {jump}")
    logger = structlog.get_logger(APP_NAME)
    mass = heat.mass(u0.samples_per_unit)
    deviation = abs(mass - 1.0)
    if deviation > HEAT_MASS_TOLERANCE:
        raise ContractViolationError(
            f"Heat kernel mass {mass!r} at t={t} is not 1 within"
            f" {HEAT_MASS_TOLERANCE}"
        )
    if deviation > HEAT_MASS_TOLERANCE / 2:
        logger.warning("Heat kernel mass near tolerance", t=t, mass=mass)
    return conv_full_line(heat.kernel(), u0, trunc_eps)


def compose_lipschitz(
    rule: LipschitzMap,
    x: GridFunction,
    lipschitz: float,
    dim: int | None = None,
) -> GridFunction:
    """Apply ``y(t) = rule(t, x(t))`` sample by sample.

    Left limits use ``rule(n^-, x(n^-))``, with the time argument taken
    just below the integer so that rules discontinuous in ``t`` at the
    integers read their left branch.  The declared Lipschitz constant is
    recorded in the metadata as ``lipschitz``; for a rule not depending
    on ``t`` it bounds how much the composition can enlarge any
    recurrence defect.
    """
    if lipschitz < 0:
        raise ConfigurationError("Lipschitz constant must be nonnegative")
    out_dim = x.dim if dim is None else dim
    m = x.samples_per_unit
    times = x.lattice().reshape(-1)
    values = as_vectors(
        rule(times, x.values.reshape(-1, x.dim)), len(times), out_dim
    )
    ends = np.arange(x.window[0] + 1, x.window[1] + 1, dtype=float)
    before = np.nextafter(ends, -np.inf)
    limits = as_vectors(rule(before, x.left_limits), len(ends), out_dim)
    return GridFunction(
        x.window,
        m,
        values.reshape(x.n_pieces, m, out_dim),
        limits,
        {"lipschitz": float(lipschitz)},
    )
