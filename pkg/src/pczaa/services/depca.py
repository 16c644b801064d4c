"""Solvers for linear DEPCAs and the Lasota–Wazewska model.

On a piece ``[n, n+1]`` the solution of
``y' = A(t) y + B(t) y(n) + f(t)`` is given by variation of constants,

    y(t) = Φ(t, n) [(I + G(t)) y(n) + F(t)],

with ``G(t) = ∫_n^t Φ(n, u) B(u) du`` and ``F(t) = ∫_n^t Φ(n, u) f(u)
du``.  At ``t = n + 1`` this reduces the equation to the difference
equation ``y(n+1) = C(n) y(n) + h(n)``.

The transfer matrix ``P(t) = Φ(t, n)(I + G(t))`` and the forcing response
``q(t) = Φ(t, n) F(t)`` solve ``P' = A P + B``, ``P(n) = I`` and
``q' = A q + f``, ``q(n) = 0``.  Both are integrated with the same
fixed-step RK4 scheme as ``Φ``, so every node of a trajectory obeys one
discrete scheme and equilibria stay exact.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, replace
from typing import Any

import numpy as np
import structlog

from ..constants import (
    APP_NAME,
    CERTIFICATE_MARGIN,
    CONTINUITY_TOLERANCE,
    DEFAULT_MAX_ITER,
    DEFAULT_PICARD_TOL,
    DEFAULT_STEPS,
    DEFAULT_TRUNC_EPS,
    DICHOTOMY_MARGIN,
)
from ..exceptions import (
    ConfigurationError,
    ContractViolationError,
    DomainError,
    IllPosedError,
    IncompatibleShapeError,
    NonConvergenceError,
    UnsupportedCaseError,
)
from ..models.depca import (
    Coefficient,
    CoefficientRegularity,
    DepcaSolution,
    DepcaSystem,
    DifferenceSystem,
    FundamentalMatrix,
)
from ..models.grid import GridFunction, Window
from ..models.reports import ResidualReport
from ..models.sequence import AASequence
from ..utils import as_vectors, vector_norms
from .diagnostics import uc_modulus

__all__ = [
    "Nonlinearity",
    "bounded_solution",
    "fundamental_matrix",
    "lasota_wazewska",
    "picard_bounded_solution",
    "reduce_to_difference",
    "solve_ivp",
]

Nonlinearity = Callable[[np.ndarray, np.ndarray], Any]
"""Vectorized ``g(t, x)`` with ``t`` of shape ``(T,)`` and ``x`` of shape
``(T, p)``, returning ``(T, p)`` (or ``(T,)`` for scalar systems).
"""

CERTIFICATE_POINTS = 9
"""Grid points per piece at which the invertibility certificate is
evaluated, for both ``τ`` and ``t``.
"""

MAX_REACH = 10_000
"""Largest number of extra pieces a bounded solution may need on each
side of the window.
"""

OFF_DIAGONAL_TOLERANCE = 1e-12
"""Relative size below which off-diagonal entries of ``C(n)`` are treated
as zero by the dichotomy check.
"""


def _rk4(
    a_half: np.ndarray,
    steps: int,
    start: np.ndarray,
    source: np.ndarray | None = None,
) -> np.ndarray:
    """Integrate ``X' = A X + S``, ``X(n) = start`` on every piece at once.

    ``a_half`` holds ``A`` at the half-step nodes, shape
    ``(pieces, 2 * steps + 1, p, p)``; ``source`` holds ``S`` at the same
    nodes with shape ``(pieces, 2 * steps + 1, p, k)`` and ``start`` is
    ``(p, k)``.
    """
    pieces, _, p, _ = a_half.shape
    h = 1.0 / steps
    out = np.empty((pieces, steps + 1, p, start.shape[-1]))
    out[:, 0] = start
    for k in range(steps):
        y = out[:, k]
        a0 = a_half[:, 2 * k]
        am = a_half[:, 2 * k + 1]
        a1 = a_half[:, 2 * k + 2]
        s0: np.ndarray | float = 0.0
        sm: np.ndarray | float = 0.0
        s1: np.ndarray | float = 0.0
        if source is not None:
            s0 = source[:, 2 * k]
            sm = source[:, 2 * k + 1]
            s1 = source[:, 2 * k + 2]
        k1 = a0 @ y + s0
        k2 = am @ (y + (h / 2) * k1) + sm
        k3 = am @ (y + (h / 2) * k2) + sm
        k4 = a1 @ (y + h * k3) + s1
        out[:, k + 1] = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return out


@dataclass(frozen=True)
class _Flow:
    """Forcing-independent part of the variation of constants formula.

    Arrays are indexed ``[piece, node]``, with ``steps + 1`` nodes per
    piece, or ``2 * steps + 1`` for the ``*_half`` arrays that feed the
    RK4 stages.
    """

    system: DepcaSystem
    window: Window
    steps: int
    times: np.ndarray
    half_times: np.ndarray
    a: np.ndarray
    b: np.ndarray
    a_half: np.ndarray
    propagators: np.ndarray
    transfer: np.ndarray
    memory: np.ndarray

    @classmethod
    def build(cls, system: DepcaSystem, window: Window, steps: int) -> _Flow:
        if steps < 2 or steps % 2:
            raise ConfigurationError(
                f"steps must be a positive even number, got {steps}"
            )
        if window[1] <= window[0]:
            raise DomainError(f"Window {window} contains no piece")
        system.check_bounded(window, steps)
        p = system.dim
        half = system.piece_nodes(window, 2 * steps)
        pieces = half.shape[0]
        shape = (pieces, 2 * steps + 1, p, p)
        a_half = system.a_at(half.reshape(-1)).reshape(shape)
        b_half = system.b_at(half.reshape(-1)).reshape(shape)
        identity = np.eye(p)
        propagators = _rk4(a_half, steps, identity)
        transfer = _rk4(a_half, steps, identity, b_half)
        return cls(
            system=system,
            window=window,
            steps=steps,
            times=half[:, ::2],
            half_times=half,
            a=a_half[:, ::2],
            b=b_half[:, ::2],
            a_half=a_half,
            propagators=propagators,
            transfer=transfer,
            memory=np.linalg.solve(propagators, transfer) - identity,
        )

    @property
    def pieces(self) -> int:
        return self.times.shape[0]

    @property
    def c(self) -> np.ndarray:
        return self.transfer[:, -1]

    def sample(self, coefficient: Coefficient) -> np.ndarray:
        """Vector coefficient at every half-step node,
        ``(pieces, 2 * steps + 1, p)``.
        """
        t = self.half_times.reshape(-1)
        values = coefficient(t) if callable(coefficient) else coefficient
        return as_vectors(values, len(t), self.system.dim).reshape(
            self.pieces, 2 * self.steps + 1, self.system.dim
        )

    def response(self, forcing: np.ndarray) -> np.ndarray:
        """``q`` at every node for forcing sampled by `sample`."""
        start = np.zeros((self.system.dim, 1))
        out = _rk4(self.a_half, self.steps, start, forcing[..., np.newaxis])
        return out[..., 0]

    def h(self, response: np.ndarray) -> np.ndarray:
        return response[:, -1]

    def certificates(self) -> np.ndarray:
        """Smallest singular value of ``I + Φ(τ, n)(G(t) - G(τ))`` per
        piece, over a grid of ``τ, t``.
        """
        idx = np.unique(
            np.linspace(0, self.steps, CERTIFICATE_POINTS).round().astype(int)
        )
        p_tau = self.propagators[:, idx][:, :, np.newaxis]
        g = self.memory[:, idx]
        span = g[:, np.newaxis, :] - g[:, :, np.newaxis]
        matrices = np.eye(self.system.dim) + p_tau @ span
        singular = np.linalg.svd(matrices, compute_uv=False)
        return singular.min(axis=(1, 2, 3))

    def nodes(self, starts: np.ndarray, response: np.ndarray) -> np.ndarray:
        """Solution at every node given ``y(n)`` for each piece."""
        return np.einsum("nkij,nj->nki", self.transfer, starts) + response

    def restrict(self, rows: slice, window: Window) -> _Flow:
        return replace(
            self,
            window=window,
            times=self.times[rows],
            half_times=self.half_times[rows],
            a=self.a[rows],
            b=self.b[rows],
            a_half=self.a_half[rows],
            propagators=self.propagators[rows],
            transfer=self.transfer[rows],
            memory=self.memory[rows],
        )


def _solution(
    flow: _Flow,
    integers: np.ndarray,
    response: np.ndarray,
    forcing: np.ndarray,
    **report: Any,
) -> DepcaSolution:
    """Assemble the trajectory from its values at the integers."""
    starts = integers[:-1]
    nodes = flow.nodes(starts, response)
    rhs = (
        np.einsum("nkij,nkj->nki", flow.a, nodes)
        + np.einsum("nkij,nj->nki", flow.b, starts)
        + forcing[:, ::2]
    )
    derivative = np.gradient(nodes, 1.0 / flow.steps, axis=1, edge_order=2)
    residuals = vector_norms(derivative - rhs).max(axis=1)
    continuity = vector_norms(nodes[:, -1] - integers[1:]).max()
    trajectory = GridFunction(
        flow.window, flow.steps, nodes[:, :-1], nodes[:, -1]
    )
    return DepcaSolution(
        trajectory=trajectory,
        integer_values=AASequence(flow.window, integers),
        report=ResidualReport(
            intervals=list(range(flow.window[0], flow.window[1])),
            residual_sup=[float(r) for r in residuals],
            continuity_defect=float(continuity),
            rhs_sup=float(vector_norms(rhs).max()),
            **report,
        ),
    )


def _require_certificates(window: Window, certificates: np.ndarray) -> None:
    failed = np.flatnonzero(certificates < CERTIFICATE_MARGIN)
    if failed.size:
        i = int(failed[0])
        raise IllPosedError(window[0] + i, float(certificates[i]))


def fundamental_matrix(
    a: Coefficient,
    n: int,
    steps: int = DEFAULT_STEPS,
    *,
    dim: int | None = None,
    regularity: CoefficientRegularity = CoefficientRegularity.PIECEWISE,
) -> FundamentalMatrix:
    """Fundamental matrix of ``y' = A(t) y`` on the piece ``[n, n+1]``.

    Computed by RK4 with ``steps`` steps.  The dimension is read from
    ``A`` unless given.
    """
    if dim is None:
        first = np.asarray(
            a(np.array([float(n)])) if callable(a) else a, dtype=float
        )
        dim = 1 if first.size == 1 else first.shape[-1]
    system = DepcaSystem(dim, a, 0.0, 0.0, regularity)
    half = system.piece_nodes((n, n + 1), 2 * steps)
    a_half = system.a_at(half.reshape(-1)).reshape(1, -1, dim, dim)
    return FundamentalMatrix(n, steps, _rk4(a_half, steps, np.eye(dim))[0])


def reduce_to_difference(
    system: DepcaSystem,
    window: Window,
    steps: int = DEFAULT_STEPS,
    *,
    check_certificates: bool = True,
) -> DifferenceSystem:
    """Reduce the DEPCA on ``window`` to ``y(n+1) = C(n) y(n) + h(n)``.

    Raises
    ------
    IllPosedError
        Raised if ``check_certificates`` is set and some piece's
        invertibility certificate is below
        `~pczaa.constants.CERTIFICATE_MARGIN`.
    """
    flow = _Flow.build(system, window, steps)
    response = flow.response(flow.sample(system.forcing))
    certificates = flow.certificates()
    if check_certificates:
        _require_certificates(window, certificates)
    return DifferenceSystem(window, flow.c, flow.h(response), certificates)


def solve_ivp(
    system: DepcaSystem,
    y0: float | np.ndarray,
    window: Window,
    steps: int = DEFAULT_STEPS,
    *,
    backward: bool = False,
) -> DepcaSolution:
    """Solve the initial value problem piece by piece.

    Parameters
    ----------
    y0
        Value at ``window[0]``, or at ``window[1]`` when ``backward``.
    backward
        Solve towards the past, which needs ``C(n)`` invertible on every
        piece.

    Raises
    ------
    IllPosedError
        Raised for a backward solve through a piece whose invertibility
        certificate fails.
    """
    p = system.dim
    start = np.asarray(y0, dtype=float).reshape(-1)
    if start.shape != (p,) or not np.all(np.isfinite(start)):
        raise IncompatibleShapeError(
            f"Initial value must be a finite {p}-vector, got {y0!r}"
        )
    flow = _Flow.build(system, window, steps)
    forcing = flow.sample(system.forcing)
    response = flow.response(forcing)
    c = flow.c
    h = flow.h(response)
    integers = np.empty((flow.pieces + 1, p))
    if backward:
        _require_certificates(window, flow.certificates())
        integers[-1] = start
        for i in reversed(range(flow.pieces)):
            integers[i] = np.linalg.solve(c[i], integers[i + 1] - h[i])
    else:
        integers[0] = start
        for i in range(flow.pieces):
            integers[i + 1] = c[i] @ integers[i] + h[i]
    structlog.get_logger(APP_NAME).debug(
        "Solved initial value problem", window=window, backward=backward
    )
    return _solution(flow, integers, response, forcing)


def _dichotomy(c: np.ndarray) -> tuple[float, np.ndarray]:
    """Per-direction contraction rate and stable-direction mask.

    Raises
    ------
    UnsupportedCaseError
        Raised unless every ``C(n)`` is diagonal and every direction
        contracts on all pieces or expands on all pieces, with a rate
        bounded away from one.
    """
    diagonal = np.diagonal(c, axis1=1, axis2=2)
    off = c - diagonal[..., np.newaxis] * np.eye(c.shape[-1])
    scale = max(1.0, float(np.abs(diagonal).max()))
    if np.abs(off).max() > OFF_DIAGONAL_TOLERANCE * scale:
        raise UnsupportedCaseError(
            "Difference equation is not diagonal; only the diagonal"
            " dichotomy case is supported"
        )
    magnitude = np.abs(diagonal)
    stable = np.all(magnitude < 1, axis=0)
    unstable = np.all(magnitude > 1, axis=0)
    if not np.all(stable | unstable):
        direction = int(np.flatnonzero(~(stable | unstable))[0])
        raise UnsupportedCaseError(
            f"Direction {direction} neither contracts nor expands uniformly"
        )
    rates = np.where(stable, magnitude, 1.0 / np.maximum(magnitude, 1.0))
    rho = float(rates.max())
    if rho > 1 - DICHOTOMY_MARGIN:
        raise UnsupportedCaseError(
            f"Dichotomy rate {rho:.9f} is too close to one"
        )
    return rho, stable


class _DichotomySolver:
    """Bounded solutions of a diagonal linear DEPCA.

    The window is widened by ``reach`` pieces on both sides, where
    ``rho ** reach <= trunc_eps``.  Stable directions are swept forward
    from zero at the left end and unstable ones backward from zero at the
    right end, so the dropped tails of the series are below
    ``trunc_eps`` relative to their terms by the time the window is
    reached.
    """

    def __init__(
        self,
        system: DepcaSystem,
        window: Window,
        steps: int,
        trunc_eps: float,
    ) -> None:
        if not 0 < trunc_eps < 1:
            raise ConfigurationError("trunc_eps must lie in (0, 1)")
        rate, _ = _dichotomy(_Flow.build(system, window, steps).c)
        reach = 1
        if rate > 0:
            reach = max(1, math.ceil(math.log(trunc_eps) / math.log(rate)))
        if reach > MAX_REACH:
            raise UnsupportedCaseError(
                f"Bounded solution would need {reach} extra pieces"
            )
        wide = (window[0] - reach, window[1] + reach)
        self.flow = _Flow.build(system, wide, steps)
        self.rho, self.stable = _dichotomy(self.flow.c)
        self.window = window
        self.reach = reach
        self._diagonal = np.diagonal(self.flow.c, axis1=1, axis2=2)
        structlog.get_logger(APP_NAME).debug(
            "Verified dichotomy", window=window, rho=self.rho, reach=reach
        )

    def integers(self, forcing: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Integer values on the widened window and the forcing response."""
        response = self.flow.response(forcing)
        h = self.flow.h(response)
        c = self._diagonal
        stable = self.stable
        unstable = ~stable
        out = np.zeros((self.flow.pieces + 1, self.flow.system.dim))
        for i in range(self.flow.pieces):
            out[i + 1, stable] = c[i, stable] * out[i, stable] + h[i, stable]
        for i in reversed(range(self.flow.pieces)):
            out[i, unstable] = (
                out[i + 1, unstable] - h[i, unstable]
            ) / c[i, unstable]
        return out, response

    def solution(
        self,
        integers: np.ndarray,
        response: np.ndarray,
        forcing: np.ndarray,
        **report: Any,
    ) -> DepcaSolution:
        """Restrict to the window and verify the derivative bound.

        Raises
        ------
        ContractViolationError
            Raised if the modulus of continuity exceeds ``2 M delta``,
            with ``M`` the sampled sup of the right-hand side, by more
            than `~pczaa.constants.CONTINUITY_TOLERANCE` relative to the
            size of the solution.
        """
        pieces = self.window[1] - self.window[0]
        rows = slice(self.reach, self.reach + pieces)
        flow = self.flow.restrict(rows, self.window)
        solution = _solution(
            flow,
            integers[self.reach : self.reach + pieces + 1],
            response[rows],
            forcing[rows],
            **report,
        )
        uc = uc_modulus(solution.trajectory)
        bound = solution.rhs_sup
        scale = max(1.0, solution.trajectory.sup_norm())
        slack = CONTINUITY_TOLERANCE * scale
        for delta, omega in uc.modulus_table:
            if omega > 2 * bound * delta + slack:
                raise ContractViolationError(
                    f"Modulus {omega:.3e} at scale {delta} exceeds"
                    f" 2 M delta with M = {bound:.3e}"
                )
        return replace(solution, uc=uc)


def bounded_solution(
    system: DepcaSystem,
    window: Window,
    steps: int = DEFAULT_STEPS,
    trunc_eps: float = DEFAULT_TRUNC_EPS,
) -> DepcaSolution:
    """The unique bounded solution, for diagonal systems with dichotomy.

    Every direction of the reduced difference equation must contract
    uniformly (``|C(n)| <= rho < 1``) or expand uniformly
    (``|C(n)| >= 1/rho``).  The returned solution carries its
    uniform-continuity modulus, which is checked against the derivative
    bound.

    Raises
    ------
    UnsupportedCaseError
        Raised if no dichotomy is verified.
    ContractViolationError
        Raised if the solution fails the derivative bound.
    """
    solver = _DichotomySolver(system, window, steps, trunc_eps)
    forcing = solver.flow.sample(system.forcing)
    integers, response = solver.integers(forcing)
    structlog.get_logger(APP_NAME).info(
        "Computed bounded solution", window=window, rho=solver.rho
    )
    return solver.solution(integers, response, forcing)


def picard_bounded_solution(
    system: DepcaSystem,
    nonlinearity: Nonlinearity,
    lipschitz: float,
    window: Window,
    steps: int = DEFAULT_STEPS,
    *,
    weight: Coefficient = 1.0,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_PICARD_TOL,
    trunc_eps: float = DEFAULT_TRUNC_EPS,
) -> DepcaSolution:
    """Bounded solution of ``y' = A y + B y([t]) + f(t) + g(t, y([t]))``.

    Iterates ``y_{k+1} = bounded solution with forcing f + g(t, y_k([t]))``
    from ``y_0 = 0``.  ``g`` must satisfy
    ``|g(t, x) - g(t, z)| <= lipschitz * weight(t) * |x - z|`` on the
    iterates, and the map's contraction factor is estimated as
    ``lipschitz`` times the sup of the bounded solution driven by
    ``weight``.

    Raises
    ------
    UnsupportedCaseError
        Raised if the contraction estimate is not below one, or the
        linear part has no dichotomy.
    NonConvergenceError
        Raised if ``max_iter`` iterations do not reach ``tol``.
    """
    if lipschitz < 0:
        raise ConfigurationError("Lipschitz constant must be nonnegative")
    if max_iter < 1 or tol <= 0:
        raise ConfigurationError("Need max_iter >= 1 and tol > 0")
    logger = structlog.get_logger(APP_NAME)
    solver = _DichotomySolver(system, window, steps, trunc_eps)
    flow = solver.flow
    base = flow.sample(system.forcing)
    driven, _ = solver.integers(np.abs(flow.sample(weight)))
    contraction = lipschitz * float(vector_norms(driven).max())
    if contraction >= 1:
        raise UnsupportedCaseError(
            f"Picard map is not contractive: estimate {contraction:.3f}"
        )
    times = flow.half_times.reshape(-1)
    p = system.dim
    integers = np.zeros((flow.pieces + 1, p))
    differences: list[float] = []
    for k in range(1, max_iter + 1):
        delayed = np.repeat(integers[:-1], 2 * flow.steps + 1, axis=0)
        extra = as_vectors(nonlinearity(times, delayed), len(times), p)
        forcing = base + extra.reshape(base.shape)
        update, response = solver.integers(forcing)
        difference = float(vector_norms(update - integers).max())
        differences.append(difference)
        integers = update
        logger.debug("Picard iteration", iteration=k, difference=difference)
        if difference <= tol:
            logger.info(
                "Picard iteration converged",
                iterations=k,
                contraction=contraction,
            )
            return solver.solution(
                integers,
                response,
                forcing,
                contraction=contraction,
                iterations=differences,
            )
    raise NonConvergenceError(max_iter, differences[-1], contraction)


def _scalar_rule(value: Coefficient) -> Callable[[np.ndarray], np.ndarray]:
    if callable(value):
        return lambda t: np.broadcast_to(
            np.asarray(value(t), dtype=float).reshape(-1), t.shape
        )
    constant = float(np.asarray(value, dtype=float))
    return lambda t: np.full(t.shape, constant)


def lasota_wazewska(
    delta: Coefficient,
    p: Coefficient,
    gamma: float,
    window: Window,
    steps: int = DEFAULT_STEPS,
    *,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = DEFAULT_PICARD_TOL,
    trunc_eps: float = DEFAULT_TRUNC_EPS,
) -> DepcaSolution:
    """Bounded solution of ``y' = -δ(t) y + p(t) exp(-γ y([t]))``.

    Special case of `picard_bounded_solution` with Lipschitz constant
    ``γ`` and weight ``p``: the iterates are nonnegative, where the
    derivative of ``p exp(-γ x)`` in ``x`` is at most ``γ p``.

    Raises
    ------
    ConfigurationError
        Raised if ``δ`` is not positive, ``p`` is negative or ``γ`` is
        negative on the sampled window.
    """
    if gamma < 0:
        raise ConfigurationError(f"gamma must be nonnegative, got {gamma}")
    delta_rule = _scalar_rule(delta)
    p_rule = _scalar_rule(p)
    nodes = DepcaSystem(1, 0.0, 0.0, 0.0).piece_nodes(window, steps)
    nodes = nodes.reshape(-1)
    if not np.all(delta_rule(nodes) > 0):
        raise ConfigurationError("delta must be positive on the window")
    if not np.all(p_rule(nodes) >= 0):
        raise ConfigurationError("p must be nonnegative on the window")
    system = DepcaSystem(1, lambda t: -delta_rule(t), 0.0, 0.0)
    return picard_bounded_solution(
        system,
        lambda t, x: p_rule(t) * np.exp(-gamma * x[:, 0]),
        gamma,
        window,
        steps,
        weight=p_rule,
        max_iter=max_iter,
        tol=tol,
        trunc_eps=trunc_eps,
    )
