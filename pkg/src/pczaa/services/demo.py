"""Reproduce the library's worked examples as a pass/fail table."""

from __future__ import annotations

import math
from collections.abc import Callable, Iterator

import numpy as np
import scipy.optimize
import structlog

from ..constants import APP_NAME, DEFAULT_SEED
from ..fixtures import noise_samples, psi
from ..models.depca import DepcaSystem
from ..models.grid import GridFunction
from ..models.kernel import HeatKernel, exponential_kernel, gaussian_kernel
from ..models.reports import DemoRow, KAAVerdict
from ..models.sequence import AASequence
from ..utils import expm1_ratio
from .algebra import add, multiply
from .depca import (
    bounded_solution,
    lasota_wazewska,
    reduce_to_difference,
    solve_ivp,
)
from .diagnostics import (
    classify_kaa,
    decomposition_check,
    recurrence_defect,
)
from .extension import linear_extension, step_extension, two_segment_extension
from .transforms import (
    conv_causal,
    conv_full_line,
    conv_halfline_asymptotic,
    heat_solve,
)

__all__ = ["DemoRunner", "periodic_sequence"]


def periodic_sequence(window: tuple[int, int]) -> AASequence:
    """``cos(pi n / 2) + cos(2 pi n / 3) / 2``, which has period 12."""
    return AASequence.from_rule(
        lambda n: np.cos(np.pi * n / 2) + 0.5 * np.cos(2 * np.pi * n / 3),
        window,
    )


def _max_error(
    f: GridFunction, oracle: Callable[[np.ndarray], np.ndarray]
) -> float:
    exact = GridFunction.from_rule(
        oracle, f.window, f.samples_per_unit, f.dim
    )
    return float(
        max(
            np.abs(f.values - exact.values).max(),
            np.abs(f.left_limits - exact.left_limits).max(),
        )
    )


class DemoRunner:
    """Run every worked example and collect one row per check.

    Parameters
    ----------
    samples_per_unit
        Lattice density for function fixtures (must be even).
    steps
        RK4 steps per unit for DEPCA fixtures.
    seed
        Seed for the noise fixtures.
    logger
        Logger to use; by default the ``pczaa`` logger.
    """

    def __init__(
        self,
        *,
        samples_per_unit: int = 64,
        steps: int = 256,
        seed: int = DEFAULT_SEED,
        logger: structlog.BoundLogger | None = None,
    ) -> None:
        self._m = samples_per_unit
        self._steps = steps
        self._seed = seed
        if logger is None:
            self._logger = structlog.get_logger(APP_NAME)
        else:
            self._logger = logger

    def go(self) -> list[DemoRow]:
        """Run all checks in a fixed order."""
        rows = []
        for row in self._rows():
            self._logger.debug(
                "Demo check", name=row.name, passed=row.passed
            )
            rows.append(row)
        failed = [r.name for r in rows if not r.passed]
        self._logger.info("Demo finished", checks=len(rows), failed=failed)
        return rows

    @staticmethod
    def _close(
        name: str, expected: float, observed: float, tolerance: float
    ) -> DemoRow:
        return DemoRow(
            name=name,
            expected=f"{expected:.17g}",
            observed=f"{observed:.17g}",
            tolerance=tolerance,
            passed=abs(observed - expected) <= tolerance,
        )

    @staticmethod
    def _verdict(
        name: str, expected: KAAVerdict, observed: KAAVerdict
    ) -> DemoRow:
        return DemoRow(
            name=name,
            expected=expected.value,
            observed=observed.value,
            tolerance=0.0,
            passed=expected == observed,
        )

    def _rows(self) -> Iterator[DemoRow]:
        yield from self._extension_rows()
        yield from self._algebra_rows()
        yield from self._transform_rows()
        yield from self._depca_rows()

    def _extension_rows(self) -> Iterator[DemoRow]:
        m = self._m
        window = (-32, 32)
        seq = AASequence.from_rule(psi, window)
        linear = linear_extension(seq, m)
        step = step_extension(seq, m)
        base = seq.take(window[0], window[1] - 1)
        for name, f in (
            ("extension.linear", linear),
            ("extension.step", step),
        ):
            error = np.abs(f.restrict_to_integers().values - base).max()
            yield self._close(f"{name}.integers", 0.0, float(error), 0.0)
        start, end = seq.values[:-1], seq.values[1:]
        midpoints = AASequence((window[0], window[1] - 1), (start + end) / 2)
        collinear = two_segment_extension(seq, midpoints, m)
        yield DemoRow(
            name="extension.two-segment.collinear",
            expected="equal",
            observed="equal" if collinear == linear else "different",
            tolerance=0.0,
            passed=collinear == linear,
        )
        tent = two_segment_extension(
            AASequence((0, 1), np.zeros(2)), lambda n: np.ones(len(n)), 4
        )
        yield self._close(
            "extension.two-segment.t=0.25", 0.5, tent.evaluate(0.25)[0], 0.0
        )
        yield self._close(
            "grid.step.psi(0)", math.sin(0.25), step.evaluate(0.0)[0], 1e-15
        )
        yield self._close(
            "grid.step.left-limit(1)",
            math.sin(0.25),
            step.left_limit(1)[0],
            1e-15,
        )
        periodic = linear_extension(periodic_sequence(window), m)
        yield self._verdict(
            "kaa.linear.periodic",
            KAAVerdict.CONSISTENT,
            classify_kaa(periodic, 1e-2, 16).verdict,
        )
        yield self._verdict(
            "kaa.step.psi",
            KAAVerdict.FAILS_UC,
            classify_kaa(step, 1e-2, 16).verdict,
        )
        yield self._verdict(
            "kaa.linear.psi",
            KAAVerdict.FAILS_RECURRENCE,
            classify_kaa(linear, 1e-2, 16).verdict,
        )
        positive = linear.restrict((0, 32))
        decaying = GridFunction.from_rule(lambda t: np.exp(-t), (0, 32), m)
        report = decomposition_check(positive, decaying)
        yield DemoRow(
            name="decomposition.bound",
            expected="true",
            observed=str(report.bound_satisfied).lower(),
            tolerance=0.0,
            passed=report.bound_satisfied,
        )

    def _algebra_rows(self) -> Iterator[DemoRow]:
        worst = -math.inf
        for k in range(100):
            f = noise_samples((0, 4), self._m, self._seed + 2 * k)
            g = noise_samples((0, 4), self._m, self._seed + 2 * k + 1)
            excess = multiply(f, g).sup_norm() - f.sup_norm() * g.sup_norm()
            worst = max(worst, excess)
        yield DemoRow(
            name="algebra.submultiplicative",
            expected="<= 0",
            observed=f"{worst:.17g}",
            tolerance=0.0,
            passed=worst <= 0,
        )
        one = GridFunction.constant(1.0, (0, 4), self._m)
        zero = GridFunction.constant(0.0, (0, 4), self._m)
        worst = -math.inf
        laws = True
        for k in range(100):
            f = noise_samples((0, 4), self._m, self._seed + 2 * k)
            g = noise_samples((0, 4), self._m, self._seed + 2 * k + 1)
            excess = add(f, g).sup_norm() - f.sup_norm() - g.sup_norm()
            worst = max(worst, excess)
            laws = laws and multiply(f, one) == f and add(f, zero) == f
        yield DemoRow(
            name="algebra.triangle",
            expected="<= 0",
            observed=f"{worst:.17g}",
            tolerance=0.0,
            passed=worst <= 0,
        )
        yield DemoRow(
            name="algebra.unit-and-zero",
            expected="true",
            observed=str(laws).lower(),
            tolerance=0.0,
            passed=laws,
        )

    def _transform_rows(self) -> Iterator[DemoRow]:
        m = self._m
        eps = 1e-8
        sine = GridFunction.from_rule(
            lambda t: np.sin(2 * np.pi * t), (-16, 16), m
        )
        out = conv_full_line(gaussian_kernel(1.0), sine, eps)
        decay = math.exp(-2 * math.pi**2)
        error = _max_error(out, lambda t: decay * np.sin(2 * np.pi * t))
        yield self._close("conv.gauss.sin", 0.0, error, 1e-6)

        for t in (0.1, 0.5, 1.0, 4.0):
            mass = HeatKernel(t).mass(m)
            yield self._close(f"heat.mass.t={t:g}", 1.0, mass, 1e-10)

        heated = heat_solve(
            GridFunction.from_rule(np.sin, (-32, 32), m), 0.5, eps
        )
        error = _max_error(heated, lambda t: math.exp(-0.5) * np.sin(t))
        yield self._close("heat.sin", 0.0, error, 1e-6)

        wave = GridFunction.from_rule(
            lambda t: np.stack([np.cos(t), np.sin(t)], axis=-1),
            (-32, 16),
            m,
            dim=2,
        )
        causal = conv_causal(exponential_kernel(), wave, eps)
        error = _max_error(
            causal,
            lambda t: np.stack(
                [np.cos(t) + np.sin(t), np.sin(t) - np.cos(t)], axis=-1
            )
            / 2,
        )
        yield self._close("conv.causal.exp", 0.0, error, 1e-6)

        threes = GridFunction.constant(3.0, (-32, 16), m)
        causal = conv_causal(exponential_kernel(), threes, eps)
        error = _max_error(causal, lambda t: np.full_like(t, 3.0))
        yield self._close("conv.causal.constant", 0.0, error, 4 * eps)

        threes = GridFunction.constant(3.0, (-32, 32), m)
        heated = heat_solve(threes, 0.5, eps)
        error = _max_error(heated, lambda t: np.full_like(t, 3.0))
        yield self._close("heat.constant", 0.0, error, 3 * eps)

        seq = AASequence.from_rule(psi, (-32, 32))
        linear_psi = linear_extension(seq, m)
        heated = heat_solve(linear_psi, 1.0, eps).closed_pieces()
        closed = linear_psi.closed_pieces()
        excess = max(
            heated.max() - closed.max(), closed.min() - heated.min()
        )
        yield DemoRow(
            name="heat.maximum-principle",
            expected="<= 0",
            observed=f"{excess:.17g}",
            tolerance=eps,
            passed=excess <= eps,
        )

        kernel = gaussian_kernel(1.0)
        smoothed = conv_full_line(kernel, linear_psi, eps)
        norm = kernel.l1_norm(m, kernel.radius(eps))
        slack = 2 * eps * linear_psi.sup_norm()
        excess = max(
            recurrence_defect(smoothed, s, (-10, 10)).defect
            - norm * recurrence_defect(linear_psi, s, (-16, 16)).defect
            for s in range(1, 17)
        )
        yield DemoRow(
            name="conv.defect-contraction",
            expected="<= 0",
            observed=f"{excess:.17g}",
            tolerance=slack,
            passed=excess <= slack,
        )

        ones = GridFunction.constant(1.0, (0, 16), m)
        half = conv_halfline_asymptotic(exponential_kernel(), ones, eps)
        error = _max_error(half, lambda t: -np.expm1(-t))
        yield self._close("conv.halfline.exp", 0.0, error, 1e-8)

        decaying = GridFunction.from_rule(lambda t: np.exp(-t), (0, 16), m)
        half = conv_halfline_asymptotic(exponential_kernel(), decaying, eps)
        error = _max_error(half, lambda t: t * np.exp(-t))
        yield self._close("conv.halfline.t-exp", 0.0, error, 1e-8)

    def _depca_rows(self) -> Iterator[DemoRow]:
        steps = self._steps
        for a, b in ((1.0, 0.5), (-1.0, 0.25), (1e-8, 0.5)):
            system = DepcaSystem(1, a, b, 0.0)
            c = reduce_to_difference(system, (0, 1), steps).c[0, 0, 0]
            expected = math.exp(a) + b * expm1_ratio(a)
            yield self._close(f"depca.C.a={a:g},b={b:g}", expected, c, 1e-8)

        system = DepcaSystem(1, 1.0, 0.5, 0.0)
        expected = math.e + 0.5 * math.expm1(1.0)
        errors = [
            abs(reduce_to_difference(system, (0, 1), n).c[0, 0, 0] - expected)
            for n in (4, 8, 16)
        ]
        ratio = min(errors[0] / errors[1], errors[1] / errors[2])
        yield DemoRow(
            name="depca.rk4-order",
            expected=">= 8",
            observed=f"{ratio:.17g}",
            tolerance=0.0,
            passed=ratio >= 8,
        )

        system = DepcaSystem(1, -1.0, 0.5, psi)
        reduced = reduce_to_difference(system, (0, 8), steps)
        values = solve_ivp(system, 1.0, (0, 8), steps).integer_values.values
        error = max(
            float(np.abs(values[n + 1] - reduced.step(n, values[n])).max())
            for n in range(8)
        )
        yield self._close("depca.difference-consistency", 0.0, error, 1e-9)

        constant = bounded_solution(DepcaSystem(1, -1.0, 0.0, 2.0), (-8, 8))
        error = np.abs(constant.integer_values.values - 2.0).max()
        yield self._close("depca.bounded.constant", 0.0, float(error), 1e-7)

        system = DepcaSystem(1, -1.0, 0.5, psi)
        bounded = bounded_solution(system, (-8, 8), steps)
        shadow = solve_ivp(system, 3.0, (-200, 8), steps)
        error = np.abs(
            bounded.integer_values.values
            - shadow.integer_values.values[-17:]
        ).max()
        yield self._close("depca.bounded.shadowing", 0.0, float(error), 1e-6)

        root = scipy.optimize.brentq(
            lambda y: y - math.exp(-0.5 * y), 0.0, 1.0, xtol=1e-15
        )
        lw = lasota_wazewska(1.0, 1.0, 0.5, (-8, 8), steps)
        error = np.abs(lw.integer_values.values - root).max()
        yield self._close("lasota-wazewska.gamma=0.5", 0.0, float(error), 1e-8)
        linear = lasota_wazewska(2.0, 1.0, 0.0, (-8, 8), steps)
        error = np.abs(linear.integer_values.values - 0.5).max()
        yield self._close("lasota-wazewska.gamma=0", 0.0, float(error), 1e-8)
