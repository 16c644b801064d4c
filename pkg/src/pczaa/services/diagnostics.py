"""Finite-data diagnostics for recurrence and regularity.

Almost automorphy quantifies over infinite sequences of translations and
cannot be decided from a finite window.  Everything here is therefore a
necessary-condition test: a failure is conclusive for the sampled data,
a pass only says the data do not contradict the property.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

import numpy as np
import structlog

from ..constants import APP_NAME, DEFAULT_UC_DELTAS, LATTICE_TOLERANCE
from ..exceptions import ConfigurationError, DomainError
from ..models.grid import GridFunction, Window
from ..models.reports import (
    ClassificationReport,
    DecompositionReport,
    KAAVerdict,
    RecurrenceReport,
    ShiftDefect,
    UCReport,
)
from ..utils import vector_norms
from .algebra import add

__all__ = [
    "classify_kaa",
    "decomposition_check",
    "default_test_window",
    "recurrence_defect",
    "tail_sup",
    "uc_modulus",
    "zaa_scan",
]


def _translation_defect(
    f: GridFunction, s: int, test_window: Window
) -> float:
    # Largest |f(t+s) - f(t)| over samples and left limits of the window.
    a, b = test_window
    lo = a - f.window[0]
    hi = b - f.window[0]
    interior = vector_norms(f.values[lo + s : hi + s] - f.values[lo:hi])
    limits = vector_norms(
        f.left_limits[lo + s : hi + s] - f.left_limits[lo:hi]
    )
    return float(max(interior.max(), limits.max()))


def recurrence_defect(
    f: GridFunction, s: int, test_window: Window
) -> ShiftDefect:
    """Forward and backward defect of the integer translation ``s``.

    The forward defect is the largest ``|f(t+s) - f(t)|`` over the test
    lattice, the backward defect the largest ``|f(t-s) - f(t)|``.  Both
    are exact lattice maxima and vanish exactly when ``f`` is
    ``s``-periodic there.

    Raises
    ------
    DomainError
        Raised if the test window translated by ``±s`` leaves the window
        of ``f``.
    """
    a, b = test_window
    if b <= a:
        raise DomainError(f"Empty test window {test_window}")
    if a - abs(s) < f.window[0] or b + abs(s) > f.window[1]:
        raise DomainError(
            f"Test window {test_window} shifted by ±{abs(s)} leaves"
            f" {f.window}"
        )
    return ShiftDefect(
        shift=s,
        forward=_translation_defect(f, s, test_window),
        backward=_translation_defect(f, -s, test_window),
    )


def default_test_window(f: GridFunction) -> Window:
    """Middle half of the window of ``f``."""
    quarter = (f.window[1] - f.window[0]) // 4
    return (f.window[0] + quarter, f.window[1] - quarter)


def zaa_scan(
    f: GridFunction, max_shift: int, test_window: Window | None = None
) -> RecurrenceReport:
    """Search the translations ``1..max_shift`` for the smallest defect.

    The test window does not depend on ``max_shift`` (it defaults to the
    middle half of the window), so enlarging ``max_shift`` only enlarges
    the search space and can never increase the reported minimum.  Ties
    go to the smallest shift.

    Raises
    ------
    DomainError
        Raised if ``max_shift`` is not positive or the window cannot hold
        the test window translated by ``max_shift``.
    """
    if max_shift < 1:
        raise DomainError(f"max_shift must be positive, got {max_shift}")
    if test_window is None:
        test_window = default_test_window(f)
    a, b = test_window
    if b <= a or a - max_shift < f.window[0] or b + max_shift > f.window[1]:
        raise DomainError(
            f"Window {f.window} too small for test window {test_window}"
            f" and shifts up to {max_shift}"
        )
    profile = [
        recurrence_defect(f, s, test_window) for s in range(1, max_shift + 1)
    ]
    best = min(profile, key=lambda d: d.defect)
    structlog.get_logger(APP_NAME).debug(
        "Recurrence scan finished",
        max_shift=max_shift,
        best_shift=best.shift,
        defect=best.defect,
    )
    return RecurrenceReport(
        shifts_tested=[d.shift for d in profile],
        best_shift=best.shift,
        forward_defect=best.forward,
        backward_defect=best.backward,
        test_window=test_window,
        defect_profile=profile,
    )


def _lag_maxima(f: GridFunction) -> np.ndarray:
    """Largest difference between lattice points ``k`` steps apart.

    Entry ``k`` covers pairs inside one closed piece and pairs across one
    integer, where the left side is read on the closed piece (its last
    point being the left limit).  Entry 0 is the jump bound: the left
    limit and the value at the same integer are zero steps apart.
    """
    m = f.samples_per_unit
    closed = f.closed_pieces()
    lags = np.zeros(m + 1)
    jumps = f.jump_sizes()
    lags[0] = jumps.max() if jumps.size else 0.0
    for k in range(1, m + 1):
        lags[k] = vector_norms(closed[:, k:, :] - closed[:, :-k, :]).max()
    if f.n_pieces > 1:
        left = closed[:-1]
        right = closed[1:]
        for k in range(1, m + 1):
            # Pairs (n + 1 - (k - b)/M, n + 1 + b/M) for b = 0..k.
            diff = right[:, : k + 1, :] - left[:, m - k :, :]
            lags[k] = max(lags[k], vector_norms(diff).max())
    return lags


def uc_modulus(
    f: GridFunction, deltas: Iterable[float] = DEFAULT_UC_DELTAS
) -> UCReport:
    """Tabulate the uniform-continuity modulus of ``f``.

    For a scale ``delta``, the modulus is the largest difference between
    lattice points at most ``delta`` apart, with pairs across an integer
    compared through the left-limit slot so that genuine jumps show up at
    every scale.  Below one lattice spacing the table reports the modulus
    of the represented piecewise-linear interpolant, bounded by the jump
    bound plus the steepest lattice slope times ``delta``.

    Raises
    ------
    ConfigurationError
        Raised if a scale is not in ``(0, 1]``.
    """
    scales = sorted(set(deltas))
    if not scales or scales[0] <= 0 or scales[-1] > 1:
        raise ConfigurationError("Scales must lie in (0, 1]")
    m = f.samples_per_unit
    lags = _lag_maxima(f)
    envelope = np.maximum.accumulate(lags)
    adjacent = vector_norms(np.diff(f.closed_pieces(), axis=1)).max()
    table = [(0.0, 0.0)]
    for delta in scales:
        steps = math.floor(delta * m + LATTICE_TOLERANCE)
        interpolant = lags[0] + adjacent * m * min(delta, 1.0 / m)
        lattice = envelope[steps] if steps >= 1 else 0.0
        table.append((delta, float(max(lattice, interpolant))))
    return UCReport(modulus_table=table)


def classify_kaa(
    f: GridFunction,
    eps: float,
    max_shift: int,
    deltas: Iterable[float] = DEFAULT_UC_DELTAS,
    test_window: Window | None = None,
) -> ClassificationReport:
    """One-sided compact almost automorphy verdict.

    A compact almost automorphic function is exactly one that is both
    Z-almost automorphic and uniformly continuous.  Uniform continuity is
    checked first; recurrence is checked with `zaa_scan`.  Only a failure
    is conclusive.
    """
    uc = uc_modulus(f, deltas)
    recurrence = zaa_scan(f, max_shift, test_window)
    if not uc.is_uc_at(eps):
        verdict = KAAVerdict.FAILS_UC
    elif recurrence.min_defect > eps:
        verdict = KAAVerdict.FAILS_RECURRENCE
    else:
        verdict = KAAVerdict.CONSISTENT
    return ClassificationReport(
        verdict=verdict, eps=eps, uc=uc, recurrence=recurrence
    )


def decomposition_check(
    g: GridFunction, h: GridFunction
) -> DecompositionReport:
    """Check ``||g|| + ||h|| <= 3 ||g + h||`` on the common window.

    ``g`` is the recurrent part and ``h`` the part vanishing at infinity,
    which lives on the nonnegative half line.  All three norms are taken
    over the overlap of the two windows.

    Raises
    ------
    DomainError
        Raised if the windows do not overlap in at least one piece, or
        ``h`` extends to negative times.
    """
    if h.window[0] < 0:
        raise DomainError(f"h must live on [0, ∞), got window {h.window}")
    lo = max(g.window[0], h.window[0])
    hi = min(g.window[1], h.window[1])
    if hi <= lo:
        raise DomainError(f"Windows {g.window} and {h.window} do not overlap")
    g_part = g.restrict((lo, hi))
    h_part = h.restrict((lo, hi))
    g_norm = g_part.sup_norm()
    h_norm = h_part.sup_norm()
    f_norm = add(g_part, h_part).sup_norm()
    return DecompositionReport(
        g_norm=g_norm,
        h_norm=h_norm,
        f_norm=f_norm,
        bound_satisfied=g_norm + h_norm <= 3 * f_norm,
    )


def tail_sup(f: GridFunction, pieces: int) -> float:
    """Sup norm over the last ``pieces`` unit intervals of the window.

    A nonzero Z-almost automorphic function cannot tend to zero, so on
    such fixtures the tail stays comparable to the whole sup norm.
    """
    n_hi = f.window[1]
    return f.restrict((max(f.window[0], n_hi - pieces), n_hi)).sup_norm()
