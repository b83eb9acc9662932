"""The truncation CDF ``L(d) = sum(w * min(1, d/x))`` and its exact inversion.

With atoms ``x_1 < ... < x_k``, ``L`` is affine on ``(0, x_1]`` and on every
``[x_j, x_{j+1}]``: there ``L(d) = P_j + d * S_j`` where ``P_j`` is the mass of
the first ``j`` atoms and ``S_j`` the sum of ``w/x`` over the remaining ones.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidQuantileLevelError, NonpositiveArgumentError, NonpositiveToleranceError
from .measure import DiscreteMeasure


class SolveMethod(str, Enum):
    EXACT_PIECEWISE = "exact_piecewise"
    BISECTION = "bisection"


@dataclass(frozen=True)
class QuantileResult:
    """Root ``delta`` of ``L(d) = c``.

    ``segment_index`` is the number of atoms at or below ``delta``: 0 means the
    root lies in ``(0, x_1)``, ``j`` means it lies in ``[x_j, x_{j+1})``.
    """

    c: float
    delta: float
    segment_index: int
    method: SolveMethod


def check_level(c: float) -> None:
    if not (0.0 < c < 1.0):
        raise InvalidQuantileLevelError(c)


def eval_L(m: DiscreteMeasure, d: float) -> float:
    if not d > 0:
        raise NonpositiveArgumentError(f"L is defined for d > 0, got {d!r}")
    j = bisect_right(m.xs, d)
    if j == len(m.xs):
        return 1.0
    return m.prefix_mass[j] + d * m.tail_inverse[j]


def quantile(m: DiscreteMeasure, c: float) -> QuantileResult:
    """Solve ``L(d) = c`` exactly by locating the affine piece holding the root."""
    check_level(c)
    xs, prefix, tail = m.xs, m.prefix_mass, m.tail_inverse
    lo = 0.0
    for j, x in enumerate(xs):
        at_atom = 1.0 if j == len(xs) - 1 else prefix[j + 1] + x * tail[j + 1]
        if at_atom == c:
            return QuantileResult(c, x, j + 1, SolveMethod.EXACT_PIECEWISE)
        if at_atom > c:
            delta = (c - prefix[j]) / tail[j]
            delta = min(max(delta, lo), x)
            return QuantileResult(c, delta, j, SolveMethod.EXACT_PIECEWISE)
        lo = x
    # L(x_k) = 1 > c, so the loop always returns
    raise AssertionError("unreachable: no segment bracketed the quantile level")


def _L_direct(m: DiscreteMeasure, d: float) -> float:
    return math.fsum(w * min(1.0, d / x) for x, w in zip(m.xs, m.ws))


def quantile_bisect(m: DiscreteMeasure, c: float, tol: float = 1e-12) -> QuantileResult:
    """Bisection oracle for :func:`quantile`.

    Evaluates ``L`` by direct summation so that it shares no code with the
    piecewise solver. Starts from ``[c*x_1, x_k]``, where ``L(c*x_1) <= c``
    because ``x_1 * mu_1 <= 1``.
    """
    check_level(c)
    if not tol > 0:
        raise NonpositiveToleranceError(f"tolerance must be > 0, got {tol!r}")
    lo, hi = c * m.xs[0], m.xs[-1]
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _L_direct(m, mid) < c:
            lo = mid
        else:
            hi = mid
    delta = 0.5 * (lo + hi)
    return QuantileResult(c, delta, bisect_right(m.xs, delta), SolveMethod.BISECTION)
