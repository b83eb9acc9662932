"""Closed-form upper bounds on the c-quantile of the truncation CDF.

The optimal bound uses only ``c``, ``mu_3`` and ``mu_1``::

    delta* = c * mu3                                  for 0 < c <= 1/2
    delta* = (mu3 - (2c-1)**2 / mu1) / (4 (1-c))      for 1/2 <= c < 1

For ``c > 1/2`` it is the minimum over ``u > 0`` of the quadratic family
``(mu3 - 2u(2c-1) + mu1 u**2) / (4(1-c))``, attained at ``u* = (2c-1)/mu1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InvalidOrderError, InvalidQuantileLevelError, MomentInconsistencyError
from .trunc_cdf import check_level

MOMENT_SLACK = 1e-12


class Branch(str, Enum):
    LOW_C = "low_c"
    HIGH_C = "high_c"


def check_moments(mu3: float, mu1: float | None = None) -> None:
    if not mu3 > 0:
        raise MomentInconsistencyError(f"mu3 must be > 0, got {mu3!r}")
    if mu1 is None:
        return
    if not mu1 > 0:
        raise MomentInconsistencyError(f"mu1 must be > 0, got {mu1!r}")
    if mu1 * mu3 < 1.0 - MOMENT_SLACK:
        raise MomentInconsistencyError(
            f"mu1*mu3 = {mu1 * mu3!r} < 1; no probability measure has these moments"
        )


def _check_high_level(c: float) -> None:
    if not (0.5 < c < 1.0):
        raise InvalidQuantileLevelError(c, "(1/2, 1)")


def low_branch_bound(c: float, mu3: float) -> float:
    """``c * mu3``; valid as a bound for ``0 < c <= 1/2``."""
    return c * mu3


def high_branch_bound(c: float, mu3: float, mu1: float) -> float:
    """``(mu3 - (2c-1)**2/mu1) / (4(1-c))``; valid as a bound for ``1/2 <= c < 1``."""
    t = 2.0 * c - 1.0
    return (mu3 - t * t / mu1) / (4.0 * (1.0 - c))


def branch_for(c: float) -> Branch:
    return Branch.LOW_C if c <= 0.5 else Branch.HIGH_C


def optimal_bound(c: float, mu3: float, mu1: float | None = None) -> float:
    """Optimal upper bound delta* on the c-quantile given ``mu3`` and ``mu1``.

    ``mu1`` may be omitted when ``c <= 1/2``, where the bound does not use it.
    At ``c == 1/2`` the low branch is evaluated; both equal ``mu3/2`` there.
    """
    check_level(c)
    check_moments(mu3, mu1)
    if c <= 0.5:
        return low_branch_bound(c, mu3)
    if mu1 is None:
        raise MomentInconsistencyError("mu1 is required when c > 1/2")
    return high_branch_bound(c, mu3, mu1)


def delta_star_family(c: float, u: float, mu3: float, mu1: float) -> float:
    _check_high_level(c)
    if not u > 0:
        raise ValueError(f"u must be > 0, got {u!r}")
    return (mu3 - 2.0 * u * (2.0 * c - 1.0) + mu1 * u * u) / (4.0 * (1.0 - c))


def u_star(c: float, mu1: float) -> float:
    """Minimizer ``(2c-1)/mu1`` of :func:`delta_star_family`."""
    _check_high_level(c)
    if not mu1 > 0:
        raise MomentInconsistencyError(f"mu1 must be > 0, got {mu1!r}")
    return (2.0 * c - 1.0) / mu1


def chen_shao_bound(p: float, mu_p: float) -> float:
    """Median bound ``(2 (p-2)**(p-2) / (p-1)**(p-1) * mu_p) ** (1/(p-2))`` for ``p > 2``."""
    if not p > 2:
        raise InvalidOrderError(f"order p must be > 2, got {p!r}")
    if not mu_p > 0:
        raise MomentInconsistencyError(f"mu_p must be > 0, got {mu_p!r}")
    e = p - 2.0
    factor = 2.0 * e**e / (p - 1.0) ** (p - 1.0)
    return (factor * mu_p) ** (1.0 / e)


@dataclass(frozen=True)
class BoundReport:
    c: float
    delta_star: float
    branch: Branch
    chen_shao_p3: float
    u_star: float | None = None
    exact_delta: float | None = None
    gap: float | None = None


def bound_report(c: float, mu3: float, mu1: float | None = None, exact_delta: float | None = None) -> BoundReport:
    ds = optimal_bound(c, mu3, mu1)
    branch = branch_for(c)
    return BoundReport(
        c=c,
        delta_star=ds,
        branch=branch,
        chen_shao_p3=chen_shao_bound(3.0, mu3),
        u_star=u_star(c, mu1) if branch is Branch.HIGH_C else None,
        exact_delta=exact_delta,
        gap=None if exact_delta is None else ds - exact_delta,
    )
