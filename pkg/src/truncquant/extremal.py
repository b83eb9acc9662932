"""Measures whose c-quantile equals the optimal bound delta*.

For ``c <= 1/2`` this is the point mass at ``mu3``. For ``c > 1/2`` it puts
mass ``1 - pi`` at ``u* = (2c-1)/mu1`` and ``pi`` at ``v* = 2 delta* - u*``, with

    pi = 2(1-c)(mu3 mu1 - (2c-1)) / (4(1-c)**2 + mu3 mu1 - 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .bounds import check_moments, high_branch_bound, low_branch_bound
from .bounds import u_star as _u_star
from .errors import AttainmentError, InvalidQuantileLevelError
from .measure import DiscreteMeasure, canonicalize
from .trunc_cdf import quantile

DEGENERATE_SLACK = 1e-12
ATTAINMENT_RTOL = 1e-10


@dataclass(frozen=True)
class ExtremalSpec:
    c: float
    mu3_target: float
    mu1_target: float | None
    measure: DiscreteMeasure
    delta_star: float
    delta: float
    u_star: float | None = None
    v_star: float | None = None
    pi: float | None = None


def _attained(m: DiscreteMeasure, c: float, delta_star: float) -> float:
    delta = quantile(m, c).delta
    if abs(delta - delta_star) > ATTAINMENT_RTOL * delta_star:
        raise AttainmentError(
            f"constructed measure has quantile {delta!r}, expected delta* = {delta_star!r}"
        )
    return delta


def extremal_low(c: float, mu3: float) -> ExtremalSpec:
    if not (0.0 < c <= 0.5):
        raise InvalidQuantileLevelError(c, "(0, 1/2]")
    check_moments(mu3)
    m = canonicalize([(mu3, 1.0)])
    ds = low_branch_bound(c, mu3)
    return ExtremalSpec(c, mu3, None, m, ds, _attained(m, c, ds))


def two_point_weights(c: float, mu3: float, mu1: float) -> tuple[float, float]:
    """Return ``(1 - pi, pi)``, each computed without cancellation."""
    a = 1.0 - c
    t = 2.0 * c - 1.0
    r = mu3 * mu1
    denom = 4.0 * a * a + (r - 1.0)
    return t * (r - 1.0) / denom, min(2.0 * a * (r - t) / denom, 1.0)


def extremal_high(c: float, mu3: float, mu1: float) -> ExtremalSpec:
    """Two-point measure with moments ``(mu1, mu3)`` and c-quantile delta*.

    Collapses to the point mass at ``1/mu1`` (``pi = 1``) when
    ``mu3*mu1 - 1 < DEGENERATE_SLACK``.
    """
    if not (0.5 < c < 1.0):
        raise InvalidQuantileLevelError(c, "(1/2, 1)")
    check_moments(mu3, mu1)
    ds = high_branch_bound(c, mu3, mu1)
    u = _u_star(c, mu1)
    v = 2.0 * ds - u
    if mu3 * mu1 - 1.0 < DEGENERATE_SLACK:
        m = canonicalize([(1.0 / mu1, 1.0)])
        pi = 1.0
    else:
        w_u, pi = two_point_weights(c, mu3, mu1)
        m = canonicalize([(u, w_u), (v, pi)])
    return ExtremalSpec(c, mu3, mu1, m, ds, _attained(m, c, ds), u_star=u, v_star=v, pi=pi)


def extremal_measure(c: float, mu3: float, mu1: float | None = None) -> ExtremalSpec:
    if c <= 0.5:
        return extremal_low(c, mu3)
    if mu1 is None:
        raise InvalidQuantileLevelError(c, "(0, 1/2] when mu1 is not given")
    return extremal_high(c, mu3, mu1)
