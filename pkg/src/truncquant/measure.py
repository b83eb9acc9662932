"""Finite discrete probability measures on (0, inf) and their moments.

Moments use the shifted exponent ``mu_p = sum(w * x**(p - 2))``, so ``mu_2`` is
the total mass, ``mu_3`` the mean position and ``mu_1`` the mean inverse
position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    EmptyMeasureError,
    LogConvexityViolation,
    MassDeviationError,
    NonpositiveAtomError,
    SchemaError,
)

MASS_TOL = 1e-6
LOG_CONVEXITY_SLACK = 1e-12


def _running_sum(values: Iterable[float]) -> list[float]:
    """Cumulative sums with Neumaier compensation; element 0 is 0.0."""
    out = [0.0]
    s = 0.0
    comp = 0.0
    for v in values:
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
        out.append(s + comp)
    return out


@dataclass(frozen=True)
class DiscreteMeasure:
    """Probability measure with finitely many atoms, sorted by position.

    Build instances with :func:`canonicalize`; the constructor only checks
    structural invariants and does not merge or renormalize.
    """

    xs: tuple[float, ...]
    ws: tuple[float, ...]
    mass_deviation: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if len(self.xs) != len(self.ws):
            raise ValueError("positions and weights differ in length")
        if not self.xs:
            raise EmptyMeasureError("measure has no atoms")
        if any(not (x > 0 and math.isfinite(x)) for x in self.xs):
            raise NonpositiveAtomError("atom positions must be finite and > 0")
        if any(not (w > 0 and math.isfinite(w)) for w in self.ws):
            raise NonpositiveAtomError("atom weights must be finite and > 0")
        if any(a >= b for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("atom positions must be strictly increasing")

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def atoms(self) -> list[tuple[float, float]]:
        return list(zip(self.xs, self.ws))

    @property
    def max_atom(self) -> float:
        return self.xs[-1]

    @cached_property
    def prefix_mass(self) -> tuple[float, ...]:
        """``prefix_mass[j]`` is the mass of the first ``j`` atoms."""
        return tuple(_running_sum(self.ws))

    @cached_property
    def tail_inverse(self) -> tuple[float, ...]:
        """``tail_inverse[j]`` is ``sum(w/x)`` over atoms ``j, j+1, ...`` (0-based)."""
        parts = _running_sum(w / x for x, w in zip(reversed(self.xs), reversed(self.ws)))
        return tuple(reversed(parts))

    def scaled(self, s: float) -> DiscreteMeasure:
        """Push the measure forward under ``x -> s*x``."""
        if not s > 0:
            raise NonpositiveAtomError(f"scale factor must be > 0, got {s!r}")
        return DiscreteMeasure(tuple(s * x for x in self.xs), self.ws)


def canonicalize(raw_atoms: Iterable[Sequence[float]]) -> DiscreteMeasure:
    """Sort atoms, merge equal positions and renormalize to unit mass.

    Raises
    ------
    EmptyMeasureError
        If no atoms are given.
    NonpositiveAtomError
        If a position or weight is not a finite positive number.
    MassDeviationError
        If the total weight differs from 1 by more than ``MASS_TOL``.
    """
    merged: dict[float, list[float]] = {}
    count = 0
    for i, atom in enumerate(raw_atoms):
        x, w = (float(a) for a in atom)
        if not (x > 0 and math.isfinite(x)):
            raise NonpositiveAtomError(f"atom {i}: position x={x!r} is not a finite positive number")
        if not (w > 0 and math.isfinite(w)):
            raise NonpositiveAtomError(f"atom {i}: weight w={w!r} is not a finite positive number")
        merged.setdefault(x, []).append(w)
        count += 1
    if count == 0:
        raise EmptyMeasureError("measure has no atoms")

    xs = sorted(merged)
    ws = [math.fsum(merged[x]) for x in xs]
    mass = math.fsum(ws)
    if abs(mass - 1.0) > MASS_TOL:
        raise MassDeviationError(mass, MASS_TOL)
    if mass != 1.0:
        ws = [w / mass for w in ws]
    # push the rounding residual onto the heaviest atom so fsum(ws) == 1
    for _ in range(4):
        residual = 1.0 - math.fsum(ws)
        if residual == 0.0:
            break
        j = max(range(len(ws)), key=ws.__getitem__)
        ws[j] += residual
    return DiscreteMeasure(tuple(xs), tuple(ws), mass_deviation=mass - 1.0)


def dirac(a: float) -> DiscreteMeasure:
    return canonicalize([(a, 1.0)])


def moment(m: DiscreteMeasure, p: float) -> float:
    """Return ``mu_p = sum(w * x**(p-2))``; exactly 1 for ``p == 2``."""
    if p == 2:
        return 1.0
    e = p - 2.0
    if e == 1.0:
        return math.fsum(w * x for x, w in zip(m.xs, m.ws))
    if e == -1.0:
        return math.fsum(w / x for x, w in zip(m.xs, m.ws))
    return math.fsum(w * x**e for x, w in zip(m.xs, m.ws))


@dataclass(frozen=True)
class MomentProfile:
    mu1: float
    mu2: float
    mu3: float


def moment_profile(m: DiscreteMeasure) -> MomentProfile:
    mu1 = moment(m, 1)
    mu3 = moment(m, 3)
    if mu1 * mu3 < 1.0 - LOG_CONVEXITY_SLACK:
        raise LogConvexityViolation(f"mu1*mu3 = {mu1 * mu3!r} < 1 for a probability measure")
    return MomentProfile(mu1=mu1, mu2=1.0, mu3=mu3)


@dataclass(frozen=True)
class RVCollection:
    """Random variables xi_1..xi_n given by their marginal laws.

    Each variable is a tuple of ``(value, prob)`` support points. The joint
    law is irrelevant to the induced measure.
    """

    variables: tuple[tuple[tuple[float, float], ...], ...]

    def __post_init__(self):
        if not self.variables:
            raise SchemaError("collection has no variables")
        for i, var in enumerate(self.variables):
            if not var:
                raise SchemaError("empty support", where=f"variables[{i}]")
            for j, (v, p) in enumerate(var):
                if not math.isfinite(v):
                    raise SchemaError(f"value {v!r} is not finite", where=f"variables[{i}].support[{j}].v")
                if not (p > 0 and math.isfinite(p)):
                    raise SchemaError(f"probability {p!r} is not positive", where=f"variables[{i}].support[{j}].p")
            total = math.fsum(p for _, p in var)
            if abs(total - 1.0) > MASS_TOL:
                raise SchemaError(f"probabilities sum to {total!r}, not 1", where=f"variables[{i}]")

    @classmethod
    def from_lists(cls, variables: Iterable[Iterable[Sequence[float]]]) -> RVCollection:
        return cls(tuple(tuple((float(v), float(p)) for v, p in var) for var in variables))

    @property
    def n(self) -> int:
        return len(self.variables)

    def second_moment_sum(self) -> float:
        return math.fsum(p * v * v for var in self.variables for v, p in var)


def build_mu_xi(rvs: RVCollection) -> DiscreteMeasure:
    """Measure placing mass ``p*v**2`` at ``|v|`` for every support point of every variable.

    Zero values carry no mass and are dropped. Raises ``MassDeviationError``
    unless ``sum_i E xi_i**2`` is within ``MASS_TOL`` of 1.
    """
    mass = rvs.second_moment_sum()
    if abs(mass - 1.0) > MASS_TOL:
        raise MassDeviationError(mass, MASS_TOL)
    atoms = ((abs(v), p * v * v) for var in rvs.variables for v, p in var)
    return canonicalize(a for a in atoms if a[1] > 0.0)
