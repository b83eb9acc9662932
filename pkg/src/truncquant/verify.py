"""Randomized verification of the quantile bound, its sharpness and strictness.

Every trial draws from its own generator seeded with ``(seed, trial_index)``,
so results do not depend on how trials are split across worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable

import numpy as np

from .bounds import chen_shao_bound, optimal_bound
from .errors import SchemaError
from .extremal import extremal_high, extremal_low
from .measure import DiscreteMeasure, canonicalize, moment, moment_profile
from .serialize import measure_to_dict
from .trunc_cdf import quantile

DEFAULT_C_GRID = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
DEFAULT_P_GRID = (2.25, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0)
GENERATORS = ("random", "dirac", "extremal", "perturbed_extremal")
STRICT_RTOL = 1e-12
MOMENT_RATIO_RANGE = (1.0, 100.0)
PERTURBATION = 1.10


@dataclass(frozen=True)
class TrialConfig:
    seed: int = 0
    n_trials: int = 10_000
    atom_count_range: tuple[int, int] = (1, 8)
    position_range: tuple[float, float] = (0.1, 10.0)
    c_grid: tuple[float, ...] = DEFAULT_C_GRID
    tolerance: float = 1e-9
    generator: str = "random"
    p_grid: tuple[float, ...] = DEFAULT_P_GRID
    workers: int = 1

    def __post_init__(self):
        def bad(msg, where):
            raise SchemaError(msg, where=where)

        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            bad("must be an unsigned 64-bit integer", "seed")
        if isinstance(self.n_trials, bool) or not isinstance(self.n_trials, int) or self.n_trials < 1:
            bad("must be a positive integer", "n_trials")
        kmin, kmax = self.atom_count_range
        if not (isinstance(kmin, int) and isinstance(kmax, int) and 1 <= kmin <= kmax):
            bad("must be integers with 1 <= min <= max", "atom_count_range")
        lo, hi = self.position_range
        if not (0 < lo <= hi and math.isfinite(hi)):
            bad("must satisfy 0 < lo <= hi < inf", "position_range")
        if not self.c_grid or not all(0 < c < 1 for c in self.c_grid):
            bad("must be a nonempty list of values strictly inside (0, 1)", "c_grid")
        if not self.p_grid or not all(2 < p <= 6 for p in self.p_grid):
            bad("must be a nonempty list of values in (2, 6]", "p_grid")
        if not self.tolerance > 0:
            bad("must be > 0", "tolerance")
        if self.generator not in GENERATORS:
            bad(f"must be one of {', '.join(GENERATORS)}", "generator")
        if isinstance(self.workers, bool) or not isinstance(self.workers, int) or self.workers < 1:
            bad("must be a positive integer", "workers")

    @classmethod
    def from_dict(cls, data: Any) -> TrialConfig:
        if not isinstance(data, dict):
            raise SchemaError("expected a JSON object", where="$")
        known = {f for f in cls.__dataclass_fields__}
        unknown = sorted(set(data) - known)
        if unknown:
            raise SchemaError(f"unknown field(s) {', '.join(unknown)}", where="$")
        kw = dict(data)
        try:
            for key in ("atom_count_range", "position_range", "c_grid", "p_grid"):
                if key in kw:
                    kw[key] = tuple(kw[key])
            for key in ("atom_count_range", "position_range"):
                if key in kw and len(kw[key]) != 2:
                    raise SchemaError("expected [min, max]", where=key)
            for key in ("c_grid", "p_grid", "position_range", "tolerance"):
                if key not in kw:
                    continue
                vals = kw[key] if isinstance(kw[key], tuple) else (kw[key],)
                if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals):
                    raise SchemaError("expected numbers", where=key)
        except TypeError:
            raise SchemaError("expected a list", where="$") from None
        return cls(**kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}


@dataclass
class TrialReport:
    trials_run: int = 0
    checks: int = 0
    violations: list[dict] = field(default_factory=list)
    max_gap_ratio: float = 0.0
    strictness_failures: list[dict] = field(default_factory=list)

    def merge(self, other: TrialReport) -> None:
        self.trials_run += other.trials_run
        self.checks += other.checks
        self.violations.extend(other.violations)
        self.max_gap_ratio = max(self.max_gap_ratio, other.max_gap_ratio)
        self.strictness_failures.extend(other.strictness_failures)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.strictness_failures


@dataclass
class ComparisonReport:
    rows: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)


# -- measure generators ----------------------------------------------------


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def random_measure(rng: np.random.Generator, cfg: TrialConfig, min_atoms: int = 1) -> DiscreteMeasure:
    """Atoms log-uniform over ``cfg.position_range`` with flat-Dirichlet weights."""
    kmin, kmax = cfg.atom_count_range
    kmin = max(kmin, min_atoms)
    kmax = max(kmax, kmin)
    while True:
        k = int(rng.integers(kmin, kmax + 1))
        xs = _log_uniform(rng, *cfg.position_range, size=k)
        ws = rng.dirichlet(np.ones(k))
        if np.all(ws > 0):
            m = canonicalize(zip(xs.tolist(), ws.tolist()))
            if len(m) >= min_atoms:
                return m


def random_moments(rng: np.random.Generator, cfg: TrialConfig) -> tuple[float, float]:
    """``(mu3, mu1)`` with ``mu3`` log-uniform and ``mu3*mu1`` log-uniform in [1, 100]."""
    mu3 = float(_log_uniform(rng, *cfg.position_range))
    ratio = float(_log_uniform(rng, *MOMENT_RATIO_RANGE))
    return mu3, ratio / mu3


def perturbed_extremal(c: float, mu3: float, mu1: float, factor: float = PERTURBATION) -> DiscreteMeasure:
    """Extremal two-point measure with only its upper atom moved by ``factor``."""
    spec = extremal_high(c, mu3, mu1)
    if len(spec.measure) == 1:
        # degenerate point mass: split it so the result stays two-point
        x = spec.measure.xs[0]
        return canonicalize([(x, 0.5), (factor * x, 0.5)])
    (u, wu), (v, wv) = spec.measure.atoms
    return canonicalize([(u, wu), (factor * v, wv)])


def _measure_source(cfg: TrialConfig, min_atoms: int) -> Callable[[np.random.Generator], Callable[[float], DiscreteMeasure]]:
    """Per trial, return a function ``c -> measure`` drawing from the trial's generator."""

    def per_trial(rng: np.random.Generator) -> Callable[[float], DiscreteMeasure]:
        if cfg.generator == "random":
            m = random_measure(rng, cfg, min_atoms)
            return lambda c: m
        if cfg.generator == "dirac":
            m = canonicalize([(float(_log_uniform(rng, *cfg.position_range)), 1.0)])
            return lambda c: m

        def for_level(c: float) -> DiscreteMeasure:
            if c <= 0.5:
                if cfg.generator == "extremal":
                    return extremal_low(c, float(_log_uniform(rng, *cfg.position_range))).measure
                return random_measure(rng, cfg, max(min_atoms, 2))
            mu3, mu1 = random_moments(rng, cfg)
            if cfg.generator == "extremal":
                return extremal_high(c, mu3, mu1).measure
            return perturbed_extremal(c, mu3, mu1)

        return for_level

    return per_trial


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


# -- suites ----------------------------------------------------------------


def _bound_chunk(cfg: TrialConfig, start: int, stop: int) -> TrialReport:
    report = TrialReport()
    source = _measure_source(cfg, 1)
    for t in range(start, stop):
        measure_for = source(_trial_rng(cfg.seed, t))
        for c in cfg.c_grid:
            m = measure_for(c)
            prof = moment_profile(m)
            delta = quantile(m, c).delta
            ds = optimal_bound(c, prof.mu3, prof.mu1)
            report.checks += 1
            report.max_gap_ratio = max(report.max_gap_ratio, delta / ds)
            if delta > ds + cfg.tolerance:
                report.violations.append(
                    {"trial": t, "c": c, "delta": delta, "delta_star": ds, "measure": measure_to_dict(m)}
                )
        report.trials_run += 1
    return report


def _strictness_applies(cfg: TrialConfig, m: DiscreteMeasure, c: float) -> bool:
    if c <= 0.5:
        return len(m) >= 2
    return len(m) >= 3 or (cfg.generator == "perturbed_extremal" and len(m) >= 2)


def _strictness_chunk(cfg: TrialConfig, start: int, stop: int) -> TrialReport:
    report = TrialReport()
    source = _measure_source(cfg, 2)
    for t in range(start, stop):
        measure_for = source(_trial_rng(cfg.seed, t))
        for c in cfg.c_grid:
            m = measure_for(c)
            if not _strictness_applies(cfg, m, c):
                continue
            prof = moment_profile(m)
            delta = quantile(m, c).delta
            ds = optimal_bound(c, prof.mu3, prof.mu1)
            report.checks += 1
            report.max_gap_ratio = max(report.max_gap_ratio, delta / ds)
            if not ds - delta > STRICT_RTOL * ds:
                report.strictness_failures.append(
                    {"trial": t, "c": c, "delta": delta, "delta_star": ds, "measure": measure_to_dict(m)}
                )
        report.trials_run += 1
    return report


def _chunks(n: int, parts: int) -> list[tuple[int, int]]:
    size = -(-n // parts)
    return [(i, min(i + size, n)) for i in range(0, n, size)]


def _run(chunk_fn, cfg: TrialConfig) -> TrialReport:
    report = TrialReport()
    if cfg.workers == 1 or cfg.n_trials < 2:
        report.merge(chunk_fn(cfg, 0, cfg.n_trials))
        return report
    bounds = _chunks(cfg.n_trials, cfg.workers * 4)
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        parts = list(pool.map(chunk_fn, [cfg] * len(bounds), *zip(*bounds)))
    for part in parts:
        report.merge(part)
    report.violations.sort(key=lambda v: (v["trial"], v["c"]))
    report.strictness_failures.sort(key=lambda v: (v["trial"], v["c"]))
    return report


def run_bound_suite(cfg: TrialConfig) -> TrialReport:
    """Check ``delta <= delta* + tolerance`` for every trial measure and grid level."""
    return _run(_bound_chunk, cfg)


def run_strictness_suite(cfg: TrialConfig) -> TrialReport:
    """Check ``delta* - delta > 1e-12 * delta*`` wherever equality is impossible.

    That is at ``c <= 1/2`` for supports of two or more points, and at
    ``c > 1/2`` for supports of three or more points or perturbed extremal
    two-point measures.
    """
    return _run(_strictness_chunk, cfg)


def run_chen_shao_comparison(cfg: TrialConfig) -> ComparisonReport:
    """Tabulate exact quantile, optimal bound and Chen-Shao bound over the grids.

    Failures are recorded when the optimal bound is below the quantile, when
    the Chen-Shao bound is below the quantile at ``c <= 1/2`` (it is a median
    bound, so nothing is asserted above 1/2), or when the two bounds differ at
    ``c = 1/2, p = 3``.
    """
    report = ComparisonReport()
    source = _measure_source(cfg, 1)
    for t in range(cfg.n_trials):
        measure_for = source(_trial_rng(cfg.seed, t))
        for c in cfg.c_grid:
            m = measure_for(c)
            prof = moment_profile(m)
            delta = quantile(m, c).delta
            ds = optimal_bound(c, prof.mu3, prof.mu1)
            for p in cfg.p_grid:
                cs = chen_shao_bound(p, moment(m, p))
                row = {"trial": t, "c": c, "p": p, "delta": delta, "optimal": ds, "chen_shao": cs}
                report.rows.append(row)
                problems = []
                if delta > ds + cfg.tolerance:
                    problems.append("optimal bound below quantile")
                if c <= 0.5 and delta > cs + cfg.tolerance:
                    problems.append("chen-shao bound below quantile")
                if c == 0.5 and p == 3 and ds != cs:
                    problems.append("bounds differ at c=1/2, p=3")
                if problems:
                    report.failures.append({**row, "problems": problems, "measure": measure_to_dict(m)})
    return report
