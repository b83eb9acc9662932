"""Exit criteria. Each test records one PASS/FAIL line shown in the terminal summary."""

import math

import numpy as np

from truncquant.bounds import (
    chen_shao_bound,
    delta_star_family,
    high_branch_bound,
    low_branch_bound,
    optimal_bound,
    u_star,
)
from truncquant.cli import main
from truncquant.extremal import extremal_high, extremal_low
from truncquant.measure import canonicalize, moment, moment_profile
from truncquant.trunc_cdf import eval_L, quantile, quantile_bisect
from truncquant.verify import TrialConfig, random_measure, run_bound_suite, run_strictness_suite

GRID_05 = tuple(round(0.05 * k, 2) for k in range(1, 20))
MEASURES = dict(atom_count_range=(1, 8), position_range=(0.1, 10.0))


def log_uniform(rng, lo, hi):
    return float(np.exp(rng.uniform(math.log(lo), math.log(hi))))


def open_uniform(rng, lo, hi):
    while True:
        x = float(rng.uniform(lo, hi))
        if lo < x < hi:
            return x


def moment_pair(rng):
    mu3 = log_uniform(rng, 0.1, 10.0)
    return mu3, log_uniform(rng, 1.0, 100.0) / mu3


def test_ac01_bound_dominance(acceptance):
    rep = run_bound_suite(TrialConfig(seed=1, n_trials=10_000, c_grid=GRID_05, tolerance=1e-9, **MEASURES))
    ok = rep.trials_run == 10_000 and rep.checks == 10_000 * 19 and not rep.violations
    acceptance("AC1 bound dominance, 1e4 measures x 19 levels", ok, f"violations={len(rep.violations)}, max ratio={rep.max_gap_ratio:.17g}")
    assert ok


def test_ac02_sharpness_low(acceptance):
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        c = 0.5 - open_uniform(rng, 0.0, 0.5) if rng.random() < 0.99 else 0.5
        mu3 = log_uniform(rng, 1e-2, 1e2)
        m = canonicalize([(mu3, 1.0)])
        worst = max(worst, abs(quantile(m, c).delta / optimal_bound(c, mu3) - 1))
        assert extremal_low(c, mu3).measure == m
    ok = worst <= 1e-12
    acceptance("AC2 sharpness c<=1/2 (point mass at mu3)", ok, f"max |ratio-1|={worst:.3g}")
    assert ok


def test_ac03_sharpness_high(acceptance):
    rng = np.random.default_rng(3)
    worst_mom = worst_ratio = 0.0
    for _ in range(1000):
        c = open_uniform(rng, 0.5, 1.0)
        mu3, mu1 = moment_pair(rng)
        spec = extremal_high(c, mu3, mu1)
        prof = moment_profile(spec.measure)
        worst_mom = max(worst_mom, abs(prof.mu1 / mu1 - 1), abs(prof.mu3 / mu3 - 1))
        worst_ratio = max(worst_ratio, abs(quantile(spec.measure, c).delta / optimal_bound(c, mu3, mu1) - 1))
    ok = worst_mom <= 1e-12 and worst_ratio <= 1e-10
    acceptance("AC3 sharpness c>1/2 (two-point measure)", ok, f"moment rel err={worst_mom:.3g}, |ratio-1|={worst_ratio:.3g}")
    assert ok


def test_ac04_branch_agreement(acceptance):
    rng = np.random.default_rng(4)
    mismatches = 0
    for _ in range(1000):
        mu3, mu1 = moment_pair(rng)
        lo, hi = low_branch_bound(0.5, mu3), high_branch_bound(0.5, mu3, mu1)
        mismatches += not (lo == hi == mu3 / 2)
    ok = mismatches == 0
    acceptance("AC4 branch formulas agree exactly at c=1/2", ok, f"mismatches={mismatches}")
    assert ok


def test_ac05_chen_shao(acceptance):
    rng = np.random.default_rng(5)
    unequal = 0
    for _ in range(1000):
        mu3, mu1 = moment_pair(rng)
        unequal += chen_shao_bound(3, mu3) != optimal_bound(0.5, mu3, mu1)
    cfg = TrialConfig(**MEASURES)
    below = 0
    for _ in range(1000):
        m = random_measure(rng, cfg)
        delta = quantile(m, 0.5).delta
        below += sum(delta > chen_shao_bound(p, moment(m, p)) + 1e-9 for p in (2.5, 3.0, 4.0, 6.0))
    ok = unequal == 0 and below == 0
    acceptance("AC5 Chen-Shao coincidence at p=3 and dominance of the median", ok, f"unequal={unequal}, dominance failures={below}")
    assert ok


def test_ac06_strictness(acceptance):
    three = run_strictness_suite(TrialConfig(seed=6, n_trials=1000, atom_count_range=(3, 8), position_range=(0.1, 10.0), c_grid=GRID_05))
    low = tuple(c for c in GRID_05 if c <= 0.5)
    two = run_strictness_suite(TrialConfig(seed=7, n_trials=1000, atom_count_range=(2, 8), position_range=(0.1, 10.0), c_grid=low))
    ok = (
        three.checks == 1000 * len(GRID_05)
        and two.checks == 1000 * len(low)
        and not three.strictness_failures
        and not two.strictness_failures
    )
    acceptance(
        "AC6 strictness (>=3 atoms all levels, >=2 atoms c<=1/2)",
        ok,
        f"checks={three.checks}+{two.checks}, failures={len(three.strictness_failures) + len(two.strictness_failures)}",
    )
    assert ok


def test_ac07_solver_oracle_agreement(acceptance):
    rng = np.random.default_rng(8)
    cfg = TrialConfig(**MEASURES)
    worst_diff = worst_rt = 0.0
    for _ in range(10_000):
        m = random_measure(rng, cfg)
        c = open_uniform(rng, 0.0, 1.0)
        delta = quantile(m, c).delta
        worst_diff = max(worst_diff, abs(delta - quantile_bisect(m, c, 1e-12).delta))
        worst_rt = max(worst_rt, abs(eval_L(m, delta) - c))
    ok = worst_diff <= 2e-12 and worst_rt <= 1e-12
    acceptance("AC7 exact solver vs bisection oracle, round trip", ok, f"max diff={worst_diff:.3g}, max |L(delta)-c|={worst_rt:.3g}")
    assert ok


def test_ac08_family_minimization(acceptance):
    rng = np.random.default_rng(9)
    worst_below = worst_eq = 0.0
    for _ in range(1000):
        c = open_uniform(rng, 0.5, 1.0)
        mu3, mu1 = moment_pair(rng)
        us = u_star(c, mu1)
        at_min = delta_star_family(c, us, mu3, mu1)
        worst_eq = max(worst_eq, abs(at_min - optimal_bound(c, mu3, mu1)))
        for _ in range(100):
            u = log_uniform(rng, us / 100, us * 100)
            worst_below = max(worst_below, at_min - delta_star_family(c, u, mu3, mu1))
    ok = worst_below <= 1e-12 and worst_eq <= 1e-12
    acceptance("AC8 family minimized at u*", ok, f"max undershoot={worst_below:.3g}, |family(u*)-delta*|={worst_eq:.3g}")
    assert ok


def test_ac09_worked_instance(acceptance):
    c, mu3, mu1 = 0.75, 2.0, 2 / 3
    spec = extremal_high(c, mu3, mu1)
    m = spec.measure
    checks = {
        "delta*": abs(optimal_bound(c, mu3, mu1) - 1.625),
        "u*": abs(spec.u_star - 0.75),
        "v*": abs(spec.v_star - 2.5),
        "pi": abs(spec.pi - 5 / 7),
        "L(1.625)": abs(eval_L(m, 1.625) - 0.75),
        "bisection": abs(quantile_bisect(m, c, 1e-13).delta - 1.625),
    }
    ok = all(v <= 1e-12 for v in checks.values())
    acceptance("AC9 worked instance c=0.75, mu3=2, mu1=2/3", ok, ", ".join(f"{k} err={v:.2g}" for k, v in checks.items()))
    assert ok


def test_ac10_determinism(acceptance, tmp_path, capsys):
    outs = []
    for name, workers in (("serial_a", "1"), ("serial_b", "1"), ("parallel", "2")):
        path = tmp_path / f"{name}.json"
        code = main(["verify", "--seed", "123", "--trials", "2000", "--workers", workers, "--out", str(path)])
        assert code == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    ok = outs[0] == outs[1] == outs[2]
    acceptance("AC10 verify report byte-identical (serial x2, parallel)", ok, f"{len(outs[0])} bytes")
    assert ok
