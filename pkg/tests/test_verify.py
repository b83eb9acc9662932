import math

import pytest

from truncquant.errors import SchemaError
from truncquant.extremal import extremal_high
from truncquant.measure import canonicalize, moment_profile
from truncquant.bounds import optimal_bound
from truncquant.trunc_cdf import quantile
from truncquant.verify import (
    TrialConfig,
    perturbed_extremal,
    run_bound_suite,
    run_chen_shao_comparison,
    run_strictness_suite,
)


def cfg(**kw):
    kw.setdefault("n_trials", 300)
    return TrialConfig(**kw)


class TestConfig:
    @pytest.mark.parametrize(
        "bad",
        [
            {"n_trials": 0},
            {"seed": -1},
            {"atom_count_range": (0, 3)},
            {"atom_count_range": (4, 3)},
            {"position_range": (0.0, 1.0)},
            {"c_grid": ()},
            {"c_grid": (0.5, 1.0)},
            {"p_grid": (2.0,)},
            {"tolerance": 0.0},
            {"generator": "uniform"},
            {"workers": 0},
        ],
    )
    def test_invalid(self, bad):
        with pytest.raises(SchemaError):
            TrialConfig(**bad)

    def test_round_trip(self):
        c = cfg(seed=7, c_grid=(0.25, 0.75))
        assert TrialConfig.from_dict(c.to_dict()) == c

    def test_unknown_field(self):
        with pytest.raises(SchemaError):
            TrialConfig.from_dict({"trials": 3})


class TestBoundSuite:
    def test_random_measures_have_no_violations(self):
        rep = run_bound_suite(cfg(n_trials=2000))
        assert rep.trials_run == 2000
        assert rep.checks == 2000 * 9
        assert rep.violations == []
        assert rep.max_gap_ratio <= 1 + 1e-9

    def test_dirac_measures_attain(self):
        rep = run_bound_suite(cfg(generator="dirac", c_grid=(0.1, 0.25, 0.4, 0.5)))
        assert rep.violations == []
        assert rep.max_gap_ratio == pytest.approx(1.0, abs=1e-12)

    def test_extremal_measures_attain(self):
        rep = run_bound_suite(cfg(generator="extremal"))
        assert rep.violations == []
        assert rep.max_gap_ratio == pytest.approx(1.0, abs=1e-10)

    def test_violation_is_recorded_with_replayable_measure(self, monkeypatch):
        import truncquant.verify as mod

        monkeypatch.setattr(mod, "optimal_bound", lambda c, mu3, mu1: 1e-12)
        rep = mod.run_bound_suite(cfg(n_trials=3, c_grid=(0.5,)))
        assert len(rep.violations) == 3
        v = rep.violations[0]
        m = canonicalize((a["x"], a["w"]) for a in v["measure"]["atoms"])
        assert quantile(m, v["c"]).delta == v["delta"]

    def test_deterministic(self):
        a = run_bound_suite(cfg(seed=11))
        b = run_bound_suite(cfg(seed=11))
        assert a == b

    def test_parallel_matches_serial(self):
        serial = run_bound_suite(cfg(seed=3, n_trials=200, generator="perturbed_extremal"))
        parallel = run_bound_suite(cfg(seed=3, n_trials=200, generator="perturbed_extremal", workers=2))
        assert serial == parallel


class TestStrictness:
    def test_random_three_plus(self):
        rep = run_strictness_suite(cfg(atom_count_range=(3, 8), c_grid=(0.75,)))
        assert rep.checks == 300
        assert rep.strictness_failures == []

    def test_random_two_atoms_low_levels(self):
        rep = run_strictness_suite(cfg(atom_count_range=(2, 2), c_grid=(0.25,)))
        assert rep.checks == 300
        assert rep.strictness_failures == []

    def test_two_atoms_high_levels_are_not_checked(self):
        rep = run_strictness_suite(cfg(atom_count_range=(2, 2), c_grid=(0.75,)))
        assert rep.checks == 0

    def test_perturbed_extremal(self):
        rep = run_strictness_suite(cfg(generator="perturbed_extremal", c_grid=(0.75,)))
        assert rep.checks == 300
        assert rep.strictness_failures == []

    def test_perturbation_breaks_equality(self):
        m = perturbed_extremal(0.75, 2.0, 2 / 3)
        assert m.xs == (0.75, 2.75)
        prof = moment_profile(m)
        ds = optimal_bound(0.75, prof.mu3, prof.mu1)
        assert ds - quantile(m, 0.75).delta > 1e-12 * ds

    def test_uniform_rescaling_stays_extremal(self):
        m = extremal_high(0.75, 2.0, 2 / 3).measure.scaled(1.1)
        prof = moment_profile(m)
        ds = optimal_bound(0.75, prof.mu3, prof.mu1)
        assert quantile(m, 0.75).delta == pytest.approx(ds, rel=1e-12)

    def test_point_masses_are_skipped(self):
        rep = run_strictness_suite(cfg(generator="extremal", n_trials=20, c_grid=(0.25,)))
        assert rep.trials_run == 20 and rep.checks == 0

    def test_equality_is_recorded_as_failure(self, monkeypatch):
        import truncquant.verify as mod

        monkeypatch.setattr(mod, "optimal_bound", lambda c, mu3, mu1: 1.0)
        monkeypatch.setattr(mod, "quantile", lambda m, c: type("R", (), {"delta": 1.0})())
        rep = mod.run_strictness_suite(cfg(n_trials=5, c_grid=(0.25,)))
        assert len(rep.strictness_failures) == 5
        assert not rep.ok


class TestChenShaoComparison:
    def test_rows_and_coincidence(self):
        rep = run_chen_shao_comparison(cfg(n_trials=50, c_grid=(0.3, 0.5, 0.9), p_grid=(2.5, 3.0, 4.0, 6.0)))
        assert len(rep.rows) == 50 * 3 * 4
        assert rep.failures == []
        for row in rep.rows:
            if row["c"] == 0.5 and row["p"] == 3.0:
                assert row["optimal"] == row["chen_shao"]

    def test_dirac_at_one(self):
        rep = run_chen_shao_comparison(cfg(n_trials=1, generator="dirac", position_range=(1.0, 1.0), c_grid=(0.5,), p_grid=(4.0,)))
        (row,) = rep.rows
        assert row["delta"] == 0.5
        assert row["chen_shao"] == pytest.approx(math.sqrt(8 / 27), rel=1e-15)

    def test_high_levels_not_asserted(self):
        rep = run_chen_shao_comparison(cfg(n_trials=1, generator="dirac", position_range=(1.0, 1.0), c_grid=(0.9,), p_grid=(3.0,)))
        (row,) = rep.rows
        assert row["chen_shao"] < row["delta"]
        assert rep.failures == []
