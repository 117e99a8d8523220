import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from discmean import InfeasibleError
from discmean.methods import MethodConfig
from discmean.verify import (
    ConstraintSet,
    CoverageReport,
    TrueDistribution,
    brute_force_max_mean,
    brute_force_merge,
    brute_force_nu_correction,
    coverage_estimate,
    coverage_threshold,
    sample_multinomial,
    trial_rng,
)


def test_true_distribution():
    d = TrueDistribution.uniform([0.0, 1.0, 2.0, 3.0])
    assert d.m == 4 and d.true_mean == pytest.approx(1.5)
    with pytest.raises(ValueError):
        TrueDistribution(np.array([0.5, 0.6]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        TrueDistribution(np.array([0.5, 0.5]), np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        TrueDistribution(np.array([0.5, 0.5]), np.array([0.0, 1.0, 2.0]))


def test_threshold():
    assert coverage_threshold(0.05, 20000) == pytest.approx(0.05 + 3 * np.sqrt(0.05 * 0.95 / 20000))


def test_trial_streams_are_reproducible_and_distinct():
    a = trial_rng(7, 3).random(4)
    assert np.array_equal(a, trial_rng(7, 3).random(4))
    assert not np.array_equal(a, trial_rng(7, 4).random(4))
    assert not np.array_equal(a, trial_rng(8, 3).random(4))


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 500), st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_multinomial_sums_to_n(n, m, seed):
    p = np.random.default_rng(seed).dirichlet(np.ones(m))
    d = TrueDistribution(p / p.sum(), np.arange(m, dtype=float))
    c = sample_multinomial(n, d, trial_rng(seed, 0))
    assert c.sum() == n and np.all(c >= 0)


def test_multinomial_respects_zero_mass():
    d = TrueDistribution(np.array([0.0, 1.0, 0.0]), np.array([0.0, 1.0, 2.0]))
    assert list(sample_multinomial(30, d, trial_rng(0, 0))) == [0, 30, 0]


def test_multinomial_marginals():
    d = TrueDistribution(np.array([0.1, 0.2, 0.3, 0.4]), np.arange(4.0))
    draws = np.array([sample_multinomial(50, d, trial_rng(1, t)) for t in range(4000)])
    for i, p in enumerate(d.probabilities):
        # each marginal is Binomial(50, p)
        _, pval = stats.chisquare(*_binned(draws[:, i], 50, p))
        assert pval > 1e-4


def _binned(x, n, p):
    support = np.arange(n + 1)
    expected = stats.binom.pmf(support, n, p) * x.size
    observed = np.bincount(x, minlength=n + 1).astype(float)
    keep = expected >= 5
    obs = np.r_[observed[keep], observed[~keep].sum()]
    exp = np.r_[expected[keep], expected[~keep].sum()]
    return obs, exp * obs.sum() / exp.sum()


def test_coverage_deterministic_and_valid():
    cfg = MethodConfig("nest")
    d = TrueDistribution.uniform(np.arange(4.0))
    r1 = coverage_estimate(cfg, d, 60, 0.1, 2000, seed=3)
    r2 = coverage_estimate(cfg, d, 60, 0.1, 2000, seed=3)
    assert r1 == r2
    assert r1.passed and r1.failure_rate <= 0.1
    assert r1.method == "nest two"


def test_coverage_rate_matches_exact_miss_probability():
    # n=5, p=1/2: eps = sqrt(ln(2/0.9)/10) ~ 0.28, so the interval misses 0.5
    # exactly when k is 0, 1, 4 or 5, with probability 12/32
    cfg = MethodConfig("hoeffding")
    d = TrueDistribution(np.array([0.5, 0.5]), np.array([0.0, 1.0]))
    r = coverage_estimate(cfg, d, 5, 0.9, 20000, seed=0)
    assert r.failure_rate == pytest.approx(12 / 32, abs=4 * np.sqrt(0.375 * 0.625 / 20000))


def test_report_verdict():
    ok = CoverageReport(1000, 50, 0.05, 0.05, "nest two", 0)
    bad = CoverageReport(1000, 200, 0.2, 0.05, "nest two", 0)
    assert ok.passed and not bad.passed


def test_coverage_rejects_bad_arguments():
    d = TrueDistribution.uniform([0.0, 1.0])
    with pytest.raises(ValueError):
        coverage_estimate("nest", d, 10, 0.05, 10)
    with pytest.raises(ValueError):
        coverage_estimate(MethodConfig("nest"), d, 10, 0.05, 0)


# -- brute-force helpers ----------------------------------------------------

def test_brute_force_cumulative_example():
    c = ConstraintSet(cumulative=np.array([0.0, 0.3, 1.0]))
    assert brute_force_max_mean(c, [0.0, 1.0]) == pytest.approx(0.7)
    c = ConstraintSet(cumulative=np.array([0.3]))
    assert brute_force_max_mean(c, [0.0, 1.0]) == pytest.approx(0.7)


def test_brute_force_box_example():
    c = ConstraintSet(lower=np.array([0.1, 0.2, 0.3]), upper=np.array([0.5, 0.3, 0.6]))
    assert brute_force_max_mean(c, [0.0, 1.0, 2.0]) == pytest.approx(1.5)


def test_brute_force_infeasible_and_limits():
    with pytest.raises(InfeasibleError):
        brute_force_max_mean(ConstraintSet(lower=np.array([0.6, 0.6]), upper=np.ones(2)), [0.0, 1.0])
    with pytest.raises(ValueError):
        brute_force_max_mean(ConstraintSet(), np.arange(5.0))


def test_brute_force_merge_example():
    assert brute_force_merge([0.0, 1.0, 2.0, 10.0, 11.0], 2) == 2.0
    with pytest.raises(ValueError):
        brute_force_merge(np.arange(13.0), 3)


def test_brute_force_nu_example():
    assert brute_force_nu_correction([0.2, 0.3, 0.5], [0.0, 1.0, 2.0], 1) == pytest.approx(0.3)
