import numpy as np
import pytest

from rcfluct.stats import jackknife, jackknife_cov, ks_normal, verify_normality


def test_jackknife_mean_se_is_the_usual_one():
    x = np.random.default_rng(0).standard_normal(200)
    est, se = jackknife(x, np.mean)
    assert est == pytest.approx(x.mean())
    assert se == pytest.approx(x.std(ddof=1) / np.sqrt(len(x)))


def test_fast_jackknife_cov_matches_generic():
    X = np.random.default_rng(1).standard_normal((60, 3)) @ np.array([[1, 0.5, 0], [0, 1, 0.3], [0, 0, 2]])
    cov, se = jackknife_cov(X)
    slow_cov, slow_se = jackknife(X, lambda d: np.cov(d, rowvar=False))
    assert np.allclose(cov, slow_cov)
    assert np.allclose(se, slow_se)
    assert np.array_equal(cov, cov.T)


def test_ks_calibration():
    passes = 0
    for seed in range(100):
        x = np.random.default_rng(seed).normal(0, np.sqrt(2.5), 10**5)
        passes += verify_normality(x, 2.5).ks_pvalue > 0.01
    assert passes >= 95


def test_ks_detects_gross_mismatch():
    x = np.random.default_rng(0).uniform(0, 1, 10**5)
    assert ks_normal(x, 1.0)[1] < 1e-6
    assert not verify_normality(x, 1.0).passed


def test_degenerate_and_invalid():
    assert verify_normality(np.zeros(10), 0.0).passed
    assert verify_normality(np.zeros(10), 0.0).degenerate
    assert not verify_normality(np.ones(10), 0.0).passed
    with pytest.raises(ValueError):
        verify_normality(np.zeros(1000), -1.0)
    with pytest.raises(ValueError):
        verify_normality(np.zeros(100), 1.0)


def test_moment_diagnostics():
    x = np.random.default_rng(3).exponential(size=5000)
    d = verify_normality(x - 1, 1.0)
    assert d.skewness_z > 10 and d.kurtosis_z > 10
