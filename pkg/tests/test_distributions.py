from fractions import Fraction

import numpy as np
import pytest

from rcfluct.distributions import (
    BUILTIN_KINDS,
    EntryDistribution,
    MomentProfile,
    check_moments,
    get_distribution,
    replicate_rng,
    sample_entries,
)


def test_fourth_moments():
    assert [get_distribution(k).mu4 for k in BUILTIN_KINDS] == [3, 1, Fraction(9, 5), 9]


def test_profiles_are_standardized(dist):
    mp = dist.moments
    assert mp.order == 12
    assert mp.mu(0) == 1 and mp.mu(1) == 0 and mp.mu(2) == 1
    with pytest.raises(ValueError):
        mp.mu(13)


def test_known_moment_values():
    assert get_distribution("gaussian").moments.mu(6) == 15
    assert get_distribution("uniform").moments.mu(6) == Fraction(27, 7)
    # central moments of Exp(1) are the subfactorials
    assert [get_distribution("shifted_exponential").moments.mu(k) for k in range(1, 7)] == [0, 1, 2, 9, 44, 265]


def test_profile_validation():
    with pytest.raises(ValueError):
        MomentProfile((0, 2, 0, 3))
    with pytest.raises(ValueError):
        MomentProfile((0, 1, 0))
    with pytest.raises(ValueError):
        MomentProfile((0, 1, 0, Fraction(1, 2)))
    with pytest.raises(ValueError):
        get_distribution("cauchy")


def test_rademacher_support():
    x = sample_entries("rademacher", 1000, np.random.default_rng(1))
    assert set(np.unique(x)) == {-1.0, 1.0}


def test_uniform_variance():
    x = sample_entries("uniform", 10**6, np.random.default_rng(2))
    assert abs(np.var(x) - 1) < 0.01


def test_substreams_are_deterministic_and_distinct():
    a = sample_entries("gaussian", 16, (5, 3))
    assert np.array_equal(a, sample_entries("gaussian", 16, (5, 3)))
    assert not np.array_equal(a, sample_entries("gaussian", 16, (5, 4)))
    assert np.array_equal(a, get_distribution("gaussian").sample(replicate_rng(5, 3), 16))


@pytest.mark.parametrize("kind", BUILTIN_KINDS)
def test_builtin_samplers_match_declared_moments(kind):
    assert check_moments(get_distribution(kind), np.random.default_rng(3), draws=200_000)


def test_custom_distribution_gate():
    ok = EntryDistribution.custom("twopoint", lambda rng, size: rng.choice([-1.0, 1.0], size),
                                  (0, 1, 0, 1), draws=100_000)
    assert ok.mu4 == 1
    with pytest.raises(ValueError, match="sample moment"):
        EntryDistribution.custom("liar", lambda rng, size: 2 * rng.standard_normal(size),
                                 (0, 1, 0, 3), draws=100_000)
