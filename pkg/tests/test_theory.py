import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rcfluct.theory import (
    CovarianceParams,
    PolynomialQ,
    coefficient_c,
    g_from_limit_ratios,
    g_function,
    gaussian_family_moment,
    gaussian_spectral_cov,
    pair_partitions,
    sigma_matrix,
    sigma_pq,
    sigma_Q,
)

MU4S = (1, Fraction(9, 5), 3, 9)


def test_coefficient_examples():
    assert coefficient_c(1, 1, 1) == 1
    assert coefficient_c(2, 2, 1) == 16
    assert coefficient_c(2, 1, 1) == 4
    with pytest.raises(ValueError):
        coefficient_c(2, 3, 3)


def test_g_examples():
    assert g_function(1) == 1
    assert g_function(2) == Fraction(16, 3)
    with pytest.raises(ValueError):
        g_function(0)


@pytest.mark.parametrize("k", range(1, 7))
def test_g_agrees_with_limit_ratios(k):
    assert g_function(k) == g_from_limit_ratios(k)


def test_sigma_examples():
    assert sigma_pq(1, 1, 3) == 2
    assert sigma_pq(1, 1, 1) == 0
    assert sigma_pq(2, 2, 3) == Fraction(112, 3)
    assert sigma_pq(1, 2, 3) == 8


@pytest.mark.parametrize("mu4", MU4S)
def test_sigma_symmetry_and_diagonal(mu4):
    for p in range(1, 7):
        assert sigma_pq(p, p, mu4) >= 0
        for q in range(1, 7):
            assert sigma_pq(p, q, mu4) == sigma_pq(q, p, mu4)
    assert sigma_pq(1, 1, mu4) == mu4 - 1


@pytest.mark.parametrize("mu4", (1, 3, 9))
@pytest.mark.parametrize("d", range(1, 5))
def test_sigma_matrix_psd(d, mu4):
    m = np.array(sigma_matrix(d, mu4), dtype=float)
    assert np.linalg.eigvalsh(m).min() >= -1e-9


def test_params_validation():
    with pytest.raises(ValueError):
        CovarianceParams(1, 1, Fraction(1, 2))
    with pytest.raises(ValueError):
        CovarianceParams(0, 1, 3)
    assert CovarianceParams(1, 1, 1.8).mu4 == Fraction(9, 5)


def test_sigma_Q_examples():
    assert sigma_Q(PolynomialQ((1,)), 3) == 2
    assert sigma_Q((1, 1), 3) == Fraction(166, 3)
    with pytest.raises(ValueError):
        PolynomialQ((0,))
    assert PolynomialQ.parse("1/2, 0, 3").coeffs == (Fraction(1, 2), 0, 3)
    assert PolynomialQ((1, 1))(2) == 4 + 16


@given(st.lists(st.fractions(min_value=-5, max_value=5), min_size=1, max_size=4).filter(lambda a: a[-1] != 0))
def test_sigma_Q_is_a_quadratic_form(coeffs):
    for mu4 in (1, 3, 9):
        assert sigma_Q(coeffs, mu4) >= -Fraction(1, 10**9)


def test_pair_partitions_count():
    for n in range(0, 9, 2):
        expected = math.prod(range(n - 1, 0, -2)) if n else 1
        assert sum(1 for _ in pair_partitions(range(n))) == expected
    assert list(pair_partitions(range(3))) == []


def _wick_by_partitions(ps, cov):
    total = Fraction(0)
    for pairing in pair_partitions(range(len(ps))):
        total += math.prod((cov(ps[a], ps[b]) for a, b in pairing), start=Fraction(1))
    return total


@given(st.lists(st.integers(1, 4), min_size=1, max_size=8), st.sampled_from(MU4S))
def test_wick_recursion_matches_pair_partitions(ps, mu4):
    cov = lambda p, q: sigma_pq(p, q, mu4)  # noqa: E731
    assert gaussian_family_moment(ps, mu4) == _wick_by_partitions(ps, cov)


def test_wick_examples():
    assert gaussian_family_moment((1, 1), 3) == 2
    assert gaussian_family_moment((1, 1, 1), 3) == 0
    assert gaussian_family_moment((1, 1, 1, 1), 3) == 12


@pytest.mark.parametrize("p", range(1, 5))
@pytest.mark.parametrize("mu4", MU4S)
def test_fourth_moment_identity(p, mu4):
    assert gaussian_family_moment((p,) * 4, mu4) == 3 * sigma_pq(p, p, mu4) ** 2


def test_wick_with_custom_covariance():
    assert gaussian_family_moment((1, 2), lambda p, q: p * q) == 2


def test_spectral_reference_agrees_where_only_the_fourth_moment_enters():
    for q in range(1, 6):
        assert gaussian_spectral_cov(1, q) == sigma_pq(1, q, 3)
    assert gaussian_spectral_cov(2, 2) == 40
