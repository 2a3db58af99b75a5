"""Exact finite-n expectations and covariances of trace statistics by enumeration.

Uses the trace formula ``Tr M**(2p) = n**(1-p) * sum_{A_2p} x_{i_1} ... x_{i_2p}``
for the scaled matrix ``M`` (entries ``x / sqrt(n)``) and independence of the
entries, so every expectation reduces to a product of central moments over
the distinct indices of a tuple.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._budget import ORACLE_BUDGET, check_budget
from .combinatorics import index_array
from .distributions import MomentProfile, get_distribution

__all__ = [
    "JointMomentQuery",
    "moment_of_product",
    "exact_expected_trace",
    "exact_cov_w",
    "multiplicity_codes",
]

_PAIR_BLOCK = 1 << 20


def _profile(moments):
    if isinstance(moments, MomentProfile):
        return moments
    return get_distribution(moments).moments


@dataclass(frozen=True)
class JointMomentQuery:
    n: int
    p: int
    q: int = None
    moments: MomentProfile = None

    @property
    def cost(self):
        power = 2 * self.p if self.q is None else 2 * (self.p + self.q)
        return self.n**power


def moment_of_product(v, moments):
    """``E[prod_k x_{v_k}]`` for independent centred entries.

    `v` is an index vector or a sequence of index vectors (their concatenation
    is used).  Zero as soon as some index occurs exactly once.
    """
    mp = _profile(moments)
    items = list(v)
    if items and not isinstance(items[0], (int, np.integer)):
        items = [e for vec in items for e in vec]
    result = Fraction(1)
    for m in Counter(items).values():
        result *= mp.mu(m)
    return result


def multiplicity_codes(rows):
    """Encode the multiplicity pattern of each row as one integer.

    With ``L`` columns and base ``L + 1``, the code is
    ``sum_positions base**(mult(position) - 1)``; its base-``B`` digit ``m - 1``
    equals ``m * #{values of multiplicity m}``, which is < base, so the code is
    unique per pattern.
    """
    rows = np.asarray(rows)
    length = rows.shape[1]
    base = length + 1
    if base ** (length - 1) > np.iinfo(np.int64).max // base:
        raise ValueError(f"rows of length {length} too long to encode")
    mult = (rows[:, :, None] == rows[:, None, :]).sum(axis=2)
    return (np.int64(base) ** (mult - 1)).sum(axis=1), base


def _decode(code, base):
    pattern = {}
    m = 1
    while code:
        code, digit = divmod(code, base)
        if digit:
            pattern[m] = digit // m
        m += 1
    return pattern


def _pattern_moment(pattern, mp):
    result = Fraction(1)
    for m, count in pattern.items():
        result *= mp.mu(m) ** count
    return result


def _moment_sum(codes, base, mp):
    uniq, counts = np.unique(codes, return_counts=True)
    total = Fraction(0)
    for code, count in zip(uniq.tolist(), counts.tolist()):
        pattern = _decode(code, base)
        if 1 in pattern:
            continue
        total += count * _pattern_moment(pattern, mp)
    return total


def _sum_expectations(n, p, mp):
    rows = index_array(n, 2 * p, budget=float("inf"))
    codes, base = multiplicity_codes(rows)
    return _moment_sum(codes, base, mp)


def exact_expected_trace(n, p, moments, budget=None):
    """``E[Tr M**(2p)]`` for the scaled reverse circulant matrix, as a Fraction.

    >>> exact_expected_trace(5, 1, "gaussian")
    Fraction(5, 1)
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    mp = _profile(moments)
    check_budget(f"exact_expected_trace(n={n}, p={p})", n ** (2 * p), budget, ORACLE_BUDGET)
    return _sum_expectations(n, p, mp) / Fraction(n) ** (p - 1)


def exact_cov_w(n, p, q, moments, budget=None):
    """Exact ``Cov(w_p, w_q)`` at finite `n` by double enumeration over ``A_2p x A_2q``."""
    if p < 1 or q < 1:
        raise ValueError(f"exponents must be >= 1, got p={p}, q={q}")
    mp = _profile(moments)
    check_budget(f"exact_cov_w(n={n}, p={p}, q={q})", n ** (2 * (p + q)), budget, ORACLE_BUDGET)
    J = index_array(n, 2 * p, budget=float("inf"))
    K = index_array(n, 2 * q, budget=float("inf"))

    joint = Fraction(0)
    step = max(1, _PAIR_BLOCK // max(len(K), 1))
    for start in range(0, len(J), step):
        block = J[start : start + step]
        pairs = np.concatenate(
            [np.repeat(block, len(K), axis=0), np.tile(K, (len(block), 1))], axis=1
        )
        codes, base = multiplicity_codes(pairs)
        joint += _moment_sum(codes, base, mp)

    sep_p = _moment_sum(*multiplicity_codes(J), mp)
    sep_q = sep_p if q == p else _moment_sum(*multiplicity_codes(K), mp)
    return (joint - sep_p * sep_q) / Fraction(n) ** (p + q - 1)
