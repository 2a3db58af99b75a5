"""Closed-form limiting covariances of even-power trace statistics.

All values are exact :class:`fractions.Fraction` objects; call ``float()`` for a
float view.  ``mu4`` is the common fourth moment of the standardized entries.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .combinatorics import limit_ratio

__all__ = [
    "CovarianceParams",
    "PolynomialQ",
    "coefficient_c",
    "g_function",
    "g_from_limit_ratios",
    "sigma_pq",
    "sigma_matrix",
    "sigma_Q",
    "pair_partitions",
    "gaussian_family_moment",
    "gaussian_spectral_cov",
]


def _rational(x):
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


@dataclass(frozen=True)
class CovarianceParams:
    p: int
    q: int
    mu4: Fraction

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError(f"exponents must be >= 1, got p={self.p}, q={self.q}")
        mu4 = _rational(self.mu4)
        if mu4 < 1:
            raise ValueError(f"fourth moment must be >= 1 for unit-variance entries, got {mu4}")
        object.__setattr__(self, "mu4", mu4)


@dataclass(frozen=True)
class PolynomialQ:
    """``Q(x) = sum_k a_k x**(2k)`` for ``k = 1..d``; ``coeffs[k-1]`` is ``a_k``."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_rational(a) for a in self.coeffs)
        if not coeffs:
            raise ValueError("Q needs at least one coefficient")
        if coeffs[-1] == 0:
            raise ValueError(f"leading coefficient a_d must be nonzero, got {coeffs}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def d(self):
        return len(self.coeffs)

    @property
    def degree(self):
        return 2 * self.d

    @classmethod
    def parse(cls, text):
        """Parse a comma separated coefficient list such as ``"1,1"`` or ``"1/2,0,3"``."""
        return cls(tuple(Fraction(t.strip()) for t in text.split(",") if t.strip()))

    def __call__(self, x):
        return sum(a * x ** (2 * k) for k, a in enumerate(self.coeffs, start=1))


def coefficient_c(p, q, k):
    """``C(p, p-k)**2 (p-k)! C(q, q-k)**2 (q-k)!`` for ``1 <= k <= min(p, q)``."""
    if not 1 <= k <= min(p, q):
        raise ValueError(f"k={k} outside [1, min(p, q)] = [1, {min(p, q)}]")
    left = math.comb(p, p - k) ** 2 * math.factorial(p - k)
    right = math.comb(q, q - k) ** 2 * math.factorial(q - k)
    return left * right


@lru_cache(maxsize=None)
def g_function(k):
    """Weighted sum of the level-set limits for full cross matchings of size 2k.

    Evaluated directly from the double alternating sum, independently of
    :func:`~rcfluct.combinatorics.limit_ratio`; the two agree by construction and
    the test-suite checks they do.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    total = 0
    for s in range(-(k - 1), k):
        weight = 1 if s == 0 else 2
        inner = sum(
            (-1) ** j * math.comb(2 * k, j) * (k + s - j) ** (2 * k - 1) for j in range(k + s)
        )
        total += weight * inner
    return Fraction(total * math.factorial(k) ** 2, math.factorial(2 * k - 1))


def g_from_limit_ratios(k):
    return math.factorial(k) ** 2 * sum(
        (1 if s == 0 else 2) * limit_ratio(k, s) for s in range(-(k - 1), k)
    )


def sigma_pq(p, q, mu4):
    """Limiting ``Cov(w_p, w_q)``.

    ``sum_{k=2}^{min(p,q)} c_k g(k) + (mu4 - 1) c_1``; the k-sum is empty when
    ``min(p, q) == 1``.

    >>> sigma_pq(2, 2, 3)
    Fraction(112, 3)
    """
    params = CovarianceParams(p, q, mu4)
    total = sum(
        (coefficient_c(p, q, k) * g_function(k) for k in range(2, min(p, q) + 1)), Fraction(0)
    )
    return total + (params.mu4 - 1) * coefficient_c(p, q, 1)


def sigma_matrix(d, mu4):
    """The ``d x d`` matrix ``[sigma_{l,k}]`` for ``l, k = 1..d`` (exact entries)."""
    return [[sigma_pq(l, k, mu4) for k in range(1, d + 1)] for l in range(1, d + 1)]


def sigma_Q(Q, mu4):
    """Limiting variance of the polynomial statistic ``w_Q``."""
    if not isinstance(Q, PolynomialQ):
        Q = PolynomialQ(tuple(Q))
    a = Q.coeffs
    return sum(
        (a[l] * a[k] * sigma_pq(l + 1, k + 1, mu4) for l in range(Q.d) for k in range(Q.d)),
        Fraction(0),
    )


def pair_partitions(items):
    """Yield every partition of `items` into unordered pairs (none for odd length)."""
    items = list(items)
    if not items:
        yield []
        return
    if len(items) % 2:
        return
    first, rest = items[0], items[1:]
    for i, partner in enumerate(rest):
        for tail in pair_partitions(rest[:i] + rest[i + 1 :]):
            yield [(first, partner)] + tail


def gaussian_family_moment(ps, sigma):
    """``E[N_{p_1} ... N_{p_l}]`` for a centred Gaussian family with covariance `sigma`.

    `sigma` is either a callable ``(p, q) -> covariance`` or a fourth moment, in
    which case :func:`sigma_pq` with that ``mu4`` is used.  Computed through the
    pairing recursion ``m(ps) = sum_j sigma(p_1, p_j) m(ps without 1, j)``.
    """
    ps = tuple(ps)
    if not ps:
        raise ValueError("need at least one exponent")
    if not callable(sigma):
        mu4 = sigma
        sigma = lambda p, q: sigma_pq(p, q, mu4)  # noqa: E731
    if len(ps) % 2:
        return Fraction(0)

    @lru_cache(maxsize=None)
    def cov(p, q):
        return _rational(sigma(p, q))

    @lru_cache(maxsize=None)
    def moment(key):
        if not key:
            return Fraction(1)
        first, rest = key[0], key[1:]
        total = Fraction(0)
        for j in range(len(rest)):
            total += cov(first, rest[j]) * moment(rest[:j] + rest[j + 1 :])
        return total

    return moment(tuple(sorted(ps)))


def gaussian_spectral_cov(p, q):
    """Exact large-n ``Cov(w_p, w_q)`` for standard Gaussian entries: ``2((p+q)! - p! q!)``.

    With Gaussian input the squared moduli of the normalised DFT of the first
    row are i.i.d. Exp(1) over half the frequencies, and each contributes twice
    (as the eigenvalue pair ``+-|a_k|``), so ``Tr M**(2p) ~ 2 sum_k E_k**p``.
    This is an independent reference that does not go through index counting.
    """
    return Fraction(2 * (math.factorial(p + q) - math.factorial(p) * math.factorial(q)))
