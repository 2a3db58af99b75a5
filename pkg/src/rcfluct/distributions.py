"""Standardized entry distributions and their exact central moments."""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "MomentProfile",
    "EntryDistribution",
    "BUILTIN_KINDS",
    "get_distribution",
    "replicate_rng",
    "sample_entries",
    "check_moments",
]

BUILTIN_KINDS = ("gaussian", "rademacher", "uniform", "shifted_exponential")
DEFAULT_ORDER = 12


@dataclass(frozen=True)
class MomentProfile:
    """Central moments ``mu_1..mu_K`` of a standardized entry distribution.

    ``moments[k-1]`` holds ``mu_k``.  Requires ``mu_1 = 0``, ``mu_2 = 1``.
    """

    moments: tuple

    def __post_init__(self):
        moments = tuple(Fraction(m) for m in self.moments)
        object.__setattr__(self, "moments", moments)
        if len(moments) < 4:
            raise ValueError(f"moment profile needs at least order 4, got {len(moments)}")
        if moments[0] != 0 or moments[1] != 1:
            raise ValueError(f"entries must be standardized (mu1=0, mu2=1), got {moments[:2]}")
        if any(m < 0 for m in moments[1::2]):
            raise ValueError("even moments must be nonnegative")
        if moments[3] < 1:
            raise ValueError(f"mu4 must be >= 1, got {moments[3]}")

    @property
    def order(self):
        return len(self.moments)

    @property
    def mu4(self):
        return self.moments[3]

    def mu(self, k):
        if k == 0:
            return Fraction(1)
        if not 1 <= k <= self.order:
            raise ValueError(f"moment of order {k} not available (profile order {self.order})")
        return self.moments[k - 1]


def _gaussian(k):
    return 0 if k % 2 else math.prod(range(k - 1, 0, -2))


def _rademacher(k):
    return 0 if k % 2 else 1


def _uniform(k):
    # uniform on [-sqrt3, sqrt3]
    return 0 if k % 2 else Fraction(3 ** (k // 2), k + 1)


def _subfactorial(k):
    # central moments of Exp(1)
    a, b = 1, 0
    if k == 0:
        return a
    for m in range(2, k + 1):
        a, b = b, (m - 1) * (a + b)
    return b


_MOMENTS = {
    "gaussian": _gaussian,
    "rademacher": _rademacher,
    "uniform": _uniform,
    "shifted_exponential": _subfactorial,
}

_SQRT3 = math.sqrt(3.0)

_SAMPLERS = {
    "gaussian": lambda rng, size: rng.standard_normal(size),
    "rademacher": lambda rng, size: 2.0 * rng.integers(0, 2, size) - 1.0,
    "uniform": lambda rng, size: rng.uniform(-_SQRT3, _SQRT3, size),
    "shifted_exponential": lambda rng, size: rng.standard_exponential(size) - 1.0,
}


@dataclass(frozen=True)
class EntryDistribution:
    """A named sampler together with its declared moment profile."""

    kind: str
    moments: MomentProfile
    sampler: object = None

    def sample(self, rng, size):
        return np.asarray(self.sampler(rng, size), dtype=np.float64)

    @property
    def mu4(self):
        return self.moments.mu4

    @classmethod
    def builtin(cls, kind, order=DEFAULT_ORDER):
        if kind not in _MOMENTS:
            raise ValueError(f"unknown distribution {kind!r}; expected one of {BUILTIN_KINDS}")
        profile = MomentProfile(tuple(_MOMENTS[kind](k) for k in range(1, order + 1)))
        return cls(kind, profile, _SAMPLERS[kind])

    @classmethod
    def custom(cls, name, sampler, moments, seed=0, draws=10**6):
        """Wrap a user sampler; its declared moments must survive :func:`check_moments`."""
        if not isinstance(moments, MomentProfile):
            moments = MomentProfile(tuple(moments))
        dist = cls(name, moments, sampler)
        check_moments(dist, np.random.default_rng(seed), draws)
        return dist


def get_distribution(kind, order=DEFAULT_ORDER):
    if isinstance(kind, EntryDistribution):
        return kind
    return EntryDistribution.builtin(kind, order)


def replicate_rng(seed, index):
    """Independent generator for replicate `index` derived from the master `seed`."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(index),)))


def sample_entries(dist, n, stream):
    """Draw ``x_1..x_n``.

    `stream` is a :class:`numpy.random.Generator` or a ``(seed, index)`` pair
    naming a replicate substream.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not isinstance(stream, np.random.Generator):
        stream = replicate_rng(*stream)
    return get_distribution(dist).sample(stream, n)


def check_moments(dist, rng, draws=10**6, sigmas=5.0, max_order=4):
    """Compare sample raw moments with the declared profile; raise if any is off by > `sigmas` SE."""
    x = dist.sample(rng, draws)
    mp = dist.moments
    top = min(max_order, mp.order // 2)
    for k in range(1, top + 1):
        declared = float(mp.mu(k))
        spread = float(mp.mu(2 * k)) - declared**2
        se = math.sqrt(max(spread, 0.0) / draws)
        observed = float(np.mean(x**k))
        if abs(observed - declared) > sigmas * se + 1e-12:
            raise ValueError(
                f"{dist.kind}: sample moment of order {k} is {observed:.6g}, "
                f"declared {declared:.6g} (allowed {sigmas} x SE = {sigmas * se:.3g})"
            )
    return True
