"""Jackknife errors and normality diagnostics for replicate samples."""

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

__all__ = [
    "jackknife",
    "jackknife_cov",
    "NormalityDiagnostics",
    "ks_normal",
    "verify_normality",
]

MIN_NORMALITY_SAMPLES = 500


def jackknife(data, statistic):
    """Leave-one-out jackknife of ``statistic(data)`` over the first axis.

    Returns ``(estimate, standard_error)``; both have the shape of the statistic.
    """
    data = np.asarray(data)
    R = data.shape[0]
    if R < 2:
        raise ValueError("jackknife needs at least 2 samples")
    full = np.asarray(statistic(data), dtype=float)
    keep = np.ones(R, dtype=bool)
    loo = np.empty((R,) + full.shape)
    for i in range(R):
        keep[i] = False
        loo[i] = statistic(data[keep])
        keep[i] = True
    dev = loo - loo.mean(axis=0)
    se = np.sqrt((R - 1) / R * np.sum(dev**2, axis=0))
    return full, se


def jackknife_cov(data):
    """Sample covariance (ddof=1) of the columns of `data` with jackknife errors.

    The leave-one-out covariances come from rank-one downdates of the full
    cross-product, so this is O(R d**2) rather than O(R**2 d**2).
    """
    X = np.asarray(data, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    R, d = X.shape
    if R < 3:
        raise ValueError("jackknife covariance needs at least 3 samples")
    mean = X.mean(axis=0)
    Xc = X - mean
    S = Xc.T @ Xc
    cov = S / (R - 1)
    cov = (cov + cov.T) / 2
    # removing row i shifts the mean by -Xc_i/(R-1) and removes R/(R-1) Xc_i Xc_i^T
    outer = Xc[:, :, None] * Xc[:, None, :]
    loo = (S[None] - (R / (R - 1)) * outer) / (R - 2)
    dev = loo - loo.mean(axis=0)
    se = np.sqrt((R - 1) / R * np.sum(dev**2, axis=0))
    return cov, se


@dataclass
class NormalityDiagnostics:
    n_samples: int
    sigma2: float
    skewness: float
    skewness_z: float
    excess_kurtosis: float
    kurtosis_z: float
    ks_statistic: float
    ks_pvalue: float
    degenerate: bool
    passed: bool

    def to_dict(self):
        return asdict(self)


def ks_normal(samples, sigma2):
    """One-sample KS distance to N(0, sigma2) and its asymptotic Kolmogorov p-value."""
    x = np.sort(np.asarray(samples, dtype=float))
    R = len(x)
    cdf = special.ndtr(x / math.sqrt(sigma2))
    i = np.arange(1, R + 1)
    d = max(np.max(i / R - cdf), np.max(cdf - (i - 1) / R))
    return float(d), float(special.kolmogorov(math.sqrt(R) * d))


def verify_normality(samples, sigma2, alpha=0.01):
    """Skewness, excess kurtosis and KS test of `samples` against N(0, sigma2).

    ``sigma2 == 0`` is the degenerate case: it passes iff every sample is 0.
    """
    x = np.asarray(samples, dtype=float)
    R = len(x)
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be >= 0, got {sigma2}")
    if sigma2 == 0:
        zero = bool(np.all(x == 0))
        return NormalityDiagnostics(R, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0 if zero else 0.0, True, zero)
    if R < MIN_NORMALITY_SAMPLES:
        raise ValueError(f"need at least {MIN_NORMALITY_SAMPLES} samples, got {R}")
    c = x - x.mean()
    m2 = np.mean(c**2)
    skew = float(np.mean(c**3) / m2**1.5) if m2 > 0 else 0.0
    kurt = float(np.mean(c**4) / m2**2 - 3.0) if m2 > 0 else 0.0
    d, pvalue = ks_normal(x, sigma2)
    return NormalityDiagnostics(
        n_samples=R,
        sigma2=float(sigma2),
        skewness=skew,
        skewness_z=skew / math.sqrt(6.0 / R),
        excess_kurtosis=kurt,
        kurtosis_z=kurt / math.sqrt(24.0 / R),
        ks_statistic=d,
        ks_pvalue=pvalue,
        degenerate=False,
        passed=pvalue > alpha,
    )
