"""Run simulations and compare them with the limiting covariance structure."""

import json
import platform
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .distributions import get_distribution
from .model import w_samples
from .stats import jackknife, jackknife_cov, verify_normality, MIN_NORMALITY_SAMPLES
from .theory import PolynomialQ, gaussian_family_moment, sigma_pq, sigma_Q

__all__ = [
    "Tolerance",
    "CovarianceReport",
    "WickComparison",
    "run_experiment",
    "verify_wick",
    "within",
]


@dataclass(frozen=True)
class Tolerance:
    """Accept ``|empirical - target| <= max(rel * |target|, n_se * se)``."""

    rel: float
    n_se: float = 4.0

    def bound(self, target, se):
        return max(self.rel * abs(target), self.n_se * se)


DIAGONAL_TOL = Tolerance(0.15)
OFF_DIAGONAL_TOL = Tolerance(0.20)


def within(empirical, target, se, tol):
    return abs(empirical - target) <= tol.bound(target, se)


def _frac_dict(x):
    x = Fraction(x)
    return {"numerator": x.numerator, "denominator": x.denominator, "float": float(x)}


@dataclass
class CovarianceReport:
    config: object
    labels: list
    empirical: np.ndarray
    standard_errors: np.ndarray
    theoretical: list  # exact Fractions
    diagnostics: dict
    centering: dict
    comparisons: list
    polynomial: dict = None
    meta: dict = field(default_factory=dict)

    @property
    def theoretical_float(self):
        return np.array([[float(v) for v in row] for row in self.theoretical])

    @property
    def degenerate(self):
        return [lab for i, lab in enumerate(self.labels)
                if self.theoretical[i][i] == 0 and self.empirical[i, i] == 0]

    @property
    def passed(self):
        # normality is diagnostic only: finite-n skewness of high powers is expected
        ok = all(c["passed"] for c in self.comparisons)
        if self.polynomial is not None:
            ok &= self.polynomial["passed"]
        return ok

    def to_dict(self, meta=True):
        out = {
            "config": self.config.to_dict(),
            "empirical": {
                "labels": self.labels,
                "covariance": self.empirical.tolist(),
                "standard_errors": self.standard_errors.tolist(),
            },
            "theoretical": {
                "labels": self.labels,
                "covariance": [[_frac_dict(v) for v in row] for row in self.theoretical],
            },
            "diagnostics": {
                "normality": self.diagnostics,
                "comparisons": self.comparisons,
                "degenerate": self.degenerate,
                "polynomial": self.polynomial,
                "passed": self.passed,
            },
            "centering": self.centering,
        }
        if meta:
            out["meta"] = self.meta
        return out

    def to_json(self, meta=True):
        return json.dumps(self.to_dict(meta), indent=2, sort_keys=False)


def run_experiment(config):
    """Simulate ``config`` and compare the replicate covariance with theory.

    Returns a :class:`CovarianceReport` with jackknife errors, per-entry
    comparisons, normality diagnostics of each ``w_p`` and (when the config
    defines Q) the ``w_Q`` variance check.  Deterministic given the seed.
    """
    t0 = time.perf_counter()
    dist = get_distribution(config.distribution)
    mu4 = dist.mu4
    w, info, wq = w_samples(config, return_info=True)
    ps = list(config.ps)
    labels = [f"w_{p}" for p in ps]

    if ps:
        cov, se = jackknife_cov(w)
    else:
        cov, se = np.zeros((0, 0)), np.zeros((0, 0))
    theory = [[sigma_pq(p, q, mu4) for q in ps] for p in ps]

    comparisons = []
    for i, p in enumerate(ps):
        for j in range(i, len(ps)):
            q = ps[j]
            target = float(theory[i][j])
            tol = DIAGONAL_TOL if i == j else OFF_DIAGONAL_TOL
            comparisons.append({
                "p": p, "q": q,
                "empirical": float(cov[i, j]),
                "standard_error": float(se[i, j]),
                "theoretical": target,
                "rel_tolerance": tol.rel,
                "se_multiplier": tol.n_se,
                "bound": tol.bound(target, se[i, j]),
                "passed": bool(within(cov[i, j], target, se[i, j], tol)),
            })

    diagnostics = {}
    for i, p in enumerate(ps):
        sigma2 = float(theory[i][i])
        if sigma2 == 0 or config.replicates >= MIN_NORMALITY_SAMPLES:
            diagnostics[labels[i]] = verify_normality(w[:, i], sigma2).to_dict()
        else:
            diagnostics[labels[i]] = None

    polynomial = None
    if wq is not None:
        Q = PolynomialQ(config.q_coeffs)
        target = sigma_Q(Q, mu4)
        var, var_se = jackknife_cov(wq)
        var, var_se = float(var[0, 0]), float(var_se[0, 0])
        polynomial = {
            "coeffs": [str(a) for a in Q.coeffs],
            "empirical_variance": var,
            "standard_error": var_se,
            "theoretical": _frac_dict(target),
            "rel_tolerance": DIAGONAL_TOL.rel,
            "passed": bool(within(var, float(target), var_se, DIAGONAL_TOL)),
        }

    centering = {
        f"w_{p}": {"mode": c.mode, "center": c.center,
                   "exact": None if c.exact is None else _frac_dict(c.exact)}
        for p, c in info.items()
    }
    meta = {
        "runtime_seconds": time.perf_counter() - t0,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "version": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
    }
    return CovarianceReport(config, labels, cov, se, theory, diagnostics, centering,
                            comparisons, polynomial, meta)


@dataclass
class WickComparison:
    ps: tuple
    empirical: float
    standard_error: float
    expected: Fraction
    rel_tolerance: float
    degenerate: bool
    passed: bool

    def to_dict(self):
        return {"ps": list(self.ps), "empirical": self.empirical,
                "standard_error": self.standard_error, **_frac_dict(self.expected),
                "rel_tolerance": self.rel_tolerance, "degenerate": self.degenerate,
                "passed": self.passed}


def verify_wick(config, rel=0.20, n_se=4.0):
    """Compare the empirical mixed moment ``E[w_p1 ... w_pl]`` with the Gaussian-family value.

    ``config.ps`` lists the l factors (repeats allowed).  Odd l must vanish
    within ``n_se`` standard errors; even l must land within `rel` of the
    pair-partition sum.  An all-zero sample against a zero target is a
    degenerate pass.
    """
    ps = tuple(config.ps)
    if len(ps) < 2:
        raise ValueError(f"need at least two factors, got {ps}")
    distinct = tuple(sorted(set(ps)))
    w = w_samples(config.replace(ps=distinct))
    col = {p: j for j, p in enumerate(distinct)}
    prod = np.prod(np.stack([w[:, col[p]] for p in ps], axis=1), axis=1)
    mean, se = jackknife(prod, np.mean)
    mean, se = float(mean), float(se)
    mu4 = get_distribution(config.distribution).mu4
    expected = gaussian_family_moment(ps, mu4)

    if expected == 0 and np.all(prod == 0):
        return WickComparison(ps, mean, se, expected, rel, True, True)
    if expected == 0:
        ok = abs(mean) <= n_se * se
    else:
        ok = abs(mean - float(expected)) <= rel * abs(float(expected))
    return WickComparison(ps, mean, se, expected, rel, False, bool(ok))
