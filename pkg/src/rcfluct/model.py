"""Scaled reverse circulant matrices, their even-power traces and w_p replicates.

The matrix for entries ``x_1..x_n`` has (1-based) ``(i, j)`` entry
``x_{(i+j-1) mod n} / sqrt(n)`` with residue 0 read as ``n``; with 0-based
indices that is ``x[(i + j) % n] / sqrt(n)``.

Three independent routes to ``Tr M**(2p)`` are provided:

* ``dense``     repeated matrix multiplication, O(p n**3)
* ``spectral``  symmetric eigensolver, sum of ``lambda**(2p)``
* ``fast``      FFT of the first row.  ``M @ M.T`` is circulant with
  eigenvalues ``|a_k|**2`` where ``a = fft(x) / sqrt(n)``, and ``M`` is
  symmetric, so ``Tr M**(2p) = sum_k |a_k|**(2p)``.
"""

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._budget import ORACLE_BUDGET, IntegrityError, resolve_budget
from .distributions import get_distribution, replicate_rng
from .oracle import exact_expected_trace

__all__ = [
    "RCMatrix",
    "build_rc",
    "rc_spectrum",
    "trace_power_dense",
    "trace_power_spectral",
    "trace_power_fast",
    "trace_power",
    "sample_replicates",
    "trace_table",
    "center_traces",
    "w_samples",
    "CenteringInfo",
    "write_replicates_csv",
]

#: relative tolerance of the fast path self-check
FAST_PATH_RTOL = 1e-8


@dataclass(frozen=True)
class RCMatrix:
    n: int
    raw_entries: np.ndarray

    @property
    def scale(self):
        return 1.0 / math.sqrt(self.n)

    @property
    def dense(self):
        idx = np.add.outer(np.arange(self.n), np.arange(self.n)) % self.n
        return self.raw_entries[idx] * self.scale

    def entry(self, i, j):
        """1-based ``(i, j)`` entry."""
        k = (i + j - 1) % self.n
        return self.raw_entries[(k or self.n) - 1] * self.scale


def build_rc(x, n=None):
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"entries must be one-dimensional, got shape {x.shape}")
    if n is None:
        n = len(x)
    if len(x) != n:
        raise ValueError(f"expected {n} entries, got {len(x)}")
    if n < 1:
        raise ValueError("need at least one entry")
    return RCMatrix(n, x.copy())


def _as_rc(M):
    return M if isinstance(M, RCMatrix) else build_rc(M)


def _check_power(two_p):
    if two_p < 2 or two_p % 2:
        raise ValueError(f"two_p must be an even integer >= 2, got {two_p}")


def trace_power_dense(M, two_p):
    _check_power(two_p)
    M = _as_rc(M)
    return float(np.trace(np.linalg.matrix_power(M.dense, two_p)))


def trace_power_spectral(M, two_p):
    _check_power(two_p)
    M = _as_rc(M)
    dense = M.dense
    try:
        eig = np.linalg.eigvalsh(dense)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"eigensolver failed for n={M.n} (condition number {np.linalg.cond(dense):.3g})"
        ) from exc
    return float(np.sum(eig**two_p))


def _dft_moduli_sq(x):
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[-1]
    a = np.fft.fft(x, axis=-1)
    return (a.real**2 + a.imag**2) / n


def trace_power_fast(M, two_p, self_check=False):
    """O(n log n) trace through the DFT of the first row.

    With ``self_check`` the result is compared with the eigensolver path and an
    :class:`IntegrityError` is raised beyond ``FAST_PATH_RTOL``.
    """
    _check_power(two_p)
    M = _as_rc(M)
    value = float(np.sum(_dft_moduli_sq(M.raw_entries) ** (two_p // 2)))
    if self_check:
        ref = trace_power_spectral(M, two_p)
        if abs(value - ref) > FAST_PATH_RTOL * max(abs(ref), np.finfo(float).tiny):
            raise IntegrityError(f"fast trace {value!r} disagrees with spectral {ref!r} (two_p={two_p})")
    return value


_PATHS = {
    "dense": trace_power_dense,
    "spectral": trace_power_spectral,
    "fast": trace_power_fast,
}


def trace_power(M, two_p, path="fast"):
    try:
        fn = _PATHS[path]
    except KeyError:
        raise ValueError(f"unknown trace path {path!r}; expected one of {tuple(_PATHS)}") from None
    return fn(M, two_p)


def rc_spectrum(x):
    """Eigenvalues of the scaled matrix, sorted, reconstructed from the DFT.

    ``a_0`` and (for even n) ``a_{n/2}`` are real eigenvalues; every other
    conjugate pair ``a_k, a_{n-k}`` yields ``+|a_k|`` and ``-|a_k|``.
    """
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    a = np.fft.fft(x) / math.sqrt(n)
    eig = [a[0].real]
    if n % 2 == 0:
        eig.append(a[n // 2].real)
    mods = np.abs(a[1 : (n + 1) // 2])
    eig = np.concatenate([eig, mods, -mods])
    return np.sort(eig)


# ---------------------------------------------------------------------------
# replicates


def sample_replicates(dist, n, replicates, seed):
    """``(R, n)`` entries; row r comes from its own substream of `seed`."""
    dist = get_distribution(dist)
    out = np.empty((replicates, n))
    for r in range(replicates):
        out[r] = dist.sample(replicate_rng(seed, r), n)
    return out


def _row_traces(row, exponents, path):
    M = build_rc(row)
    return [trace_power(M, 2 * p, path) for p in exponents]


def trace_table(x, exponents, path="fast", workers=1):
    """``Tr M**(2p)`` for each replicate row of `x` and each p in `exponents`.

    ``p = 1`` always uses the exact identity ``Tr M**2 = sum x_i**2``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    exponents = tuple(exponents)
    out = np.empty((x.shape[0], len(exponents)))
    if path == "fast":
        mod2 = _dft_moduli_sq(x)
        for j, p in enumerate(exponents):
            out[:, j] = np.sum(mod2**p, axis=1)
    else:
        if path not in _PATHS:
            raise ValueError(f"unknown trace path {path!r}")
        rows = list(x)
        if workers > 1:
            with ThreadPoolExecutor(workers) as pool:
                results = list(pool.map(lambda r: _row_traces(r, exponents, path), rows))
        else:
            results = [_row_traces(r, exponents, path) for r in rows]
        out[:] = results
    for j, p in enumerate(exponents):
        if p == 1:
            out[:, j] = np.sum(x * x, axis=1)
    return out


@dataclass(frozen=True)
class CenteringInfo:
    p: int
    mode: str
    center: float
    exact: object = None  # Fraction when mode == "exact"


def center_traces(traces, n, exponents, dist, centering="auto", budget=None):
    """Turn raw traces into ``w_p = (Tr - center) / sqrt(n)``.

    ``exact`` subtracts ``E Tr`` from the enumeration oracle (cost ``n**(2p)``
    must fit the budget); ``empirical`` subtracts the replicate mean;
    ``auto`` picks exact whenever affordable.
    """
    dist = get_distribution(dist)
    limit = resolve_budget(budget, ORACLE_BUDGET)
    w = np.empty_like(traces)
    info = []
    for j, p in enumerate(exponents):
        affordable = n ** (2 * p) <= limit
        if centering == "exact" or (centering == "auto" and affordable):
            exact = exact_expected_trace(n, p, dist.moments, budget=limit)
            center = float(exact)
            info.append(CenteringInfo(p, "exact", center, exact))
        elif centering in ("auto", "empirical"):
            if traces.shape[0] < 2:
                raise ValueError("empirical centering needs at least 2 replicates")
            center = float(np.mean(traces[:, j]))
            info.append(CenteringInfo(p, "empirical", center))
        else:
            raise ValueError(f"unknown centering {centering!r}")
        w[:, j] = (traces[:, j] - center) / math.sqrt(n)
    return w, info


def w_samples(config, return_info=False):
    """Replicate matrix of ``w_p`` (rows: replicates, columns: ``config.ps``).

    With ``return_info`` also returns the per-exponent :class:`CenteringInfo`
    and the ``w_Q`` column (None when the config defines no polynomial).
    """
    exps = config.exponents
    x = sample_replicates(config.distribution, config.n, config.replicates, config.seed)
    traces = trace_table(x, exps, config.trace_path, config.workers)
    w_all, info = center_traces(
        traces, config.n, exps, config.distribution, config.centering, config.budget
    )
    col = {p: j for j, p in enumerate(exps)}
    w = w_all[:, [col[p] for p in config.ps]]
    if not return_info:
        return w
    wq = None
    if config.q_coeffs is not None:
        wq = sum(float(a) * w_all[:, col[k]] for k, a in enumerate(config.q_coeffs, start=1))
    return w, {p: info[col[p]] for p in exps}, wq


def write_replicates_csv(w, ps, fh):
    """Write replicate rows as CSV with header ``replicate,p_1,...`` (17 significant digits)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["replicate"] + [f"p_{p}" for p in ps])
    for r, row in enumerate(np.asarray(w)):
        writer.writerow([r] + [format(float(v), ".17g") for v in row])
