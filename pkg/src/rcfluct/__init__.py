"""Fluctuations of even-power linear eigenvalue statistics of reverse circulant matrices.

Modules map onto the pieces of the computation:

``combinatorics``  alternating-sum index sets, matchings and clusters (brute force)
``theory``         closed-form limiting covariances and Gaussian-family moments
``model``          matrix construction, three trace paths, replicate sampling
``oracle``         exact finite-n expectations by enumeration
``harness``        simulation vs theory reports, Wick checks
``verify``         the acceptance checks, also exposed as ``rcfluct verify``
"""

__version__ = "0.1.0"

from ._budget import BudgetExceeded, IntegrityError
from .combinatorics import (
    IndexVector,
    alternating_sum,
    are_connected,
    cluster_ratio_scan,
    count_A,
    count_A_s_closed_form,
    cross_multiplicity,
    enumerate_A,
    enumerate_B,
    is_odd_even_pair_matched,
    limit_ratio,
    partition_into_clusters,
)
from .config import ExperimentConfig, load_config
from .distributions import EntryDistribution, MomentProfile, get_distribution, sample_entries
from .model import (
    build_rc,
    trace_power_dense,
    trace_power_fast,
    trace_power_spectral,
    w_samples,
)
from .oracle import exact_cov_w, exact_expected_trace, moment_of_product
from .theory import (
    PolynomialQ,
    coefficient_c,
    g_function,
    gaussian_family_moment,
    gaussian_spectral_cov,
    sigma_pq,
    sigma_Q,
)
from .harness import run_experiment, verify_wick
from .stats import verify_normality
