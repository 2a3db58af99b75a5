# %% [markdown]
# # Limiting covariances and exact finite-n values
#
# `sigma_pq` evaluates the closed-form limiting covariance of `w_p` and `w_q`
# as an exact fraction. `exact_cov_w` computes the true covariance at a small
# `n` by enumerating every index tuple.

# %%
import numpy as np

from rcfluct import exact_cov_w, gaussian_spectral_cov, sigma_pq, sigma_Q
from rcfluct.theory import sigma_matrix

# %%
for mu4, name in ((1, "rademacher"), ("9/5", "uniform"), (3, "gaussian"), (9, "shifted exp")):
    table = sigma_matrix(3, mu4)
    print(f"{name:12s} mu4={mu4}:", [[str(v) for v in row] for row in table])

# %% [markdown]
# The matrix is a covariance, so it should be positive semidefinite.

# %%
for mu4 in (1, 3, 9):
    eig = np.linalg.eigvalsh(np.array(sigma_matrix(4, mu4), dtype=float))
    print(f"mu4={mu4}: smallest eigenvalue {eig.min():.4g}")

# %% [markdown]
# A polynomial statistic combines the entries: for `Q = x^2 + x^4`,
# `sigma_Q = sigma_11 + 2 sigma_12 + sigma_22`.

# %%
print("sigma_Q(x^2 + x^4) =", sigma_Q((1, 1), 3))

# %% [markdown]
# ## Exact values at small n
#
# `Var(w_1)` equals `mu4 - 1` at every `n`. The `Var(w_2)` values approach
# their limit slowly and oscillate with the parity of `n`.

# %%
for kind in ("gaussian", "uniform", "shifted_exponential"):
    print(kind, [str(exact_cov_w(n, 1, 1, kind)) for n in range(2, 7)])
for n in range(2, 7):
    v = exact_cov_w(n, 2, 2, "gaussian")
    print(f"n={n}: Var(w_2) = {str(v):>7s} = {float(v):8.4f}")

# %% [markdown]
# ## A second opinion for Gaussian entries
#
# With Gaussian entries the squared moduli of the normalised DFT are
# independent Exp(1) variables, which gives `2((p+q)! - p! q!)` as the large-n
# covariance. This agrees with `sigma_pq` whenever `min(p, q) = 1`.
# For `p = q = 2` it gives 40 instead of 112/3. The Monte Carlo demo shows
# which of the two the simulation follows.

# %%
for p, q in ((1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)):
    print(f"({p},{q}) closed form {str(sigma_pq(p, q, 3)):>8s}  spectral {gaussian_spectral_cov(p, q)}")
