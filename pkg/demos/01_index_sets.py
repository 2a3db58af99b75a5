# %% [markdown]
# # Counting alternating-sum index tuples
#
# The trace of an even power of a reverse circulant matrix reduces to a sum
# over tuples `(i_1, ..., i_2p)` whose alternating sum is a multiple of `n`.
# This notebook looks at those tuples directly.

# %%
from fractions import Fraction

from rcfluct.combinatorics import (
    count_A,
    count_A_s_closed_form,
    enumerate_A,
    limit_ratio,
    cluster_ratio_scan,
    partition_into_clusters,
)

# %% [markdown]
# For `n = 3` and `2p = 4` there are 27 tuples. Each one sits on a level `s`
# where the alternating sum equals `s * n`.

# %%
levels = {}
for v in enumerate_A(3, 4):
    levels.setdefault(v.alt_sum // 3, []).append(v.entries)
for s, tuples in sorted(levels.items()):
    print(f"s={s:+d}: {len(tuples):2d} tuples, e.g. {tuples[:3]}")

# %% [markdown]
# The closed form reproduces each level count without enumerating anything.

# %%
for n in (3, 5, 8):
    for p in (2, 3):
        row = [count_A_s_closed_form(n, p, s) for s in range(-(p - 1), p)]
        print(f"n={n} p={p} levels={row} total={sum(row)} enumerated={count_A(n, 2 * p)}")

# %% [markdown]
# Dividing by `n**(2p-1)` and letting `n` grow gives the limit ratios.
# The closed form handles `n = 10**6` instantly.

# %%
n = 10**6
for k in (2, 3):
    for s in range(0, k):
        exact = Fraction(count_A_s_closed_form(n, k, s), n ** (2 * k - 1))
        print(f"k={k} s={s}: ratio {float(exact):.8f}  limit {limit_ratio(k, s)}")

# %% [markdown]
# ## Clusters
#
# Vectors sharing a value are connected; clusters are the connected groups.

# %%
parts = partition_into_clusters([(1, 2, 1, 2), (2, 3, 3, 2), (5, 5), (3, 4, 4, 3)])
print("clusters:", [sorted(c) for c in parts.clusters])
print("value -> number of vectors holding it:", parts.cross_multiplicity)

# %% [markdown]
# Counting tuples of vectors that form a single cluster with no singleton
# value: with two vectors of length 2 the ratio to `n` stays at 1, with three
# it decays like `n**-0.5`.

# %%
for row in cluster_ratio_scan((2, 2), range(2, 7)):
    print("P=(2,2)  ", row)
for row in cluster_ratio_scan((2, 2, 2), range(3, 9)):
    print("P=(2,2,2)", row)
