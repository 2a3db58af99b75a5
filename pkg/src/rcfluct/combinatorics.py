"""Alternating-sum index sets and the matching/cluster combinatorics built on them.

Index vectors are 1-based tuples ``(i_1, ..., i_2p)`` with entries in ``1..n``.
Their alternating sum is ``sum_k (-1)**k * i_k`` with 1-based ``k``, so the first
position enters with a minus sign.  The sets enumerated here are

* ``mod_n``      alternating sum = 0 (mod n)
* ``exact_sum``  alternating sum = s * n
* ``distinct``   / ``distinct_exact_sum``: the same with distinct entries

Everything here is brute force by design: these are the oracles the closed
forms and the simulation are checked against.
"""

import csv
import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from ._budget import ENUMERATION_BUDGET, check_budget

__all__ = [
    "IndexVector",
    "ClusterPartition",
    "alternating_sum",
    "index_multiset",
    "enumerate_A",
    "index_array",
    "count_A",
    "count_A_s_closed_form",
    "limit_ratio",
    "is_odd_even_pair_matched",
    "are_connected",
    "cross_multiplicity",
    "self_multiplicity",
    "partition_into_clusters",
    "enumerate_B",
    "cluster_ratio_scan",
    "write_enumeration_csv",
    "write_count_table_csv",
]

MODES = ("mod_n", "exact_sum", "distinct", "distinct_exact_sum")
DISTINCTNESS = ("pairwise", "consecutive")

# rows per vectorised block when enumerating prefixes
_BLOCK = 1 << 18


@dataclass(frozen=True)
class IndexVector:
    """An ordered index tuple with entries in ``1..n``.

    ``n`` is optional; when given, the range invariant is checked.
    """

    entries: tuple
    n: int = None
    alt_sum: int = field(init=False, compare=False)

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries or len(entries) % 2:
            raise ValueError(f"index vector must have even positive length, got {len(entries)}")
        lo = 1
        hi = self.n if self.n is not None else max(entries)
        if min(entries) < lo or max(entries) > hi:
            raise ValueError(f"entries {entries} outside [1, {hi}]")
        object.__setattr__(self, "alt_sum", _alt(entries))

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    @property
    def p(self):
        return len(self.entries) // 2


def _entries(v):
    return v.entries if isinstance(v, IndexVector) else tuple(v)


def _alt(entries):
    return sum(e if k % 2 else -e for k, e in enumerate(entries))


def alternating_sum(v):
    """``sum_k (-1)**k * v_k`` over 1-based positions; the first entry counts negatively.

    >>> alternating_sum((1, 2, 1, 3))
    3
    """
    entries = _entries(v)
    if not entries or len(entries) % 2:
        raise ValueError(f"alternating sum needs an even, nonempty vector; got length {len(entries)}")
    return _alt(entries)


def index_multiset(v):
    """The multiset of values of `v` as a value -> multiplicity Counter."""
    return Counter(_entries(v))


# ---------------------------------------------------------------------------
# enumeration of A_{2p}-type sets


def _check_mode(two_p, mode, s, distinct):
    if two_p < 2 or two_p % 2:
        raise ValueError(f"two_p must be an even integer >= 2, got {two_p}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
    if mode.endswith("exact_sum") and s is None:
        raise ValueError(f"mode {mode!r} requires the level s")
    if distinct not in DISTINCTNESS:
        raise ValueError(f"unknown distinctness {distinct!r}; expected one of {DISTINCTNESS}")


def _prefix_blocks(n, length):
    """Yield all of ``{1..n}**length`` in lexicographic order, as row blocks."""
    if length == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    tail_len = length
    while tail_len > 0 and n**tail_len > _BLOCK:
        tail_len -= 1
    tail_len = max(tail_len, 1)
    head_len = length - tail_len
    tail = np.indices((n,) * tail_len, dtype=np.int64).reshape(tail_len, -1).T + 1
    for head in itertools.product(range(1, n + 1), repeat=head_len):
        if head_len:
            block = np.empty((tail.shape[0], length), dtype=np.int64)
            block[:, :head_len] = head
            block[:, head_len:] = tail
            yield block
        else:
            yield tail


def _distinct_mask(rows, distinct):
    if distinct == "consecutive":
        return np.all(rows[:, 1:] != rows[:, :-1], axis=1)
    srt = np.sort(rows, axis=1)
    return np.all(srt[:, 1:] != srt[:, :-1], axis=1)


def _blocks(n, two_p, mode, s, distinct, budget):
    _check_mode(two_p, mode, s, distinct)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    check_budget(f"enumerate_A(n={n}, two_p={two_p})", n ** (two_p - 1), budget, ENUMERATION_BUDGET)
    signs = np.where(np.arange(1, two_p) % 2 == 1, -1, 1).astype(np.int64)
    exact = mode.endswith("exact_sum")
    for prefix in _prefix_blocks(n, two_p - 1):
        partial = prefix @ signs
        if exact:
            last = s * n - partial
            keep = (last >= 1) & (last <= n)
        else:
            last = np.mod(-partial, n)
            last[last == 0] = n
            keep = np.ones(len(last), dtype=bool)
        rows = np.concatenate([prefix, last[:, None]], axis=1)[keep]
        if mode.startswith("distinct"):
            rows = rows[_distinct_mask(rows, distinct)]
        if len(rows):
            yield rows


def index_array(n, two_p, mode="mod_n", s=None, distinct="pairwise", budget=None):
    """All tuples of the requested set as an ``(N, two_p)`` int array, in lexicographic order."""
    blocks = list(_blocks(n, two_p, mode, s, distinct, budget))
    if not blocks:
        return np.zeros((0, two_p), dtype=np.int64)
    return np.concatenate(blocks)


def enumerate_A(n, two_p, mode="mod_n", s=None, distinct="pairwise", budget=None):
    """Stream the members of an alternating-sum index set in lexicographic order.

    Parameters
    ----------
    n : int
        Index range ``1..n``.
    two_p : int
        Vector length; must be even.
    mode : {'mod_n', 'exact_sum', 'distinct', 'distinct_exact_sum'}
        Constraint on the alternating sum, optionally with distinct entries.
    s : int, optional
        Level for the exact-sum modes (alternating sum equals ``s * n``).
    distinct : {'pairwise', 'consecutive'}
        Meaning of "distinct" for the distinct modes.
    budget : int, optional
        Cap on the number of prefixes scanned (``n**(two_p - 1)``).

    Yields
    ------
    IndexVector
    """
    for rows in _blocks(n, two_p, mode, s, distinct, budget):
        for row in rows.tolist():
            yield IndexVector(tuple(row), n)


def count_A(n, two_p, mode="mod_n", s=None, distinct="pairwise", budget=None):
    """Brute-force cardinality of the set streamed by :func:`enumerate_A`."""
    return sum(len(rows) for rows in _blocks(n, two_p, mode, s, distinct, budget))


def count_A_s_closed_form(n, p, s):
    """Exact ``|A_{2p,s}|`` from the inclusion-exclusion closed form.

    Valid for ``-(p-1) <= s <= p-1``; other levels are rejected.
    """
    if p < 1 or n < 1:
        raise ValueError(f"need p >= 1 and n >= 1, got p={p}, n={n}")
    if abs(s) > p - 1:
        raise ValueError(f"level s={s} outside [-(p-1), p-1] = [{-(p - 1)}, {p - 1}]")
    total = 0
    for k in range(p + s):
        total += (-1) ** k * math.comb(2 * p, k) * math.comb((p + s - k) * n + p - 1, 2 * p - 1)
    return total


def limit_ratio(k, s):
    """``lim |A_{2k,s}| / n**(2k-1)`` as an exact Fraction."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if abs(s) >= k:
        raise ValueError(f"|s| must be < k, got s={s}, k={k}")
    total = sum((-1) ** j * math.comb(2 * k, j) * (k + s - j) ** (2 * k - 1) for j in range(k + s))
    return Fraction(total, math.factorial(2 * k - 1))


# ---------------------------------------------------------------------------
# matchings and clusters


def _odd_even_counts(entries, value):
    odd = sum(1 for e in entries[0::2] if e == value)
    even = sum(1 for e in entries[1::2] if e == value)
    return odd, even


def is_odd_even_pair_matched(v, value=None):
    """Whether `v` (or the single entry `value` of it) is odd-even pair matched.

    A value is matched when it occupies as many odd as even (1-based) positions.
    """
    entries = _entries(v)
    if value is not None:
        odd, even = _odd_even_counts(entries, value)
        return odd > 0 and odd == even
    return all(o == e for o, e in (_odd_even_counts(entries, u) for u in set(entries)))


def are_connected(J, K):
    return not set(_entries(J)).isdisjoint(_entries(K))


def cross_multiplicity(vectors, value):
    """Number of vectors whose value set contains `value`."""
    return sum(1 for v in vectors if value in set(_entries(v)))


def self_multiplicity(v, value):
    return _entries(v).count(value)


@dataclass
class ClusterPartition:
    """Clusters as sets of 0-based vector positions, plus per-value cross multiplicity."""

    clusters: list
    cross_multiplicity: dict
    edges: list

    def __len__(self):
        return len(self.clusters)

    def cluster_of(self, i):
        for c in self.clusters:
            if i in c:
                return c
        raise KeyError(i)


def partition_into_clusters(vectors):
    """Split `vectors` into maximal chains of pairwise-connected vectors."""
    vectors = [_entries(v) for v in vectors]
    if not vectors:
        raise ValueError("need at least one vector")
    holders = {}
    for i, v in enumerate(vectors):
        for value in set(v):
            holders.setdefault(value, []).append(i)
    edges = sorted(
        {(a, b) for idx in holders.values() for a, b in itertools.combinations(idx, 2)}
    )
    adjacency = {i: set() for i in range(len(vectors))}
    for a, b in edges:
        adjacency[a].add(b)
        adjacency[b].add(a)

    seen = set()
    clusters = []
    for start in range(len(vectors)):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in adjacency[i] - comp:
                comp.add(j)
                queue.append(j)
        seen |= comp
        clusters.append(frozenset(comp))
    cross = {value: len(idx) for value, idx in sorted(holders.items())}
    return ClusterPartition(clusters, cross, edges)


def _value_tables(rows, n):
    counts = np.zeros((len(rows), n), dtype=np.int16)
    for col in rows.T:
        np.add.at(counts, (np.arange(len(rows)), col - 1), 1)
    masks = np.zeros(len(rows), dtype=np.int64)
    for col in rows.T:
        masks |= np.left_shift(np.int64(1), col - 1)
    return counts, masks


def enumerate_B(n, P, budget=None):
    """Count tuples in ``A_{P_1} x ... x A_{P_l}`` forming one cluster with every value repeated.

    `P` lists the (even) vector lengths ``2p_1, ..., 2p_l``.  The enumeration
    cost charged against the budget is ``prod n**P_i``.
    """
    P = tuple(int(x) for x in P)
    if len(P) < 2:
        raise ValueError(f"need at least two vector lengths, got {P}")
    if any(x < 2 or x % 2 for x in P):
        raise ValueError(f"vector lengths must be even and >= 2, got {P}")
    if n > 62:
        raise ValueError(f"n={n} too large for bitmask connectivity (max 62)")
    check_budget(f"enumerate_B(n={n}, P={P})", math.prod(n**x for x in P), budget, ENUMERATION_BUDGET)

    tables = [_value_tables(index_array(n, x, budget=math.inf), n) for x in P]
    sizes = [len(t[1]) for t in tables]
    rest = np.indices(sizes[1:]).reshape(len(sizes) - 1, -1)
    rest_counts = sum(tables[i + 1][0][rest[i]].astype(np.int32) for i in range(len(rest)))
    rest_masks = [tables[i + 1][1][rest[i]] for i in range(len(rest))]

    c0, m0 = tables[0]
    total = 0
    for a in range(sizes[0]):
        counts = rest_counts + c0[a]
        ok = np.all((counts == 0) | (counts >= 2), axis=1)
        reach = np.full(len(ok), m0[a], dtype=np.int64)
        joined = [np.zeros(len(ok), dtype=bool) for _ in rest_masks]
        for _ in rest_masks:
            for i, m in enumerate(rest_masks):
                new = ~joined[i] & ((m & reach) != 0)
                joined[i] |= new
                reach |= np.where(new, m, 0)
        for j in joined:
            ok &= j
        total += int(np.count_nonzero(ok))
    return total


class ScanRow(NamedTuple):
    n: int
    count: int
    ratio: float


def cluster_ratio_scan(P, n_values, budget=None):
    """``|B_P| / n**(sum p_i - l/2)`` for each n in `n_values`."""
    P = tuple(P)
    exponent = sum(P) / 2 - len(P) / 2
    rows = []
    for n in n_values:
        count = enumerate_B(n, P, budget)
        rows.append(ScanRow(n, count, count / n**exponent))
    return rows


# ---------------------------------------------------------------------------
# CSV dumps


def write_enumeration_csv(vectors, fh):
    """One tuple per row, trailing ``alt_sum`` column. Returns the row count."""
    writer = csv.writer(fh, lineterminator="\n")
    rows = 0
    for v in vectors:
        entries = _entries(v)
        if rows == 0:
            writer.writerow([f"i{k}" for k in range(1, len(entries) + 1)] + ["alt_sum"])
        writer.writerow(list(entries) + [_alt(entries)])
        rows += 1
    return rows


def write_count_table_csv(rows, fh, extra=()):
    """Rows of ``(n, p, s, count, *extra)`` under header ``n,p,s,count``."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["n", "p", "s", "count", *extra])
    for row in rows:
        writer.writerow(row)
