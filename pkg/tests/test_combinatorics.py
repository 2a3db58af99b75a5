import io
import itertools
import math
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rcfluct import BudgetExceeded
from rcfluct.combinatorics import (
    IndexVector,
    alternating_sum,
    are_connected,
    cluster_ratio_scan,
    count_A,
    count_A_s_closed_form,
    cross_multiplicity,
    enumerate_A,
    enumerate_B,
    index_array,
    index_multiset,
    is_odd_even_pair_matched,
    limit_ratio,
    partition_into_clusters,
    self_multiplicity,
    write_count_table_csv,
    write_enumeration_csv,
)

vectors = st.integers(1, 4).flatmap(
    lambda p: st.lists(st.integers(1, 6), min_size=2 * p, max_size=2 * p)
)


@pytest.mark.parametrize("v, expected", [((1, 1), 0), ((1, 2, 1, 3), 3), ((2, 2, 1, 1), 0)])
def test_alternating_sum_examples(v, expected):
    assert alternating_sum(v) == expected
    assert IndexVector(v).alt_sum == expected


def test_alternating_sum_rejects_odd_length():
    with pytest.raises(ValueError):
        alternating_sum((1, 2, 3))
    with pytest.raises(ValueError):
        IndexVector((1,))


def test_index_vector_range_check():
    with pytest.raises(ValueError):
        IndexVector((1, 5), n=4)
    assert index_multiset((1, 2, 1, 3)) == {1: 2, 2: 1, 3: 1}


def test_enumerate_examples():
    assert [v.entries for v in enumerate_A(2, 2)] == [(1, 1), (2, 2)]
    assert [v.entries for v in enumerate_A(2, 4, "exact_sum", s=1)] == [(1, 2, 1, 2)]
    assert [v.entries for v in enumerate_A(1, 2)] == [(1, 1)]


def test_enumeration_is_lexicographic_and_exact():
    rows = index_array(4, 4).tolist()
    assert rows == sorted(rows)
    brute = [t for t in itertools.product(range(1, 5), repeat=4) if alternating_sum(t) % 4 == 0]
    assert [tuple(r) for r in rows] == brute


def test_distinct_modes():
    brute = [t for t in itertools.product(range(1, 6), repeat=4)
             if len(set(t)) == 4 and alternating_sum(t) % 5 == 0]
    assert [v.entries for v in enumerate_A(5, 4, "distinct")] == brute
    consecutive = [t for t in itertools.product(range(1, 6), repeat=4)
                   if all(a != b for a, b in zip(t, t[1:])) and alternating_sum(t) == 5]
    got = [v.entries for v in enumerate_A(5, 4, "distinct_exact_sum", s=1, distinct="consecutive")]
    assert got == consecutive


def test_enumerate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        list(enumerate_A(3, 3))
    with pytest.raises(ValueError):
        list(enumerate_A(3, 4, "exact_sum"))


def test_out_of_range_level_is_empty():
    assert count_A(3, 4, "exact_sum", s=5) == 0


@pytest.mark.parametrize("n", [1, 2, 7, 100])
def test_closed_form_p1(n):
    assert count_A_s_closed_form(n, 1, 0) == n


def test_closed_form_examples():
    assert count_A_s_closed_form(2, 2, 0) == 6
    assert count_A_s_closed_form(2, 2, 1) == 1


def test_closed_form_rejects_level_outside_range():
    with pytest.raises(ValueError):
        count_A_s_closed_form(4, 2, 2)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("p", [1, 2, 3])
def test_closed_form_matches_enumeration(n, p):
    for s in range(-(p - 1), p):
        assert count_A_s_closed_form(n, p, s) == count_A(n, 2 * p, "exact_sum", s=s)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("p", [1, 2, 3])
def test_levels_partition_the_mod_n_set(n, p):
    levels = range(-(p - 1), p)
    assert sum(count_A_s_closed_form(n, p, s) for s in levels) == count_A(n, 2 * p)
    for s in levels:
        assert count_A_s_closed_form(n, p, s) == count_A_s_closed_form(n, p, -s)


def test_limit_ratio_examples():
    assert limit_ratio(1, 0) == 1
    assert limit_ratio(2, 0) == Fraction(2, 3)
    assert limit_ratio(2, 1) == Fraction(1, 6)
    with pytest.raises(ValueError):
        limit_ratio(2, 2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_limit_ratio_is_the_large_n_limit(k):
    n = 10**4
    for s in range(-(k - 1), k):
        ratio = Fraction(count_A_s_closed_form(n, k, s), n ** (2 * k - 1))
        assert abs(ratio / limit_ratio(k, s) - 1) < Fraction(1, 100)


def test_limit_ratios_sum_to_one_per_unit_volume():
    # the levels partition the cube {1..n}^(2k-1) of free prefixes, up to o(1)
    for k in range(1, 6):
        assert sum(limit_ratio(k, s) for s in range(-(k - 1), k)) == 1


def test_pair_matching_examples():
    assert not is_odd_even_pair_matched((1, 1, 3, 4))
    assert is_odd_even_pair_matched((1, 1, 3, 4), value=1)
    assert not is_odd_even_pair_matched((1, 2, 1, 3), value=1)
    assert is_odd_even_pair_matched((5, 5))


@given(vectors)
def test_pair_matched_implies_zero_alternating_sum(v):
    if is_odd_even_pair_matched(v):
        assert alternating_sum(v) == 0


@given(st.permutations([1, 2, 3, 4]), st.permutations([1, 2, 3, 4]))
def test_interleaved_permutations_are_matched(odd, even):
    v = [x for pair in zip(odd, even) for x in pair]
    assert is_odd_even_pair_matched(v)


def test_connectivity_and_multiplicity_examples():
    assert are_connected((1, 1), (1, 2, 3, 4))
    assert not are_connected((1, 1), (2, 2))
    assert are_connected((1, 2, 1, 2), (2, 3, 4, 5))
    assert cross_multiplicity([(1, 1), (1, 2, 3, 2)], 1) == 2
    assert cross_multiplicity([(1, 1), (2, 2)], 1) == 1
    assert cross_multiplicity([(1, 2, 1, 2), (2, 2), (2, 3, 3, 2)], 2) == 3
    assert self_multiplicity((1, 2, 1, 2), 2) == 2


def test_cluster_examples():
    parts = partition_into_clusters([(1, 1), (1, 2, 2, 1), (3, 3)])
    assert sorted(map(sorted, parts.clusters)) == [[0, 1], [2]]
    assert len(partition_into_clusters([(1, 1)])) == 1
    chain = partition_into_clusters([(1, 2, 1, 2), (2, 3, 3, 2), (3, 4, 4, 3)])
    assert chain.clusters == [frozenset({0, 1, 2})]
    assert chain.cluster_of(2) == frozenset({0, 1, 2})


@settings(max_examples=200)
@given(st.lists(vectors, min_size=1, max_size=6))
def test_clusters_match_connected_components(vs):
    parts = partition_into_clusters(vs)
    g = nx.Graph()
    g.add_nodes_from(range(len(vs)))
    g.add_edges_from((a, b) for a, b in itertools.combinations(range(len(vs)), 2)
                     if are_connected(vs[a], vs[b]))
    assert sorted(map(sorted, parts.clusters)) == sorted(map(sorted, nx.connected_components(g)))
    assert sorted(parts.edges) == sorted(tuple(sorted(e)) for e in g.edges)
    # maximality: clusters never share a value
    values = [set().union(*(set(vs[i]) for i in c)) for c in parts.clusters]
    for a, b in itertools.combinations(values, 2):
        assert not a & b


def _brute_B(n, P):
    sets = [[tuple(r) for r in index_array(n, x).tolist()] for x in P]
    total = 0
    for combo in itertools.product(*sets):
        flat = [e for v in combo for e in v]
        if min(flat.count(u) for u in set(flat)) < 2:
            continue
        if len(partition_into_clusters(combo)) == 1:
            total += 1
    return total


def test_enumerate_B_examples():
    assert enumerate_B(1, (2, 2)) == 1
    assert enumerate_B(2, (2, 2)) == 2
    assert enumerate_B(3, (2, 2, 2)) == 3


@pytest.mark.parametrize("n, P", [(3, (2, 4)), (3, (4, 4)), (4, (2, 4)), (3, (2, 2, 4)), (4, (2, 2, 2))])
def test_enumerate_B_matches_plain_loop(n, P):
    assert enumerate_B(n, P) == _brute_B(n, P)


def _reflected_B(n, P):
    # reflection i -> n+1-i maps every A_2p onto itself, so the count must not change
    sets = [[tuple(n + 1 - e for e in r) for r in index_array(n, x).tolist()] for x in P]
    for s, x in zip(sets, P):
        assert sorted(s) == sorted(tuple(r) for r in index_array(n, x).tolist())
    return _brute_B(n, P)


@pytest.mark.parametrize("n, P", [(3, (2, 4)), (4, (4, 2))])
def test_enumerate_B_reflection(n, P):
    assert enumerate_B(n, P) == _reflected_B(n, P)


def test_enumerate_B_budget_and_arguments():
    with pytest.raises(BudgetExceeded, match="enumerate_B"):
        enumerate_B(10, (4, 4, 4))
    with pytest.raises(ValueError):
        enumerate_B(3, (2,))
    with pytest.raises(ValueError):
        enumerate_B(3, (2, 3))


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("RC_FLUCT_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        count_A(3, 4)
    assert count_A(3, 4, budget=100) == 27


def test_cluster_scans():
    pairs = cluster_ratio_scan((2, 2), range(2, 11))
    assert all(r.count == r.n and r.ratio == 1 for r in pairs)
    triples = cluster_ratio_scan((2, 2, 2), range(1, 9))
    assert triples[0].ratio == 1
    assert all(math.isclose(r.ratio, r.n**-0.5) for r in triples)


def test_csv_outputs():
    buf = io.StringIO()
    rows = write_enumeration_csv(enumerate_A(2, 4, "exact_sum", s=1), buf)
    assert rows == 1
    assert buf.getvalue() == "i1,i2,i3,i4,alt_sum\n1,2,1,2,2\n"
    buf = io.StringIO()
    write_count_table_csv([(2, 2, 0, 6)], buf)
    assert buf.getvalue() == "n,p,s,count\n2,2,0,6\n"
