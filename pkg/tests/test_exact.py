import csv

import pytest

import oracles
from oddramsey.exact import (
    BUDGET,
    NO,
    PRUNING_LEVELS,
    YES,
    SearchConfig,
    brute_force_exists,
    exists_valid_coloring,
    hypergraph_lower_bound_exhaust,
    lower_bound_exhaust,
    r_odd_exact,
    restricted_growth,
    write_table,
)
from oddramsey.host import HostInstance, read_coloring
from oddramsey.odd import find_bad_target
from oddramsey.tiles import GuardExceeded


def oracle_exists(host, q):
    copies = [cp for *_, cp in oracles.graph_copies(host.n, host.t)] if host.is_graph else \
        oracles.hyper_grid_copies(host.n, host.k)
    return oracles.brute_valid_coloring(copies, host.num_edges, q) is not None


def test_k22_examples():
    host = HostInstance.graph(2, 2)
    assert exists_valid_coloring(SearchConfig(host, 1)).status == NO
    res = exists_valid_coloring(SearchConfig(host, 2))
    assert res.status == YES and find_bad_target(res.coloring) is None


def test_k44_two_colors_none():
    assert exists_valid_coloring(SearchConfig(HostInstance.graph(4, 2), 2)).status == NO


@pytest.mark.parametrize("pruning", PRUNING_LEVELS)
@pytest.mark.parametrize("n,t,q", [(2, 2, 1), (2, 2, 2), (3, 2, 1), (3, 2, 2), (3, 2, 3), (3, 3, 1), (3, 3, 2)])
def test_search_matches_unpruned_oracle(pruning, n, t, q):
    host = HostInstance.graph(n, t)
    assert (exists_valid_coloring(SearchConfig(host, q, pruning)).status == YES) == oracle_exists(host, q)


@pytest.mark.parametrize("n,k,q", [(2, 3, 1), (2, 3, 2), (3, 2, 2)])
def test_hyper_search_matches_oracle(n, k, q):
    host = HostInstance.hyper(n, k)
    assert (exists_valid_coloring(SearchConfig(host, q)).status == YES) == oracle_exists(host, q)


def test_r_odd_values():
    r22 = r_odd_exact(HostInstance.graph(2, 2), 3)
    assert r22.status == "exact" and r22.value == 2
    r33 = r_odd_exact(HostInstance.graph(3, 2), 4)
    assert r33.status == "exact" and r33.value > 3 // 2
    assert brute_force_exists(HostInstance.graph(3, 2), r33.value) is not None
    assert brute_force_exists(HostInstance.graph(3, 2), r33.value - 1) is None


def test_monotone_in_q():
    host = HostInstance.graph(3, 2)
    statuses = [exists_valid_coloring(SearchConfig(host, q)).status for q in range(1, 5)]
    first = statuses.index(YES)
    assert all(s == YES for s in statuses[first:])


@pytest.mark.parametrize("n,t", [(2, 2), (3, 2), (4, 2), (3, 3), (4, 3)])
def test_r_odd_exceeds_lower_bound(n, t):
    assert exists_valid_coloring(SearchConfig(HostInstance.graph(n, t), n // t)).status == NO


def test_budget_exceeded_is_reported():
    res = exists_valid_coloring(SearchConfig(HostInstance.graph(4, 2), 2, budget=10))
    assert res.status == BUDGET
    assert r_odd_exact(HostInstance.graph(4, 2), 2, budget=10).status == "unknown"


def test_edge_guard():
    with pytest.raises(GuardExceeded):
        exists_valid_coloring(SearchConfig(HostInstance.graph(7, 2), 3))


def test_write_table(tmp_path):
    result = r_odd_exact(HostInstance.graph(2, 2), 3)
    path = write_table(result, tmp_path)
    rows = list(csv.DictReader(open(path)))
    assert [r["result"] for r in rows] == [NO, YES]
    assert rows[1]["target"] == "K_{2,2}"
    cert = read_coloring(str(tmp_path / rows[1]["certificate-file"]))
    assert find_bad_target(cert) is None


def test_restricted_growth_counts():
    # Stirling-number sums: words of length 5 in at most 2 blocks = 2^4
    assert sum(1 for _ in restricted_growth(5, 2)) == 16
    assert sum(1 for _ in restricted_growth(4, 4)) == 15  # Bell(4)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lower_bound_exhaustive(n):
    assert lower_bound_exhaust(n, 2).passed


def test_lower_bound_sampling_n6_t3():
    res = lower_bound_exhaust(6, 3, mode="sampling", samples=10**5, seed=0)
    assert res.passed and res.checked == 10**5


def test_lower_bound_hyper():
    assert hypergraph_lower_bound_exhaust(2, 3).passed
    assert hypergraph_lower_bound_exhaust(3, 2).passed

