import random

import pytest

import oracles
from oddramsey.conflicts import (
    ConflictEngine,
    enumerate_C,
    find_witnesses,
    internal_targets,
    is_conflict,
    is_irreducible_conflict,
    is_matching,
    is_minimal,
    partner_law_violations,
)
from oddramsey.graph_tiles import GraphTileSystem, GraphTileTemplate, TileSystemConfig, build_h1_tile, build_h2_tile
from oddramsey.host import HostInstance
from oddramsey.hyper_tiles import HyperTileConfig, HyperTileSystem, build_hyper_h2_tile, enumerate_hyper_tiles
from oddramsey.tiles import GuardExceeded


@pytest.fixture(scope="module")
def graph3():
    return ConflictEngine(GraphTileSystem(TileSystemConfig(3, 2)))


@pytest.fixture(scope="module")
def graph4():
    return ConflictEngine(GraphTileSystem(TileSystemConfig(4, 2)))


@pytest.fixture(scope="module")
def hyper3():
    return ConflictEngine(HyperTileSystem(HyperTileConfig(3, 2)))


def h1(n, sx, sy, removed, color):
    return build_h1_tile(GraphTileTemplate(n, sx, sy, removed, color))


def diagonal_instance():
    """One H1 tile colors x0y4 and x1y5; two same-colored H2 tiles color x0y5 and x1y4."""
    cfg = TileSystemConfig(4, 2)
    c = cfg.palette.reserve[0]
    tile = h1(4, (0, 1, 2), (4, 5, 6), (5, 4, 6), 0)
    return cfg, [tile, build_h2_tile(cfg, 0 * 4 + 1, c), build_h2_tile(cfg, 1 * 4 + 0, c)]


def test_is_matching_examples():
    a = h1(4, (0, 1, 2), (4, 5, 6), (4, 5, 6), 0)
    b = h1(4, (0, 1, 3), (4, 5, 7), (4, 5, 7), 0)
    assert not is_matching([a, b])
    c = h1(6, (0, 1, 2), (6, 7, 8), (6, 7, 8), 0)
    d = h1(6, (3, 4, 5), (9, 10, 11), (9, 10, 11), 1)
    assert is_matching([c, d])
    cfg = TileSystemConfig(4, 2)
    r = cfg.palette.reserve[0]
    assert not is_matching([build_h2_tile(cfg, 0, r), build_h2_tile(cfg, 1, r)])


def test_constructed_three_tile_conflict():
    cfg, tiles = diagonal_instance()
    assert is_matching(tiles)
    ws = list(find_witnesses(cfg.host, tiles, 2))
    assert ws and all(w.irreducible for w in ws)
    assert is_conflict(cfg.host, tiles)
    assert is_irreducible_conflict(cfg.host, tiles, 2)
    assert is_minimal(cfg.host, tiles, 2)


def test_single_tile_has_no_target():
    for t in (2, 3, 4):
        n = t + 1
        host = HostInstance.graph(n, t)
        rng = random.Random(t)
        for _ in range(5):
            sy = tuple(range(n, 2 * n))
            tile = h1(n, tuple(range(n)), sy, tuple(rng.sample(sy, n)), 0)
            # cherries (r=1) are inside one tile, but no K_{2,t} is
            assert [w for w in find_witnesses(host, [tile], t) if w.copy.r == t] == []
            assert internal_targets(host, tile) == []


def test_disjoint_host_vertices_no_witness():
    host = HostInstance.graph(6, 2)
    a = h1(6, (0, 1, 2), (6, 7, 8), (6, 7, 8), 0)
    b = h1(6, (3, 4, 5), (9, 10, 11), (9, 10, 11), 0)
    assert list(find_witnesses(host, [a, b])) == []


def test_reducible_cherries_not_a_matching():
    # two tiles each giving a monochromatic cherry on x0, x1 must share S(0,1)
    a = h1(4, (0, 1, 2), (4, 5, 6), (5, 6, 4), 0)
    b = h1(4, (0, 1, 3), (4, 5, 7), (4, 7, 5), 1)
    assert ("S", 0, 1) in a.vertex_set & b.vertex_set
    assert not is_matching([a, b])
    assert not is_conflict(HostInstance.graph(4, 2), [a, b])


def test_two_tiles_never_conflict(graph3):
    assert graph3.check_two_tile()["passed"]
    assert all(c.size >= 3 for c in graph3.conflicts())


def test_hyper_h2_pair_sharing_k_minus_1_vertices():
    cfg = HyperTileConfig(3, 3)
    c = cfg.palette.reserve[0]
    host = cfg.host
    a = build_hyper_h2_tile(cfg, host.edge_id((0, 3, 6)), c)
    b = build_hyper_h2_tile(cfg, host.edge_id((1, 3, 6)), c)
    assert not is_matching([a, b])
    assert not is_conflict(host, [a, b])


def test_graph_n3_j2_empty():
    assert enumerate_C(TileSystemConfig(3, 2), 2) == []


def test_engine_matches_subset_oracle_n3(graph3):
    tiles = graph3.tiles
    assert {frozenset(c.tiles) for c in graph3.conflicts()} == oracles.brute_conflicts(tiles, 3, 2, 4)


@pytest.mark.slow
def test_engine_matches_subset_oracle_n4_up_to_three_tiles(graph4):
    got = {frozenset(c.tiles) for c in graph4.conflicts() if c.size <= 3}
    assert got == oracles.brute_conflicts(graph4.tiles, 4, 2, 3)


def test_signature_counts(graph3, graph4, hyper3):
    # both families describe the same instance at k=2, t=2
    assert graph3.signatures() == hyper3.signatures()
    # any two H1 tiles pick 3 of 4 vertices per side, so they share a pair vertex
    assert sum(v for (s, _), v in graph4.signatures().items() if s == "C") == 0


def test_every_conflict_minimal_and_lawful(graph4):
    host = graph4.host
    for c in graph4.conflicts()[:300]:
        assert is_minimal(host, c.tiles, 2)
        assert partner_law_violations(c) == []
    assert all(partner_law_violations(c) == [] for c in graph4.conflicts())


def test_hyper_conflict_types(hyper3):
    types = {c.hyper_type for c in hyper3.conflicts()}
    assert types <= {"type1", "type2"}


def test_claims_small(graph4):
    claims = graph4.check_claims(samples=200, maximal=50, seed=3)
    assert all(v["passed"] for v in claims.values()), claims


def test_codegree_rows(graph4):
    rows = graph4.codegree_stats()
    assert rows
    for row in rows:
        assert {"quantity", "measured", "bound", "expression", "passed"} <= set(row)
    best = next(r for r in rows if r["quantity"] == "Delta_2(C^(3))")
    assert best["measured"] == 0  # C is empty here


def test_guard():
    with pytest.raises(GuardExceeded):
        ConflictEngine(GraphTileSystem(TileSystemConfig(5, 2)))


@pytest.mark.parametrize("k", [2, 3])
def test_hyper_internal_targets_empty(k):
    cfg = HyperTileConfig(k + 1, k)
    for tile in enumerate_hyper_tiles(cfg):
        assert internal_targets(cfg.host, tile) == []
