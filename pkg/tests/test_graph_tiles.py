import math
import random
from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from oddramsey.graph_tiles import (
    COLORED_COPY,
    EDGE_SLOT,
    SAME_SIDE_PAIR,
    GraphTileSystem,
    GraphTileTemplate,
    TileSystemConfig,
    build_h1_tile,
    build_h2_tile,
    condition_report,
    enumerate_h1_tiles,
    h1_degree,
    h1_degree_formula,
    h1_pair_codegree_max,
    h2_measurements,
    p_vertices,
    sample_h1_tile,
    vertex_kind,
)
from oddramsey.tiles import GuardExceeded


def template(n, t, seed=0, color=0):
    rng = random.Random(seed)
    sx = tuple(sorted(rng.sample(range(n), t + 1)))
    sy = tuple(sorted(rng.sample(range(n, 2 * n), t + 1)))
    return GraphTileTemplate(n, sx, sy, tuple(rng.sample(sy, t + 1)), color)


@pytest.mark.parametrize("t,size", [(2, 18), (3, 32), (4, 50)])
def test_tile_size(t, size):
    tile = build_h1_tile(template(t + 2, t))
    assert tile.size == size == 2 * (t + 1) ** 2
    assert len(tile.colored_edges) == (t + 1) ** 2 - (t + 1)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(3, 7), t=st.integers(2, 3), seed=st.integers(0, 10**6), color=st.integers(0, 3))
def test_tile_matches_definition(n, t, seed, color):
    if n < t + 1:
        return
    tp = template(n, t, seed, color)
    tile = build_h1_tile(tp)
    assert tile.vertex_set == oracles.h1_graph_tile(n, t, tp.side_x, tp.side_y, tp.removed, color)
    want_edges = {oracles.edge_id(n, (x, y)) for x in tp.side_x for y in tp.side_y
                  if dict(zip(tp.side_x, tp.removed))[x] != y}
    assert set(tile.colored_edges) == want_edges
    assert tile.color == color


@pytest.mark.parametrize(
    "bad",
    [
        dict(n=4, side_x=(0, 1, 2), side_y=(4, 5), removed=(4, 5), color=0),
        dict(n=4, side_x=(1, 0, 2), side_y=(4, 5, 6), removed=(4, 5, 6), color=0),
        dict(n=4, side_x=(0, 1, 2), side_y=(4, 5, 6), removed=(4, 4, 6), color=0),
        dict(n=4, side_x=(0, 1, 4), side_y=(4, 5, 6), removed=(4, 5, 6), color=0),
    ],
)
def test_invalid_templates(bad):
    with pytest.raises(ValueError):
        build_h1_tile(GraphTileTemplate(**bad))


def test_tile_counts():
    assert len(list(enumerate_h1_tiles(TileSystemConfig(3, 2)))) == 12
    tiles = list(enumerate_h1_tiles(TileSystemConfig(6, 2)))
    assert len(tiles) == 7200 == TileSystemConfig(6, 2).h1_count()
    assert len(set(tiles)) == 7200


def test_enumeration_guard():
    with pytest.raises(GuardExceeded):
        list(enumerate_h1_tiles(TileSystemConfig(6, 2, guard=100)))


def test_sampling_uniform_chi_square():
    cfg = TileSystemConfig(6, 2)
    index = {tile.key: i for i, tile in enumerate(enumerate_h1_tiles(cfg))}
    rng = random.Random(11)
    # group by the (side_x, side_y) cell to keep expected counts reasonable
    cells = Counter()
    draws = 10**4
    for _ in range(draws):
        tile = sample_h1_tile(cfg, rng)
        assert tile.key in index
        cells[(tile.color, tile.key[2], tile.key[3])] += 1
    k = 3 * 20 * 20
    expected = draws / k
    chi2 = sum((cells.get(c, 0) - expected) ** 2 / expected for c in
               [(i, sx, sy) for i in range(3) for sx in combinations(range(6), 3) for sy in combinations(range(6, 12), 3)])
    dof = k - 1
    assert abs(chi2 - dof) < 5 * math.sqrt(2 * dof)


def test_h2_tiles():
    cfg = TileSystemConfig(4, 2)
    first = cfg.palette.reserve[0]
    a = build_h2_tile(cfg, 0, first)
    assert a.size == 3
    # edges 0 = (0,4) and 1 = (0,5) share x=0
    assert ("W", 0, first) in a.vertex_set & build_h2_tile(cfg, 1, first).vertex_set
    assert a.disjoint(build_h2_tile(cfg, 5, first))  # (1,5)
    with pytest.raises(ValueError):
        build_h2_tile(cfg, 0, 0)


def test_degree_examples_n6():
    cfg = TileSystemConfig(6, 2)
    assert h1_degree_formula(COLORED_COPY, cfg) == 1200
    assert h1_degree_formula(EDGE_SLOT, cfg) == 1200
    assert h1_degree_formula(SAME_SIDE_PAIR, cfg) == 1440
    assert h1_degree(("V", 0, 0), cfg) == 1200
    assert h1_degree(("E", 0, 6), cfg) == 1200
    assert h1_degree(("S", 6, 7), cfg) == 1440


@pytest.mark.parametrize("n,t", [(3, 2), (4, 2), (5, 2), (4, 3), (5, 3)])
def test_degrees_match_oracle(n, t):
    cfg = TileSystemConfig(n, t)
    deg = oracles.graph_h1_degree_counts(n, t, cfg.n1)
    closed = oracles.graph_degree_closed_forms(n, t)
    for v in p_vertices(cfg):
        assert h1_degree(v, cfg) == deg[v] == closed[vertex_kind(v)]
    for i in range(cfg.n1):
        for v in range(2 * n):
            assert h1_degree(("V", v, i), cfg) == deg[("V", v, i)] == closed[COLORED_COPY]


def test_vertex_kind_rejects_garbage():
    with pytest.raises(ValueError):
        vertex_kind(("Z", 1))


def test_pair_codegree_brute_force():
    for n in (3, 4):
        cfg = TileSystemConfig(n, 2)
        tiles = list(enumerate_h1_tiles(cfg))
        pairs = Counter()
        for tile in tiles:
            pairs.update(combinations(tile.vertices, 2))
        best, witness = h1_pair_codegree_max(cfg)
        assert best == max(pairs.values())
        assert pairs[tuple(sorted(witness))] == best
    assert best < h1_degree_formula(COLORED_COPY, cfg)


def test_h2_measurements():
    sys6 = GraphTileSystem(TileSystemConfig(6, 2))
    m = h2_measurements(sys6)
    assert m["Delta_R"] == 6
    assert m["delta_P"] == sys6.config.n2
    assert m["max_pair"] == 1
    tile = sys6.h2_tile(0, sys6.config.palette.reserve[0])
    far = ("W", 5, sys6.config.palette.reserve[0])
    assert far not in tile.vertex_set


def test_condition_report_serializes():
    rep = condition_report(TileSystemConfig(4, 2))
    d = rep.to_dict()
    assert {"name", "measured", "bound", "expression", "passed"} <= set(d["checks"][0])
