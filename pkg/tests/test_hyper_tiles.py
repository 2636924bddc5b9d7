import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from oddramsey.graph_tiles import (
    COLORED_COPY,
    EDGE_SLOT,
    SAME_SIDE_PAIR,
    TileSystemConfig,
    build_h1_tile,
    enumerate_h1_tiles,
    h1_degree,
    h1_degree_formula,
    h2_measurements,
)
from oddramsey.hyper_tiles import (
    COLORED_SET,
    DOUBLED,
    FULL,
    HyperTileConfig,
    HyperTileSystem,
    TransversalTemplate,
    build_hyper_h2_tile,
    build_hyper_tile,
    enumerate_hyper_tiles,
    graph_template,
    graph_vertex,
    h2_pair_degree,
    hyper_degree,
    hyper_degree_formula,
    p_vertices,
    q_vertices,
    sample_hyper_tile,
    uniformity,
    vertex_shape,
)


def random_template(n, k, seed, color=0):
    rng = random.Random(seed)
    parts = tuple(tuple(sorted(rng.sample(range(j * n, (j + 1) * n), k + 1))) for j in range(k))
    labels = (tuple(range(k + 1)),) + tuple(tuple(rng.sample(range(k + 1), k + 1)) for _ in range(k - 1))
    return TransversalTemplate(n, parts, labels, color)


def test_uniformity_values():
    assert uniformity(2) == oracles.hyper_uniformity(2) == 18
    assert uniformity(3) == oracles.hyper_uniformity(3) == 132


@pytest.mark.parametrize("k", [2, 3, 4])
def test_constructed_size(k):
    tile = build_hyper_tile(random_template(k + 2, k, 0))
    assert tile.size == uniformity(k)
    assert len(tile.colored_edges) == len(set(tile.colored_edges))


def test_k2_colored_edges_are_injections():
    assert len(build_hyper_tile(random_template(4, 2, 1)).colored_edges) == 6


@settings(max_examples=40, deadline=None)
@given(k=st.integers(2, 3), extra=st.integers(0, 2), seed=st.integers(0, 10**6), color=st.integers(0, 2))
def test_tile_matches_labeled_set_definition(k, extra, seed, color):
    n = k + 1 + extra
    tp = random_template(n, k, seed, color)
    tile = build_hyper_tile(tp)
    assert tile.vertex_set == oracles.hyper_tile_vertices(n, k, tp.parts, tp.labels, color)
    assert set(tile.colored_edges) == oracles.hyper_tile_edges(n, k, tp.parts, tp.labels)


def test_invalid_template():
    with pytest.raises(ValueError):
        build_hyper_tile(TransversalTemplate(3, ((0, 1, 2), (3, 4, 5)), ((1, 0, 2), (0, 1, 2)), 0))
    with pytest.raises(ValueError):
        build_hyper_tile(TransversalTemplate(3, ((0, 1, 2), (3, 4, 5)), ((0, 1, 2), (0, 0, 2)), 0))


def test_enumeration_counts():
    per_color = list(enumerate_hyper_tiles(HyperTileConfig(3, 2, n1=1)))
    assert len(per_color) == 6 == len(list(enumerate_h1_tiles(TileSystemConfig(3, 2, n1=1))))
    assert len(list(enumerate_hyper_tiles(HyperTileConfig(4, 2)))) == 192


def test_sampling_hits_enumerated_tiles():
    cfg = HyperTileConfig(4, 3)
    keys = {t.key for t in enumerate_hyper_tiles(cfg)}
    rng = random.Random(2)
    seen = Counter(sample_hyper_tile(cfg, rng).key for _ in range(4000))
    assert set(seen) <= keys
    # 1152 tiles, 4000 draws: nearly all should appear
    assert len(seen) > 0.9 * len(keys)


def test_k2_tiles_correspond_to_graph_tiles():
    for n in (3, 4):
        hcfg = HyperTileConfig(n, 2)
        gtiles = {t.key: t for t in enumerate_h1_tiles(TileSystemConfig(n, 2))}
        for tile in enumerate_hyper_tiles(hcfg):
            g = build_h1_tile(graph_template(tile.template))
            assert g.key in gtiles
            assert {graph_vertex(v, n) for v in tile.vertices} == g.vertex_set
            assert tile.colored_edges == g.colored_edges


@pytest.mark.parametrize("n,k", [(3, 2), (4, 2), (5, 2), (4, 3)])
def test_degree_formula_matches_enumeration(n, k):
    cfg = HyperTileConfig(n, k)
    deg = Counter()
    for tile in enumerate_hyper_tiles(cfg):
        tp = tile.template
        deg.update(oracles.hyper_tile_vertices(n, k, tp.parts, tp.labels, tp.color))
    for v in list(p_vertices(cfg)) + list(q_vertices(cfg)):
        shape = vertex_shape(v, cfg)
        assert hyper_degree(v, cfg) == deg[v] == hyper_degree_formula(shape, cfg)


@pytest.mark.parametrize("n", [3, 4])
def test_k2_degrees_equal_graph_degrees(n):
    h, g = HyperTileConfig(n, 2), TileSystemConfig(n, 2)
    kinds = {FULL: EDGE_SLOT, DOUBLED: SAME_SIDE_PAIR, COLORED_SET: COLORED_COPY}
    for v in list(p_vertices(h)) + list(q_vertices(h)):
        gv = graph_vertex(v, n)
        assert hyper_degree(v, h) == h1_degree(gv, g)
        assert hyper_degree_formula(vertex_shape(v, h), h) == h1_degree_formula(kinds[vertex_shape(v, h)], g)


def test_malformed_vertex_rejected():
    cfg = HyperTileConfig(4, 2)
    with pytest.raises(ValueError):
        hyper_degree(("A", (0, 0)), cfg)
    with pytest.raises(ValueError):
        vertex_shape(("A", (0, 1, 2)), cfg)


def test_h2_pair_degree():
    cfg = HyperTileConfig(4, 3)
    c = cfg.palette.reserve[0]
    edge = (0, 4, 8)
    assert h2_pair_degree(cfg, ("A", edge), ("C", (4, 8), c)) == 1
    assert h2_pair_degree(cfg, ("A", edge), ("C", (5, 8), c)) == 0
    assert h2_pair_degree(cfg, ("A", edge), ("C", (4, 8), 0)) == 0
    tile = build_hyper_h2_tile(cfg, cfg.host.edge_id(edge), c)
    assert ("C", (4, 8), c) in tile.vertex_set and tile.size == 4


def test_h2_reserve_degree_is_n():
    m = h2_measurements(HyperTileSystem(HyperTileConfig(5, 3)))
    assert m["Delta_R"] == 5
    assert m["max_pair"] == 1


def test_epsilon_endpoint_allowed():
    from fractions import Fraction

    assert HyperTileConfig(4, 2, epsilon=Fraction(1, 6)).epsilon == Fraction(1, 6)
    with pytest.raises(ValueError):
        HyperTileConfig(4, 2, epsilon=Fraction(1, 5))
