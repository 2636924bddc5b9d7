"""Tiles for the k-partite k-uniform case.

A template picks a (k+1)-subset of every part and labels each subset with
``0..k``.  Its transversals are the vertex sets whose labels are pairwise
distinct; the transversal k-sets (one vertex per part) are the edges the
tile colors.  Tile-vertices:

* ``('A', vs)``        a k-set that is a transversal: either one vertex per
                       part (an edge slot) or one part doubled and one missing,
* ``('B', vs, i)``     a transversal (k-1)-set from distinct parts plus main color i,
* ``('C', vs, i)``     a (k-1)-subset of an edge plus reserve color i (H2 only).

Templates that differ by one permutation of the labels applied to every part
color the same edges, so part 0 always carries labels in sorted order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

from .graph_tiles import h2_measurements, condition_checks
from .host import HostInstance, Palette, reserve_size
from .tiles import H1, H2, ConditionReport, Tile, ceil_div, comb, degree_tables, guard_check

FULL = "FullTransversal"
DOUBLED = "DoubledPair"
COLORED_SET = "ColoredSet"
RESERVE_SET = "ReserveSet"

DEFAULT_GUARD = 10**8


def delta_floor(k: int) -> Fraction:
    s = k * k + 1
    ratio = Fraction(s, s + 1)
    return max(1 - Fraction(s, 2 * (s + 1) ** 4), ratio, (1 + ratio) / 2)


@dataclass(frozen=True)
class HyperTileConfig:
    n: int
    k: int = 2
    epsilon: Fraction | None = None
    delta: Fraction | None = None
    n1: int | None = None
    n2: int | None = None
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        n, k = self.n, self.k
        if n < 1 or k < 2:
            raise ValueError("need n >= 1 and k >= 2")
        eps = Fraction(1, k * k + 2) if self.epsilon is None else Fraction(self.epsilon)
        if not 0 < eps <= Fraction(1, k * k + 2):
            raise ValueError(f"epsilon must lie in (0, 1/{k * k + 2}]")
        lo = delta_floor(k)
        delta = (lo + 1) / 2 if self.delta is None else Fraction(self.delta)
        if not lo < delta < 1:
            raise ValueError(f"delta must lie in ({float(lo)}, 1)")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "delta", delta)
        if self.n1 is None:
            object.__setattr__(self, "n1", ceil_div(n, 2))
        if self.n2 is None:
            object.__setattr__(self, "n2", reserve_size(n, delta))

    @property
    def host(self) -> HostInstance:
        return HostInstance.hyper(self.n, self.k)

    @property
    def palette(self) -> Palette:
        return Palette(self.n1, self.n2, float(self.delta))

    @property
    def d(self) -> Fraction:
        return Fraction(self.n ** (self.k**2 + 1), 2)

    @property
    def ell(self) -> int:
        return 6

    def h1_count(self) -> int:
        k = self.k
        return comb(self.n, k + 1) ** k * math.factorial(k + 1) ** (k - 1) * self.n1

    def manifest(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "epsilon": str(self.epsilon),
            "delta": str(self.delta),
            "n1": self.n1,
            "n2": self.n2,
            "d": str(self.d),
            "ell": self.ell,
            "guard": self.guard,
        }


def uniformity(k: int) -> int:
    f = math.factorial
    return f(k + 1) + k * math.comb(k + 1, 2) * (k - 1) * f(k - 1) + k * f(k + 1) // 2


@dataclass(frozen=True)
class TransversalTemplate:
    """``labels[j][m]`` is the label of ``parts[j][m]``."""

    n: int
    parts: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, ...], ...]
    color: int

    @property
    def k(self) -> int:
        return len(self.parts)

    def validate(self) -> None:
        n, k = self.n, self.k
        if k < 2 or len(self.labels) != k:
            raise ValueError("need one labeled subset per part")
        for j, (part, labels) in enumerate(zip(self.parts, self.labels)):
            if len(part) != k + 1 or list(part) != sorted(set(part)):
                raise ValueError(f"part {j} must be a sorted {k + 1}-subset")
            if not all(j * n <= v < (j + 1) * n for v in part):
                raise ValueError(f"part {j} has a vertex outside X_{j}")
            if sorted(labels) != list(range(k + 1)):
                raise ValueError(f"labels of part {j} are not a bijection onto 0..{k}")
        if tuple(self.labels[0]) != tuple(range(k + 1)):
            raise ValueError("part 0 labels must be in sorted order")
        if self.color < 0:
            raise ValueError("negative color")

    def label_map(self) -> list[dict[int, int]]:
        """For each part, label -> vertex."""
        return [{lab: v for v, lab in zip(part, labels)} for part, labels in zip(self.parts, self.labels)]


def build_hyper_tile(template: TransversalTemplate) -> Tile:
    template.validate()
    n, k, color = template.n, template.k, template.color
    at = template.label_map()
    labels = range(k + 1)
    verts = []
    edges = []
    for labs in permutations(labels, k):
        edge = tuple(at[j][lab] for j, lab in enumerate(labs))
        verts.append(("A", edge))
        eid = 0
        for j, v in enumerate(edge):
            eid = eid * n + (v - j * n)
        edges.append(eid)
    for p in range(k):
        for q in range(k):
            if q == p:
                continue
            rest = [j for j in range(k) if j not in (p, q)]
            for a, b in combinations(labels, 2):
                free = [lab for lab in labels if lab not in (a, b)]
                for labs in permutations(free, len(rest)):
                    vs = [at[p][a], at[p][b]] + [at[j][lab] for j, lab in zip(rest, labs)]
                    verts.append(("A", tuple(sorted(vs))))
    for q in range(k):
        rest = [j for j in range(k) if j != q]
        for labs in permutations(labels, k - 1):
            verts.append(("B", tuple(at[j][lab] for j, lab in zip(rest, labs)), color))
    verts.sort()
    key = (H1, color, template.parts, template.labels)
    return Tile(H1, color, key, tuple(verts), tuple(sorted(edges)), template)


def build_hyper_h2_tile(config: HyperTileConfig, edge: int, color: int) -> Tile:
    if not config.palette.is_reserve(color):
        raise ValueError(f"color {color} is not a reserve (N2) color")
    vs = config.host.edge_vertices(edge)
    verts = [("A", vs)]
    for drop in range(len(vs)):
        verts.append(("C", vs[:drop] + vs[drop + 1:], color))
    verts.sort()
    return Tile(H2, color, (H2, edge, color), tuple(verts), (edge,))


def enumerate_hyper_tiles(config: HyperTileConfig):
    guard_check(config.h1_count(), config.guard, "hypergraph H1 enumeration")
    n, k = config.n, config.k
    subsets = [list(combinations(range(j * n, (j + 1) * n), k + 1)) for j in range(k)]
    first = tuple(range(k + 1))
    perms = list(permutations(range(k + 1)))
    for color in range(config.n1):
        for parts in product(*subsets):
            for rest in product(perms, repeat=k - 1):
                yield build_hyper_tile(TransversalTemplate(n, parts, (first,) + rest, color))


def sample_hyper_tile(config: HyperTileConfig, rng) -> Tile:
    n, k = config.n, config.k
    if n < k + 1 or config.n1 < 1:
        raise ValueError("H1 is empty for this configuration")
    color = rng.randrange(config.n1)
    parts = tuple(tuple(sorted(rng.sample(range(j * n, (j + 1) * n), k + 1))) for j in range(k))
    labels = (tuple(range(k + 1)),) + tuple(tuple(rng.sample(range(k + 1), k + 1)) for _ in range(k - 1))
    return build_hyper_tile(TransversalTemplate(n, parts, labels, color))


def vertex_shape(vertex, config: HyperTileConfig) -> str:
    """Classify a tile-vertex, rejecting malformed ones."""
    n, k = config.n, config.k
    try:
        tag, vs = vertex[0], tuple(vertex[1])
    except (TypeError, IndexError):
        raise ValueError(f"not a hypergraph tile-vertex: {vertex!r}") from None
    if list(vs) != sorted(set(vs)) or not all(0 <= v < k * n for v in vs):
        raise ValueError(f"malformed vertex set {vs!r}")
    parts = [v // n for v in vs]
    distinct = len(set(parts))
    if tag == "A" and len(vertex) == 2 and len(vs) == k:
        if distinct == k:
            return FULL
        if distinct == k - 1:
            return DOUBLED
    elif tag in ("B", "C") and len(vertex) == 3 and len(vs) == k - 1 and distinct == k - 1:
        color = vertex[2]
        if tag == "B" and 0 <= color < config.n1:
            return COLORED_SET
        if tag == "C" and config.palette.is_reserve(color):
            return RESERVE_SET
    raise ValueError(f"malformed tile-vertex {vertex!r}")


@lru_cache(maxsize=8)
def _degree_table(config: HyperTileConfig):
    return degree_tables(enumerate_hyper_tiles(config), with_pairs=False)[0]


@lru_cache(maxsize=4)
def _pair_table(config: HyperTileConfig):
    return degree_tables(enumerate_hyper_tiles(config))[1]


def hyper_degree(vertex, config: HyperTileConfig) -> int:
    """Exact H1 degree by exhaustive enumeration."""
    vertex_shape(vertex, config)
    return _degree_table(config)[vertex]


def hyper_degree_formula(shape: str, config: HyperTileConfig) -> int:
    """Closed forms for the three H1 vertex shapes (per main color where it matters).

    Count labeled templates containing the vertex, then divide by the (k+1)!
    common relabelings.
    """
    n, k, n1 = config.n, config.k, config.n1
    f = math.factorial
    if shape == FULL:
        return comb(n - 1, k) ** k * f(k) ** k * n1
    if shape == DOUBLED:
        return (
            comb(n - 2, k - 1) * comb(n - 1, k) ** (k - 2) * comb(n, k + 1)
            * f(k - 1) * f(k) ** (k - 2) * f(k + 1) * n1
        )
    if shape == COLORED_SET:
        return comb(n - 1, k) ** (k - 1) * comb(n, k + 1) * f(k) ** (k - 1) * f(k + 1) // 2
    raise ValueError(f"unknown shape {shape!r}")


def p_vertices(config: HyperTileConfig):
    """All of A: edges plus the doubled-part k-sets."""
    n, k = config.n, config.k
    host = config.host
    for vs in host._edge_table:
        yield ("A", vs)
    for p in range(k):
        for q in range(k):
            if q == p:
                continue
            rest = [j for j in range(k) if j not in (p, q)]
            for pair in combinations(range(p * n, (p + 1) * n), 2):
                for others in product(*(range(j * n, (j + 1) * n) for j in rest)):
                    yield ("A", tuple(sorted(pair + others)))


def q_vertices(config: HyperTileConfig):
    n, k = config.n, config.k
    for q in range(k):
        rest = [j for j in range(k) if j != q]
        for vs in product(*(range(j * n, (j + 1) * n) for j in rest)):
            for i in range(config.n1):
                yield ("B", vs, i)


def hyper_pair_codegree_max(config: HyperTileConfig):
    pairs = _pair_table(config)
    if not pairs:
        return 0, None
    best = max(pairs.values())
    return best, min(p for p, c in pairs.items() if c == best)


def h2_pair_degree(config: HyperTileConfig, a_vertex, c_vertex) -> int:
    """Number of H2 tiles containing both an A-vertex and a C-vertex."""
    vs = a_vertex[1]
    if len(vs) != config.k or len({v // config.n for v in vs}) != config.k:
        return 0
    sub, color = c_vertex[1], c_vertex[2]
    if not config.palette.is_reserve(color) or not set(sub) <= set(vs):
        return 0
    return 1


class HyperTileSystem:
    family = "hyper"

    def __init__(self, config: HyperTileConfig):
        self.config = config
        self.host = config.host
        self.palette = config.palette
        self._h1 = None

    @property
    def h1_empty(self) -> bool:
        return self.config.n < self.config.k + 1 or self.config.n1 == 0

    def h1_tiles(self) -> list[Tile]:
        if self._h1 is None:
            self._h1 = list(enumerate_hyper_tiles(self.config))
        return self._h1

    def h2_tiles(self) -> list[Tile]:
        return [self.h2_tile(e, c) for e in range(self.host.num_edges) for c in self.palette.reserve]

    def sample_h1(self, rng) -> Tile:
        return sample_hyper_tile(self.config, rng)

    def h2_tile(self, edge: int, color: int) -> Tile:
        return build_hyper_h2_tile(self.config, edge, color)

    def dump(self, tile: Tile) -> str:
        return dump_hyper_tile(tile)

    def d(self) -> Fraction:
        return self.config.d


def dump_hyper_tile(tile: Tile) -> str:
    if tile.kind == H2:
        return f"H2k edge={tile.colored_edges[0]} color={tile.color}"
    tpl = tile.template
    parts = ";".join("{" + ",".join(map(str, part)) + "}" for part in tpl.parts)
    labels = ";".join(",".join(map(str, lab)) for lab in tpl.labels)
    return f"H1k color={tile.color} parts=[{parts}] labels=[{labels}]"


def hyper_condition_report(config: HyperTileConfig) -> ConditionReport:
    system = HyperTileSystem(config)
    table = _degree_table(config)
    delta_p1 = min(table.get(v, 0) for v in p_vertices(config))
    delta_q1 = min((table.get(v, 0) for v in q_vertices(config)), default=0)
    max_deg1 = max(table.values(), default=0)
    codeg, _ = hyper_pair_codegree_max(config)
    checks = condition_checks(
        config.d, config.epsilon, config.delta, config.n, delta_p1, delta_q1, max_deg1, codeg, h2_measurements(system)
    )
    params = dict(config.manifest(), kind="kh", d_float=float(config.d))
    return ConditionReport(params, checks)


# k = 2 identification with the graph system at t = 2

def graph_vertex(vertex, n: int):
    tag = vertex[0]
    if tag == "A":
        a, b = vertex[1]
        return ("E", a, b) if a // n != b // n else ("S", a, b)
    if tag == "B":
        return ("V", vertex[1][0], vertex[2])
    if tag == "C":
        return ("W", vertex[1][0], vertex[2])
    raise ValueError(f"unknown tag in {vertex!r}")


def graph_template(template: TransversalTemplate):
    """The graph template at t=2 whose tile corresponds to this k=2 template."""
    from .graph_tiles import GraphTileTemplate

    if template.k != 2:
        raise ValueError("identification only exists for k=2")
    xs, ys = template.parts
    by_label = dict(zip(template.labels[1], ys))
    removed = tuple(by_label[lab] for lab in template.labels[0])
    return GraphTileTemplate(template.n, xs, ys, removed, template.color)
