"""Tiles for the bipartite case.

An H1 tile takes a copy S' of K_{t+1,t+1}, removes a perfect matching, and
colors the remaining edges with one main color i.  Its tile-vertices are

* ``('E', x, y)``  edge slot for every colored edge xy,
* ``('S', u, v)``  every pair of vertices on the same side of S',
* ``('V', v, i)``  the colored copy of every vertex of S'.

An H2 tile colors a single edge xy with a reserve color i and consists of
``('E', x, y)``, ``('W', x, i)``, ``('W', y, i)``.  Edge slots and same-side
pairs together make up the P side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations

from .host import HostInstance, Palette, reserve_size
from .tiles import H1, H2, BoundCheck, ConditionReport, Tile, ceil_div, comb, degree_tables, guard_check, power

EDGE_SLOT = "EdgeSlot"
SAME_SIDE_PAIR = "SameSidePair"
COLORED_COPY = "ColoredCopy"
RESERVE_COPY = "ReserveCopy"

_KINDS = {"E": EDGE_SLOT, "S": SAME_SIDE_PAIR, "V": COLORED_COPY, "W": RESERVE_COPY}

DEFAULT_GUARD = 10**8


@dataclass(frozen=True)
class TileSystemConfig:
    n: int
    t: int = 2
    epsilon: Fraction | None = None
    delta: Fraction | None = None
    n1: int | None = None
    n2: int | None = None
    guard: int = DEFAULT_GUARD

    def __post_init__(self):
        n, t = self.n, self.t
        if n < 1 or t < 2:
            raise ValueError("need n >= 1 and t >= 2")
        eps = Fraction(1, 2 * t + 3) if self.epsilon is None else Fraction(self.epsilon)
        if not 0 < eps < Fraction(1, 2 * t + 2):
            raise ValueError(f"epsilon must lie in (0, 1/{2 * t + 2})")
        lo = 1 - (2 * t + 1) * eps**4
        delta = (lo + 1) / 2 if self.delta is None else Fraction(self.delta)
        if not lo < delta < 1:
            raise ValueError(f"delta must lie in ({float(lo)}, 1)")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "delta", delta)
        if self.n1 is None:
            object.__setattr__(self, "n1", ceil_div(n, t))
        if self.n2 is None:
            object.__setattr__(self, "n2", reserve_size(n, delta))

    @property
    def host(self) -> HostInstance:
        return HostInstance.graph(self.n, self.t)

    @property
    def palette(self) -> Palette:
        return Palette(self.n1, self.n2, float(self.delta))

    @property
    def d(self) -> Fraction:
        return Fraction(self.n ** (2 * self.t + 1), math.factorial(self.t))

    @property
    def ell(self) -> int:
        return 2 * self.t

    def h1_count(self) -> int:
        t = self.t
        return comb(self.n, t + 1) ** 2 * math.factorial(t + 1) * self.n1

    def manifest(self) -> dict:
        return {
            "n": self.n,
            "t": self.t,
            "epsilon": str(self.epsilon),
            "delta": str(self.delta),
            "n1": self.n1,
            "n2": self.n2,
            "d": str(self.d),
            "ell": self.ell,
            "guard": self.guard,
        }


@dataclass(frozen=True)
class GraphTileTemplate:
    """``removed[m]`` is the Y-vertex matched to ``side_x[m]`` by the removed matching."""

    n: int
    side_x: tuple[int, ...]
    side_y: tuple[int, ...]
    removed: tuple[int, ...]
    color: int

    def validate(self) -> None:
        n, sx, sy = self.n, self.side_x, self.side_y
        if len(sx) != len(sy) or len(sx) < 2:
            raise ValueError("sides must have equal size at least 2")
        if list(sx) != sorted(set(sx)) or list(sy) != sorted(set(sy)):
            raise ValueError("sides must be sorted and duplicate-free")
        if not all(0 <= x < n for x in sx) or not all(n <= y < 2 * n for y in sy):
            raise ValueError("side_x must lie in X and side_y in Y")
        if sorted(self.removed) != list(sy):
            raise ValueError("removed is not a perfect matching between the sides")
        if self.color < 0:
            raise ValueError("negative color")


def build_h1_tile(template: GraphTileTemplate) -> Tile:
    template.validate()
    n, i = template.n, template.color
    sx, sy = template.side_x, template.side_y
    verts = [("V", v, i) for v in sx + sy]
    edges = []
    for x, gone in zip(sx, template.removed):
        for y in sy:
            if y != gone:
                verts.append(("E", x, y))
                edges.append(x * n + (y - n))
    verts.extend(("S", u, v) for u, v in combinations(sx, 2))
    verts.extend(("S", u, v) for u, v in combinations(sy, 2))
    verts.sort()
    return Tile(H1, i, (H1, i, sx, sy, template.removed), tuple(verts), tuple(sorted(edges)), template)


def build_h2_tile(config: TileSystemConfig, edge: int, color: int) -> Tile:
    if not config.palette.is_reserve(color):
        raise ValueError(f"color {color} is not a reserve (N2) color")
    n = config.n
    x, y = divmod(edge, n)
    y += n
    verts = (("E", x, y), ("W", x, color), ("W", y, color))
    return Tile(H2, color, (H2, edge, color), verts, (edge,))


def enumerate_h1_tiles(config: TileSystemConfig):
    guard_check(config.h1_count(), config.guard, "H1 enumeration")
    n, t = config.n, config.t
    for color in range(config.n1):
        for sx in combinations(range(n), t + 1):
            for sy in combinations(range(n, 2 * n), t + 1):
                for removed in permutations(sy):
                    yield build_h1_tile(GraphTileTemplate(n, sx, sy, removed, color))


def sample_h1_tile(config: TileSystemConfig, rng) -> Tile:
    """Uniform H1 tile from a ``random.Random``-like generator."""
    n, t = config.n, config.t
    if n < t + 1 or config.n1 < 1:
        raise ValueError("H1 is empty for this configuration")
    color = rng.randrange(config.n1)
    sx = tuple(sorted(rng.sample(range(n), t + 1)))
    sy = tuple(sorted(rng.sample(range(n, 2 * n), t + 1)))
    removed = tuple(rng.sample(sy, t + 1))
    return build_h1_tile(GraphTileTemplate(n, sx, sy, removed, color))


def vertex_kind(vertex) -> str:
    try:
        return _KINDS[vertex[0]]
    except (KeyError, IndexError, TypeError):
        raise ValueError(f"not a graph tile-vertex: {vertex!r}") from None


@lru_cache(maxsize=8)
def _degree_table(config: TileSystemConfig):
    return degree_tables(enumerate_h1_tiles(config), with_pairs=False)[0]


@lru_cache(maxsize=4)
def _pair_table(config: TileSystemConfig):
    return degree_tables(enumerate_h1_tiles(config))[1]


def h1_degree(vertex, config: TileSystemConfig) -> int:
    """Number of H1 tiles containing ``vertex``, by exhaustive enumeration."""
    vertex_kind(vertex)
    return _degree_table(config)[vertex]


def h1_degree_formula(kind: str, config: TileSystemConfig) -> int:
    n, t, n1 = config.n, config.t, config.n1
    f = math.factorial
    if kind == COLORED_COPY:
        return comb(n, t + 1) * comb(n - 1, t) * f(t + 1)
    if kind == EDGE_SLOT:
        return comb(n - 1, t) ** 2 * t * f(t) * n1
    if kind == SAME_SIDE_PAIR:
        return comb(n - 2, t - 1) * comb(n, t + 1) * f(t + 1) * n1
    raise ValueError(f"unknown H1 vertex kind {kind!r}")


def p_vertices(config: TileSystemConfig):
    """All of U: edge slots and same-side pairs."""
    n = config.n
    for x in range(n):
        for y in range(n, 2 * n):
            yield ("E", x, y)
    for side in (range(n), range(n, 2 * n)):
        for u, v in combinations(side, 2):
            yield ("S", u, v)


def q_vertices(config: TileSystemConfig):
    for i in range(config.n1):
        for v in range(2 * config.n):
            yield ("V", v, i)


def h1_pair_codegree_max(config: TileSystemConfig):
    """Exact max pair codegree over H1 with the least attaining pair."""
    pairs = _pair_table(config)
    if not pairs:
        return 0, None
    best = max(pairs.values())
    return best, min(p for p, c in pairs.items() if c == best)


class GraphTileSystem:
    """Bundle of config, host and cached tile lists used by the conflict engine and matcher."""

    family = "graph"

    def __init__(self, config: TileSystemConfig):
        self.config = config
        self.host = config.host
        self.palette = config.palette
        self._h1 = None

    @property
    def h1_empty(self) -> bool:
        return self.config.n < self.config.t + 1 or self.config.n1 == 0

    def h1_tiles(self) -> list[Tile]:
        if self._h1 is None:
            self._h1 = list(enumerate_h1_tiles(self.config))
        return self._h1

    def h2_tiles(self) -> list[Tile]:
        return [self.h2_tile(e, c) for e in range(self.host.num_edges) for c in self.palette.reserve]

    def sample_h1(self, rng) -> Tile:
        return sample_h1_tile(self.config, rng)

    def h2_tile(self, edge: int, color: int) -> Tile:
        return build_h2_tile(self.config, edge, color)

    def dump(self, tile: Tile) -> str:
        return dump_tile(tile)

    def d(self) -> Fraction:
        return self.config.d


def dump_tile(tile: Tile) -> str:
    if tile.kind == H2:
        return f"H2 edge={tile.colored_edges[0]} color={tile.color}"
    tpl = tile.template
    xs = ",".join(map(str, tpl.side_x))
    ys = ",".join(map(str, tpl.side_y))
    ms = ",".join(f"{x}-{y}" for x, y in zip(tpl.side_x, tpl.removed))
    return f"H1 color={tile.color} X={{{xs}}} Y={{{ys}}} M={{{ms}}}"


def h2_measurements(system) -> dict:
    """Degrees in H2 measured from its tiles: per P-vertex, per R-vertex, and max P-R codegree."""
    from collections import Counter

    p_deg = Counter()
    r_deg = Counter()
    pair = Counter()
    for tile in system.h2_tiles():
        p = tile.vertices[0]
        p_deg[p] += 1
        for v in tile.vertices[1:]:
            r_deg[v] += 1
            pair[(p, v)] += 1
    return {
        "delta_P": min(p_deg.values()) if p_deg else 0,
        "Delta_R": max(r_deg.values()) if r_deg else 0,
        "max_pair": max(pair.values()) if pair else 0,
    }


def condition_checks(d: Fraction, eps: Fraction, delta, n: int, delta_p1, delta_q1, max_deg1, codeg, h2) -> list[BoundCheck]:
    dP2 = h2["delta_P"]
    return [
        BoundCheck("delta_P(H1)", delta_p1, ">=", float(d) - power(d, 1 - eps), "(1 - d^-eps) d"),
        BoundCheck("delta_Q(H1)", delta_q1, ">=", float(d) - power(d, 1 - eps), "(1 - d^-eps) d", "Q side reported separately"),
        BoundCheck("Delta(H1)", max_deg1, "<=", float(d), "d"),
        BoundCheck("Delta_2(H1)", codeg, "<=", power(d, 1 - eps), "d^(1-eps)"),
        BoundCheck("Delta_R(H2)", h2["Delta_R"], "<=", power(d, eps**4) * dP2, "d^(eps^4) delta_P(H2)"),
        BoundCheck("delta_P(H2)", dP2, ">=", float(n) ** float(delta), "n^delta", "minimum over edge slots"),
        BoundCheck("max d(x,v) in H2", h2["max_pair"], "<=", power(d, -eps) * dP2, "d^-eps delta_P(H2)"),
    ]


def condition_report(config: TileSystemConfig) -> ConditionReport:
    system = GraphTileSystem(config)
    table = _degree_table(config)
    delta_p1 = min(table.get(v, 0) for v in p_vertices(config))
    delta_q1 = min((table.get(v, 0) for v in q_vertices(config)), default=0)
    max_deg1 = max(table.values(), default=0)
    codeg, _ = h1_pair_codegree_max(config)
    checks = condition_checks(
        config.d, config.epsilon, config.delta, config.n, delta_p1, delta_q1, max_deg1, codeg, h2_measurements(system)
    )
    params = dict(config.manifest(), kind="bg", d_float=float(config.d))
    return ConditionReport(params, checks)

