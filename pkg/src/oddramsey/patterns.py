"""Which bad colorings of the hypergraph target can be produced by a matching of tiles.

Everything is decided on the vertices of one target copy.  A tile's other
vertices can always be taken fresh (the host is assumed large), so only
tile-vertices made entirely of copy vertices can collide, and a tile only
needs the copy vertices that lie on the edges it colors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .host import HostInstance, enumerate_target_copies

# copy edges are indexed column by column: edge 2c+a joins pair[a] and others[c]
PAIRINGS = {
    "all": ((0, 1, 2, 3),),
    "shared-pair-vertex": ((0, 2), (1, 3)),
    "shared-other-vertex": ((0, 1), (2, 3)),
    "diagonal": ((0, 3), (1, 2)),
}


@dataclass(frozen=True, order=True)
class BadPattern:
    system: str
    pairing: str
    j1: int
    j2: int
    hyper_type: str | None


def _set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _h1_vertex_options(host: HostInstance, edges, color):
    """Every possible set of copy-internal tile-vertices of an H1 tile coloring ``edges``."""
    k, n = host.k, host.n
    verts = sorted({v for e in edges for v in host.edge_vertices(e)})
    part = {v: v // n for v in verts}
    options = set()
    for labels in product(range(k + 1), repeat=len(verts)):
        lab = dict(zip(verts, labels))
        if any(part[a] == part[b] and lab[a] == lab[b] for a, b in combinations(verts, 2)):
            continue
        if any(len({lab[v] for v in host.edge_vertices(e)}) < k for e in edges):
            continue
        found = set()
        for z in combinations(verts, k):
            if len({lab[v] for v in z}) < k:
                continue
            per_part = [part[v] for v in z]
            if len(set(per_part)) >= k - 1:
                found.add(("A", z))
        for z in combinations(verts, k - 1):
            if len({part[v] for v in z}) == k - 1 and len({lab[v] for v in z}) == k - 1:
                found.add(("B", z, color))
        options.add(frozenset(found))
    return sorted(options, key=lambda s: (len(s), sorted(s)))


def _h2_vertices(host: HostInstance, edge, color):
    vs = host.edge_vertices(edge)
    return frozenset([("A", vs)] + [("C", vs[:i] + vs[i + 1:], color) for i in range(len(vs))])


def _realizable(groups) -> bool:
    """Can one option per group be chosen with all choices pairwise disjoint?"""
    def rec(i, used):
        if i == len(groups):
            return True
        return any(used.isdisjoint(opt) and rec(i + 1, used | opt) for opt in groups[i])
    return rec(0, frozenset())


def pattern_table(k: int, n: int | None = None) -> list[dict]:
    """Every bad coloring pattern of one target copy with a tile grouping, and whether a matching realizes it."""
    n = k + 1 if n is None else n
    host = HostInstance.hyper(n, k)
    copy = next(enumerate_target_copies(host))
    edges = copy.edges
    rows = []
    for name, classes in PAIRINGS.items():
        for sources in product(("N1", "N2"), repeat=len(classes)):
            splits = []
            for cls, src in zip(classes, sources):
                if src == "N2":
                    splits.append([[[i] for i in cls]])
                else:
                    splits.append([p for p in _set_partitions(cls)])
            for choice in product(*splits):
                groups = []
                j1 = j2 = 0
                for color, (src, grouping) in enumerate(zip(sources, choice)):
                    for group in grouping:
                        ge = [edges[i] for i in group]
                        if src == "N1":
                            j1 += 1
                            groups.append(_h1_vertex_options(host, ge, color))
                        else:
                            j2 += 1
                            groups.append([_h2_vertices(host, ge[0], 100 + color)])
                if j1 + j2 < 2:
                    continue
                system = "C" if j2 == 0 else "D"
                hyper_type = {2: "type1", 4: "type2"}.get(j2, "other") if system == "D" else None
                rows.append({
                    "pattern": BadPattern(system, name, j1, j2, hyper_type),
                    "sources": sources,
                    "groups": [[list(g) for g in grouping] for grouping in choice],
                    "realizable": _realizable(groups),
                })
    return rows


def realizable_patterns(k: int, n: int | None = None) -> set[BadPattern]:
    return {row["pattern"] for row in pattern_table(k, n) if row["realizable"]}


def pattern_of(host: HostInstance, conflict) -> BadPattern:
    """The pattern a concrete hypergraph conflict instantiates, read off its witness."""
    copy = conflict.witness.copy
    owner = {}
    for idx, tile in enumerate(conflict.tiles):
        for e in tile.colored_edges:
            owner[e] = tile
    colors = [owner[e].color for e in copy.edges]
    classes = {}
    for i, c in enumerate(colors):
        classes.setdefault(c, []).append(i)
    shape = tuple(sorted(tuple(v) for v in classes.values()))
    name = next(key for key, cls in PAIRINGS.items() if tuple(sorted(cls)) == shape)
    return BadPattern(conflict.system, name, conflict.signature[0], conflict.signature[1], conflict.hyper_type)
