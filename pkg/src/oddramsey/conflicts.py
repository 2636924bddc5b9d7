"""Conflicts: matchings of tiles whose colored edges hold a bad target touching every tile.

The engine enumerates witness copies first and then every way to cover a
copy's edges with pairwise disjoint tiles; the tiles owning the edges are the
conflict.  System C holds the all-H1 conflicts, system D those with H2 tiles
(which always come in same-colored pairs, so there are at least two).
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations

from .host import HostInstance, enumerate_target_copies, make_copy
from .odd import BadCopy, bad_copy, colors_bad
from .tiles import H1, H2, GuardExceeded, Tile, power


def is_matching(tiles) -> bool:
    seen = set()
    total = 0
    for tile in tiles:
        seen |= tile.vertex_set
        total += len(tile.vertex_set)
    return len(seen) == total


def _owners(tiles):
    owner = {}
    for idx, tile in enumerate(tiles):
        for e in tile.colored_edges:
            owner[e] = (tile.color, idx)
    return owner


def _graph_copies_within(host: HostInstance, edges, r_min: int, r_max: int):
    nbrs = defaultdict(set)
    for e in edges:
        x, y = host.edge_vertices(e)
        nbrs[x].add(y)
        nbrs[y].add(x)
    copies = []
    for parts in ((0, 1), (1, 0)):
        side = sorted(v for v in nbrs if host.part_of(v) == parts[0])
        for a, b in combinations(side, 2):
            common = sorted(nbrs[a] & nbrs[b])
            for r in range(r_min, min(r_max, len(common)) + 1):
                for others in combinations(common, r):
                    copies.append(make_copy(host, parts, (), (a, b), others))
    copies.sort(key=lambda c: c.key())
    return copies


def _hyper_copies_within(host: HostInstance, edges):
    edges = set(edges)
    found = {}
    verts = {e: host.edge_vertices(e) for e in edges}
    for e, f in combinations(sorted(edges), 2):
        ve, vf = verts[e], verts[f]
        diff = [j for j in range(host.k) if ve[j] != vf[j]]
        if len(diff) != 2:
            continue
        i, j = diff
        pair = tuple(sorted((ve[i], vf[i])))
        others = tuple(sorted((ve[j], vf[j])))
        prefix = tuple(ve[m] for m in range(host.k) if m not in diff)
        copy = make_copy(host, (i, j), prefix, pair, others)
        if copy.key() not in found and all(x in edges for x in copy.edges):
            found[copy.key()] = copy
    return [found[key] for key in sorted(found)]


def find_witnesses(host: HostInstance, tiles, max_r: int | None = None):
    """Fully colored bad copies inside the tiles' colored edges touching every tile.

    Graph hosts scan K_{2,r} for ``1 <= r <= max_r`` (default n); hypergraph
    hosts scan the fixed target.
    """
    tiles = list(tiles)
    owner = _owners(tiles)
    m = len(tiles)
    if host.is_graph:
        r_max = host.n if max_r is None else max_r
        copies = _graph_copies_within(host, owner, max(1, (m + 1) // 2), r_max)
    else:
        copies = _hyper_copies_within(host, owner)
    for copy in copies:
        if len({owner[e][1] for e in copy.edges}) != m:
            continue
        colors = [owner[e][0] for e in copy.edges]
        if colors_bad(colors):
            yield bad_copy(host, copy, colors)


def is_conflict(host, tiles, max_r=None) -> bool:
    tiles = list(tiles)
    return len(tiles) >= 2 and is_matching(tiles) and any(True for _ in find_witnesses(host, tiles, max_r))


def is_irreducible_conflict(host, tiles, max_r=None) -> bool:
    tiles = list(tiles)
    if len(tiles) < 2 or not is_matching(tiles):
        return False
    return any(w.irreducible is not False for w in find_witnesses(host, tiles, max_r))


def is_minimal(host, tiles, max_r=None) -> bool:
    tiles = list(tiles)
    if not is_irreducible_conflict(host, tiles, max_r):
        return False
    for size in range(2, len(tiles)):
        for sub in combinations(tiles, size):
            if is_irreducible_conflict(host, sub, max_r):
                return False
    return True


@dataclass(frozen=True)
class Conflict:
    tiles: tuple[Tile, ...]
    witness: BadCopy
    system: str
    signature: tuple[int, int]
    minimal: bool
    hyper_type: str | None = None
    witnesses: tuple[BadCopy, ...] = field(default=(), repr=False)

    @property
    def size(self) -> int:
        return len(self.tiles)

    def to_dict(self, dump) -> dict:
        return {
            "tiles": [dump(t) for t in self.tiles],
            "witness_edges": list(self.witness.copy.edges),
            "witness": self.witness.to_dict(),
            "signature": list(self.signature),
            "system": self.system,
            "type": self.hyper_type or "n/a",
            "minimal": self.minimal,
        }


def classify(tiles, hyper: bool):
    j1 = sum(1 for t in tiles if t.kind == H1)
    j2 = len(tiles) - j1
    system = "C" if j2 == 0 else "D"
    hyper_type = None
    if hyper and system == "D":
        hyper_type = {2: "type1", 4: "type2"}.get(j2, "other")
    return system, (j1, j2), hyper_type


def partner_map(conflict: Conflict) -> dict[int, int | None]:
    """Index of each tile's same-colored partner within the conflict.

    Raises ValueError when a tile has two same-colored companions.
    """
    by_color = defaultdict(list)
    for idx, tile in enumerate(conflict.tiles):
        by_color[tile.color].append(idx)
    partners = {}
    for idx, tile in enumerate(conflict.tiles):
        mates = [j for j in by_color[tile.color] if j != idx]
        if len(mates) > 1:
            raise ValueError(f"tile {idx} has {len(mates)} partners")
        partners[idx] = mates[0] if mates else None
    return partners


def partner_law_violations(conflict: Conflict) -> list[str]:
    problems = []
    try:
        partners = partner_map(conflict)
    except ValueError as exc:
        return [str(exc)]
    for w in conflict.witnesses or (conflict.witness,):
        edges = set(w.copy.edges)
        for idx, tile in enumerate(conflict.tiles):
            used = len(edges.intersection(tile.colored_edges))
            if used == 0:
                problems.append(f"tile {idx} contributes no witness edge")
            elif used % 2 == 1 and partners[idx] is None:
                problems.append(f"tile {idx} contributes {used} edges and has no partner")
    return problems


class ConflictEngine:
    """Exhaustive conflict enumeration over a small tile system.

    ``max_n`` and ``widths`` are the small-instance guard: graph systems need
    ``n <= max_n`` and ``t in widths``; hypergraph systems ``n <= max_n`` and
    ``k in widths``.
    """

    def __init__(self, system, max_r: int | None = None, max_n: int = 4, widths=(2,)):
        cfg = system.config
        width = cfg.t if system.family == "graph" else cfg.k
        if cfg.n > max_n or width not in widths:
            raise GuardExceeded(
                f"conflict enumeration limited to n <= {max_n} and width in {tuple(widths)}"
            )
        self.system = system
        self.host = system.host
        self.hyper = system.family == "hyper"
        self.max_r = (cfg.t if max_r is None else max_r) if not self.hyper else None
        self.h1 = list(system.h1_tiles())
        self.h2 = list(system.h2_tiles())
        self.tiles = self.h1 + self.h2
        self.by_edge = defaultdict(list)
        for tile in self.tiles:
            for e in tile.colored_edges:
                self.by_edge[e].append(tile)
        self._conflicts = None

    def witness_copies(self):
        if self.hyper:
            yield from enumerate_target_copies(self.host)
        else:
            for r in range(1, self.max_r + 1):
                yield from enumerate_target_copies(self.host, r)

    def covers(self, copy):
        """Every set of pairwise disjoint tiles whose colored edges cover ``copy`` exactly."""
        edges = copy.edges
        in_copy = set(edges)
        chosen = []
        covered = set()
        occupied = set()

        def rec():
            for e in edges:
                if e not in covered:
                    break
            else:
                yield tuple(chosen)
                return
            for tile in self.by_edge[e]:
                if not occupied.isdisjoint(tile.vertex_set):
                    continue
                gained = in_copy.intersection(tile.colored_edges)
                chosen.append(tile)
                covered.update(gained)
                occupied.update(tile.vertex_set)
                yield from rec()
                occupied.difference_update(tile.vertex_set)
                covered.difference_update(gained)
                chosen.pop()

        yield from rec()

    def conflicts(self) -> list[Conflict]:
        """All inclusion-minimal irreducible conflicts, sorted by (size, tiles)."""
        if self._conflicts is not None:
            return self._conflicts
        witnesses = defaultdict(list)
        for copy in self.witness_copies():
            for cover in self.covers(copy):
                if len(cover) < 2:
                    continue
                color = {}
                for tile in cover:
                    for e in tile.colored_edges:
                        color[e] = tile.color
                colors = [color[e] for e in copy.edges]
                if not colors_bad(colors):
                    continue
                w = bad_copy(self.host, copy, colors)
                if w.irreducible is False:
                    continue
                witnesses[frozenset(cover)].append(w)
        result = []
        for tileset, ws in witnesses.items():
            minimal = not any(
                frozenset(sub) in witnesses
                for size in range(2, len(tileset))
                for sub in combinations(tileset, size)
            )
            if not minimal:
                continue
            tiles = tuple(sorted(tileset))
            system, signature, hyper_type = classify(tiles, self.hyper)
            ws = tuple(sorted(ws, key=lambda w: w.copy.key()))
            result.append(Conflict(tiles, ws[0], system, signature, True, hyper_type, ws))
        result.sort(key=lambda c: (c.size, c.tiles))
        self._conflicts = result
        return result

    def enumerate_C(self, j: int):
        return [c for c in self.conflicts() if c.system == "C" and c.size == j]

    def enumerate_D(self, j1: int, j2: int):
        return [c for c in self.conflicts() if c.system == "D" and c.signature == (j1, j2)]

    def signatures(self) -> Counter:
        return Counter((c.system, c.signature) for c in self.conflicts())

    # -- codegrees -------------------------------------------------------

    def codegree_stats(self) -> list[dict]:
        cfg = self.system.config
        d, eps, ell = cfg.d, cfg.epsilon, cfg.ell
        dp2 = cfg.n2
        rows = []
        by_size = defaultdict(list)
        by_sig = defaultdict(list)
        for c in self.conflicts():
            if c.system == "C":
                by_size[c.size].append(c)
            else:
                by_sig[c.signature].append(c)

        for j in range(3, ell + 1):
            group = by_size.get(j, [])
            for jp in range(1, j):
                count = Counter()
                for c in group:
                    count.update(combinations(c.tiles, jp))
                value, witness = _max_with_witness(count)
                if jp == 1:
                    bound, expr, name = ell * power(d, j - 1), f"ell d^{j - 1}", f"Delta(C^({j}))"
                else:
                    bound, expr, name = power(d, j - jp - eps), f"d^({j}-{jp}-eps)", f"Delta_{jp}(C^({j}))"
                rows.append(_row(name, value, bound, expr, witness, self.system.dump))

        for (j1, j2), group in sorted(by_sig.items()):
            slots = Counter()
            slot_pairs = Counter()
            h1_sets = Counter()
            for c in group:
                xs = sorted({t.colored_edges[0] for t in c.tiles if t.kind == H2})
                h1s = [t for t in c.tiles if t.kind == H1]
                slots.update(xs)
                slot_pairs.update(combinations(xs, 2))
                for x in xs:
                    for jp in range(0, j1 + 1):
                        for sub in combinations(h1s, jp):
                            h1_sets[(x, jp, sub)] += 1
            value, witness = _max_with_witness(slots)
            rows.append(_row(
                f"|D_x^({j1},{j2})|", value, power(d, j1 + eps**4) * dp2**j2,
                f"d^({j1}+eps^4) delta_P(H2)^{j2}", witness and {"edge_slot": witness},
            ))
            for jp in range(0, j1 + 1):
                sub_count = Counter({key: v for key, v in h1_sets.items() if key[1] == jp})
                value, witness = _max_with_witness(sub_count)
                rows.append(_row(
                    f"Delta_{jp},0(D_x^({j1},{j2}))", value, power(d, j1 - jp - eps) * dp2**j2,
                    f"d^({j1}-{jp}-eps) delta_P(H2)^{j2}",
                    witness and {"edge_slot": witness[0], "tiles": [self.system.dump(t) for t in witness[2]]},
                ))
            value, witness = _max_with_witness(slot_pairs)
            rows.append(_row(
                f"|D_x,y^({j1},{j2})|", value, power(d, j1 - eps) * dp2**j2,
                f"d^({j1}-eps) delta_P(H2)^{j2}", witness and {"edge_slots": list(witness)},
            ))
        return rows

    # -- claims ----------------------------------------------------------

    def check_two_tile(self) -> dict:
        checked = 0
        for a, b in combinations(self.tiles, 2):
            if not a.disjoint(b):
                continue
            checked += 1
            if is_conflict(self.host, (a, b)):
                return _claim(False, checked, [self.system.dump(a), self.system.dump(b)])
        return _claim(True, checked)

    def random_conflict(self, rng, max_tiles: int):
        """A random conflict with at most ``max_tiles`` tiles and its witness copy."""
        host = self.host
        n = host.n
        while True:
            if self.hyper:
                copies = self._target_list()
                copy = copies[rng.randrange(len(copies))]
            else:
                r = rng.randint(2, n)
                parts = rng.choice(((0, 1), (1, 0)))
                pair = tuple(sorted(rng.sample(host.part_vertices(parts[0]), 2)))
                others = tuple(sorted(rng.sample(host.part_vertices(parts[1]), r)))
                copy = make_copy(host, parts, (), pair, others)
            cover = self._random_cover(rng, copy, max_tiles)
            if cover is None or len(cover) < 2:
                continue
            color = {e: t.color for t in cover for e in t.colored_edges}
            if colors_bad([color[e] for e in copy.edges]):
                return cover, copy

    def _target_list(self):
        if not hasattr(self, "_targets"):
            self._targets = list(enumerate_target_copies(self.host))
        return self._targets

    def _random_cover(self, rng, copy, max_tiles):
        in_copy = set(copy.edges)
        order = list(copy.edges)
        rng.shuffle(order)
        chosen = []
        covered = set()
        occupied = set()
        for e in order:
            if e in covered:
                continue
            options = [t for t in self.by_edge[e] if occupied.isdisjoint(t.vertex_set)]
            if not options or len(chosen) == max_tiles:
                return None
            tile = options[rng.randrange(len(options))]
            chosen.append(tile)
            covered |= in_copy.intersection(tile.colored_edges)
            occupied |= tile.vertex_set
        return chosen

    def check_sub_conflicts(self, samples: int, seed: int = 0, max_tiles: int | None = None) -> dict:
        """Random conflicts each contain a minimal irreducible sub-conflict from the enumerated systems."""
        rng = random.Random(seed)
        if max_tiles is None:
            max_tiles = self.system.config.ell if self.hyper else 2 * self.system.config.t
        known = {frozenset(c.tiles) for c in self.conflicts()}
        r_limit = self.max_r
        for i in range(samples):
            cover, copy = self.random_conflict(rng, max_tiles)
            if not is_conflict(self.host, cover):
                return _claim(False, i, {"reason": "generator produced a non-conflict"})
            found = None
            for size in range(2, len(cover) + 1):
                for sub in combinations(cover, size):
                    if is_irreducible_conflict(self.host, sub, r_limit):
                        found = sub
                        break
                if found:
                    break
            if found is None or frozenset(found) not in known:
                return _claim(False, i, {"tiles": [self.system.dump(t) for t in cover]})
        return _claim(True, samples)

    def random_maximal_matching(self, rng):
        """Greedy random matching that avoids every enumerated conflict as a subset."""
        by_tile = defaultdict(list)
        for c in self.conflicts():
            fs = frozenset(c.tiles)
            for t in c.tiles:
                by_tile[t].append(fs)
        order = list(self.tiles)
        rng.shuffle(order)
        matching = set()
        occupied = set()
        for tile in order:
            if not occupied.isdisjoint(tile.vertex_set):
                continue
            if any(fs - {tile} <= matching for fs in by_tile[tile]):
                continue
            matching.add(tile)
            occupied |= tile.vertex_set
        return matching

    def check_conflict_free(self, samples: int, seed: int = 0) -> dict:
        """Maximal conflict-free matchings leave no fully colored bad target."""
        rng = random.Random(seed)
        targets = self._target_list()
        for i in range(samples):
            matching = self.random_maximal_matching(rng)
            color = {e: t.color for t in matching for e in t.colored_edges}
            for copy in targets:
                if all(e in color for e in copy.edges) and colors_bad([color[e] for e in copy.edges]):
                    return _claim(False, i, {
                        "matching": sorted(self.system.dump(t) for t in matching),
                        "copy": copy.to_dict(),
                    })
        return _claim(True, samples)

    def check_claims(self, samples: int = 10**4, maximal: int = 10**3, seed: int = 0) -> dict:
        return {
            "two_tile_conflicts_absent": self.check_two_tile(),
            "conflicts_contain_minimal": self.check_sub_conflicts(samples, seed),
            "conflict_free_matchings_clean": self.check_conflict_free(maximal, seed + 1),
        }


def engine_for(config, **guard) -> ConflictEngine:
    from .graph_tiles import GraphTileSystem, TileSystemConfig
    from .hyper_tiles import HyperTileSystem

    system = GraphTileSystem(config) if isinstance(config, TileSystemConfig) else HyperTileSystem(config)
    return ConflictEngine(system, **guard)


def enumerate_C(config, j: int, **guard):
    return engine_for(config, **guard).enumerate_C(j)


def enumerate_D(config, j1: int, j2: int, **guard):
    return engine_for(config, **guard).enumerate_D(j1, j2)


def internal_targets(host: HostInstance, tile: Tile) -> list:
    """Target copies lying entirely inside one tile's colored edges (expected: none)."""
    if host.is_graph:
        return _graph_copies_within(host, tile.colored_edges, host.t, host.t)
    return _hyper_copies_within(host, tile.colored_edges)


def _max_with_witness(counter: Counter):
    if not counter:
        return 0, None
    best = max(counter.values())
    return best, min((k for k, v in counter.items() if v == best), key=repr)


def _row(name, value, bound, expression, witness, dump=None):
    if witness is not None and dump is not None and isinstance(witness, tuple):
        witness = [dump(t) for t in witness]
    return {
        "quantity": name,
        "measured": value,
        "bound": bound,
        "expression": expression,
        "passed": value <= bound,
        "witness": witness,
    }


def _claim(passed: bool, checked: int, counterexample=None) -> dict:
    return {"passed": passed, "checked": checked, "counterexample": counterexample}
