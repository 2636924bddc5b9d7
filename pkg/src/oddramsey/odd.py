"""Odd color classes: badness, irreducible decomposition, and the pigeonhole witness.

A bad K_{2,r} is read column by column: column ``c`` is the pair of colors on
the two edges at ``others[c]``.  Treat each column as an edge between its two
colors in a multigraph on the palette (a monochromatic column is a loop).  A
set of columns is bad exactly when every color has even degree, so the
irreducible bad sets are the cycles, and a proper bad subset always leaves a
bad complement.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product

from .host import UNCOLORED, Coloring, HostInstance, TargetCopy, enumerate_target_copies, make_copy


class UncoloredEdge(ValueError):
    pass


@dataclass(frozen=True)
class ClassProfile:
    counts: tuple[tuple[int, int], ...]  # sorted (color, multiplicity)
    total: int

    @classmethod
    def of(cls, colors) -> ClassProfile:
        counts = Counter(colors)
        return cls(tuple(sorted(counts.items())), sum(counts.values()))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def all_even(self) -> bool:
        return all(m % 2 == 0 for _, m in self.counts)


@dataclass(frozen=True)
class BadCopy:
    copy: TargetCopy
    profile: ClassProfile
    irreducible: bool | None  # None for hypergraph targets

    def to_dict(self) -> dict:
        d = self.copy.to_dict()
        d["profile"] = {str(c): m for c, m in self.profile.counts}
        d["irreducible"] = self.irreducible
        return d


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[BadCopy, ...]


def copy_colors(copy: TargetCopy, coloring: Coloring) -> list[int]:
    colors = [coloring.colors[e] for e in copy.edges]
    if UNCOLORED in colors:
        raise UncoloredEdge(f"copy {copy.key()} has an uncolored edge")
    return colors


def class_profile(copy: TargetCopy, coloring: Coloring) -> ClassProfile:
    return ClassProfile.of(copy_colors(copy, coloring))


def is_bad(copy: TargetCopy, coloring: Coloring) -> bool:
    return class_profile(copy, coloring).all_even


def colors_bad(colors) -> bool:
    """No odd class among ``colors``."""
    odd = set()
    for c in colors:
        odd ^= {c}
    return not odd


def _column_masks(colors) -> list[int]:
    index = {}
    masks = []
    for c in range(0, len(colors), 2):
        a, b = colors[c], colors[c + 1]
        ia = index.setdefault(a, len(index))
        ib = index.setdefault(b, len(index))
        masks.append((1 << ia) ^ (1 << ib))
    return masks


def _bad_subset(masks, subset) -> bool:
    acc = 0
    for i in subset:
        acc ^= masks[i]
    return acc == 0


def _irreducible_subset(masks, subset) -> bool:
    if not _bad_subset(masks, subset):
        return False
    for size in range(1, len(subset)):
        for sub in combinations(subset, size):
            if _bad_subset(masks, sub):
                return False
    return True


def irreducible_blocks(colors) -> tuple[tuple[int, ...], ...] | None:
    """Lexicographically least partition of the columns into irreducible bad blocks.

    ``colors`` is the column-ordered color list of a bad K_{2,r}.  Returns
    None when the whole copy is irreducible.
    """
    masks = _column_masks(colors)
    r = len(masks)
    if not _bad_subset(masks, range(r)):
        raise ValueError("copy is not bad")

    def search(remaining):
        if not remaining:
            return []
        first, rest = remaining[0], remaining[1:]
        # blocks containing ``first``, in lexicographic order of the block tuple
        candidates = []
        for size in range(0, len(rest) + 1):
            for extra in combinations(rest, size):
                candidates.append((first,) + extra)
        candidates.sort()
        for block in candidates:
            if _irreducible_subset(masks, block):
                left = tuple(i for i in rest if i not in block)
                tail = search(left)
                if tail is not None:
                    return [block] + tail
        return None

    blocks = search(tuple(range(r)))
    if len(blocks) == 1:
        return None
    return tuple(blocks)


def _sub_copy(host: HostInstance, copy: TargetCopy, columns) -> TargetCopy:
    return make_copy(host, copy.parts, copy.prefix, copy.pair, tuple(copy.others[c] for c in columns))


def decompose_irreducible(host: HostInstance, copy: TargetCopy, coloring: Coloring) -> Decomposition | None:
    """None means irreducible; otherwise the canonical decomposition, parts sorted by size."""
    if not host.is_graph:
        raise ValueError("reducibility is only defined for K_{2,r} targets")
    colors = copy_colors(copy, coloring)
    blocks = irreducible_blocks(colors)
    if blocks is None:
        return None
    parts = []
    for block in sorted(blocks, key=lambda b: (len(b), b)):
        sub = _sub_copy(host, copy, block)
        parts.append(BadCopy(sub, class_profile(sub, coloring), True))
    return Decomposition(tuple(parts))


def bad_copy(host: HostInstance, copy: TargetCopy, colors) -> BadCopy:
    irreducible = irreducible_blocks(colors) is None if host.is_graph else None
    return BadCopy(copy, ClassProfile.of(colors), irreducible)


def find_bad_target(coloring: Coloring) -> BadCopy | None:
    """First bad copy of the target (K_{2,t} or K_{1..1,2,2}), or None."""
    if not coloring.total:
        raise UncoloredEdge("find_bad_target needs a total coloring")
    host = coloring.host
    col = coloring.colors
    for copy in enumerate_target_copies(host):
        colors = [col[e] for e in copy.edges]
        if colors_bad(colors):
            return bad_copy(host, copy, colors)
    return None


def _pigeonhole_matrix(rows, t):
    """Rows ``u, v`` and ``t`` columns with ``M[u][x] == M[v][x]`` for each x.

    ``rows`` maps each vertex of the pair side to its row of colors toward
    the other side.  Returns ``(u, v, columns)`` by position or None.
    """
    for u, v in combinations(range(len(rows)), 2):
        ru, rv = rows[u], rows[v]
        hits = [x for x in range(len(ru)) if ru[x] == rv[x]]
        if len(hits) >= t:
            return u, v, hits[:t]
    return None


def _matrix(coloring: Coloring, prefix_base: int = 0):
    n = coloring.host.n
    col = coloring.colors
    return [col[prefix_base + i * n: prefix_base + (i + 1) * n] for i in range(n)]


def pigeonhole_witness(coloring: Coloring, t: int) -> BadCopy | None:
    """A K_{2,t} whose t columns are each monochromatic, pair side in X first."""
    host = coloring.host
    if not host.is_graph:
        raise ValueError("pigeonhole_witness needs a bipartite host")
    if not coloring.total:
        raise UncoloredEdge("pigeonhole_witness needs a total coloring")
    n = host.n
    m = _matrix(coloring)
    transposed = [list(col) for col in zip(*m)]
    for parts, rows in (((0, 1), m), ((1, 0), transposed)):
        hit = _pigeonhole_matrix(rows, t)
        if hit is not None:
            u, v, cols = hit
            p, q = parts
            copy = make_copy(host, parts, (), (p * n + u, p * n + v), tuple(q * n + x for x in cols))
            return bad_copy(host, copy, [coloring.colors[e] for e in copy.edges])
    return None


def hypergraph_lower_bound_witness(coloring: Coloring, k: int | None = None) -> BadCopy | None:
    """Pigeonhole with t=2 on the link of each prefix in the first k-2 parts."""
    host = coloring.host
    if host.is_graph:
        raise ValueError("hypergraph_lower_bound_witness needs a hypergraph host")
    if k is not None and k != host.k:
        raise ValueError(f"k={k} does not match host k={host.k}")
    if not coloring.total:
        raise UncoloredEdge("needs a total coloring")
    n, k = host.n, host.k
    link_size = n * n
    for index, local in enumerate(product(range(n), repeat=k - 2)):
        m = _matrix(coloring, index * link_size)
        transposed = [list(col) for col in zip(*m)]
        prefix = tuple(j * n + i for j, i in enumerate(local))
        for flip, rows in ((False, m), (True, transposed)):
            hit = _pigeonhole_matrix(rows, 2)
            if hit is None:
                continue
            u, v, cols = hit
            a, b = k - 2, k - 1
            if flip:
                a, b = b, a
            pair = (a * n + u, a * n + v)
            others = tuple(b * n + x for x in cols)
            # store hypergraph copies with the lower part first
            if a > b:
                pair, others = others, pair
            copy = make_copy(host, (k - 2, k - 1), prefix, pair, others)
            return bad_copy(host, copy, [coloring.colors[e] for e in copy.edges])
    return None
