"""Host graphs and hypergraphs, target copies, colorings and the coloring file format.

Vertices are plain integers: part ``j`` occupies ``[j*n, (j+1)*n)``.  The
bipartite host K_{n,n} is treated as the two-part case, so an edge is always a
tuple with one vertex per part, sorted by part, and its id is the mixed-radix
number of its local indices (most significant part first).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, TextIO

UNCOLORED = -1

GRAPH = "bg"
HYPER = "kh"


@dataclass(frozen=True)
class HostInstance:
    """K_{n,n} (kind ``bg``, target K_{2,t}) or K^(k)_{n..n} (kind ``kh``)."""

    kind: str
    n: int
    t: int = 2
    k: int = 2

    def __post_init__(self):
        if self.kind not in (GRAPH, HYPER):
            raise ValueError(f"unknown host kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.kind == GRAPH:
            if self.t < 1:
                raise ValueError("t must be at least 1")
            if self.k != 2:
                raise ValueError("bipartite host has k=2")
        elif self.k < 2:
            raise ValueError("k must be at least 2")

    @classmethod
    def graph(cls, n: int, t: int = 2) -> HostInstance:
        return cls(GRAPH, n, t, 2)

    @classmethod
    def hyper(cls, n: int, k: int) -> HostInstance:
        return cls(HYPER, n, 2, k)

    @property
    def is_graph(self) -> bool:
        return self.kind == GRAPH

    @property
    def parts(self) -> int:
        return 2 if self.is_graph else self.k

    @property
    def num_edges(self) -> int:
        return self.n ** self.parts

    def part_of(self, v: int) -> int:
        return v // self.n

    def part_vertices(self, j: int) -> range:
        return range(j * self.n, (j + 1) * self.n)

    def edge_id(self, vertices: Iterable[int]) -> int:
        n = self.n
        eid = 0
        for j, v in enumerate(vertices):
            if not j * n <= v < (j + 1) * n:
                raise ValueError(f"vertex {v} is not in part {j}")
            eid = eid * n + (v - j * n)
        return eid

    def edge_vertices(self, eid: int) -> tuple[int, ...]:
        return self._edge_table[eid]

    @cached_property
    def _edge_table(self) -> tuple[tuple[int, ...], ...]:
        n = self.n
        return tuple(
            tuple(j * n + i for j, i in enumerate(local))
            for local in product(range(n), repeat=self.parts)
        )

    def edge_between(self, *vertices: int) -> int:
        """Edge id for vertices given in any order (one per part)."""
        return self.edge_id(sorted(vertices))

    def target_r(self) -> int:
        """Width of the target copy checked by the verifier."""
        return self.t if self.is_graph else 2

    def manifest(self) -> dict:
        return {"kind": self.kind, "n": self.n, "t": self.t, "k": self.k}


@dataclass(frozen=True)
class HostEdge:
    id: int
    vertices: tuple[int, ...]


def enumerate_edges(host: HostInstance) -> Iterator[HostEdge]:
    for eid, verts in enumerate(host._edge_table):
        yield HostEdge(eid, verts)


@dataclass(frozen=True, slots=True)
class TargetCopy:
    """A copy of K_{2,r} (graph) or K_{1..1,2,2} (hypergraph).

    ``parts`` is ``(part of pair, part of others)``.  For the graph case this
    is the orientation tag.  ``edges`` lists the copy's edges column by
    column: ``edges[2*c + a]`` joins ``pair[a]`` with ``others[c]`` (plus the
    prefix in the hypergraph case).
    """

    parts: tuple[int, int]
    prefix: tuple[int, ...]
    pair: tuple[int, int]
    others: tuple[int, ...]
    edges: tuple[int, ...]

    @property
    def r(self) -> int:
        return len(self.others)

    def key(self):
        return (self.parts, self.prefix, self.pair, self.others)

    def column(self, c: int) -> tuple[int, int]:
        return self.edges[2 * c], self.edges[2 * c + 1]

    def to_dict(self) -> dict:
        return {
            "parts": list(self.parts),
            "prefix": list(self.prefix),
            "pair": list(self.pair),
            "others": list(self.others),
            "edges": list(self.edges),
        }


def make_copy(host: HostInstance, parts, prefix, pair, others) -> TargetCopy:
    n = host.n
    p, q = parts
    weights = [n ** (host.parts - 1 - j) for j in range(host.parts)]
    base = 0
    prefix_parts = [j for j in range(host.parts) if j not in parts]
    for j, v in zip(prefix_parts, prefix):
        base += (v - j * n) * weights[j]
    wp, wq = weights[p], weights[q]
    edges = []
    for b in others:
        for a in pair:
            edges.append(base + (a - p * n) * wp + (b - q * n) * wq)
    return TargetCopy(tuple(parts), tuple(prefix), tuple(pair), tuple(others), tuple(edges))


def _copy_shapes(host: HostInstance, r: int):
    """Part layouts in enumeration order."""
    if host.is_graph:
        if not 1 <= r <= host.t:
            raise ValueError(f"r={r} outside 1..{host.t}")
        return [(0, 1), (1, 0)]
    return list(combinations(range(host.k), 2))


def enumerate_target_copies(host: HostInstance, r: int | None = None) -> Iterator[TargetCopy]:
    """Every copy of the target, in lexicographic order of ``TargetCopy.key``.

    For graphs ``r`` selects K_{2,r}; the hypergraph target ignores it.
    """
    if r is None:
        r = host.target_r()
    shapes = _copy_shapes(host, r)
    if not host.is_graph:
        r = 2
    for p, q in shapes:
        prefix_parts = [j for j in range(host.parts) if j not in (p, q)]
        for prefix in product(*(host.part_vertices(j) for j in prefix_parts)):
            for pair in combinations(host.part_vertices(p), 2):
                for others in combinations(host.part_vertices(q), r):
                    yield make_copy(host, (p, q), prefix, pair, others)


def count_target_copies(host: HostInstance, r: int | None = None) -> int:
    n = host.n
    if host.is_graph:
        r = host.t if r is None else r
        return 2 * math.comb(n, 2) * math.comb(n, r)
    k = host.k
    return math.comb(k, 2) * n ** (k - 2) * math.comb(n, 2) ** 2


def copies_through_edges(host: HostInstance, edge_ids: Iterable[int], r: int | None = None) -> list[TargetCopy]:
    """Copies containing at least one of ``edge_ids``, in enumeration order."""
    if r is None:
        r = host.target_r()
    shapes = _copy_shapes(host, r)
    if not host.is_graph:
        r = 2
    seen = {}
    for eid in edge_ids:
        verts = host.edge_vertices(eid)
        for p, q in shapes:
            prefix = tuple(v for j, v in enumerate(verts) if j != p and j != q)
            a, b = verts[p], verts[q]
            q_rest = [v for v in host.part_vertices(q) if v != b]
            for a2 in host.part_vertices(p):
                if a2 == a:
                    continue
                pair = (a, a2) if a < a2 else (a2, a)
                for rest in combinations(q_rest, r - 1):
                    others = tuple(sorted(rest + (b,)))
                    key = ((p, q), prefix, pair, others)
                    if key not in seen:
                        seen[key] = (p, q), prefix, pair, others
    return [make_copy(host, *seen[key]) for key in sorted(seen)]


@dataclass(frozen=True)
class Palette:
    """Colors ``0..n1-1`` form N1, ``n1..n1+n2-1`` form N2."""

    n1: int
    n2: int
    delta: float | None = None

    def __post_init__(self):
        if self.n1 < 0 or self.n2 < 0:
            raise ValueError("palette sizes must be non-negative")

    @property
    def size(self) -> int:
        return self.n1 + self.n2

    def is_main(self, color: int) -> bool:
        return 0 <= color < self.n1

    def is_reserve(self, color: int) -> bool:
        return self.n1 <= color < self.n1 + self.n2

    @property
    def main(self) -> range:
        return range(self.n1)

    @property
    def reserve(self) -> range:
        return range(self.n1, self.n1 + self.n2)

    @classmethod
    def default(cls, host: HostInstance, delta: float) -> Palette:
        width = host.t if host.is_graph else 2
        return cls(-(-host.n // width), reserve_size(host.n, delta), delta)


def reserve_size(n: int, delta: float) -> int:
    """ceil(n^delta); exact for integer results, float64 otherwise."""
    value = float(n) ** float(delta)
    c = math.ceil(value)
    # float64 noise just above an integer would bump the ceiling by one
    if c - 1 > 0 and math.isclose(value, c - 1, rel_tol=0, abs_tol=1e-9):
        return c - 1
    return c


class ColoringFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class PaletteMismatch(ColoringFormatError):
    pass


@dataclass
class Coloring:
    host: HostInstance
    palette: Palette
    colors: list[int] = field(default=None)

    def __post_init__(self):
        if self.colors is None:
            self.colors = [UNCOLORED] * self.host.num_edges
        if len(self.colors) != self.host.num_edges:
            raise ValueError("assignment length does not match edge count")
        size = self.palette.size
        for c in self.colors:
            if c != UNCOLORED and not 0 <= c < size:
                raise PaletteMismatch(f"color {c} outside palette of size {size}")

    @property
    def total(self) -> bool:
        return UNCOLORED not in self.colors

    def colors_used(self) -> set[int]:
        return {c for c in self.colors if c != UNCOLORED}

    def __getitem__(self, eid: int) -> int:
        return self.colors[eid]

    def __setitem__(self, eid: int, color: int):
        if color != UNCOLORED and not 0 <= color < self.palette.size:
            raise PaletteMismatch(f"color {color} outside palette")
        self.colors[eid] = color

    def copy(self) -> Coloring:
        return Coloring(self.host, self.palette, list(self.colors))


def write_coloring(coloring: Coloring, dest: TextIO | str) -> None:
    h, p = coloring.host, coloring.palette
    lines = [f"odd-ramsey v1 kind={h.kind} n={h.n} t={h.t} k={h.k} n1={p.n1} n2={p.n2}"]
    for eid, c in enumerate(coloring.colors):
        lines.append(f"{eid} {'-' if c == UNCOLORED else c}")
    text = "\n".join(lines) + "\n"
    if isinstance(dest, str):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        dest.write(text)


def coloring_to_text(coloring: Coloring) -> str:
    buf = io.StringIO()
    write_coloring(coloring, buf)
    return buf.getvalue()


_HEADER_KEYS = ("kind", "n", "t", "k", "n1", "n2")


def read_coloring(src: TextIO | str, require_total: bool = False) -> Coloring:
    """Parse a coloring file.  Every edge needs its own line; ``-`` is uncolored.

    An optional ``total=true`` header field (or ``require_total``) also
    rejects uncolored entries.
    """
    if isinstance(src, str):
        with open(src, encoding="utf-8", newline="") as fh:
            text = fh.read()
    else:
        text = src.read()
    if not text.endswith("\n"):
        raise ColoringFormatError("missing trailing newline", text.count("\n") + 1)
    lines = text[:-1].split("\n")
    fields = lines[0].split()
    if fields[:2] != ["odd-ramsey", "v1"]:
        raise ColoringFormatError("bad header, expected 'odd-ramsey v1'", 1)
    header = {}
    for item in fields[2:]:
        key, sep, value = item.partition("=")
        if not sep or key in header:
            raise ColoringFormatError(f"bad header field {item!r}", 1)
        header[key] = value
    unknown = set(header) - set(_HEADER_KEYS) - {"total"}
    missing = [key for key in _HEADER_KEYS if key not in header]
    if unknown or missing:
        raise ColoringFormatError(f"header fields unknown {sorted(unknown)} missing {missing}", 1)
    try:
        nums = {key: int(header[key]) for key in _HEADER_KEYS[1:]}
        host = HostInstance(header["kind"], nums["n"], nums["t"], nums["k"])
        palette = Palette(nums["n1"], nums["n2"])
    except ValueError as exc:
        raise ColoringFormatError(f"bad header: {exc}", 1) from None
    if header.get("total", "false") not in ("true", "false"):
        raise ColoringFormatError("total must be true or false", 1)
    require_total = require_total or header.get("total") == "true"

    colors = [UNCOLORED] * host.num_edges
    seen = [False] * host.num_edges
    last = -1
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != 2:
            raise ColoringFormatError(f"expected '<edge-id> <color|->', got {line!r}", lineno)
        try:
            eid = int(parts[0])
        except ValueError:
            raise ColoringFormatError(f"bad edge id {parts[0]!r}", lineno) from None
        if not 0 <= eid < host.num_edges:
            raise ColoringFormatError(f"edge id {eid} out of range", lineno)
        if seen[eid]:
            raise ColoringFormatError(f"duplicate edge line for {eid}", lineno)
        if eid < last:
            raise ColoringFormatError(f"edge ids not ascending at {eid}", lineno)
        seen[eid] = True
        last = eid
        if parts[1] == "-":
            if require_total:
                raise ColoringFormatError(f"edge {eid} uncolored in a total coloring", lineno)
            continue
        try:
            color = int(parts[1])
        except ValueError:
            raise ColoringFormatError(f"bad color {parts[1]!r}", lineno) from None
        if not 0 <= color < palette.size:
            raise PaletteMismatch(f"color {color} outside palette of size {palette.size}", lineno)
        colors[eid] = color
    if not all(seen):
        first = seen.index(False)
        raise ColoringFormatError(f"missing line for edge {first}", len(lines) + 1)
    return Coloring(host, palette, colors)
