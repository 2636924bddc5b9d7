"""Tile objects shared by the graph and hypergraph tile systems, and condition reports."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

H1 = "H1"
H2 = "H2"


class GuardExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured size guard."""


@dataclass(frozen=True, eq=False)
class Tile:
    """One hyperedge of H1 or H2.

    ``key`` identifies the tile (template or edge plus color); equality and
    hashing use it alone.  ``vertex_set`` is the frozenset used for
    disjointness tests, ``vertices`` its sorted form.
    """

    kind: str
    color: int
    key: tuple
    vertices: tuple
    colored_edges: tuple[int, ...]
    template: object = None
    vertex_set: frozenset = field(default=None, repr=False)

    def __post_init__(self):
        if self.vertex_set is None:
            object.__setattr__(self, "vertex_set", frozenset(self.vertices))

    def __eq__(self, other):
        return isinstance(other, Tile) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __lt__(self, other):
        return self.key < other.key

    @property
    def size(self) -> int:
        return len(self.vertices)

    def disjoint(self, other: Tile) -> bool:
        return self.vertex_set.isdisjoint(other.vertex_set)


def guard_check(count: int, guard: int, what: str) -> None:
    if count > guard:
        raise GuardExceeded(f"{what}: {count} exceeds guard {guard}")


@dataclass
class BoundCheck:
    name: str
    measured: float
    relation: str  # ">=", "<=", "=="
    bound: float
    expression: str
    note: str = ""

    @property
    def passed(self) -> bool:
        if self.relation == ">=":
            return self.measured >= self.bound
        if self.relation == "<=":
            return self.measured <= self.bound
        return self.measured == self.bound

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": _num(self.measured),
            "relation": self.relation,
            "bound": _num(self.bound),
            "expression": self.expression,
            "passed": self.passed,
            "note": self.note,
        }


def _num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    return x


@dataclass
class ConditionReport:
    params: dict
    checks: list[BoundCheck]

    def get(self, name: str) -> BoundCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"params": self.params, "checks": [c.to_dict() for c in self.checks], "informational": True}


def power(d: Fraction, exponent) -> float:
    """d**exponent as a float, computed through logs so large d stays finite."""
    return math.exp((math.log(d.numerator) - math.log(d.denominator)) * float(exponent))


def comb(n: int, k: int) -> int:
    """Binomial coefficient that is 0 for n < 0 instead of raising."""
    return math.comb(n, k) if n >= 0 and k >= 0 else 0


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def degree_tables(tiles, with_pairs=True):
    """Vertex degrees and (optionally) pair codegrees over ``tiles``."""
    degree = Counter()
    pairs = Counter()
    for tile in tiles:
        verts = tile.vertices
        degree.update(verts)
        if with_pairs:
            pairs.update(combinations(verts, 2))
    return degree, pairs
