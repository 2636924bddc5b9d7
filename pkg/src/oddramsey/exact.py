"""Exact odd Ramsey numbers on tiny hosts, and exhaustive checks of the lower-bound argument."""

from __future__ import annotations

import csv
import random
import time
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from .host import Coloring, HostInstance, Palette, enumerate_target_copies, write_coloring
from .odd import colors_bad, find_bad_target, hypergraph_lower_bound_witness, pigeonhole_witness
from .tiles import GuardExceeded

PRUNING_LEVELS = ("none", "color-canonical", "full")
YES, NO, BUDGET = "yes", "no", "budget-exceeded"


@dataclass(frozen=True)
class SearchConfig:
    """``full`` pruning adds a nondecreasing first row to the color-canonical form.

    That is sound because permuting the last part's vertices is a host
    automorphism that maps target copies to target copies, and sorting the
    first row before relabeling colors by first use keeps it sorted.
    """

    host: HostInstance
    q: int
    pruning: str = "color-canonical"
    budget: int = 10**7
    max_edges: int = 36

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be at least 1")
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.pruning not in PRUNING_LEVELS:
            raise ValueError(f"pruning must be one of {PRUNING_LEVELS}")


@dataclass
class SearchResult:
    status: str
    nodes: int
    seconds: float
    coloring: Coloring | None = None


def host_label(host: HostInstance) -> str:
    if host.is_graph:
        return f"K_{{{host.n},{host.n}}}"
    return f"K^({host.k})_{{{','.join([str(host.n)] * host.k)}}}"


def target_label(host: HostInstance) -> str:
    if host.is_graph:
        return f"K_{{2,{host.t}}}"
    return f"K^({host.k})_{{{','.join(['1'] * (host.k - 2) + ['2', '2'])}}}"


def _copies_by_last_edge(host: HostInstance):
    by_last = [[] for _ in range(host.num_edges)]
    for copy in enumerate_target_copies(host):
        by_last[max(copy.edges)].append(copy.edges)
    return by_last


def exists_valid_coloring(config: SearchConfig) -> SearchResult:
    """Backtracking in edge order; a copy is checked as soon as its last edge is colored."""
    host, q = config.host, config.q
    m = host.num_edges
    if m > config.max_edges:
        raise GuardExceeded(f"{m} edges exceeds the exhaustive limit {config.max_edges}")
    start = time.perf_counter()
    by_last = _copies_by_last_edge(host)
    colors = [-1] * m
    canonical = config.pruning != "none"
    row = host.n if config.pruning == "full" else 0
    nodes = 0

    def rec(e: int, used: int):
        nonlocal nodes
        if e == m:
            return True
        top = min(q, used + 1) if canonical else q
        low = colors[e - 1] if 0 < e < row else 0
        for c in range(low, top):
            nodes += 1
            if nodes > config.budget:
                raise _Budget
            colors[e] = c
            if not any(colors_bad([colors[f] for f in copy]) for copy in by_last[e]):
                if rec(e + 1, max(used, c + 1)):
                    return True
        colors[e] = -1
        return False

    try:
        found = rec(0, 0)
    except _Budget:
        return SearchResult(BUDGET, nodes, time.perf_counter() - start)
    seconds = time.perf_counter() - start
    if not found:
        return SearchResult(NO, nodes, seconds)
    coloring = Coloring(host, Palette(q, 0), list(colors))
    if find_bad_target(coloring) is not None:
        raise AssertionError("search returned a coloring with a bad target")
    return SearchResult(YES, nodes, seconds, coloring)


class _Budget(Exception):
    pass


def brute_force_exists(host: HostInstance, q: int, limit: int = 10**6) -> Coloring | None:
    """Unpruned oracle: try every coloring with colors ``0..q-1``."""
    m = host.num_edges
    if q**m > limit:
        raise GuardExceeded(f"{q}^{m} colorings exceeds {limit}")
    copies = [c.edges for c in enumerate_target_copies(host)]
    for colors in product(range(q), repeat=m):
        if not any(colors_bad([colors[f] for f in copy]) for copy in copies):
            return Coloring(host, Palette(q, 0), list(colors))
    return None


@dataclass
class OddRamseyResult:
    host: HostInstance
    q_max: int
    value: int | None
    lower: int
    upper: int | None
    status: str  # exact, above, unknown
    searches: list = field(default_factory=list)

    def describe(self) -> str:
        if self.status == "exact":
            return str(self.value)
        if self.status == "above":
            return f"> {self.q_max}"
        upper = "?" if self.upper is None else str(self.upper)
        return f"[{self.lower}, {upper}]"


def r_odd_exact(host: HostInstance, q_max: int, pruning: str = "color-canonical",
                budget: int = 10**7) -> OddRamseyResult:
    searches = []
    lower = 1
    tainted = False
    for q in range(1, q_max + 1):
        res = exists_valid_coloring(SearchConfig(host, q, pruning, budget))
        searches.append((q, res))
        if res.status == YES:
            if tainted:
                return OddRamseyResult(host, q_max, None, lower, q, "unknown", searches)
            return OddRamseyResult(host, q_max, q, q, q, "exact", searches)
        if res.status == BUDGET:
            tainted = True
        elif not tainted:
            lower = q + 1
    status = "unknown" if tainted else "above"
    return OddRamseyResult(host, q_max, None, lower, None, status, searches)


def write_table(result: OddRamseyResult, out_dir: str | Path, stem: str = "exact") -> Path:
    """CSV of every sub-search, with yes certificates written as coloring files next to it."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["host", "target", "q", "result", "nodes", "time", "certificate-file"])
        for q, res in result.searches:
            cert = ""
            if res.coloring is not None:
                cert = f"{stem}-q{q}.coloring"
                write_coloring(res.coloring, str(out / cert))
            writer.writerow([host_label(result.host), target_label(result.host), q, res.status,
                             res.nodes, f"{res.seconds:.6f}", cert])
    return path


# -- lower bound -----------------------------------------------------------


@dataclass
class LowerBoundResult:
    n: int
    t: int
    colors: int
    mode: str
    checked: int
    passed: bool
    counterexample: list | None = None
    cross_checked: int = 0

    def to_dict(self) -> dict:
        return {
            "n": self.n, "t": self.t, "colors": self.colors, "mode": self.mode,
            "checked": self.checked, "passed": self.passed,
            "counterexample": self.counterexample, "cross_checked": self.cross_checked,
        }


def restricted_growth(length: int, q: int):
    """Colorings with colors in first-use order, using at most ``q`` colors."""
    word = [0] * length

    def rec(i, used):
        if i == length:
            yield tuple(word)
            return
        for c in range(min(q, used + 1)):
            word[i] = c
            yield from rec(i + 1, max(used, c + 1))

    if length:
        yield from rec(0, 0)


def _lower_bound_holds(host: HostInstance, colors, t: int) -> bool:
    coloring = Coloring(host, Palette(max(colors) + 1, 0), list(colors))
    witness = pigeonhole_witness(coloring, t)
    return witness is not None and witness.profile.all_even and find_bad_target(coloring) is not None


def lower_bound_exhaust(n: int, t: int, mode: str = "exhaustive", samples: int = 10**6,
                        seed: int = 0, budget: int = 10**7, cross_check: int = 2000) -> LowerBoundResult:
    """Every coloring of K_{n,n} with at most floor(n/t) colors has a pigeonhole witness and a bad K_{2,t}."""
    host = HostInstance.graph(n, t)
    q = n // t
    if q < 1:
        raise ValueError("need n >= t")
    m = host.num_edges
    if mode == "exhaustive":
        if q ** (m - 1) > budget:
            raise GuardExceeded(f"about {q}^{m - 1} canonical colorings exceeds budget {budget}")
        checked = 0
        for colors in restricted_growth(m, q):
            checked += 1
            if not _lower_bound_holds(host, colors, t):
                return LowerBoundResult(n, t, q, mode, checked, False, list(colors))
        return LowerBoundResult(n, t, q, mode, checked, True)
    if mode != "sampling":
        raise ValueError("mode must be 'exhaustive' or 'sampling'")
    gen = np.random.default_rng(seed)
    checked = 0
    batch = 50_000
    while checked < samples:
        size = min(batch, samples - checked)
        mats = gen.integers(0, q, size=(size, n, n), dtype=np.int8)
        ok = has_pigeonhole_witness(mats, t)
        if not ok.all():
            bad = int(np.flatnonzero(~ok)[0])
            return LowerBoundResult(n, t, q, mode, checked + bad + 1, False, mats[bad].ravel().tolist())
        checked += size
    # the vectorized test is cross-checked against the scalar witness search
    rng = random.Random(seed)
    for _ in range(cross_check):
        colors = [rng.randrange(q) for _ in range(m)]
        if not _lower_bound_holds(host, colors, t):
            return LowerBoundResult(n, t, q, mode, checked, False, colors, cross_check)
    return LowerBoundResult(n, t, q, mode, checked, True, None, cross_check)


def has_pigeonhole_witness(mats: np.ndarray, t: int) -> np.ndarray:
    """For a batch of n x n color matrices: does some row pair or column pair agree in t places?"""
    n = mats.shape[1]
    found = np.zeros(mats.shape[0], dtype=bool)
    for u in range(n):
        for v in range(u + 1, n):
            found |= (mats[:, u, :] == mats[:, v, :]).sum(axis=1) >= t
            found |= (mats[:, :, u] == mats[:, :, v]).sum(axis=1) >= t
    return found


def hypergraph_lower_bound_exhaust(n: int, k: int, budget: int = 10**6) -> LowerBoundResult:
    """Same check for the hypergraph host with floor(n/2) colors."""
    host = HostInstance.hyper(n, k)
    q = n // 2
    m = host.num_edges
    if q ** (m - 1) > budget:
        raise GuardExceeded(f"about {q}^{m - 1} canonical colorings exceeds budget {budget}")
    checked = 0
    for colors in restricted_growth(m, q):
        checked += 1
        coloring = Coloring(host, Palette(q, 0), list(colors))
        if hypergraph_lower_bound_witness(coloring) is None or find_bad_target(coloring) is None:
            return LowerBoundResult(n, 2, q, "exhaustive", checked, False, list(colors))
    return LowerBoundResult(n, 2, q, "exhaustive", checked, True)
