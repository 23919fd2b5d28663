"""Kauffman bracket of virtual diagrams by state sum.

Conventions: the A-smoothing of a crossing joins slots (0,1) and (2,3), the
B-smoothing joins (0,3) and (1,2); every closed loop is worth
d = -A^2 - A^-2 and the empty diagram is worth 1. Virtual crossings join
opposite slots and never split or merge loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .diagram import VirtualDiagram
from .kernel import state_histogram
from .laurent import A as A_POLY
from .laurent import LOOP, LaurentPoly, RootContext
from .network import Network, check_cap, evaluate

__all__ = [
    "ClassicalPD",
    "StateSum",
    "classical_pd",
    "state_sum",
    "bracket",
    "bracket_at",
    "count_loops",
    "diagram_network",
    "bracket_by_contraction",
]


@dataclass(frozen=True)
class ClassicalPD:
    """Classical crossings over integer edges after collapsing virtual crossings.

    ``edge_arcs[e]`` lists the arc labels merged into edge ``e``;
    ``free_loops`` counts closed curves that meet no classical crossing.
    """

    signs: tuple[int, ...]
    crossings: tuple[tuple[int, int, int, int], ...]
    n_edges: int
    free_loops: int
    edge_arcs: tuple[tuple[str, ...], ...]
    crossing_ids: tuple[int, ...]


def classical_pd(d: VirtualDiagram) -> ClassicalPD:
    parent: dict[str, str] = {a: a for a in d.arcs()}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in d.crossings:
        if x.kind == "v":
            for s in (0, 1):
                u, w = find(x.slots[s]), find(x.slots[s + 2])
                if u != w:
                    parent[w] = u
    edge_of: dict[str, int] = {}
    members: list[list[str]] = []
    rows = []
    signs = []
    ids = []
    for ci, x in enumerate(d.crossings):
        if x.kind == "v":
            continue
        row = []
        for a in x.slots:
            r = find(a)
            if r not in edge_of:
                edge_of[r] = len(members)
                members.append([])
            row.append(edge_of[r])
        rows.append(tuple(row))
        signs.append(x.sign)
        ids.append(ci)
    for a in d.arcs():
        r = find(a)
        if r in edge_of:
            members[edge_of[r]].append(a)
    free_roots = {find(a) for a in d.arcs()} - set(edge_of)
    return ClassicalPD(
        tuple(signs), tuple(rows), len(members), len(free_roots),
        tuple(tuple(m) for m in members), tuple(ids),
    )


@dataclass(frozen=True)
class StateSum:
    """Histogram of the 2^c states: ``counts[(sigma, loops)]`` states.

    ``sigma`` is (#A - #B) smoothings and ``loops`` includes free loops.
    """

    c: int
    counts: dict[tuple[int, int], int]

    def total_states(self) -> int:
        return sum(self.counts.values())

    def polynomial(self) -> LaurentPoly:
        out = LaurentPoly()
        dp = [LaurentPoly.constant(1)]
        for (sigma, loops), n in sorted(self.counts.items()):
            while len(dp) <= loops:
                dp.append(dp[-1] * LOOP)
            out = out + dp[loops].shift(sigma).scale(n)
        return out

    def evaluate(self, A: complex) -> complex:
        d = -A * A - 1 / (A * A)
        total = 0j
        for (sigma, loops), n in sorted(self.counts.items()):
            total += n * (A ** sigma) * (d ** loops)
        return total


def state_sum(d: VirtualDiagram, cap: int | None = None) -> StateSum:
    pd = classical_pd(d)
    c = len(pd.crossings)
    check_cap(c, cap)
    if d.is_empty():
        return StateSum(0, {})
    flat = [e for row in pd.crossings for e in row]
    hist = state_histogram(flat, [], pd.n_edges)
    width = pd.n_edges + 1
    counts = {}
    for nA in range(c + 1):
        for loops in range(width):
            n = hist[nA * width + loops]
            if n:
                counts[(2 * nA - c, loops + pd.free_loops)] = n
    return StateSum(c, counts)


def bracket(d: VirtualDiagram, cap: int | None = None) -> LaurentPoly:
    """Exact bracket; the empty diagram gives 1 and a single loop gives d."""
    if d.is_empty():
        return LaurentPoly.constant(1)
    return state_sum(d, cap).polynomial()


def bracket_at(d: VirtualDiagram, ctx: RootContext, cap: int | None = None) -> complex:
    """Numeric bracket at the context's A, summed in a fixed order."""
    if d.is_empty():
        return 1 + 0j
    return state_sum(d, cap).evaluate(ctx.A)


def count_loops(d: VirtualDiagram, state: Sequence[str] | str) -> int:
    """Loops after smoothing classical crossing k (file order) by ``state[k]``.

    ``state`` is a string or sequence over ``A``/``B``.
    """
    pd = classical_pd(d)
    if len(state) != len(pd.crossings):
        raise ValueError(f"state has {len(state)} entries for {len(pd.crossings)} classical crossings")
    parent = list(range(pd.n_edges))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    merged = 0
    for row, s in zip(pd.crossings, state):
        if s == "A":
            pairs = ((0, 1), (2, 3))
        elif s == "B":
            pairs = ((0, 3), (1, 2))
        else:
            raise ValueError(f"state entries must be 'A' or 'B', got {s!r}")
        for i, j in pairs:
            u, w = find(row[i]), find(row[j])
            if u != w:
                parent[w] = u
                merged += 1
    return pd.n_edges - merged + pd.free_loops


def diagram_network(d: VirtualDiagram) -> Network:
    pd = classical_pd(d)
    return Network(pd.n_edges, list(pd.crossings), [], pd.free_loops)


def bracket_by_contraction(d: VirtualDiagram, cap: int | None = None) -> LaurentPoly:
    """Exact bracket through the frontier-contraction engine (independent path)."""
    if d.is_empty():
        return LaurentPoly.constant(1)
    one = LaurentPoly.constant(1)
    return evaluate(diagram_network(d), A_POLY, LOOP, one=one, engine="contract", cap=cap)
