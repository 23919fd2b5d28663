"""Evaluation of closed Temperley-Lieb networks.

A network has integer edges, classical crossings given as four edge ids in
counterclockwise order from the incoming under-strand, and projector nodes.
A node lists its legs (edge ids) and a linear combination of perfect
matchings of those legs. Evaluation expands every crossing into its two
smoothings (weights A and A^-1) and every node into its terms, and counts
loops with the value d.

Two engines compute the same number: the state sum (histogram kernel over
all 2^c smoothings for each node-term combination) and a frontier
contraction that sweeps the network one node at a time.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Sequence

from .kernel import state_histogram

__all__ = [
    "Network",
    "CapExceeded",
    "DEFAULT_MAX_CROSSINGS",
    "max_crossings",
    "check_cap",
    "evaluate",
    "histogram_weights",
]

DEFAULT_MAX_CROSSINGS = 28
STATESUM_BUDGET = 1 << 22
FRONTIER_CAP = 200_000


class CapExceeded(RuntimeError):
    """A size cap was exceeded; raise the cap explicitly to proceed."""


def max_crossings() -> int:
    """Crossing cap from ``VKQ_MAX_CROSSINGS``, default 28."""
    raw = os.environ.get("VKQ_MAX_CROSSINGS")
    if raw:
        try:
            return int(raw)
        except ValueError:
            raise CapExceeded(f"VKQ_MAX_CROSSINGS must be an integer, got {raw!r}") from None
    return DEFAULT_MAX_CROSSINGS


def check_cap(count: int, cap: int | None = None, what: str = "classical crossings") -> None:
    limit = max_crossings() if cap is None else cap
    if count > limit:
        raise CapExceeded(
            f"{count} {what} exceeds the cap of {limit} (set VKQ_MAX_CROSSINGS or pass a larger cap)"
        )


@dataclass
class Network:
    n_edges: int
    crossings: list[tuple[int, int, int, int]] = field(default_factory=list)
    nodes: list[tuple[tuple[int, ...], list[tuple[Any, tuple[tuple[int, int], ...]]]]] = field(
        default_factory=list
    )
    free_loops: int = 0

    def validate(self) -> None:
        count = [0] * self.n_edges
        for sl in self.crossings:
            for e in sl:
                count[e] += 1
        for legs, terms in self.nodes:
            for e in legs:
                count[e] += 1
            for _, pairs in terms:
                seen = sorted(i for p in pairs for i in p)
                if seen != list(range(len(legs))):
                    raise ValueError("node term is not a perfect matching of its legs")
        bad = [e for e, k in enumerate(count) if k != 2]
        if bad:
            raise ValueError(f"edges {bad[:5]} do not have exactly two ends")

    @property
    def combinations(self) -> int:
        n = 1
        for _, terms in self.nodes:
            n *= len(terms)
        return n


def histogram_weights(hist: Sequence[int], c: int, n_edges: int, A, d, one):
    """Fold a state histogram into sum(count * A^(nA - nB) * d^loops)."""
    width = n_edges + 1
    Ainv = _inverse(A, one)
    apow = {}
    dpow = [one]
    total = None
    for nA in range(c + 1):
        for loops in range(width):
            cnt = hist[nA * width + loops]
            if not cnt:
                continue
            k = 2 * nA - c
            if k not in apow:
                base = A if k >= 0 else Ainv
                v = one
                for _ in range(abs(k)):
                    v = v * base
                apow[k] = v
            while len(dpow) <= loops:
                dpow.append(dpow[-1] * d)
            term = apow[k] * dpow[loops] * cnt
            total = term if total is None else total + term
    return total if total is not None else one * 0


def _inverse(A, one):
    if hasattr(A, "terms"):
        return A ** -1
    return one / A


def _statesum(net: Network, A, d, one):
    flat = [e for sl in net.crossings for e in sl]
    c = len(net.crossings)
    total = None
    node_terms = [terms for _, terms in net.nodes]
    for combo in itertools.product(*node_terms):
        coef = one
        links: list[int] = []
        for (legs, _), (tc, pairs) in zip(net.nodes, combo):
            coef = coef * tc
            for i, j in pairs:
                links.append(legs[i])
                links.append(legs[j])
        if _is_zero(coef):
            continue
        hist = state_histogram(flat, links, net.n_edges)
        val = coef * histogram_weights(hist, c, net.n_edges, A, d, one)
        total = val if total is None else total + val
    if total is None:
        total = one * 0
    return total * _dpow(d, net.free_loops, one)


def _dpow(d, n, one):
    out = one
    for _ in range(n):
        out = out * d
    return out


def _is_zero(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def _glue(M, legs, pairs):
    """Join a frontier matching with one node term.

    ``M`` pairs frontier edges already connected through processed nodes;
    ``pairs`` joins legs of the new node. Returns the new frontier matching
    and the number of closed loops.
    """
    links = list(M)
    links.extend((legs[i], legs[j]) for i, j in pairs)
    adj: dict[int, list[int]] = defaultdict(list)
    for k, (u, v) in enumerate(links):
        adj[u].append(k)
        adj[v].append(k)
    used = [False] * len(links)

    def walk(v):
        while True:
            nxt = None
            for k in adj[v]:
                if not used[k]:
                    nxt = k
                    break
            if nxt is None:
                return v
            used[nxt] = True
            u, w = links[nxt]
            v = w if u == v else u

    out = []
    for v, ks in adj.items():
        if len(ks) == 1 and not used[ks[0]]:
            end = walk(v)
            out.append((v, end) if v < end else (end, v))
    loops = 0
    for k in range(len(links)):
        if not used[k]:
            loops += 1
            walk(links[k][0])
    out.sort()
    return tuple(out), loops


def _contract(net: Network, A, d, one, frontier_cap: int = FRONTIER_CAP):
    Ainv = _inverse(A, one)
    nodes = [(tuple(sl), [(A, ((0, 1), (2, 3))), (Ainv, ((0, 3), (1, 2)))]) for sl in net.crossings]
    nodes.extend((tuple(legs), list(terms)) for legs, terms in net.nodes)
    remaining = list(range(len(nodes)))
    states: dict[tuple, Any] = {(): one}
    open_edges: set[int] = set()
    dpow = [one]
    while remaining:
        def score(i):
            legs = nodes[i][0]
            closing = sum(1 for e in legs if e in open_edges)
            return (2 * closing - len(legs), -i)

        best = max(remaining, key=score)
        remaining.remove(best)
        legs, terms = nodes[best]
        new: dict[tuple, Any] = {}
        for M, c in states.items():
            for tc, tp in terms:
                key, loops = _glue(M, legs, tp)
                while len(dpow) <= loops:
                    dpow.append(dpow[-1] * d)
                val = c * tc * dpow[loops]
                if key in new:
                    new[key] = new[key] + val
                else:
                    new[key] = val
        states = {k: v for k, v in new.items() if not _is_zero(v)}
        if len(states) > frontier_cap:
            raise CapExceeded(f"contraction frontier grew past {frontier_cap} states")
        for e in legs:
            if e in open_edges:
                open_edges.discard(e)
            else:
                open_edges.add(e)
    val = states.get((), one * 0)
    return val * _dpow(d, net.free_loops, one)


def evaluate(
    net: Network,
    A,
    d,
    one=1,
    engine: str = "auto",
    cap: int | None = None,
):
    """Evaluate a network at loop value ``d`` and crossing weight ``A``.

    ``one`` fixes the coefficient ring (``1`` or ``1+0j`` numerically, a
    Laurent polynomial for exact work). ``engine`` is ``statesum``,
    ``contract`` or ``auto``; auto uses the state sum unless its work
    estimate exceeds a fixed budget.
    """
    c = len(net.crossings)
    check_cap(c, cap)
    if engine == "auto":
        work = net.combinations * (1 << c)
        engine = "statesum" if work <= STATESUM_BUDGET else "contract"
    if engine == "statesum":
        return _statesum(net, A, d, one)
    if engine == "contract":
        return _contract(net, A, d, one)
    raise ValueError(f"unknown engine {engine!r}")
