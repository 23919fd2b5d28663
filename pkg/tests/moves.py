"""Random move sequences with the bracket factor each move should produce."""

from __future__ import annotations

import random

from gen import braid_closure, random_diagram, triangle_sites, try_move, virtual_segments
from vkq.laurent import LaurentPoly

KINK = {"R1+": LaurentPoly({3: -1}), "R1-": LaurentPoly({-3: -1})}


def generated_diagrams(rng: random.Random, count: int):
    """Alternate random Gauss codes with braid closures carrying a classical triangle."""
    out = []
    while len(out) < count:
        if len(out) % 2:
            d = random_diagram(rng, 6)
        else:
            extra = [(rng.randrange(2), rng.choice("+-v")) for _ in range(rng.randint(0, 3))]
            word = [(0, "+"), (1, rng.choice("+-")), (0, "+")] if rng.random() < 0.5 else [(1, "-"), (0, "-"), (1, "-")]
            d = braid_closure(word + extra, 3)
        if d.num_classical <= 6:
            out.append(d)
    return out


def move_candidates(rng: random.Random, d):
    """Yield (move, site) pairs that apply to ``d``."""
    arcs = [a for a in d.arcs() if d.head(a) is not None]
    if arcs:
        for m in ("R1+", "R1-", "vR1"):
            yield m, (rng.choice(arcs),)
    if len(arcs) >= 2:
        a, b = rng.sample(arcs, 2)
        yield "R2", (a, b, rng.choice("+-"), rng.random() < 0.5)
        yield "vR2", (a, b, rng.random() < 0.5)
    for m in ("R3", "vR3", "mixed"):
        for site in triangle_sites(d):
            yield m, site
    for start, end in virtual_segments(d):
        k = rng.randint(0, min(2, len(arcs)))
        others = [a for a in arcs if a not in (start, end)]
        yield "detour", (start, end, rng.sample(others, min(k, len(others))))


def applied_moves(rng: random.Random, d):
    """Every applicable candidate as (move, site, result)."""
    seen = set()
    for move, site in move_candidates(rng, d):
        key = (move, repr(site))
        if key in seen:
            continue
        seen.add(key)
        e = try_move(d, move, site)
        if e is not None:
            yield move, site, e
