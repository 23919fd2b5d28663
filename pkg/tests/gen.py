"""Random diagrams and move sites shared by the property tests."""

from __future__ import annotations

import random

from vkq.diagram import MoveError, VirtualDiagram, apply_move, from_gauss_code
from vkq.surface import faces


def random_gauss(rng: random.Random, n: int, n_comp: int = 1):
    """A signed Gauss code with ``n`` classical crossings on ``n_comp`` words."""
    events = []
    for c in range(n):
        s = rng.choice("+-")
        events += [(str(c), "O", s), (str(c), "U", s)]
    rng.shuffle(events)
    if n_comp == 1 or len(events) < 2:
        return [events]
    cut = rng.randrange(1, len(events))
    return [events[:cut], events[cut:]]


def random_diagram(rng: random.Random, max_crossings: int = 6) -> VirtualDiagram:
    n = rng.randint(1, max_crossings)
    code = random_gauss(rng, n, rng.choice((1, 1, 2)))
    return from_gauss_code(code, name="g")


def triangle_sites(d: VirtualDiagram):
    for f in faces(d):
        arcs = [a for a, _ in f]
        if len(arcs) == 3 and len(set(arcs)) == 3:
            yield tuple(arcs)


def virtual_segments(d: VirtualDiagram):
    """(start, end) pairs joined through virtual crossings only."""
    for a in d.arcs():
        seg = a
        for _ in range(len(d.crossings)):
            h = d.head(seg)
            if h is None or d.crossings[h[0]].kind != "v":
                break
            ci, s = h
            nxt = [b for b in d.arcs() if d.tail(b) == (ci, (s + 2) % 4)]
            if not nxt:
                break
            seg = nxt[0]
            if seg == a:
                break
            yield a, seg


def try_move(d, move, site):
    try:
        return apply_move(d, move, site)
    except MoveError:
        return None


def braid_closure(word, strands: int, name: str = "braid") -> VirtualDiagram:
    """Closure of a braid word; letters are ``(i, kind)`` with ``kind`` in ``+ - v``.

    Strands run upward and letter ``(i, k)`` crosses positions ``i`` and ``i + 1``.
    """
    start = [f"p{p}" for p in range(strands)]
    cur = list(start)
    raw = []
    for k, (i, kind) in enumerate(word):
        bl, br = cur[i], cur[i + 1]
        tl, tr = f"x{k}l", f"x{k}r"
        if kind == "+":
            slots = [br, tr, tl, bl]
        else:
            slots = [bl, br, tr, tl]
        raw.append((kind, slots))
        cur[i], cur[i + 1] = tl, tr
    final = {c: s for c, s in zip(cur, start) if c != s}
    crossings = [(kind, [final.get(a, a) for a in slots]) for kind, slots in raw]
    used = {a for _, sl in crossings for a in sl}
    loops = [s for s in start if s not in used]
    # one component per cycle of the braid permutation
    perm = list(range(strands))
    for i, _ in word:
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    seen, n_comp = set(), 0
    for p in range(strands):
        if p not in seen:
            n_comp += 1
            while p not in seen:
                seen.add(p)
                p = perm[p]
    framings = {f"K{j}": 0 for j in range(n_comp - len(loops))}
    framings.update({s: 0 for s in loops})
    return VirtualDiagram.build(crossings, framings, loops=loops, name=name)
