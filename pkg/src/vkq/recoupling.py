"""Temperley-Lieb algebra, Jones-Wenzl projectors, colored brackets and nets.

The colored bracket is computed directly: cable each component, cut the
cable at the component's lowest-numbered arc and splice in the expanded
projector, then run the state sum. Trivalent nets (theta, tetrahedron,
twisted theta) are evaluated the same way from an explicit ribbon graph.
The crossing-to-vertex expansion is a second route that is checked against
the direct one.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from .bracket import classical_pd
from .diagram import VirtualDiagram, cable_with_map, natural_key
from .laurent import LOOP, LaurentFraction, LaurentPoly, RootContext, delta_poly
from .network import Network, check_cap, evaluate

__all__ = [
    "TLDiagram",
    "TLElement",
    "ColorError",
    "jw_projector",
    "admissible",
    "twist_coefficient",
    "TWIST_CONVENTION",
    "colored_bracket",
    "colored_network",
    "cabled_crossing_count",
    "PlanarNet",
    "diagram_net",
    "theta",
    "tet",
    "twisted_theta",
    "expand_crossings",
    "net_colored_bracket",
    "virtual_hopf_omega",
]


class ColorError(ValueError):
    """A color is out of range or a triple is not admissible."""


# ----------------------------------------------------------- Temperley-Lieb


def _is_planar(n: int, pairing) -> bool:
    # boundary points in cyclic order: bottom left to right, then top right to left
    pos = {p: (p if p < n else 3 * n - 1 - p) for p in range(2 * n)}
    chords = [tuple(sorted((pos[i], pos[j]))) for i, j in pairing]
    for (a, b), (c, d) in itertools.combinations(chords, 2):
        if a < c < b < d or c < a < d < b:
            return False
    return True


@dataclass(frozen=True)
class TLDiagram:
    """A planar matching of 2n boundary points plus a count of closed loops.

    Points 0..n-1 are the bottom, n..2n-1 the top, both left to right.
    """

    n: int
    pairing: tuple[tuple[int, int], ...]
    closed_loops: int = 0

    def __post_init__(self):
        seen = sorted(p for pr in self.pairing for p in pr)
        if seen != list(range(2 * self.n)):
            raise ValueError("pairing must match all 2n boundary points")
        canon = tuple(sorted(tuple(sorted(p)) for p in self.pairing))
        object.__setattr__(self, "pairing", canon)
        if not _is_planar(self.n, canon):
            raise ValueError(f"pairing {canon} is not planar")

    @classmethod
    def identity(cls, n: int) -> "TLDiagram":
        return cls(n, tuple((k, n + k) for k in range(n)))

    @classmethod
    def U(cls, n: int, i: int) -> "TLDiagram":
        """Generator U_i (1 <= i < n): cup and cap on strands i, i+1."""
        if not 1 <= i < n:
            raise ValueError(f"U_{i} needs 1 <= i < {n}")
        a, b = i - 1, i
        pr = [(k, n + k) for k in range(n) if k not in (a, b)] + [(a, b), (n + a, n + b)]
        return cls(n, tuple(pr))

    def compose(self, other: "TLDiagram") -> "TLDiagram":
        """``self`` below ``other``; new loops are added to the counter."""
        if self.n != other.n:
            raise ValueError("strand counts differ")
        n = self.n
        mx = _partner(self.pairing)
        my = _partner(other.pairing)
        glued = [False] * n
        out = []

        def run_x(p):
            # enter X at point p, follow its chord
            while True:
                q = mx[p]
                if q < n:
                    return ("x", q)
                k = q - n
                glued[k] = True
                r = my[k]
                if r >= n:
                    return ("y", r)
                glued[r] = True
                p = n + r

        def run_y(p):
            while True:
                q = my[p]
                if q >= n:
                    return ("y", q)
                glued[q] = True
                r = mx[n + q]
                if r < n:
                    return ("x", r)
                k = r - n
                glued[k] = True
                p = k

        done = set()
        for b in range(n):
            if ("x", b) in done:
                continue
            side, q = run_x(b)
            done.add(("x", b))
            done.add((side, q))
            out.append((b, q if side == "x" else q))
        for t in range(n, 2 * n):
            if ("y", t) in done:
                continue
            side, q = run_y(t)
            done.add(("y", t))
            done.add((side, q))
            out.append((t, q))
        loops = 0
        for k in range(n):
            if glued[k]:
                continue
            loops += 1
            # trace the closed loop through the middle
            j = k
            while not glued[j]:
                glued[j] = True
                r = my[j]
                glued[r] = True
                j = mx[n + r] - n
        return TLDiagram(n, tuple(out), self.closed_loops + other.closed_loops + loops)

    def closure_loops(self) -> int:
        """Loops in the trace closure (top k joined to bottom k)."""
        n = self.n
        parent = list(range(2 * n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j in list(self.pairing) + [(k, n + k) for k in range(n)]:
            parent[find(i)] = find(j)
        return len({find(x) for x in range(2 * n)}) + self.closed_loops

    def tensor_id(self) -> "TLDiagram":
        """Add one through-strand on the right."""
        n = self.n
        f = lambda t: t if t < n else t + 1
        pr = [(f(i), f(j)) for i, j in self.pairing] + [(n, 2 * n + 1)]
        return TLDiagram(n + 1, tuple(pr), self.closed_loops)

    def without_loops(self) -> "TLDiagram":
        return TLDiagram(self.n, self.pairing, 0)


def _partner(pairing) -> dict[int, int]:
    m = {}
    for i, j in pairing:
        m[i] = j
        m[j] = i
    return m


class TLElement:
    """Linear combination of loop-free TL diagrams.

    Closed loops are absorbed into the coefficient with the factor ``d``.
    Coefficients live in one ring: LaurentFraction (generic A) or complex.
    """

    __slots__ = ("n", "terms", "d")

    def __init__(self, n: int, terms: Mapping[TLDiagram, Any], d):
        self.n = n
        self.d = d
        acc: dict[TLDiagram, Any] = {}
        for t, c in terms.items():
            if t.closed_loops:
                c = c * _power(d, t.closed_loops)
                t = t.without_loops()
            acc[t] = acc[t] + c if t in acc else c
        self.terms = {t: c for t, c in acc.items() if not _zero(c)}

    @classmethod
    def identity(cls, n: int, d, one=1) -> "TLElement":
        return cls(n, {TLDiagram.identity(n): one}, d)

    @classmethod
    def generator(cls, n: int, i: int, d, one=1) -> "TLElement":
        return cls(n, {TLDiagram.U(n, i): one}, d)

    def __add__(self, other: "TLElement") -> "TLElement":
        t = dict(self.terms)
        for k, c in other.terms.items():
            t[k] = t[k] + c if k in t else c
        return TLElement(self.n, t, self.d)

    def __neg__(self):
        return TLElement(self.n, {k: -c for k, c in self.terms.items()}, self.d)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TLElement":
        return TLElement(self.n, {k: v * c for k, v in self.terms.items()}, self.d)

    def __mul__(self, other: "TLElement") -> "TLElement":
        """``self`` below ``other`` (apply self first)."""
        out: dict[TLDiagram, Any] = {}
        for a, ca in self.terms.items():
            for b, cb in other.terms.items():
                p = a.compose(b)
                c = ca * cb * _power(self.d, p.closed_loops)
                p = p.without_loops()
                out[p] = out[p] + c if p in out else c
        return TLElement(self.n, out, self.d)

    def tensor_id(self) -> "TLElement":
        return TLElement(self.n + 1, {k.tensor_id(): c for k, c in self.terms.items()}, self.d)

    def closure(self):
        total = None
        for k, c in self.terms.items():
            v = c * _power(self.d, k.closure_loops())
            total = v if total is None else total + v
        return total if total is not None else 0

    def coefficient(self, diagram: TLDiagram):
        return self.terms.get(diagram, 0)

    def max_abs(self) -> float:
        """Largest coefficient size (numeric mode)."""
        return max((abs(complex(c)) for c in self.terms.values()), default=0.0)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TLElement):
            return NotImplemented
        keys = set(self.terms) | set(other.terms)
        return all(_zero(self.terms.get(k, 0) - other.terms.get(k, 0)) for k in keys)

    def __repr__(self):
        return f"TLElement(n={self.n}, terms={len(self.terms)})"


def _power(x, k: int):
    out = 1
    for _ in range(k):
        out = out * x
    return out


def _zero(c) -> bool:
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


@lru_cache(maxsize=None)
def _jw_generic(n: int) -> TLElement:
    d = LaurentFraction(LOOP)
    one = LaurentFraction(1)
    if n == 1:
        return TLElement.identity(1, d, one)
    X = _jw_generic(n - 1).tensor_id()
    U = TLElement.generator(n, n - 1, d, one)
    coef = LaurentFraction(delta_poly(n - 2), delta_poly(n - 1))
    return X - (X * U * X).scale(coef)


@lru_cache(maxsize=None)
def _jw_numeric(n: int, r: int) -> TLElement:
    from .laurent import make_context

    ctx = make_context(r)
    d = ctx.d
    if n == 1:
        return TLElement.identity(1, d, 1 + 0j)
    X = _jw_numeric(n - 1, r).tensor_id()
    U = TLElement.generator(n, n - 1, d, 1 + 0j)
    coef = ctx.delta(n - 2) / ctx.delta(n - 1)
    return X - (X * U * X).scale(coef)


def jw_projector(n: int, mode: str | RootContext = "generic") -> TLElement:
    """Jones-Wenzl projector T_n from T_n = X - (D_{n-2}/D_{n-1}) X U_{n-1} X, X = T_{n-1} (x) 1.

    ``mode`` is ``"generic"`` (exact, LaurentFraction coefficients) or a
    RootContext (complex coefficients, requires n <= r - 2).
    """
    if n < 1:
        raise ColorError("projector size must be at least 1")
    if isinstance(mode, RootContext):
        if n > mode.r - 2:
            raise ColorError(f"T_{n} is undefined at r={mode.r} (a denominator Delta vanishes); need n <= {mode.r - 2}")
        return _jw_numeric(n, mode.r)
    if mode != "generic":
        raise ValueError(f"unknown projector mode {mode!r}")
    return _jw_generic(n)


# ------------------------------------------------------------- admissibility


def admissible(a: int, b: int, c: int, r: int | None = None) -> bool:
    """Internal labels (a+b-c)/2 etc. are non-negative integers; at level r also a+b+c <= 2r-4."""
    if min(a, b, c) < 0:
        return False
    if (a + b + c) % 2:
        return False
    if a + b < c or a + c < b or b + c < a:
        return False
    if r is not None:
        if max(a, b, c) > r - 2 or a + b + c > 2 * r - 4:
            return False
    return True


# Our crossing slots run counterclockwise from the incoming under-strand and
# the fusion channel joins the two incoming strands. With these conventions
# the twist picks the exponent opposite to the textbook form, i.e. the
# formula below is the textbook one under A <-> A^-1. The net cross-check
# against the direct colored bracket pins this choice.
TWIST_CONVENTION = "mirrored"


def twist_coefficient(a: int, b: int, c: int) -> LaurentPoly:
    """lambda_c^{ab} = (-1)^{(a+b-c)/2} A^{(c(c+2) - a(a+2) - b(b+2))/2}."""
    if not admissible(a, b, c):
        raise ColorError(f"({a},{b},{c}) is not admissible")
    sign = -1 if ((a + b - c) // 2) % 2 else 1
    e2 = c * (c + 2) - a * (a + 2) - b * (b + 2)
    if TWIST_CONVENTION != "mirrored":
        e2 = -e2
    return LaurentPoly.monomial(e2 // 2, sign)


# ------------------------------------------------------------ colored bracket


def cabled_crossing_count(d: VirtualDiagram, colors: Mapping[str, int]) -> int:
    total = 0
    for ci, x in enumerate(d.crossings):
        if x.classical:
            p, q = d.strand_comps(ci)
            total += colors.get(p, 0) * colors.get(q, 0)
    return total


def _colors_map(d: VirtualDiagram, colors) -> dict[str, int]:
    if isinstance(colors, Mapping):
        out = {cid: int(colors[cid]) for cid in d.component_ids()}
    else:
        colors = list(colors)
        if len(colors) != d.num_components:
            raise ColorError(f"expected {d.num_components} colors, got {len(colors)}")
        out = dict(zip(d.component_ids(), (int(c) for c in colors)))
    return out


def colored_network(d: VirtualDiagram, colors, jw, cap: int | None = None, one=1) -> tuple[Network, Any]:
    """Cabled network with projectors; returns (network, scalar factor).

    ``jw(n)`` supplies the projector T_n as a TLElement.
    """
    cmap = _colors_map(d, colors)
    check_cap(cabled_crossing_count(d, cmap), cap, "cabled classical crossings")
    cd, _, strand_label = cable_with_map(d, cmap, labels=True)
    pd = classical_pd(cd)
    crossings = [list(r) for r in pd.crossings]
    row_of = {ci: k for k, ci in enumerate(pd.crossing_ids)}
    edge_of = {a: e for e, arcs in enumerate(pd.edge_arcs) for a in arcs}
    n_edges = pd.n_edges
    free = pd.free_loops
    nodes = []
    for comp in d.components:
        n = cmap[comp.id]
        if n < 2:
            continue
        site = min(comp.arcs, key=natural_key)
        bottom, top = [], []
        for k in range(n):
            e = None if comp.free else edge_of.get(strand_label[(site, k)])
            if e is None:
                # strand met no classical crossing: the edge is a free loop
                free -= 1
                bottom.append(n_edges)
                top.append(n_edges)
                n_edges += 1
                continue
            # cut edge e just before its head end
            head_end = None
            for a in pd.edge_arcs[e]:
                h = cd.head(a)
                if h is not None and cd.crossings[h[0]].classical:
                    head_end = h
                    break
            new = n_edges
            n_edges += 1
            ci, s = head_end
            crossings[row_of[ci]][s] = new
            bottom.append(e)
            top.append(new)
        T = jw(n)
        terms = [(c, t.pairing) for t, c in T.terms.items()]
        nodes.append((tuple(bottom + top), terms))
    net = Network(n_edges, [tuple(r) for r in crossings], nodes, free)
    return net, one


def colored_bracket(
    d: VirtualDiagram,
    colors,
    ctx: RootContext,
    engine: str = "auto",
    cap: int | None = None,
) -> complex:
    """<K^a>: cabled state sum with one projector per component."""
    cmap = _colors_map(d, colors)
    for cid, a in cmap.items():
        if a < 0 or a > ctx.r - 2:
            raise ColorError(f"color {a} of {cid!r} is outside 0..{ctx.r - 2}")
    net, _ = colored_network(d, cmap, lambda n: jw_projector(n, ctx), cap)
    return complex(evaluate(net, ctx.A, ctx.d, one=1 + 0j, engine=engine, cap=math.inf))


def colored_bracket_exact(d: VirtualDiagram, colors, engine: str = "auto", cap: int | None = None) -> LaurentFraction:
    """Generic-A colored bracket as a rational function of A."""
    from .laurent import A as A_POLY

    cmap = _colors_map(d, colors)
    one = LaurentFraction(1)
    net, _ = colored_network(d, cmap, lambda n: jw_projector(n, "generic"), cap)
    return evaluate(net, LaurentFraction(A_POLY), LaurentFraction(LOOP), one=one, engine=engine, cap=math.inf)


# --------------------------------------------------------------------- nets


@dataclass
class PlanarNet:
    """Ribbon graph with colored edges.

    ``nodes`` lists (kind, ends) with kind ``vertex`` (three ends), ``x``
    (classical crossing, four ends counterclockwise from an under-strand
    end) or ``v`` (virtual crossing). An end is (edge, 0 or 1). Strands of
    an edge end are numbered counterclockwise around its node; ``loops``
    holds colors of closed edges without nodes.
    """

    colors: list[int]
    nodes: list[tuple[str, list[tuple[int, int]]]] = field(default_factory=list)
    loops: list[int] = field(default_factory=list)

    def add_edge(self, color: int) -> int:
        self.colors.append(int(color))
        return len(self.colors) - 1

    def vertex_ok(self, r: int | None) -> bool:
        for kind, ends in self.nodes:
            if kind == "vertex":
                a, b, c = (self.colors[e] for e, _ in ends)
                if not admissible(a, b, c, r):
                    return False
        return True

    def classical_count(self) -> int:
        n = 0
        for kind, ends in self.nodes:
            if kind == "x":
                n += self.colors[ends[0][0]] * self.colors[ends[1][0]]
        return n

    def network(self, jw) -> Network:
        parent: dict = {}

        def find(x):
            parent.setdefault(x, x)
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def join(x, y):
            x, y = find(x), find(y)
            if x != y:
                parent[y] = x

        def port(end, p):
            return ("p", end[0], end[1], p)

        grid: list[list] = []
        projs: list[tuple[list, list]] = []
        for ni, (kind, ends) in enumerate(self.nodes):
            if kind == "vertex":
                cols = [self.colors[e] for e, _ in ends]
                for t in range(3):
                    u = (t + 1) % 3
                    o = (t + 2) % 3
                    i = (cols[t] + cols[u] - cols[o]) // 2
                    for s in range(i):
                        join(port(ends[t], cols[t] - 1 - s), port(ends[u], s))
                continue
            a = self.colors[ends[0][0]]
            b = self.colors[ends[1][0]]
            if self.colors[ends[2][0]] != a or self.colors[ends[3][0]] != b:
                raise ColorError("opposite ends of a crossing must carry the same color")
            if kind == "v" or a == 0 or b == 0:
                for k in range(a):
                    join(port(ends[0], k), port(ends[2], a - 1 - k))
                for p in range(b):
                    join(port(ends[1], p), port(ends[3], b - 1 - p))
                continue

            def vedge(k, t):
                if t == 0:
                    return port(ends[0], k)
                if t == b:
                    return port(ends[2], a - 1 - k)
                return ("v", ni, k, t)

            def hedge(y, t):
                if t == 0:
                    return port(ends[3], b - 1 - y)
                if t == a:
                    return port(ends[1], y)
                return ("h", ni, y, t)

            for k in range(a):
                for y in range(b):
                    grid.append([vedge(k, y), hedge(y, k + 1), vedge(k, y + 1), hedge(y, k)])
        for e, a in enumerate(self.colors):
            if a == 1:
                join(port((e, 0), 0), port((e, 1), 0))
            elif a >= 2:
                projs.append(([port((e, 0), k) for k in range(a)], [port((e, 1), a - 1 - k) for k in range(a)]))
        # number the classes that meet a crossing or a projector
        ids: dict = {}

        def eid(x):
            r = find(x)
            if r not in ids:
                ids[r] = len(ids)
            return ids[r]

        crossings = [tuple(eid(x) for x in sl) for sl in grid]
        nodes = []
        for bottom, top in projs:
            n = len(bottom)
            T = jw(n)
            legs = tuple(eid(x) for x in bottom + top)
            nodes.append((legs, [(c, t.pairing) for t, c in T.terms.items()]))
        # classes with no ends are closed loops
        roots = {find(x) for x in list(parent)}
        free = len([r for r in roots if r not in ids])
        return Network(len(ids), crossings, nodes, free)

    def evaluate(self, ctx: RootContext, engine: str = "auto", cap: int | None = None) -> complex:
        if not self.vertex_ok(ctx.r):
            return 0j
        for a in self.colors + self.loops:
            if a < 0 or a > ctx.r - 2:
                raise ColorError(f"color {a} is outside 0..{ctx.r - 2}")
        check_cap(self.classical_count(), cap, "cabled classical crossings")
        net = self.network(lambda n: jw_projector(n, ctx))
        val = complex(evaluate(net, ctx.A, ctx.d, one=1 + 0j, engine=engine, cap=math.inf))
        for a in self.loops:
            val *= ctx.delta(a)
        return val

    def evaluate_generic(self, engine: str = "auto") -> LaurentFraction:
        """Exact value at generic A, as a rational function."""
        from .laurent import A as A_POLY

        if not self.vertex_ok(None):
            return LaurentFraction(0)
        net = self.network(lambda n: jw_projector(n, "generic"))
        one = LaurentFraction(1)
        val = evaluate(net, LaurentFraction(A_POLY), LaurentFraction(LOOP), one=one, engine=engine, cap=math.inf)
        for a in self.loops:
            val = val * LaurentFraction(delta_poly(a))
        return val


def _theta_net(a: int, b: int, c: int, twisted: bool) -> PlanarNet:
    net = PlanarNet([a, b, c])
    u_order = [(0, 0), (2, 0), (1, 0)]
    v_order = [(0, 1), (1, 1), (2, 1)] if not twisted else [(0, 1), (2, 1), (1, 1)]
    net.nodes = [("vertex", u_order), ("vertex", v_order)]
    return net


def theta(a: int, b: int, c: int, ctx: RootContext, engine: str = "auto") -> complex:
    """Planar theta net with edges colored a, b, c; 0 when inadmissible."""
    if not admissible(a, b, c, ctx.r):
        return 0j
    return _theta_net(a, b, c, twisted=False).evaluate(ctx, engine)


def twisted_theta(a: int, b: int, i: int, ctx: RootContext, engine: str = "auto") -> complex:
    """Theta net whose edges a and b cross once virtually; 0 when inadmissible."""
    if not admissible(a, b, i, ctx.r):
        return 0j
    return _theta_net(a, b, i, twisted=True).evaluate(ctx, engine)


def _ccw_orders(points, edges):
    """Counterclockwise edge-end order at each vertex of a straight-line embedding."""
    inc: dict[int, list] = {v: [] for v in range(len(points))}
    for e, (u, v) in enumerate(edges):
        for here, there, end in ((u, v, 0), (v, u, 1)):
            dx = points[there][0] - points[here][0]
            dy = points[there][1] - points[here][1]
            inc[here].append((math.atan2(dy, dx), (e, end)))
    return {v: [end for _, end in sorted(lst)] for v, lst in inc.items()}


def tet(a: int, b: int, m: int, c: int, dd: int, j: int, ctx: RootContext, engine: str = "auto") -> complex:
    """Tetrahedral net Tet[a b m; c d j] with vertex triples (a,d,m), (b,c,m), (a,b,j), (c,d,j)."""
    for tri in ((a, dd, m), (b, c, m), (a, b, j), (c, dd, j)):
        if not admissible(*tri, ctx.r):
            return 0j
    pts = [(0.0, 10.0), (-10.0, -6.0), (10.0, -6.0), (0.0, 0.0)]
    # vertices: 0 = (a,d,m), 1 = (b,c,m), 2 = (a,b,j), 3 = (c,d,j)
    edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    colors = [m, a, dd, b, c, j]
    orders = _ccw_orders(pts, edges)
    net = PlanarNet(colors, [("vertex", orders[v]) for v in range(4)])
    return net.evaluate(ctx, engine)


# ------------------------------------------------ crossing-to-vertex expansion


def diagram_net(d: VirtualDiagram, colors) -> PlanarNet:
    """Net whose edges are the arcs of ``d`` colored by their component."""
    cmap = _colors_map(d, colors)
    arcs = [a for a in d.arcs() if d.head(a) is not None]
    index = {a: k for k, a in enumerate(arcs)}
    net = PlanarNet([cmap[d.comp_of(a)] for a in arcs])
    for ci, x in enumerate(d.crossings):
        ends = []
        for s, a in enumerate(x.slots):
            ends.append((index[a], 1 if d.head(a) == (ci, s) else 0))
        net.nodes.append(("x" if x.classical else "v", ends))
    for comp in d.components:
        if comp.free:
            net.loops.append(cmap[comp.id])
    return net


def expand_crossings(d: VirtualDiagram, colors, ctx: RootContext) -> list[tuple[complex, PlanarNet]]:
    """Replace every classical crossing by a pair of trivalent vertices.

    A crossing with under color a and over color b becomes a sum over
    admissible i of (Delta_i / theta(a,b,i)) * lambda_i^{ab} (inverse twist
    for negative crossings) times the net in which the two incoming ends are
    fused into an i-colored edge.
    """
    cmap = _colors_map(d, colors)
    base = diagram_net(d, cmap)
    cl = [k for k, (kind, _) in enumerate(base.nodes) if kind == "x"]
    choices = []
    for k in cl:
        ends = base.nodes[k][1]
        a = base.colors[ends[0][0]]
        b = base.colors[ends[1][0]]
        opts = []
        for i in range(abs(a - b), a + b + 1, 2):
            if not admissible(a, b, i, ctx.r):
                continue
            th = theta(a, b, i, ctx)
            lam = twist_coefficient(a, b, i).evaluate(ctx.A)
            if d.crossings[k].kind == "-":
                lam = 1 / lam
            opts.append((i, ctx.delta(i) / th * lam))
        choices.append(opts)
    out = []
    for combo in itertools.product(*choices):
        net = PlanarNet(list(base.colors), [], list(base.loops))
        coef = 1 + 0j
        repl = {}
        for k, (i, c) in zip(cl, combo):
            coef *= c
            ends = base.nodes[k][1]
            e = net.add_edge(i)
            if d.crossings[k].kind == "+":
                repl[k] = [("vertex", [ends[0], (e, 0), ends[3]]), ("vertex", [ends[1], ends[2], (e, 1)])]
            else:
                repl[k] = [("vertex", [ends[0], ends[1], (e, 0)]), ("vertex", [(e, 1), ends[2], ends[3]])]
        for k, node in enumerate(base.nodes):
            if k in repl:
                net.nodes.extend(repl[k])
            else:
                net.nodes.append(node)
        out.append((coef, net))
    return out


def net_colored_bracket(d: VirtualDiagram, colors, ctx: RootContext, engine: str = "auto") -> complex:
    """Colored bracket through the crossing-to-vertex expansion (second route)."""
    total = 0j
    for coef, net in expand_crossings(d, colors, ctx):
        total += coef * net.evaluate(ctx, engine)
    return total


@lru_cache(maxsize=None)
def fused_twisted_theta(a: int, b: int, sign: str = "+") -> LaurentFraction:
    """Sum over i of Delta_i lambda_i^{ab} twisted_theta(a,b,i) / theta(a,b,i), exactly.

    Every i with |a-b| <= i <= a+b of the right parity takes part. At a root
    of unity the channels with a+b+i > 2r-4 drop out of planar closures but
    not of virtual ones, so the full generic sum is kept and specialized last.
    """
    total = LaurentFraction(0)
    for i in range(abs(a - b), a + b + 1, 2):
        lam = LaurentFraction(twist_coefficient(a, b, i))
        if sign == "-":
            lam = LaurentFraction(1) / lam
        tt = _theta_net(a, b, i, twisted=True).evaluate_generic("contract")
        th = _theta_net(a, b, i, twisted=False).evaluate_generic("contract")
        total = total + LaurentFraction(delta_poly(i)) * lam * tt / th
    return total


def virtual_hopf_omega(ctx: RootContext, sign: str = "+", channels: str = "generic") -> complex:
    """Omega-summed bracket of the virtual Hopf link by recoupling.

    The single classical crossing is fused into a pair of vertices, which
    leaves a twisted theta: the sum over a, b and i of
    Delta_a Delta_b Delta_i lambda_i^{ab} twisted_theta(a,b,i) / theta(a,b,i).
    ``channels="root"`` keeps only the i admissible at the root of unity,
    which undercounts whenever a negligible channel survives the virtual
    closure.
    """
    total = 0j
    for a in range(ctx.r - 1):
        for b in range(ctx.r - 1):
            w = ctx.delta(a) * ctx.delta(b)
            if channels == "generic":
                total += w * fused_twisted_theta(a, b, sign).evaluate(ctx.A)
                continue
            if channels != "root":
                raise ValueError(f"unknown channel set {channels!r}")
            for i in range(abs(a - b), a + b + 1, 2):
                if not admissible(a, b, i, ctx.r):
                    continue
                lam = twist_coefficient(a, b, i).evaluate(ctx.A)
                if sign == "-":
                    lam = 1 / lam
                total += w * ctx.delta(i) * lam * twisted_theta(a, b, i, ctx) / theta(a, b, i, ctx)
    return total
