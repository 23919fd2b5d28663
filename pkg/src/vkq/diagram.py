"""Oriented framed virtual link diagrams.

A diagram is a list of crossings over labeled arcs. Each crossing lists four
arc labels in counterclockwise slot order. For a classical crossing slot 0 is
the incoming under-strand, which leaves through slot 2. On a positive
crossing (``x+``) the over-strand runs 3 -> 1, on a negative one (``x-``) it
runs 1 -> 3. A virtual crossing (``v``) lists its slots counterclockwise
from one incoming strand, so slot 0 -> 2 is a strand and the other strand
joins slots 1 and 3 in a direction fixed by tracing.

Every arc runs from one crossing slot (its tail) to another (its head).
Components with no crossings are free loops carrying a single arc whose
label equals the component id.

File format, one record per line::

    link <name>
    comp <id> framing <int>
    loop <comp-id>
    x+ <a> <b> <c> <d>
    x- <a> <b> <c> <d>
    v <a> <b> <c> <d>
    arc <label> from <crossing.slot> to <crossing.slot> comp <id>
    # comment

Crossings are numbered from 0 in file order. ``arc`` records are optional;
they pin an arc to a component id and are checked against the slots.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Crossing",
    "Component",
    "VirtualDiagram",
    "LinkingMatrix",
    "DiagramError",
    "MoveError",
    "parse_diagram",
    "render_diagram",
    "writhe",
    "linking_number",
    "linking_matrix",
    "apply_move",
    "cable",
    "normalize_framing",
    "disjoint_union",
    "sublink",
    "split_parts",
    "mirror",
    "reverse_component",
    "carter_genus",
    "from_gauss_code",
    "parse_gauss_code",
    "gauss_code",
    "natural_key",
    "IN_SLOTS",
    "OUT_SLOTS",
    "MOVES",
]

IN_SLOTS = {"+": (0, 3), "-": (0, 1)}
OUT_SLOTS = {"+": (2, 1), "-": (2, 3)}
KINDS = ("+", "-", "v")


class DiagramError(ValueError):
    """Malformed diagram data; ``line`` and ``column`` locate file errors."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class MoveError(ValueError):
    """The requested move does not match the diagram at the given site."""


def natural_key(label: str):
    """Sort key that orders embedded integers numerically (a2 < a10)."""
    return tuple((0, int(t)) if t.isdigit() else (1, t) for t in re.split(r"(\d+)", label) if t)


@dataclass(frozen=True)
class Crossing:
    kind: str
    slots: tuple[str, str, str, str]

    @property
    def classical(self) -> bool:
        return self.kind != "v"

    @property
    def sign(self) -> int:
        return {"+": 1, "-": -1, "v": 0}[self.kind]


@dataclass(frozen=True)
class Component:
    id: str
    arcs: tuple[str, ...]
    framing: int
    free: bool = False


class VirtualDiagram:
    """Immutable oriented framed virtual link diagram.

    Build instances with :meth:`build` or :func:`parse_diagram`; both trace
    the components and validate orientations.
    """

    __slots__ = ("name", "crossings", "components", "_comp_of", "_head", "_tail", "_vin", "_index")

    def __init__(self, name, crossings, components, comp_of, head, tail, vin):
        self.name = name
        self.crossings: tuple[Crossing, ...] = crossings
        self.components: tuple[Component, ...] = components
        self._comp_of: dict[str, str] = comp_of
        self._head: dict[str, tuple[int, int]] = head
        self._tail: dict[str, tuple[int, int]] = tail
        self._vin: tuple[int, ...] = vin
        self._index = {c.id: i for i, c in enumerate(components)}

    # construction
    @classmethod
    def build(
        cls,
        crossings: Iterable[tuple[str, Sequence[str]] | Crossing],
        framings: Mapping[str, int] | Sequence[tuple[str, int]] = (),
        loops: Iterable[str] = (),
        arc_comp: Mapping[str, str] | None = None,
        name: str = "diagram",
        order: Sequence[str] | None = None,
    ) -> "VirtualDiagram":
        """Trace and validate a diagram from raw records.

        ``framings`` maps declared component ids to framings, in declaration
        order. Traced cycles pick up ids from ``arc_comp`` when given, and
        otherwise the next unused declared id.
        """
        xs: list[Crossing] = []
        for x in crossings:
            if not isinstance(x, Crossing):
                kind, slots = x
                x = Crossing(kind, tuple(slots))
            if x.kind not in KINDS:
                raise DiagramError(f"unknown crossing kind {x.kind!r}")
            if len(x.slots) != 4:
                raise DiagramError("a crossing needs exactly four slots")
            xs.append(x)
        fr = dict(framings.items() if isinstance(framings, Mapping) else framings)
        loops = list(loops)
        return _trace(name, tuple(xs), fr, loops, dict(arc_comp or {}), list(order or []))

    # basic queries
    def component(self, cid: str) -> Component:
        try:
            return self.components[self._index[cid]]
        except KeyError:
            raise DiagramError(f"unknown component {cid!r}") from None

    def component_ids(self) -> list[str]:
        return [c.id for c in self.components]

    def comp_of(self, arc: str) -> str:
        return self._comp_of[arc]

    def arcs(self) -> list[str]:
        return list(self._comp_of)

    def head(self, arc: str) -> tuple[int, int] | None:
        """(crossing, slot) where the arc ends; None for free loops."""
        return self._head.get(arc)

    def tail(self, arc: str) -> tuple[int, int] | None:
        return self._tail.get(arc)

    def virtual_in(self, ci: int) -> int:
        """For a virtual crossing, the incoming slot (1 or 3) of its second strand."""
        return self._vin[ci]

    def in_slots(self, ci: int) -> tuple[int, int]:
        x = self.crossings[ci]
        if x.kind == "v":
            return (0, self._vin[ci])
        return IN_SLOTS[x.kind]

    def strand_comps(self, ci: int) -> tuple[str, str]:
        """Components of the slot-0 strand and of the other strand."""
        x = self.crossings[ci]
        return self._comp_of[x.slots[0]], self._comp_of[x.slots[1]]

    def framing(self, cid: str) -> int:
        return self.component(cid).framing

    @property
    def num_components(self) -> int:
        return len(self.components)

    @property
    def num_classical(self) -> int:
        return sum(1 for x in self.crossings if x.classical)

    @property
    def num_virtual(self) -> int:
        return sum(1 for x in self.crossings if not x.classical)

    def is_empty(self) -> bool:
        return not self.components

    def with_framings(self, framings: Mapping[str, int]) -> "VirtualDiagram":
        comps = tuple(
            Component(c.id, c.arcs, int(framings.get(c.id, c.framing)), c.free) for c in self.components
        )
        return VirtualDiagram(self.name, self.crossings, comps, self._comp_of, self._head, self._tail, self._vin)

    def renamed(self, name: str) -> "VirtualDiagram":
        return VirtualDiagram(name, self.crossings, self.components, self._comp_of, self._head, self._tail, self._vin)

    def _records(self):
        framings = [(c.id, c.framing) for c in self.components]
        loops = [c.id for c in self.components if c.free]
        return list(self.crossings), framings, loops, dict(self._comp_of)

    # equality
    def canonical(self):
        """Hashable form that ignores arc labels (crossing order is kept)."""
        rename: dict[str, str] = {}
        n = 0
        for c in self.components:
            if c.free:
                rename[c.arcs[0]] = f"loop:{c.id}"
                continue
            start = min(c.arcs, key=lambda a: self._tail[a])
            i = c.arcs.index(start)
            for a in c.arcs[i:] + c.arcs[:i]:
                rename[a] = f"a{n}"
                n += 1
        xs = tuple((x.kind, tuple(rename[s] for s in x.slots)) for x in self.crossings)
        comps = tuple((c.id, c.framing, c.free, frozenset(rename[a] for a in c.arcs)) for c in self.components)
        return xs, comps

    def __eq__(self, other):
        if not isinstance(other, VirtualDiagram):
            return NotImplemented
        return (
            self.crossings == other.crossings
            and self.components == other.components
        )

    def __hash__(self):
        return hash((self.crossings, self.components))

    def __repr__(self):
        return (
            f"VirtualDiagram({self.name!r}, components={len(self.components)}, "
            f"classical={self.num_classical}, virtual={self.num_virtual})"
        )


def _trace(name, crossings, framings, loops, arc_comp, order) -> VirtualDiagram:
    ends: dict[str, list[tuple[int, int]]] = {}
    for ci, x in enumerate(crossings):
        for s, a in enumerate(x.slots):
            ends.setdefault(a, []).append((ci, s))
    for a, e in ends.items():
        if len(e) == 1:
            raise DiagramError(f"dangling arc {a!r} (only one end, at {e[0][0]}.{e[0][1]})")
        if len(e) > 2:
            raise DiagramError(f"arc {a!r} is used {len(e)} times")
    loop_set = set()
    for lid in loops:
        if lid in ends:
            raise DiagramError(f"loop {lid!r} clashes with an arc label")
        if lid in loop_set:
            raise DiagramError(f"duplicate loop {lid!r}")
        loop_set.add(lid)

    # known roles: True = head (arc enters here), False = tail
    def role(ci: int, s: int):
        x = crossings[ci]
        if x.kind == "v":
            return {0: True, 2: False}.get(s)
        return s in IN_SLOTS[x.kind]

    seen_end: set[tuple[int, int]] = set()
    cycles: list[list[tuple[str, tuple[int, int], tuple[int, int]]]] = []
    for a in sorted(ends, key=natural_key):
        e0 = ends[a][0]
        if e0 in seen_end:
            continue
        # walk: traverse arc from `t` to `h`, continue through the crossing strand
        cyc = []
        t, h = ends[a]
        arc = a
        start = (a, t, h)
        while True:
            seen_end.add(t)
            seen_end.add(h)
            cyc.append((arc, t, h))
            ci, s = h
            t = (ci, (s + 2) % 4)
            arc = crossings[ci].slots[t[1]]
            e = ends[arc]
            h = e[1] if e[0] == t else e[0]
            if (arc, t, h) == start:
                break
        # orient the cycle
        agree = disagree = 0
        bad = None
        for arc_, t, h in cyc:
            for end, want in ((t, False), (h, True)):
                r = role(*end)
                if r is None:
                    continue
                if r == want:
                    agree += 1
                else:
                    disagree += 1
                    bad = end
        if agree and disagree:
            raise DiagramError(
                f"inconsistent orientation at crossing {bad[0]} slot {bad[1]}"
            )
        if disagree:
            cyc = [(arc_, h, t) for arc_, t, h in reversed(cyc)]
        cycles.append(cyc)

    head: dict[str, tuple[int, int]] = {}
    tail: dict[str, tuple[int, int]] = {}
    for cyc in cycles:
        for arc_, t, h in cyc:
            head[arc_] = h
            tail[arc_] = t
    vin = []
    for ci, x in enumerate(crossings):
        if x.kind == "v":
            vin.append(1 if head[x.slots[1]] == (ci, 1) else 3)
        else:
            vin.append(0)

    # order arcs along each cycle starting from the smallest label
    comp_cycles = []
    for cyc in cycles:
        arcs = [c[0] for c in cyc]
        i = min(range(len(arcs)), key=lambda k: natural_key(arcs[k]))
        comp_cycles.append(tuple(arcs[i:] + arcs[:i]))
    comp_cycles.sort(key=lambda arcs: natural_key(min(arcs, key=natural_key)))

    declared = [cid for cid in framings.keys()]
    for lid in loops:
        if lid not in declared:
            declared.append(lid)
    used: set[str] = set(loop_set)
    assignment: list[tuple[str, tuple[str, ...]]] = []
    pending = []
    for arcs in comp_cycles:
        ids = {arc_comp[a] for a in arcs if a in arc_comp}
        if len(ids) > 1:
            raise DiagramError(f"arcs of one traced component carry component ids {sorted(ids)}")
        if ids:
            cid = ids.pop()
            if cid in used:
                raise DiagramError(f"component {cid!r} is assigned to more than one cycle")
            if cid in loop_set:
                raise DiagramError(f"loop {cid!r} cannot own arcs")
            used.add(cid)
            assignment.append((cid, arcs))
        else:
            pending.append(arcs)
    free_ids = [cid for cid in declared if cid not in used]
    auto = 0
    for arcs in pending:
        if free_ids:
            cid = free_ids.pop(0)
        else:
            while f"K{auto}" in used or f"K{auto}" in framings:
                auto += 1
            cid = f"K{auto}"
        used.add(cid)
        assignment.append((cid, arcs))
    missing = [cid for cid in declared if cid not in used]
    if missing:
        raise DiagramError(f"component {missing[0]!r} has no arcs (declare it with 'loop')")

    by_id = {cid: arcs for cid, arcs in assignment}
    ordering = []
    for cid in itertools.chain(order, declared, [cid for cid, _ in assignment]):
        if cid not in ordering and (cid in by_id or cid in loop_set):
            ordering.append(cid)
    comps = []
    comp_of: dict[str, str] = {}
    for cid in ordering:
        f = int(framings.get(cid, 0))
        if cid in loop_set:
            comps.append(Component(cid, (cid,), f, True))
            comp_of[cid] = cid
        else:
            arcs = by_id[cid]
            comps.append(Component(cid, arcs, f, False))
            for a in arcs:
                comp_of[a] = cid
    for a, cid in arc_comp.items():
        if a not in comp_of:
            raise DiagramError(f"arc record names unknown arc {a!r}")
    return VirtualDiagram(name, crossings, tuple(comps), comp_of, head, tail, tuple(vin))


# ---------------------------------------------------------------- file format

_SLOT_RE = re.compile(r"^(\d+)\.([0-3])$")


def parse_diagram(text: str, name: str | None = None) -> VirtualDiagram:
    """Parse the line-oriented diagram format (see the module docstring)."""
    d, _ = _parse_records(text, name, allow_wrap=False)
    return d


def _parse_records(text: str, name: str | None, allow_wrap: bool):
    link_name = None
    framings: dict[str, int] = {}
    order: list[str] = []
    loops: list[str] = []
    crossings: list[Crossing] = []
    arc_comp: dict[str, str] = {}
    arc_checks: list[tuple[int, str, tuple[int, int], tuple[int, int]]] = []
    wraps: list[tuple[int, str, int, int]] = []
    meta: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = line.split()
        cols = []
        pos = 0
        for t in toks:
            j = raw.index(t, pos)
            cols.append(j + 1)
            pos = j + len(t)
        head = toks[0]
        try:
            if head == "link":
                if len(toks) != 2:
                    raise DiagramError("expected 'link <name>'", lineno, cols[0])
                if link_name is not None:
                    raise DiagramError("duplicate link header", lineno, cols[0])
                link_name = toks[1]
            elif head == "comp":
                if len(toks) != 4 or toks[2] != "framing":
                    raise DiagramError("expected 'comp <id> framing <int>'", lineno, cols[0])
                cid = toks[1]
                if cid in framings:
                    raise DiagramError(f"duplicate component id {cid!r}", lineno, cols[1])
                try:
                    framings[cid] = int(toks[3])
                except ValueError:
                    raise DiagramError(f"framing must be an integer, got {toks[3]!r}", lineno, cols[3]) from None
                order.append(cid)
            elif head == "loop":
                if len(toks) != 2:
                    raise DiagramError("expected 'loop <comp-id>'", lineno, cols[0])
                if toks[1] in loops:
                    raise DiagramError(f"duplicate loop {toks[1]!r}", lineno, cols[1])
                loops.append(toks[1])
                if toks[1] not in order:
                    order.append(toks[1])
            elif head in ("x+", "x-", "v"):
                if len(toks) != 5:
                    raise DiagramError(f"crossing record needs four arc labels", lineno, cols[0])
                kind = head[1] if head != "v" else "v"
                crossings.append(Crossing(kind, tuple(toks[1:])))
            elif head == "arc":
                if len(toks) != 8 or toks[2] != "from" or toks[4] != "to" or toks[6] != "comp":
                    raise DiagramError(
                        "expected 'arc <label> from <c.slot> to <c.slot> comp <id>'", lineno, cols[0]
                    )
                label = toks[1]
                if label in arc_comp:
                    raise DiagramError(f"duplicate arc record {label!r}", lineno, cols[1])
                ends = []
                for k in (3, 5):
                    m = _SLOT_RE.match(toks[k])
                    if not m:
                        raise DiagramError(f"bad slot reference {toks[k]!r}", lineno, cols[k])
                    ends.append((int(m.group(1)), int(m.group(2))))
                arc_comp[label] = toks[7]
                arc_checks.append((lineno, label, ends[0], ends[1]))
            elif head == "wrap" and allow_wrap:
                if len(toks) != 4:
                    raise DiagramError("expected 'wrap <arc> <p> <q>'", lineno, cols[0])
                try:
                    p, q = int(toks[2]), int(toks[3])
                except ValueError:
                    raise DiagramError("wrap numbers must be integers", lineno, cols[2]) from None
                wraps.append((lineno, toks[1], p, q))
            else:
                raise DiagramError(f"unknown record {head!r}", lineno, cols[0])
        except DiagramError:
            raise
    if link_name is None and name is None:
        link_name = "diagram"
    try:
        d = VirtualDiagram.build(
            crossings, framings, loops, arc_comp, name=name or link_name, order=order
        )
    except DiagramError as e:
        raise DiagramError(e.message, e.line, e.column) from None
    for lineno, label, t, h in arc_checks:
        if label in d._comp_of and d.head(label) is not None:
            if (d.tail(label), d.head(label)) != (t, h):
                raise DiagramError(
                    f"arc {label!r} runs from {_fmt_end(d.tail(label))} to {_fmt_end(d.head(label))}",
                    lineno,
                )
    return d, wraps


def _fmt_end(e):
    return f"{e[0]}.{e[1]}" if e is not None else "-"


def render_diagram(d: VirtualDiagram, wraps: Mapping[str, tuple[int, int]] | None = None) -> str:
    """Render to the file format; ``parse_diagram`` inverts this exactly."""
    out = [f"link {d.name}"]
    for c in d.components:
        out.append(f"comp {c.id} framing {c.framing}")
    for c in d.components:
        if c.free:
            out.append(f"loop {c.id}")
    for x in d.crossings:
        tag = "v" if x.kind == "v" else "x" + x.kind
        out.append(" ".join([tag, *x.slots]))
    for c in d.components:
        if c.free:
            continue
        for a in c.arcs:
            out.append(f"arc {a} from {_fmt_end(d.tail(a))} to {_fmt_end(d.head(a))} comp {c.id}")
    if wraps:
        for a, (p, q) in wraps.items():
            out.append(f"wrap {a} {p} {q}")
    return "\n".join(out) + "\n"


# ------------------------------------------------------------ linking numbers


def writhe(d: VirtualDiagram, component: str) -> int:
    """Sum of signs of classical self-crossings of ``component``."""
    d.component(component)
    w = 0
    for ci, x in enumerate(d.crossings):
        if x.classical:
            a, b = d.strand_comps(ci)
            if a == b == component:
                w += x.sign
    return w


def linking_number(d: VirtualDiagram, i: str, j: str) -> Fraction:
    """Half the signed count of classical crossings between components i and j."""
    d.component(i)
    d.component(j)
    if i == j:
        raise DiagramError("linking number needs two distinct components")
    s = 0
    for ci, x in enumerate(d.crossings):
        if x.classical:
            a, b = d.strand_comps(ci)
            if {a, b} == {i, j}:
                s += x.sign
    return Fraction(s, 2)


@dataclass(frozen=True)
class LinkingMatrix:
    """Symmetric matrix with writhes on the diagonal and linking numbers off it."""

    ids: tuple[str, ...]
    entries: tuple[tuple[Fraction, ...], ...]

    @property
    def size(self) -> int:
        return len(self.ids)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def as_floats(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.entries]

    def is_symmetric(self) -> bool:
        n = self.size
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(n))

    def __str__(self):
        rows = ["[" + ", ".join(_fmt_frac(v) for v in row) + "]" for row in self.entries]
        return "[" + ", ".join(rows) + "]"


def _fmt_frac(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def linking_matrix(d: VirtualDiagram) -> LinkingMatrix:
    ids = d.component_ids()
    idx = {c: k for k, c in enumerate(ids)}
    n = len(ids)
    m = [[Fraction(0)] * n for _ in range(n)]
    for ci, x in enumerate(d.crossings):
        if not x.classical:
            continue
        a, b = d.strand_comps(ci)
        i, j = idx[a], idx[b]
        if i == j:
            m[i][i] += x.sign
        else:
            m[i][j] += Fraction(x.sign, 2)
            m[j][i] += Fraction(x.sign, 2)
    return LinkingMatrix(tuple(ids), tuple(tuple(r) for r in m))


# -------------------------------------------------------------- edit helpers


class _Draft:
    """Mutable working copy used by the move implementations."""

    def __init__(self, d: VirtualDiagram):
        self.name = d.name
        self.xs: list[list] = [[x.kind, list(x.slots)] for x in d.crossings]
        self.comp_of = dict(d._comp_of)
        self.framings = {c.id: c.framing for c in d.components}
        self.order = d.component_ids()
        self.loops = {c.id for c in d.components if c.free}
        self.head = dict(d._head)
        self.tail = dict(d._tail)
        self.vin = list(d._vin)
        self._n = 0
        self._labels = set(self.comp_of)

    def fresh(self, stem: str = "t") -> str:
        while True:
            self._n += 1
            lab = f"{stem}{self._n}"
            if lab not in self._labels:
                self._labels.add(lab)
                return lab

    def is_loop_arc(self, arc: str) -> bool:
        return self.comp_of.get(arc) in self.loops and arc == self.comp_of[arc]

    def split(self, arc: str, stem="t") -> str:
        """Cut ``arc`` before its head; return the label for the head piece.

        The caller inserts a crossing taking ``arc`` in and the new label out.
        A free loop closes on itself, so its head piece is ``arc`` again.
        """
        if arc not in self.comp_of:
            raise MoveError(f"unknown arc {arc!r}")
        if self.is_loop_arc(arc):
            self.loops.discard(self.comp_of[arc])
            return arc
        new = self.fresh(stem)
        ci, s = self.head[arc]
        self.xs[ci][1][s] = new
        self.comp_of[new] = self.comp_of[arc]
        return new

    def add(self, kind: str, slots: list[str]) -> int:
        self.xs.append([kind, list(slots)])
        self.vin.append(0)
        return len(self.xs) - 1

    def remove(self, indices: Iterable[int]):
        """Delete crossings, joining each strand straight through."""
        idx = sorted(set(indices))
        parent: dict[str, str] = {}

        def find(a):
            while parent.get(a, a) != a:
                a = parent[a]
            return a

        for ci in idx:
            sl = self.xs[ci][1]
            for s in (0, 1):
                u, w = find(sl[s]), find(sl[s + 2])
                if u != w:
                    parent[w] = u
        dead = set(idx)
        self.xs = [x for k, x in enumerate(self.xs) if k not in dead]
        self.vin = [v for k, v in enumerate(self.vin) if k not in dead]
        classes: dict[str, list[str]] = {}
        for a in set(parent) | set(parent.values()):
            classes.setdefault(find(a), []).append(a)
        used = {s for x in self.xs for s in x[1]}
        rename: dict[str, str] = {}
        for members in classes.values():
            members.sort(key=natural_key)
            alive = [m for m in members if m in used]
            comp = self.comp_of[members[0]]
            if not alive:
                # the strand closed up with no crossings left on it
                self.loops.add(comp)
                for m in members:
                    self.comp_of.pop(m, None)
                self.comp_of[comp] = comp
                for m in members:
                    rename[m] = comp
                continue
            keep = alive[0]
            for m in alive:
                t = self.tail.get(m)
                if t is not None and t[0] not in dead:
                    keep = m
                    break
            for m in members:
                if m != keep:
                    rename[m] = keep
                    self.comp_of.pop(m, None)
        for x in self.xs:
            x[1] = [rename.get(s, s) for s in x[1]]
        self.sync()
        return rename

    def sync(self):
        """Recompute ends and virtual directions after crossings were removed or added."""
        d = self.rebuild()
        self.head = dict(d._head)
        self.tail = dict(d._tail)
        self.vin = list(d._vin)

    def rebuild(self) -> VirtualDiagram:
        xs = [Crossing(k, tuple(s)) for k, s in self.xs]
        arc_comp = {a: c for a, c in self.comp_of.items() if c not in self.loops or a != c}
        arc_comp = {a: c for a, c in arc_comp.items() if any(a in x.slots for x in xs)}
        fr = {cid: self.framings[cid] for cid in self.order}
        return VirtualDiagram.build(xs, fr, [c for c in self.order if c in self.loops], arc_comp,
                                    name=self.name, order=self.order)


def _slots_for(kind: str, under_in, under_out, over_in, over_out) -> list:
    if kind == "+":
        return [under_in, over_out, under_out, over_in]
    if kind == "-":
        return [under_in, over_in, under_out, over_out]
    raise ValueError(kind)


def _vslots(a_in, a_out, b_in, b_out, b_slot_in: int = 1) -> list:
    if b_slot_in == 1:
        return [a_in, b_in, a_out, b_out]
    return [a_in, b_out, a_out, b_in]


# ----------------------------------------------------------------------- moves

MOVES = (
    "R1+", "R1-", "R1^-1", "R2", "R2^-1", "R3",
    "vR1", "vR1^-1", "vR2", "vR2^-1", "vR3", "mixed", "detour",
)


def apply_move(d: VirtualDiagram, move: str, site: Sequence) -> VirtualDiagram:
    """Apply a Reidemeister-type move at a site given by arc labels.

    Sites:
        ``R1+``, ``R1-``, ``vR1``: ``(arc,)`` insert a kink on the arc.
        ``R1^-1``, ``vR1^-1``: ``(loop_arc,)`` remove the kink whose small loop is that arc.
        ``R2``: ``(over_arc, under_arc, first_sign, parallel)`` push one arc over another;
            ``first_sign`` is the sign of the first new crossing met along the over arc.
        ``vR2``: ``(arc1, arc2, parallel)``.
        ``R2^-1``, ``vR2^-1``: ``(arc1, arc2)`` the two arcs bounding a bigon.
        ``R3``, ``vR3``, ``mixed``: ``(arc1, arc2, arc3)`` the sides of a triangle.
        ``detour``: ``(start_arc, end_arc, targets)`` reroute the virtual-only segment
            from start to end so that it crosses ``targets`` virtually, in order.
    """
    if move not in MOVES:
        raise MoveError(f"unknown move {move!r}")
    site = tuple(site)
    dr = _Draft(d)
    try:
        if move in ("R1+", "R1-", "vR1"):
            _insert_kink(dr, site[0], {"R1+": "+", "R1-": "-", "vR1": "v"}[move])
        elif move in ("R1^-1", "vR1^-1"):
            _remove_kink(dr, site[0], virtual=move == "vR1^-1")
        elif move == "R2":
            over, under, first, parallel = site
            _insert_r2(dr, over, under, _sign_char(first), bool(parallel))
        elif move == "vR2":
            a, b, parallel = site
            _insert_vr2(dr, a, b, bool(parallel))
        elif move in ("R2^-1", "vR2^-1"):
            _remove_bigon(dr, site[0], site[1], virtual=move == "vR2^-1")
        elif move in ("R3", "vR3", "mixed"):
            _triangle(dr, d, site, {"R3": 3, "vR3": 0, "mixed": 1}[move])
        elif move == "detour":
            start, end, targets = site
            _detour(dr, d, start, end, list(targets))
    except (KeyError, IndexError, TypeError) as e:
        raise MoveError(f"{move}: site {site!r} does not match ({e})") from None
    return dr.rebuild()


def _sign_char(s) -> str:
    if s in (1, "+", "+1"):
        return "+"
    if s in (-1, "-", "-1"):
        return "-"
    raise MoveError(f"bad sign {s!r}")


def _insert_kink(dr: _Draft, arc: str, kind: str):
    if arc not in dr.comp_of:
        raise MoveError(f"unknown arc {arc!r}")
    new = dr.split(arc, "k")
    mid = dr.fresh("k")
    dr.comp_of[mid] = dr.comp_of[arc]
    if kind == "+":
        dr.add("+", [arc, new, mid, mid])
    elif kind == "-":
        dr.add("-", [arc, mid, mid, new])
    else:
        dr.add("v", [arc, mid, mid, new])


def _remove_kink(dr: _Draft, loop_arc: str, virtual: bool):
    t = dr.tail.get(loop_arc)
    h = dr.head.get(loop_arc)
    if t is None or h is None or t[0] != h[0]:
        raise MoveError(f"arc {loop_arc!r} is not a kink loop")
    ci = t[0]
    kind = dr.xs[ci][0]
    if (kind == "v") != virtual:
        raise MoveError(f"kink at crossing {ci} has the wrong kind for this move")
    if (t[1] - h[1]) % 4 not in (1, 3):
        raise MoveError(f"arc {loop_arc!r} joins opposite slots; not a kink")
    dr.remove([ci])


def _insert_r2(dr: _Draft, over: str, under: str, first: str, parallel: bool):
    if over == under:
        raise MoveError("R2 needs two distinct arcs")
    for a in (over, under):
        if a not in dr.comp_of:
            raise MoveError(f"unknown arc {a!r}")
    second = "-" if first == "+" else "+"
    a2 = dr.split(over, "r")
    b2 = dr.split(under, "r")
    am = dr.fresh("r")
    bm = dr.fresh("r")
    dr.comp_of[am] = dr.comp_of[over]
    dr.comp_of[bm] = dr.comp_of[under]
    if parallel:
        dr.add(first, _slots_for(first, under, bm, over, am))
        dr.add(second, _slots_for(second, bm, b2, am, a2))
    else:
        dr.add(first, _slots_for(first, bm, b2, over, am))
        dr.add(second, _slots_for(second, under, bm, am, a2))


def _insert_vr2(dr: _Draft, a: str, b: str, parallel: bool):
    if a == b:
        raise MoveError("vR2 needs two distinct arcs")
    a2 = dr.split(a, "r")
    b2 = dr.split(b, "r")
    am = dr.fresh("r")
    bm = dr.fresh("r")
    dr.comp_of[am] = dr.comp_of[a]
    dr.comp_of[bm] = dr.comp_of[b]
    if parallel:
        dr.add("v", _vslots(a, am, b, bm, 1))
        dr.add("v", _vslots(am, a2, bm, b2, 3))
    else:
        dr.add("v", _vslots(a, am, bm, b2, 1))
        dr.add("v", _vslots(am, a2, b, bm, 3))


def _strand_role(dr: _Draft, ci: int, s: int) -> str:
    kind = dr.xs[ci][0]
    if kind == "v":
        return "v"
    if s in (0, 2):
        return "u"
    return "o"


def _remove_bigon(dr: _Draft, p: str, q: str, virtual: bool):
    ends = []
    for a in (p, q):
        t, h = dr.tail.get(a), dr.head.get(a)
        if t is None or h is None:
            raise MoveError(f"arc {a!r} is not between crossings")
        ends.append((t, h))
    (tp, hp), (tq, hq) = ends
    x, y = tp[0], hp[0]
    if x == y or {tq[0], hq[0]} != {x, y}:
        raise MoveError(f"arcs {p!r}, {q!r} do not bound a bigon")
    kx, ky = dr.xs[x][0], dr.xs[y][0]
    if virtual:
        if kx != "v" or ky != "v":
            raise MoveError("vR2^-1 needs two virtual crossings")
    else:
        if kx == "v" or ky == "v":
            raise MoveError("R2^-1 needs two classical crossings")
        if kx == ky:
            raise MoveError("R2^-1 needs crossings of opposite sign")
        rp = {_strand_role(dr, *tp), _strand_role(dr, *hp)}
        rq = {_strand_role(dr, *tq), _strand_role(dr, *hq)}
        if len(rp) != 1 or len(rq) != 1 or rp == rq:
            raise MoveError("bigon strands must stay over (resp. under) at both crossings")
    if tp[1] % 2 == tq[1] % 2 and tp[0] == tq[0]:
        raise MoveError("bigon arcs must lie on different strands")
    dr.remove([x, y])


# Geometric model for triangle moves: three lines, two through the origin and
# a third offset to one side. Patterns record, per strand, whether its first
# triangle corner is the lower-numbered one, and per corner the sign when the
# lower-numbered strand is on top.


def _triangle_patterns():
    import math

    pats = set()
    angles = (0.0, math.pi / 3, 2 * math.pi / 3)
    for perm in itertools.permutations(angles):
        for flips in itertools.product((1, -1), repeat=3):
            for side in (1, -1):
                dirs = []
                for th, f in zip(perm, flips):
                    dirs.append((f * math.cos(th), f * math.sin(th)))
                # line k passes through point P_k with direction dirs[k]
                n3 = (-math.sin(perm[2]), math.cos(perm[2]))
                pts = [(0.0, 0.0), (0.0, 0.0), (side * n3[0], side * n3[1])]

                def meet(i, j):
                    (px, py), (dx, dy) = pts[i], dirs[i]
                    (qx, qy), (ex, ey) = pts[j], dirs[j]
                    den = dx * ey - dy * ex
                    t = ((qx - px) * ey - (qy - py) * ex) / den
                    return (px + t * dx, py + t * dy)

                corner = {(0, 1): meet(0, 1), (0, 2): meet(0, 2), (1, 2): meet(1, 2)}

                def param(k, pt):
                    return (pt[0] - pts[k][0]) * dirs[k][0] + (pt[1] - pts[k][1]) * dirs[k][1]

                orders = []
                for k in range(3):
                    cs = [c for c in corner if k in c]
                    orders.append(param(k, corner[cs[0]]) < param(k, corner[cs[1]]))
                signs = []
                for (i, j) in ((0, 1), (0, 2), (1, 2)):
                    (ax, ay), (bx, by) = dirs[i], dirs[j]
                    signs.append(1 if ax * by - ay * bx > 0 else -1)
                pats.add((tuple(orders), tuple(signs)))
    return pats


_TRI_PATTERNS = _triangle_patterns()


def _triangle(dr: _Draft, d: VirtualDiagram, site, n_classical: int):
    arcs = list(site)
    if len(arcs) != 3 or len(set(arcs)) != 3:
        raise MoveError("a triangle site needs three distinct arcs")
    segs = []  # (arc, tail crossing, head crossing)
    for a in arcs:
        t, h = d.tail(a), d.head(a)
        if t is None or h is None or t[0] == h[0]:
            raise MoveError(f"arc {a!r} cannot be a triangle side")
        segs.append((a, t, h))
    corners = sorted({s[1][0] for s in segs} | {s[2][0] for s in segs})
    if len(corners) != 3:
        raise MoveError("triangle sides must meet three distinct crossings")
    for c in corners:
        touching = [s for s in segs if c in (s[1][0], s[2][0])]
        if len(touching) != 2:
            raise MoveError("each triangle corner must lie on exactly two sides")
    ncl = sum(1 for c in corners if d.crossings[c].classical)
    if ncl != n_classical:
        raise MoveError(f"triangle has {ncl} classical corners")
    tri_arcs = set(arcs)

    # corner shared by strands i and j
    def shared(i, j):
        ci = {segs[i][1][0], segs[i][2][0]} & {segs[j][1][0], segs[j][2][0]}
        return ci.pop()

    def level(i, c):
        # 'o', 'u' or 'v' for strand i at corner c
        a, t, h = segs[i]
        s = t[1] if t[0] == c else h[1]
        x = d.crossings[c]
        if not x.classical:
            return "v"
        return "u" if s in (0, 2) else "o"

    ok = False
    for roles in itertools.permutations(range(3)):
        i1, i2, i3 = roles
        c12, c13, c23 = shared(i1, i2), shared(i1, i3), shared(i2, i3)
        cl = [d.crossings[c].classical for c in (c12, c13, c23)]
        if ncl == 3:
            l13, l23 = level(i3, c13), level(i3, c23)
            if l13 != l23:
                continue
        elif ncl == 1 and not cl[0]:
            continue
        orders = []
        for k, (a_, b_) in ((i1, (c12, c13)), (i2, (c12, c23)), (i3, (c13, c23))):
            orders.append(segs[k][1][0] == a_)
        signs = []
        for (p, q, c) in ((i1, i2, c12), (i1, i3, c13), (i2, i3, c23)):
            x = d.crossings[c]
            if not x.classical:
                signs.append(None)
            else:
                signs.append(x.sign if level(p, c) == "o" else -x.sign)
        for po, ps in _TRI_PATTERNS:
            if tuple(orders) != po:
                continue
            if all(s is None or s == t for s, t in zip(signs, ps)):
                ok = True
                break
        if ok:
            break
    if not ok:
        raise MoveError("triangle configuration does not admit this move")

    # swap the order of the two corners along each strand
    orig = [list(x[1]) for x in dr.xs]
    for a, (c1, s_out1), (c2, s_in2) in segs:
        s_in1 = (s_out1 + 2) % 4
        s_out2 = (s_in2 + 2) % 4
        u = orig[c1][s_in1]
        w = orig[c2][s_out2]
        if u in tri_arcs or w in tri_arcs:
            raise MoveError("triangle strands must enter and leave through outside arcs")
        dr.xs[c2][1][s_in2] = u
        dr.xs[c2][1][s_out2] = a
        dr.xs[c1][1][s_in1] = a
        dr.xs[c1][1][s_out1] = w


def _detour(dr: _Draft, d: VirtualDiagram, start: str, end: str, targets: list[str]):
    # collect virtual crossings along the segment start -> ... -> end
    seg = [start]
    crossed = []
    a = start
    while a != end:
        h = d.head(a)
        if h is None:
            raise MoveError(f"arc {a!r} has no head")
        ci, s = h
        if d.crossings[ci].classical:
            raise MoveError("detour segment meets a classical crossing")
        crossed.append(ci)
        a = d.crossings[ci].slots[(s + 2) % 4]
        if a in seg:
            raise MoveError(f"segment from {start!r} never reaches {end!r}")
        seg.append(a)
    rename = dr.remove(crossed) if crossed else {}
    cur = rename.get(start, start)
    tg = [rename.get(t, t) for t in targets]
    for t in tg:
        if t not in dr.comp_of:
            raise MoveError(f"unknown target arc {t!r}")
        if t == cur:
            raise MoveError("the detoured segment cannot cross itself here")
    # cur now runs along the whole segment; cross the targets in order
    for t in tg:
        nxt = dr.split(cur, "d")
        t2 = dr.split(t, "d")
        dr.add("v", _vslots(cur, nxt, t, t2, 1))
        dr.sync()
        cur = nxt


# ------------------------------------------------------------------- cabling


def cable(d: VirtualDiagram, widths: Mapping[str, int] | int) -> VirtualDiagram:
    """Blackboard cabling: component K becomes ``widths[K]`` parallel strands.

    Strand k of arc x is labeled ``x|k`` and strand k of component K gets the
    id ``K|k``; k counts from the left of the orientation. Width 0 deletes the
    component.
    """
    return cable_with_map(d, widths)[0]


def cable_with_map(d: VirtualDiagram, widths, labels: bool = False):
    """Like :func:`cable`, also returning new arc -> original arc (interior arcs map to None).

    With ``labels=True`` a third value maps (original arc, strand) to the
    label that strand piece carries in the cable.
    """
    if isinstance(widths, int):
        widths = {c.id: widths for c in d.components}
    for cid, w in widths.items():
        d.component(cid)
        if w < 0:
            raise DiagramError(f"negative width for {cid!r}")
    width = {c.id: int(widths.get(c.id, 1)) for c in d.components}

    def wa(arc):
        return width[d.comp_of(arc)]

    xs: list[tuple[str, list[str]]] = []
    origin: dict[str, str | None] = {}
    parent: dict[str, str] = {}

    def find(a):
        while parent.get(a, a) != a:
            a = parent[a]
        return a

    def lab(arc, k):
        s = f"{arc}|{k}"
        origin[s] = arc
        return s

    for ci, x in enumerate(d.crossings):
        sl = x.slots
        a = wa(sl[0])
        b = wa(sl[1])
        if x.kind == "v":
            h_forward = d.virtual_in(ci) == 3  # horizontal strand runs 3 -> 1
        else:
            h_forward = x.kind == "+"

        def jy(y):
            return b - 1 - y if h_forward else y

        if a == 0 or b == 0:
            for k in range(a):
                u, w = find(lab(sl[0], k)), find(lab(sl[2], k))
                if u != w:
                    parent[w] = u
            for y in range(b):
                j = jy(y)
                u, w = find(lab(sl[3], j)), find(lab(sl[1], j))
                if u != w:
                    parent[w] = u
            continue

        def vedge(k, t):
            if t == 0:
                return lab(sl[0], k)
            if t == b:
                return lab(sl[2], k)
            s = f"~{ci}v{k}.{t}"
            origin[s] = None
            return s

        def hedge(y, t):
            if t == 0:
                return lab(sl[3], jy(y))
            if t == a:
                return lab(sl[1], jy(y))
            s = f"~{ci}h{y}.{t}"
            origin[s] = None
            return s

        for k in range(a):
            for y in range(b):
                slots = [vedge(k, y), hedge(y, k + 1), vedge(k, y + 1), hedge(y, k)]
                xs.append((x.kind, slots))

    # free loops and components whose strands never meet a crossing
    xs = [(k, [find(s) for s in sl]) for k, sl in xs]
    present = {s for _, sl in xs for s in sl}
    arc_comp: dict[str, str] = {}
    loops: list[str] = []
    framings: dict[str, int] = {}
    new_origin: dict[str, str] = {}
    loop_origin: dict[str, str] = {}
    for c in d.components:
        for k in range(width[c.id]):
            cid = f"{c.id}|{k}"
            framings[cid] = 0
            if c.free:
                loops.append(cid)
                loop_origin[cid] = c.arcs[0]
                continue
            pieces = {find(lab(a, k)) for a in c.arcs}
            alive = [l for l in pieces if l in present]
            if not alive:
                loops.append(cid)
                loop_origin[cid] = c.arcs[0]
                continue
            for l in alive:
                arc_comp[l] = cid
    # interior grid arcs inherit the component of the strand they belong to
    d2 = VirtualDiagram.build(xs, framings, loops, arc_comp, name=d.name,
                              order=list(framings))
    # blackboard framing of each cable strand
    fr = {c.id: writhe(d2, c.id) for c in d2.components}
    d2 = d2.with_framings(fr)
    amap = {a: origin.get(a) for a in d2.arcs()}
    amap.update(loop_origin)
    if not labels:
        return d2, amap
    strand_label = {}
    for c in d.components:
        for k in range(width[c.id]):
            for a in c.arcs:
                lb = find(lab(a, k))
                strand_label[(a, k)] = lb if lb in d2._comp_of else f"{c.id}|{k}"
    return d2, amap, strand_label


# ---------------------------------------------------------- framing and union


def normalize_framing(d: VirtualDiagram) -> VirtualDiagram:
    """Insert kinks so that every component's writhe equals its framing."""
    out = d
    for c in d.components:
        w = writhe(out, c.id)
        diff = c.framing - w
        if diff == 0:
            continue
        move = "R1+" if diff > 0 else "R1-"
        for _ in range(abs(diff)):
            comp = out.component(c.id)
            arc = min(comp.arcs, key=natural_key)
            out = apply_move(out, move, (arc,))
    return out


def disjoint_union(d1: VirtualDiagram, d2: VirtualDiagram, name: str | None = None) -> VirtualDiagram:
    """Side-by-side union; labels of ``d2`` are renamed on collision."""
    labels1 = set(d1.arcs())
    ids1 = set(d1.component_ids())
    ren_c: dict[str, str] = {}
    for c in d2.components:
        cid = c.id
        n = 1
        while cid in ids1 or cid in labels1 or cid in ren_c.values():
            n += 1
            cid = f"{c.id}_{n}"
        ren_c[c.id] = cid
    ren_a: dict[str, str] = {}
    taken = labels1 | set(ren_c.values()) | ids1
    for c in d2.components:
        if c.free:
            ren_a[c.arcs[0]] = ren_c[c.id]
            continue
        for a in c.arcs:
            b = a
            n = 1
            while b in taken:
                n += 1
                b = f"{a}_{n}"
            taken.add(b)
            ren_a[a] = b
    xs = list(d1.crossings) + [Crossing(x.kind, tuple(ren_a[s] for s in x.slots)) for x in d2.crossings]
    fr = [(c.id, c.framing) for c in d1.components] + [(ren_c[c.id], c.framing) for c in d2.components]
    loops = [c.id for c in d1.components if c.free] + [ren_c[c.id] for c in d2.components if c.free]
    arc_comp = {a: d1.comp_of(a) for a in d1.arcs() if not d1.component(d1.comp_of(a)).free}
    for c in d2.components:
        if not c.free:
            for a in c.arcs:
                arc_comp[ren_a[a]] = ren_c[c.id]
    return VirtualDiagram.build(xs, fr, loops, arc_comp, name=name or d1.name,
                                order=[cid for cid, _ in fr])


def sublink(d: VirtualDiagram, keep: Iterable[str]) -> VirtualDiagram:
    """The diagram of the components in ``keep``; the others are erased.

    Strands of kept components run straight through the crossings they had
    with erased ones.
    """
    keep = set(keep)
    for cid in keep:
        d.component(cid)
    drop = [c for c in d.component_ids() if c not in keep]
    dead = [ci for ci in range(len(d.crossings)) if set(d.strand_comps(ci)) - keep]
    dr = _Draft(d)
    if dead:
        dr.remove(dead)
    for cid in drop:
        dr.order.remove(cid)
        dr.loops.discard(cid)
        dr.framings.pop(cid)
    dr.comp_of = {a: c for a, c in dr.comp_of.items() if c not in drop}
    return dr.rebuild()


def split_parts(d: VirtualDiagram) -> list[VirtualDiagram]:
    """Split the diagram where no classical crossing joins two groups.

    Virtual crossings between groups are erased, which leaves every
    bracket-type invariant unchanged. Parts come in component order.
    """
    ids = d.component_ids()
    parent = {c: c for c in ids}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    for ci, x in enumerate(d.crossings):
        if x.classical:
            a, b = d.strand_comps(ci)
            parent[find(b)] = find(a)
    groups: dict[str, list[str]] = {}
    for c in ids:
        groups.setdefault(find(c), []).append(c)
    if len(groups) == 1:
        return [d]
    return [sublink(d, g) for g in groups.values()]


def mirror(d: VirtualDiagram) -> VirtualDiagram:
    """Switch every classical crossing (over <-> under)."""
    xs = []
    for x in d.crossings:
        s = x.slots
        if x.kind == "+":
            xs.append(Crossing("-", (s[3], s[0], s[1], s[2])))
        elif x.kind == "-":
            xs.append(Crossing("+", (s[1], s[2], s[3], s[0])))
        else:
            xs.append(x)
    crossings, fr, loops, arc_comp = d._records()
    arc_comp = {a: c for a, c in arc_comp.items() if a not in loops}
    return VirtualDiagram.build(xs, fr, loops, arc_comp, name=d.name, order=d.component_ids())


def reverse_component(d: VirtualDiagram, cid: str) -> VirtualDiagram:
    """Reverse the orientation of one component."""
    d.component(cid)
    xs = []
    for ci, x in enumerate(d.crossings):
        s = x.slots
        a, b = d.strand_comps(ci)
        ra, rb = a == cid, b == cid
        if not (ra or rb):
            xs.append(x)
            continue
        if x.kind == "v":
            if ra:
                xs.append(Crossing("v", (s[2], s[3], s[0], s[1])))
            else:
                xs.append(x)
            continue
        flip = {"+": "-", "-": "+"}
        if ra and rb:
            xs.append(Crossing(x.kind, (s[2], s[3], s[0], s[1])))
        elif ra:
            xs.append(Crossing(flip[x.kind], (s[2], s[3], s[0], s[1])))
        else:
            xs.append(Crossing(flip[x.kind], s))
    crossings, fr, loops, arc_comp = d._records()
    arc_comp = {a: c for a, c in arc_comp.items() if a not in loops}
    return VirtualDiagram.build(xs, fr, loops, arc_comp, name=d.name, order=d.component_ids())


# ------------------------------------------------------------------- genus


def carter_genus(d: VirtualDiagram) -> int:
    """Genus of the minimal-handle Carter surface of the classical diagram.

    Virtual crossings are ignored, so this is the genus of the abstract link
    diagram built from the classical crossings.
    """
    from .bracket import classical_pd

    pd = classical_pd(d)
    if not pd.crossings:
        return 0
    ends: dict[int, list[tuple[int, int]]] = {}
    for ci, sl in enumerate(pd.crossings):
        for k, e in enumerate(sl):
            ends.setdefault(e, []).append((ci, k))
    other = {}
    for e, lst in ends.items():
        other[lst[0]] = lst[1]
        other[lst[1]] = lst[0]
    seen = set()
    faces = 0
    for start in other:
        if start in seen:
            continue
        faces += 1
        x = start
        while x not in seen:
            seen.add(x)
            ci, k = other[x]
            x = (ci, (k + 1) % 4)
    v = len(pd.crossings)
    e = 2 * v
    par = list(range(v))

    def f(i):
        while par[i] != i:
            par[i] = par[par[i]]
            i = par[i]
        return i

    for lst in ends.values():
        par[f(lst[0][0])] = f(lst[1][0])
    comps = len({f(i) for i in range(v)})
    return (2 * comps - v + e - faces) // 2


# --------------------------------------------------------------- Gauss codes

_GAUSS_RE = re.compile(r"^([OU])(\w+?)([+-])$")


def parse_gauss_code(text: str) -> list[list[tuple[str, str, str]]]:
    """Parse ``O1+ O2+ U1+ U2+``; components are separated by ``|``.

    Each token is O/U, a crossing name, and the crossing sign.
    """
    comps = []
    for part in text.split("|"):
        toks = part.split()
        comp = []
        for t in toks:
            m = _GAUSS_RE.match(t)
            if not m:
                raise DiagramError(f"bad Gauss token {t!r}")
            comp.append((m.group(2), m.group(1), m.group(3)))
        comps.append(comp)
    return comps


def gauss_code(d: VirtualDiagram) -> list[list[tuple[str, str, str]]]:
    """Signed Gauss code of the classical crossings, one word per component.

    Entries are ``(crossing index, "O" or "U", sign)`` in the form accepted
    by :func:`from_gauss_code`; virtual crossings are skipped.
    """
    words = []
    for c in d.components:
        word = []
        if not c.free:
            for a in c.arcs:
                ci, s = d.head(a)
                x = d.crossings[ci]
                if x.kind == "v":
                    continue
                word.append((str(ci), "U" if s == 0 else "O", x.kind))
        words.append(word)
    return words


def from_gauss_code(code, framings: Sequence[int] | None = None, name: str = "gauss") -> VirtualDiagram:
    """Realize a signed Gauss code as a virtual diagram.

    Crossings sit left to right on a line; each arc leaves its port, runs in
    its own horizontal channel and returns, and every intersection of two
    channels becomes a virtual crossing.
    """
    if isinstance(code, str):
        code = parse_gauss_code(code)
    info: dict[str, dict] = {}
    arcs: dict[str, tuple[int, int]] = {}
    arc_comp: dict[str, str] = {}
    loops = []
    cids = []
    for ki, comp in enumerate(code):
        cid = f"K{ki}"
        cids.append(cid)
        if not comp:
            loops.append(cid)
            continue
        n = len(comp)
        for i, (c, ou, s) in enumerate(comp):
            arc_in = f"g{ki}_{(i - 1) % n}"
            arc_out = f"g{ki}_{i}"
            rec = info.setdefault(c, {})
            if ou in rec:
                raise DiagramError(f"crossing {c!r} has two {ou} occurrences")
            rec[ou] = (arc_in, arc_out)
            if rec.setdefault("s", s) != s:
                raise DiagramError(f"crossing {c!r} has inconsistent signs")
            arc_comp[arc_out] = cid
    names = list(info)
    for c in names:
        if "O" not in info[c] or "U" not in info[c]:
            raise DiagramError(f"crossing {c!r} needs one O and one U occurrence")
    base = []
    for c in names:
        r = info[c]
        (ui, uo), (oi, oo) = r["U"], r["O"]
        base.append((r["s"], _slots_for(r["s"], ui, uo, oi, oo)))
    fr = [(cid, (framings[i] if framings else 0)) for i, cid in enumerate(cids)]
    xs = _realize(base)
    # classical arcs may have been split by virtual crossings; keep ids by prefix
    comp_map = {}
    for kind, sl in xs:
        for s in sl:
            root = s.split("~")[0]
            if root in arc_comp:
                comp_map[s] = arc_comp[root]
    return VirtualDiagram.build(xs, fr, loops, comp_map, name=name, order=cids)


def _realize(base: list[tuple[str, list[str]]]) -> list[tuple[str, list[str]]]:
    """Insert virtual crossings for a left-to-right channel layout."""
    port_pos = {0: (0.0, -1.0), 1: (1.0, 0.0), 2: (0.0, 1.0), 3: (-1.0, 0.0)}
    tails: dict[str, tuple[int, int]] = {}
    heads: dict[str, tuple[int, int]] = {}
    for ci, (kind, sl) in enumerate(base):
        ins = IN_SLOTS[kind]
        for s, a in enumerate(sl):
            (heads if s in ins else tails)[a] = (ci, s)
    labels = sorted(heads, key=natural_key)
    xmax = 10.0 * len(base)

    def port(ci, s):
        dx, dy = port_pos[s]
        return (10.0 * ci + dx, dy)

    def side(s):
        return -1.0 if s == 0 else 1.0

    paths = {}
    for k, a in enumerate(labels):
        t, h = tails[a], heads[a]
        p, q = port(*t), port(*h)
        lev = 2.0 + k
        sp, sq = side(t[1]), side(h[1])
        if sp == sq:
            pts = [p, (p[0], sp * lev), (q[0], sp * lev), q]
        else:
            rx = xmax + 2.0 + k
            pts = [p, (p[0], sp * lev), (rx, sp * lev), (rx, sq * lev), (q[0], sq * lev), q]
        paths[a] = pts

    def segments(pts):
        out = []
        acc = 0.0
        for (x1, y1), (x2, y2) in zip(pts, pts[1:]):
            ln = abs(x2 - x1) + abs(y2 - y1)
            out.append(((x1, y1), (x2, y2), acc))
            acc += ln
        return out

    segs = {a: segments(p) for a, p in paths.items()}
    hits: dict[str, list[tuple[float, int]]] = {a: [] for a in labels}
    vxs: list[dict] = []
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            for (p1, p2, acc1) in segs[a]:
                for (q1, q2, acc2) in segs[b]:
                    pt = _cross_point(p1, p2, q1, q2)
                    if pt is None:
                        continue
                    ta = acc1 + abs(pt[0] - p1[0]) + abs(pt[1] - p1[1])
                    tb = acc2 + abs(pt[0] - q1[0]) + abs(pt[1] - q1[1])
                    da = _unit(p1, p2)
                    db = _unit(q1, q2)
                    idx = len(vxs)
                    vxs.append({"a": a, "b": b, "da": da, "db": db})
                    hits[a].append((ta, idx))
                    hits[b].append((tb, idx))
    # split arcs at their hits
    piece_in: dict[tuple[str, int], str] = {}
    piece_out: dict[tuple[str, int], str] = {}
    rename_head: dict[str, str] = {}
    for a in labels:
        hs = sorted(hits[a])
        pieces = [a] + [f"{a}~{j + 1}" for j in range(len(hs))]
        for j, (_, idx) in enumerate(hs):
            piece_in[(a, idx)] = pieces[j]
            piece_out[(a, idx)] = pieces[j + 1]
        rename_head[a] = pieces[-1]
    out = []
    for ci, (kind, sl) in enumerate(base):
        ins = IN_SLOTS[kind]
        out.append((kind, [rename_head[a] if s in ins else a for s, a in enumerate(sl)]))
    for idx, v in enumerate(vxs):
        a, b, da, db = v["a"], v["b"], v["da"], v["db"]
        # slot 0 is the incoming end of a; slot 1 sits at rot90(-da)
        rot = (da[1], -da[0])
        b_in_at_1 = (-db[0], -db[1]) == rot
        out.append(("v", _vslots(piece_in[(a, idx)], piece_out[(a, idx)],
                                 piece_in[(b, idx)], piece_out[(b, idx)], 1 if b_in_at_1 else 3)))
    return out


def _unit(p1, p2):
    dx, dy = p2[0] - p1[0], p2[1] - p1[1]
    return ((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))


def _cross_point(p1, p2, q1, q2):
    h1 = p1[1] == p2[1]
    h2 = q1[1] == q2[1]
    if h1 == h2:
        return None
    if not h1:
        p1, p2, q1, q2 = q1, q2, p1, p2
    y = p1[1]
    x = q1[0]
    lo, hi = sorted((p1[0], p2[0]))
    ylo, yhi = sorted((q1[1], q2[1]))
    if lo < x < hi and ylo < y < yhi:
        return (x, y)
    return None
