"""Pure-Python state-sum kernel, used when the compiled kernel is missing."""

from __future__ import annotations

KERNEL_NAME = "python"


def state_histogram(slots, links, n_edges):
    """Count Kauffman states by (number of A-smoothings, number of loops).

    ``slots`` is a flat sequence of 4 edge ids per crossing; the A-smoothing
    joins slots (0,1),(2,3) and the B-smoothing joins (0,3),(1,2). ``links``
    is a flat sequence of edge-id pairs joined in every state. Returns a
    flat list ``h`` with ``h[nA * (n_edges + 1) + loops]`` states.
    """
    c = len(slots) // 4
    width = n_edges + 1
    hist = [0] * ((c + 1) * width)
    parent = list(range(n_edges))
    rank = [0] * n_edges
    undo = []

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    def unite(a, b):
        a, b = find(a), find(b)
        if a == b:
            return 0
        if rank[a] < rank[b]:
            a, b = b, a
        parent[b] = a
        bumped = rank[a] == rank[b]
        if bumped:
            rank[a] += 1
        undo.append((b, a, bumped))
        return 1

    def rollback(mark):
        while len(undo) > mark:
            b, a, bumped = undo.pop()
            parent[b] = b
            if bumped:
                rank[a] -= 1

    base = 0
    for k in range(0, len(links), 2):
        base += unite(links[k], links[k + 1])
    undo.clear()

    def rec(i, nA, merged):
        if i == c:
            hist[nA * width + n_edges - merged] += 1
            return
        j = 4 * i
        e0, e1, e2, e3 = slots[j], slots[j + 1], slots[j + 2], slots[j + 3]
        mark = len(undo)
        m = unite(e0, e1) + unite(e2, e3)
        rec(i + 1, nA + 1, merged + m)
        rollback(mark)
        m = unite(e0, e3) + unite(e1, e2)
        rec(i + 1, nA, merged + m)
        rollback(mark)

    rec(0, 0, base)
    return hist
