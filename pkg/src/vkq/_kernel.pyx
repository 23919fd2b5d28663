# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled state-sum kernel (same contract as the pure-Python fallback)."""

from libc.stdlib cimport malloc, free, calloc

KERNEL_NAME = "cython"


cdef inline int _find(int* parent, int a) nogil:
    while parent[a] != a:
        a = parent[a]
    return a


cdef inline int _unite(int* parent, int* rank, int* undo, int* top, int a, int b) nogil:
    a = _find(parent, a)
    b = _find(parent, b)
    if a == b:
        return 0
    if rank[a] < rank[b]:
        a, b = b, a
    parent[b] = a
    cdef int bumped = 0
    if rank[a] == rank[b]:
        rank[a] += 1
        bumped = 1
    undo[3 * top[0]] = b
    undo[3 * top[0] + 1] = a
    undo[3 * top[0] + 2] = bumped
    top[0] += 1
    return 1


cdef inline void _rollback(int* parent, int* rank, int* undo, int* top, int mark) nogil:
    cdef int b, a
    while top[0] > mark:
        top[0] -= 1
        b = undo[3 * top[0]]
        a = undo[3 * top[0] + 1]
        parent[b] = b
        if undo[3 * top[0] + 2]:
            rank[a] -= 1


cdef void _rec(int i, int c, int nA, int merged, int* sl, int n_edges,
               int* parent, int* rank, int* undo, int* top, long long* hist) nogil:
    cdef int width = n_edges + 1
    if i == c:
        hist[nA * width + n_edges - merged] += 1
        return
    cdef int* e = sl + 4 * i
    cdef int mark = top[0]
    cdef int m = _unite(parent, rank, undo, top, e[0], e[1]) + _unite(parent, rank, undo, top, e[2], e[3])
    _rec(i + 1, c, nA + 1, merged + m, sl, n_edges, parent, rank, undo, top, hist)
    _rollback(parent, rank, undo, top, mark)
    m = _unite(parent, rank, undo, top, e[0], e[3]) + _unite(parent, rank, undo, top, e[1], e[2])
    _rec(i + 1, c, nA, merged + m, sl, n_edges, parent, rank, undo, top, hist)
    _rollback(parent, rank, undo, top, mark)


def state_histogram(slots, links, int n_edges):
    """Count Kauffman states by (number of A-smoothings, number of loops)."""
    cdef int c = len(slots) // 4
    cdef int nl = len(links) // 2
    cdef int width = n_edges + 1
    cdef int k, base = 0
    cdef int top = 0
    cdef int* sl = <int*> malloc(sizeof(int) * (4 * c + 1))
    cdef int* parent = <int*> malloc(sizeof(int) * (n_edges + 1))
    cdef int* rank = <int*> calloc(n_edges + 1, sizeof(int))
    cdef int* undo = <int*> malloc(sizeof(int) * 3 * (2 * c + nl + 1))
    cdef long long* hist = <long long*> calloc((c + 1) * width, sizeof(long long))
    if not sl or not parent or not rank or not undo or not hist:
        free(sl); free(parent); free(rank); free(undo); free(hist)
        raise MemoryError()
    try:
        for k in range(4 * c):
            sl[k] = slots[k]
            if sl[k] < 0 or sl[k] >= n_edges:
                raise ValueError("edge id out of range")
        for k in range(n_edges):
            parent[k] = k
        for k in range(nl):
            base += _unite(parent, rank, undo, &top, links[2 * k], links[2 * k + 1])
        top = 0
        with nogil:
            _rec(0, c, 0, base, sl, n_edges, parent, rank, undo, &top, hist)
        return [hist[k] for k in range((c + 1) * width)]
    finally:
        free(sl); free(parent); free(rank); free(undo); free(hist)
