"""Closed-form recoupling values used as independent oracles."""

from __future__ import annotations


def qint(n, A):
    return (A ** (2 * n) - A ** (-2 * n)) / (A ** 2 - A ** -2)


def qfact(n, A):
    p = 1
    for k in range(1, n + 1):
        p *= qint(k, A)
    return p


def theta_closed(a, b, c, A):
    i, j, k = (a + b - c) // 2, (b + c - a) // 2, (a + c - b) // 2
    num = (-1) ** (i + j + k) * qfact(i + j + k + 1, A) * qfact(i, A) * qfact(j, A) * qfact(k, A)
    return num / (qfact(i + j, A) * qfact(j + k, A) * qfact(i + k, A))


def tet_closed(a, b, e, c, d, f, A):
    """Tet with vertex triples (a,d,e), (b,c,e), (a,b,f), (c,d,f); all triples admissible."""
    lo = [(a + d + e) // 2, (b + c + e) // 2, (a + b + f) // 2, (c + d + f) // 2]
    hi = [(b + d + e + f) // 2, (a + c + e + f) // 2, (a + b + c + d) // 2]
    inner = 1
    for x in lo:
        for y in hi:
            inner *= qfact(y - x, A)
    edges = 1
    for x in (a, b, c, d, e, f):
        edges *= qfact(x, A)
    total = 0
    for s in range(max(lo), min(hi) + 1):
        den = 1
        for x in lo:
            den *= qfact(s - x, A)
        for y in hi:
            den *= qfact(y - s, A)
        total += (-1) ** s * qfact(s + 1, A) / den
    return inner / edges * total
