"""Exact Laurent polynomials in one variable A, and numeric root contexts.

A :class:`LaurentPoly` is a sparse map ``exponent -> Fraction`` kept in
canonical form (no zero coefficients). :class:`LaurentFraction` is a
quotient of two Laurent polynomials; it is only needed for Jones-Wenzl
coefficients at generic A, which involve division by quantum integers.

:class:`RootContext` fixes the root of unity ``A = exp(i*pi/(2r))`` and the
derived constants used by the invariant.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "LaurentPoly",
    "LaurentFraction",
    "RootContext",
    "make_context",
    "eval_at_root",
    "delta_poly",
    "delta_closed_form",
    "A",
    "LOOP",
]


def _coerce_coeff(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class LaurentPoly:
    """Immutable Laurent polynomial in A with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = _coerce_coeff(c)
                if c:
                    clean[int(e)] = c
        self._terms = clean
        self._hash = None

    # construction helpers
    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def _raw(cls, terms: dict[int, Fraction]) -> "LaurentPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @property
    def terms(self) -> dict[int, Fraction]:
        """A copy of the exponent -> coefficient map."""
        return dict(self._terms)

    def items(self):
        """Terms sorted by decreasing exponent."""
        return sorted(self._terms.items(), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_degree(self) -> int:
        return max(self._terms) if self._terms else 0

    def coeff(self, exponent: int) -> Fraction:
        return self._terms.get(exponent, Fraction(0))

    # arithmetic
    @staticmethod
    def _lift(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in o._terms.items():
                e = e1 + e2
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            return LaurentPoly({-e * (-n): Fraction(1) / c ** (-n)})
        result = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "LaurentPoly":
        """Multiply every coefficient by the rational ``c``."""
        return self * LaurentPoly.constant(_coerce_coeff(c))

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by A^k."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def mirror(self) -> "LaurentPoly":
        """Substitute A -> A^-1."""
        return LaurentPoly._raw({-e: c for e, c in self._terms.items()})

    def divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Long division after clearing negative exponents.

        Returns ``(q, rem)`` with ``self = q*other + rem``, where the
        remainder has span smaller than that of ``other``.
        """
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        a = _to_dense(self)
        b = _to_dense(other)
        q, rem = _dense_divmod(a[1], b[1])
        shift = a[0] - b[0]
        return (_from_dense(shift, q), _from_dense(a[0], rem))

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        q, rem = self.divmod(other)
        if not rem.is_zero():
            raise ValueError("polynomial division is not exact")
        return q

    # comparison
    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # evaluation
    def evaluate(self, z: complex) -> complex:
        """Evaluate at a nonzero complex number, summing in exponent order."""
        if not self._terms:
            return 0j
        total = 0j
        for e, c in sorted(self._terms.items()):
            total += float(c) * z ** e
        return total

    # text form
    def __str__(self):
        return render_poly(self)

    def __repr__(self):
        return f"LaurentPoly({render_poly(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse_poly(text)


def _to_dense(p: LaurentPoly) -> tuple[int, list[Fraction]]:
    lo = p.min_degree()
    hi = p.max_degree()
    coeffs = [Fraction(0)] * (hi - lo + 1)
    for e, c in p._terms.items():
        coeffs[e - lo] = c
    return lo, coeffs


def _from_dense(lo: int, coeffs: list[Fraction]) -> LaurentPoly:
    return LaurentPoly({lo + i: c for i, c in enumerate(coeffs) if c})


def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _dense_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    # coefficient lists in increasing degree
    a = _trim(list(a))
    b = _trim(list(b))
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        _trim(a)
    return q, a


def _dense_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _trim(list(a))
    b = _trim(list(b))
    while b:
        _, r = _dense_divmod(a, b)
        a, b = b, r
    if not a:
        return [Fraction(1)]
    lead = a[-1]
    return [c / lead for c in a]


_TERM_RE = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*(?P<star>\*)?\s*)?
        (?P<var>A(?:\s*\^\s*(?P<exp>[+-]?\d+))?)?\s*""",
    re.VERBOSE,
)


def render_poly(p: LaurentPoly) -> str:
    """Render as e.g. ``3*A^4 - 2 + A^-6`` (decreasing exponents)."""
    if p.is_zero():
        return "0"
    parts = []
    for i, (e, c) in enumerate(p.items()):
        neg = c < 0
        mag = -c if neg else c
        if e == 0:
            body = str(mag)
        else:
            var = "A" if e == 1 else f"A^{e}"
            body = var if mag == 1 else f"{mag}*{var}"
        if i == 0:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def parse_poly(text: str) -> LaurentPoly:
    """Parse the grammar produced by :func:`render_poly`.

    Accepts signed terms ``c``, ``A``, ``A^k``, ``c*A^k`` and ``cA^k`` with
    rational ``c``. Repeated exponents are summed.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    pos = 0
    terms: dict[int, Fraction] = {}
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at column {pos + 1}: {s[pos:]!r}")
        sign, coef, var = m.group("sign"), m.group("coef"), m.group("var")
        if not first and sign is None:
            raise ValueError(f"missing operator at column {pos + 1}")
        if coef is None and var is None:
            raise ValueError(f"dangling sign at column {pos + 1}")
        if m.group("star") and var is None:
            raise ValueError(f"missing variable after '*' at column {pos + 1}")
        c = Fraction(coef) if coef else Fraction(1)
        if sign == "-":
            c = -c
        e = 0
        if var:
            e = int(m.group("exp")) if m.group("exp") is not None else 1
        terms[e] = terms.get(e, 0) + c
        pos = m.end()
        first = False
    return LaurentPoly(terms)


A = LaurentPoly.monomial(1)
LOOP = LaurentPoly({2: -1, -2: -1})  # d = -A^2 - A^-2


class LaurentFraction:
    """Quotient ``num/den`` of Laurent polynomials, reduced by a polynomial gcd."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = LaurentPoly._lift(num) if not isinstance(num, LaurentPoly) else num
        if den is None:
            den = LaurentPoly.constant(1)
        elif not isinstance(den, LaurentPoly):
            den = LaurentPoly._lift(den)
        if num is None or den is None:
            raise TypeError("LaurentFraction needs polynomial or rational parts")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _reduce(num, den)

    @staticmethod
    def _lift(x) -> "LaurentFraction | None":
        if isinstance(x, LaurentFraction):
            return x
        if isinstance(x, (LaurentPoly, int, Fraction)):
            return LaurentFraction(x)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return LaurentFraction(self.num + o.num, self.den)
        return LaurentFraction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return LaurentFraction(-self.num, self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return LaurentFraction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return LaurentFraction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def as_poly(self) -> LaurentPoly:
        """Return the polynomial value, or raise if the denominator is not a unit."""
        return self.num.exact_div(self.den)

    def evaluate(self, z: complex) -> complex:
        return self.num.evaluate(z) / self.den.evaluate(z)

    def __repr__(self):
        return f"LaurentFraction({self.num}, {self.den})"


def _reduce(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return num, LaurentPoly.constant(1)
    lo_n, dn = _to_dense(num)
    lo_d, dd = _to_dense(den)
    g = _dense_gcd(dn, dd)
    if len(g) > 1:
        dn, _ = _dense_divmod(dn, g)
        dd, _ = _dense_divmod(dd, g)
    # keep the denominator monic in its lowest term and free of a monomial factor
    low = next(c for c in dd if c)
    shift = next(i for i, c in enumerate(dd) if c)
    dd = [c / low for c in dd[shift:]]
    dn = [c / low for c in dn]
    n = _from_dense(lo_n, dn)
    d = _from_dense(0, dd)
    return n.shift(-(lo_d + shift)), d


def delta_poly(n: int) -> LaurentPoly:
    """Delta_n at generic A by the recursion Delta_{k+1} = d*Delta_k - Delta_{k-1}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    prev, cur = LaurentPoly.constant(1), LOOP
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, LOOP * cur - prev
    return cur


def delta_closed_form(n: int) -> LaurentPoly:
    """Delta_n = (-1)^n (A^(2n+2) - A^-(2n+2)) / (A^2 - A^-2), by exact division."""
    k = 2 * n + 2
    num = LaurentPoly({k: 1, -k: -1})
    den = LaurentPoly({2: 1, -2: -1})
    q = num.exact_div(den)
    return q if n % 2 == 0 else -q


@dataclass(frozen=True)
class RootContext:
    """Numeric constants at ``A = exp(i*pi/(2r))``.

    ``deltas`` holds Delta_0 .. Delta_{r-2}; Delta_{r-1} vanishes at this root.
    """

    r: int
    A: complex
    d: complex
    mu: float
    alpha: complex
    deltas: tuple[complex, ...]

    @property
    def colors(self) -> range:
        return range(self.r - 1)

    def delta(self, n: int) -> complex:
        """Delta_n by the numeric recursion; valid for any n >= 0."""
        if 0 <= n < len(self.deltas):
            return self.deltas[n]
        prev, cur = 1 + 0j, self.d
        if n == 0:
            return prev
        for _ in range(n - 1):
            prev, cur = cur, self.d * cur - prev
        return cur


def make_context(r: int) -> RootContext:
    """Build the context for level ``r >= 3``."""
    if not isinstance(r, int) or r < 3:
        raise ValueError(f"r must be an integer >= 3, got {r!r}")
    a = cmath.exp(1j * math.pi / (2 * r))
    d = -a ** 2 - a ** -2
    deltas = [1 + 0j, d]
    while len(deltas) < r - 1:
        deltas.append(d * deltas[-1] - deltas[-2])
    mu = math.sqrt(2.0 / r) * math.sin(math.pi / r)
    alpha = (-1j) ** (r - 2) * cmath.exp(1j * math.pi * 3 * (r - 2) / (4 * r))
    return RootContext(r=r, A=a, d=d, mu=mu, alpha=alpha, deltas=tuple(deltas[: r - 1]))


def eval_at_root(p: LaurentPoly | LaurentFraction, ctx: RootContext) -> complex:
    """Numeric value of ``p`` at the context's A."""
    return p.evaluate(ctx.A)


def poly_sum(items: Iterable[LaurentPoly]) -> LaurentPoly:
    out = LaurentPoly()
    for p in items:
        out = out + p
    return out
