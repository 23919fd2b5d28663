import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vkq.laurent import (
    LOOP,
    A,
    LaurentFraction,
    LaurentPoly,
    delta_closed_form,
    delta_poly,
    eval_at_root,
    make_context,
    parse_poly,
    render_poly,
)

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(st.integers(-8, 8), coeffs, max_size=5).map(LaurentPoly)
nonzero = polys.filter(lambda p: not p.is_zero())


@given(polys, polys, polys)
def test_ring_axioms(p, q, s):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + s == p + (q + s)
    assert (p * q) * s == p * (q * s)
    assert p * (q + s) == p * q + p * s
    assert p - p == LaurentPoly()


@given(polys)
def test_render_parse_round_trip(p):
    assert parse_poly(render_poly(p)) == p


@given(polys, nonzero)
def test_exact_division(p, q):
    assert (p * q).exact_div(q) == p


@given(polys, nonzero)
def test_divmod_identity(p, q):
    quo, rem = p.divmod(q)
    assert quo * q + rem == p


@given(polys, polys)
def test_evaluation_is_a_homomorphism(p, q):
    z = cmath.exp(0.37j)
    assert abs((p * q).evaluate(z) - p.evaluate(z) * q.evaluate(z)) < 1e-9 * (1 + abs(p.evaluate(z) * q.evaluate(z)))


@given(polys)
def test_mirror_is_an_involution(p):
    assert p.mirror().mirror() == p


@given(nonzero, nonzero, polys)
def test_fraction_arithmetic(p, q, s):
    f = LaurentFraction(p, q)
    assert f * LaurentFraction(q, p) == LaurentFraction(LaurentPoly.constant(1))
    assert (f + LaurentFraction(s)) - LaurentFraction(s) == f


def test_zero_terms_are_dropped():
    p = LaurentPoly({3: 0, 1: 2})
    assert p.terms == {1: Fraction(2)}
    assert (A - A).is_zero()


def test_parse_forms():
    assert parse_poly("3*A^4 - 2 + A^-6") == LaurentPoly({4: 3, 0: -2, -6: 1})
    assert parse_poly("-A^2 - A^-2") == LOOP
    assert parse_poly("1/2A^3 + A - A") == LaurentPoly({3: Fraction(1, 2)})
    assert parse_poly("3 A") == 3 * A
    for bad in ("", "A^", "+", "2*", "A A"):
        with pytest.raises(ValueError):
            parse_poly(bad)


def test_division_by_non_divisor_raises():
    with pytest.raises(ValueError):
        (A + 1).exact_div(A ** 2 + 1)


@pytest.mark.parametrize("n", range(25))
def test_delta_recursion_matches_closed_form(n):
    assert delta_poly(n) == delta_closed_form(n)


def test_delta_low_values():
    assert delta_poly(0) == LaurentPoly.constant(1)
    assert delta_poly(1) == LOOP
    assert delta_poly(2) == LOOP * LOOP - 1


@pytest.mark.parametrize("r", range(3, 9))
def test_delta_vanishes_at_the_root(r):
    ctx = make_context(r)
    assert abs(eval_at_root(delta_poly(r - 1), ctx)) < 1e-9
    assert abs(ctx.delta(r - 1)) < 1e-9
    for n in range(r - 1):
        assert abs(ctx.deltas[n] - eval_at_root(delta_poly(n), ctx)) < 1e-9


@pytest.mark.parametrize("r", range(3, 9))
def test_context_constants(r):
    ctx = make_context(r)
    assert abs(ctx.A - cmath.exp(1j * math.pi / (2 * r))) < 1e-15
    assert abs(ctx.d - (-ctx.A ** 2 - ctx.A ** -2)) < 1e-15
    assert ctx.mu == pytest.approx(math.sqrt(2 / r) * math.sin(math.pi / r))
    assert abs(abs(ctx.alpha) - 1) < 1e-12
    assert list(ctx.colors) == list(range(r - 1))


def test_context_rejects_small_levels():
    for r in (2, 0, -1):
        with pytest.raises(ValueError):
            make_context(r)
