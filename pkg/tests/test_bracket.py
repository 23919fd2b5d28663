import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import random_diagram, try_move
from moves import KINK, applied_moves, generated_diagrams
from vkq import catalog, kernel
from vkq.bracket import (
    bracket,
    bracket_at,
    bracket_by_contraction,
    count_loops,
    diagram_network,
    state_sum,
)
from vkq.diagram import apply_move, mirror
from vkq.laurent import LOOP, LaurentPoly, make_context, parse_poly
from vkq.network import CapExceeded

seeds = st.integers(0, 10 ** 6)


def plain(name):
    obj = catalog.build(name)
    return obj.to_virtual() if hasattr(obj, "to_virtual") else obj


# literature values for the right-handed trefoil and the positive Hopf link,
# scaled by d because a single circle evaluates to d here
KNOWN = {
    "empty": "1",
    "unknot0": "-A^2 - A^-2",
    "hopf0": "A^6 + A^2 + A^-2 + A^-6",
    "trefoil": "A^7 + A^3 + A^-1 - A^-9",
    # one classical crossing whose two smoothings each leave one circle
    "virtual-hopf": "-A^3 - A - A^-1 - A^-3",
}


@pytest.mark.parametrize("name", sorted(KNOWN))
def test_known_brackets(name):
    assert bracket(plain(name)) == parse_poly(KNOWN[name])


def brute_force(d):
    c = d.num_classical
    total = LaurentPoly()
    for state in itertools.product("AB", repeat=c):
        sigma = state.count("A") - state.count("B")
        total = total + (LOOP ** count_loops(d, state)).shift(sigma)
    return total


@pytest.mark.parametrize("name", ["hopf0", "trefoil", "virtual-hopf", "virtual-trefoil", "ring-hooked-trefoil", "A2"])
def test_state_sum_matches_brute_force(name):
    d = plain(name)
    assert bracket(d) == brute_force(d)
    assert bracket_by_contraction(d) == bracket(d)


def test_state_histogram_counts_every_state():
    d = plain("ring-hooked-trefoil")
    s = state_sum(d)
    assert s.total_states() == 2 ** 5


@pytest.mark.parametrize("name", ["trefoil", "virtual-trefoil", "A2"])
def test_python_and_compiled_kernels_agree(name):
    net = diagram_network(plain(name))
    flat = [e for row in net.crossings for e in row]
    a = list(kernel.python_state_histogram(flat, [], net.n_edges))
    b = list(kernel.state_histogram(flat, [], net.n_edges))
    assert a == b


def test_count_loops_rejects_bad_states():
    d = plain("trefoil")
    with pytest.raises(ValueError):
        count_loops(d, "AB")
    with pytest.raises(ValueError):
        count_loops(d, "ABX")


@pytest.mark.parametrize("r", [3, 4, 5])
def test_numeric_bracket_matches_exact(r):
    ctx = make_context(r)
    for name in ("trefoil", "virtual-trefoil", "hopf0"):
        d = plain(name)
        assert abs(bracket_at(d, ctx) - bracket(d).evaluate(ctx.A)) < 1e-9


def test_mirror_inverts_the_variable():
    for name in ("trefoil", "virtual-trefoil", "ring-hooked-trefoil"):
        d = plain(name)
        assert bracket(mirror(d)) == bracket(d).mirror()


def test_cap_is_enforced(monkeypatch):
    d = plain("trefoil")
    with pytest.raises(CapExceeded):
        bracket(d, cap=2)
    monkeypatch.setenv("VKQ_MAX_CROSSINGS", "2")
    with pytest.raises(CapExceeded):
        bracket(d)
    monkeypatch.setenv("VKQ_MAX_CROSSINGS", "many")
    with pytest.raises(CapExceeded):
        bracket(d)


def test_kink_factors():
    d = plain("trefoil")
    b = bracket(d)
    assert bracket(apply_move(d, "R1+", ("t1",))) == b * KINK["R1+"]
    assert bracket(apply_move(d, "R1-", ("t1",))) == b * KINK["R1-"]
    assert bracket(apply_move(d, "vR1", ("t1",))) == b


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_moves_preserve_bracket(seed):
    rng = random.Random(seed)
    (d,) = generated_diagrams(rng, 1) if seed % 2 else [random_diagram(rng, 6)]
    b = bracket(d)
    for move, site, e in applied_moves(rng, d):
        assert bracket(e) == b * KINK.get(move, 1), (move, site)


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_r2_then_inverse(seed):
    rng = random.Random(seed)
    d = random_diagram(rng, 5)
    arcs = d.arcs()
    if len(arcs) < 2:
        return
    a, b = rng.sample(arcs, 2)
    e = apply_move(d, "R2", (a, b, "+", False))
    new = [x for x in e.arcs() if x not in arcs]
    for p, q in itertools.combinations(e.arcs(), 2):
        f = try_move(e, "R2^-1", (p, q))
        if f is not None:
            assert bracket(f) == bracket(d)
            assert f.num_classical == d.num_classical
            return
    pytest.fail(f"no bigon found among {new}")
