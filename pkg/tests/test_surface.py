import pytest

from vkq import catalog
from vkq.bracket import bracket
from vkq.diagram import DiagramError, VirtualDiagram, linking_matrix, linking_number, writhe
from vkq.laurent import make_context
from vkq.surface import (
    SurfaceError,
    TorusDiagram,
    augment_at_virtual_crossings,
    blow_down,
    blow_up,
    condition_s_check,
    condition_s_from_windings,
    condition_status,
    delete_components,
    faces,
    handle_slide,
    is_geometric,
    o3_augment,
    parse_torus_diagram,
    reduce_search,
    render_torus_diagram,
    ring_hooked_presentation,
)
from vkq.wrt import z_invariant

TORUS = ["A1", "A2", "C", "Q", "L4", "X", "L3", "A", "B", "Y"]


def empty_torus():
    return TorusDiagram(VirtualDiagram.build([], {}, [], name="e"), {})


@pytest.mark.parametrize("name", TORUS)
def test_torus_round_trip(name):
    td = catalog.build(name)
    back = parse_torus_diagram(render_torus_diagram(td))
    assert back.diagram == td.diagram
    assert back.wraps == td.wraps


@pytest.mark.parametrize("name", TORUS)
def test_corpus_torus_diagrams_are_geometric(name):
    assert is_geometric(catalog.build(name))


def test_non_geometric_picture_is_detected():
    d = catalog.build("A1").diagram
    assert not is_geometric(TorusDiagram(d, {"e2": (1, 0)}))


def test_wrap_must_name_an_arc():
    with pytest.raises(DiagramError):
        TorusDiagram(catalog.build("trefoil"), {"zz": (1, 0)})


def test_windings():
    assert catalog.build("A1").windings() == {"K": (1, 1)}
    assert catalog.build("Q").windings() == {"o3g1": (1, 0), "o3m1": (0, 0), "o3g2": (0, 1), "o3m2": (0, 0)}


@pytest.mark.parametrize("name", TORUS)
def test_projection_keeps_linking_and_writhe(name):
    td = catalog.build(name)
    v = td.to_virtual()
    assert v.num_classical == td.diagram.num_classical
    assert linking_matrix(v) == linking_matrix(td.diagram)


def test_projection_of_a_torus_hopf():
    vh = catalog.build("virtual-hopf")
    assert vh.num_virtual == 1
    assert linking_number(vh, "H", "V") == 0.5


@pytest.mark.parametrize("ws, verdict", [
    ({}, "not verified"),
    ({"a": (1, 0), "b": (0, 1)}, "verified"),
    ({"a": (2, 0), "b": (0, 1)}, "not verified"),
    ({"a": (1, 0), "b": (1, 1)}, "verified"),
    ({"a": (2, 1), "b": (1, 1)}, "verified"),
    ({"a": (2, 1), "b": (4, 2), "c": (0, 0)}, "not verified"),
    ({"a": (3, 0), "b": (2, 0), "c": (0, 1)}, "verified"),
])
def test_condition_s_windings(ws, verdict):
    assert condition_s_from_windings(ws).verdict == verdict


def test_condition_s_report_details():
    rep = condition_s_from_windings({"a": (2, 0), "b": (0, 1)})
    assert rep.invariant_factors == (1, 2)
    assert rep.winding_matrix() == [[2, 0], [0, 1]]
    assert not rep.verified
    assert condition_s_from_windings({"a": (1, 0)}, genus=2).verdict == "unknown"


def test_o3_augment_completes_condition_s():
    td = empty_torus()
    assert condition_s_check(td).verdict == "not verified"
    one = o3_augment(td, (1, 0))
    assert one.diagram.num_components == 2
    assert condition_s_check(one).verdict == "not verified"
    two = o3_augment(one, (0, 1))
    assert two.diagram.num_components == 4
    assert condition_s_check(two).verified
    assert condition_status(two) == "verified"
    assert condition_status(one) == "augmented"
    assert condition_status(td) == "unknown"


def test_o3_pair_shape():
    td = o3_augment(catalog.build("A1"), (1, 0))
    d = td.diagram
    assert linking_number(d, "o3g1", "o3m1") == 1
    assert d.framing("o3g1") == 0 and d.framing("o3m1") == 0
    assert td.windings()["o3g1"] == (1, 0)
    assert is_geometric(td)


def test_o3_rejects_non_primitive():
    with pytest.raises(SurfaceError):
        o3_augment(empty_torus(), (2, 0))
    with pytest.raises(SurfaceError):
        o3_augment(empty_torus(), (0, 0))


@pytest.mark.parametrize("r", [3, 4])
def test_local_meridian_kills_the_new_curve(r):
    # a zero-framed omega meridian forces its companion to color 0
    a1 = z_invariant(catalog.build("A1"), r).value
    for g in ((1, 0), (0, 1), (1, 1)):
        assert abs(z_invariant(o3_augment(catalog.build("A1"), g), r).value - a1) < 1e-9


def test_blow_up_and_down():
    t = catalog.build("trefoil")
    u = blow_up(t, -1)
    assert u.num_components == 2
    uid = u.component_ids()[1]
    assert u.framing(uid) == -1
    assert blow_down(u, uid) == t
    with pytest.raises(SurfaceError):
        blow_up(t, 2)


def test_blow_down_refusals():
    h = catalog.build("hopf0").with_framings({"H1": 1, "H2": 0})
    with pytest.raises(SurfaceError):
        blow_down(h, "H1")
    with pytest.raises(SurfaceError):
        blow_down(catalog.build("unknot0"), "K")
    knotted = catalog.build("trefoil").with_framings({"K": 1})
    with pytest.raises(SurfaceError):
        blow_down(knotted, "K")


def test_delete_components():
    d = delete_components(catalog.build("ring-hooked-trefoil"), ["J"])
    assert d.component_ids() == ["K"]
    assert bracket(d) == bracket(catalog.build("trefoil"))


@pytest.mark.parametrize("slider, over", [("H1", "H2"), ("H2", "H1")])
def test_handle_slide_framing_formula(slider, over):
    h = catalog.build("hopf0")
    arcs = {c: h.component(c).arcs[0] for c in ("H1", "H2")}
    out = handle_slide(h, slider, over, (arcs[slider], arcs[over]))
    f = out.framing(slider)
    assert abs(f) == 2
    assert out.framing(over) == 0
    assert abs(linking_number(out, slider, over)) == 1
    for r in (3, 4):
        mu = make_context(r).mu
        assert abs(z_invariant(out, r).value - mu) < 1e-6


def test_handle_slide_errors():
    h = catalog.build("hopf0")
    with pytest.raises(SurfaceError):
        handle_slide(h, "H1", "H1", ("a", "a"))
    with pytest.raises(SurfaceError):
        handle_slide(h, "H1", "H2", ("b", "a"))


def test_b_entry_is_a_slid_blow_up_pair():
    d = catalog.build("B").diagram
    assert sorted(d.framing(c) for c in d.component_ids()) == [0, 1]


def test_faces_cover_every_arc_side():
    d = catalog.build("trefoil")
    sides = [s for f in faces(d) for s in f]
    assert len(sides) == 2 * len(d.arcs())
    assert len(faces(d)) == 5


def test_reduce_search():
    d = catalog.build("trefoil")
    assert reduce_search(d, lambda code: all(not w for w in code), bound=500) is None
    h = catalog.build("hopf0")
    assert reduce_search(h, lambda code: len(code[0]) == 2) is not None


def test_ring_hooked_presentation():
    K = catalog.build("ring-hooked-trefoil")
    td = ring_hooked_presentation(K, [0])
    assert condition_s_check(td).verified
    assert td.diagram.num_components == 5
    first = td.diagram.component_ids()[0]
    assert td.diagram.framing(first) == -1
    assert ring_hooked_presentation(K, [(0, 1)]).diagram.framing(first) == 1


@pytest.mark.parametrize("switch", [[], [3], [9]])
def test_ring_hooked_unverifiable(switch):
    with pytest.raises(SurfaceError) as e:
        ring_hooked_presentation(catalog.build("ring-hooked-trefoil"), switch)
    assert e.value.verdict == "unverifiable input"


def test_ring_hooked_needs_two_classical_components():
    with pytest.raises(SurfaceError):
        ring_hooked_presentation(catalog.build("trefoil"), [0])
    with pytest.raises(SurfaceError):
        ring_hooked_presentation(catalog.build("virtual-hopf"), [0])


def test_augment_at_virtual_crossings():
    vh = catalog.build("virtual-hopf")
    out = augment_at_virtual_crossings(vh)
    assert out.num_components == 6
    # each pair brings a clasp and a crossing with the strand on its band;
    # the (0,1) curve also meets the (1,0) curve once
    assert out.num_classical == 1 + 3 + 4
    assert augment_at_virtual_crossings(catalog.build("trefoil")) == catalog.build("trefoil")
    r = 3
    assert abs(z_invariant(out, r).value - z_invariant(vh, r).value) < 1e-9
