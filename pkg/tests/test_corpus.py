import pytest

from vkq import catalog
from vkq.surface import condition_s_check, parse_torus_diagram
from vkq.wrt import z_invariant

MANIFEST = catalog.load_manifest()
ENTRIES = {e["name"]: e for e in MANIFEST["entries"]}


def test_every_builder_has_a_file_and_an_entry():
    assert set(ENTRIES) == set(catalog.builders)
    for name in catalog.builders:
        assert (catalog.CORPUS_DIR / f"{name}.vkd").is_file()


@pytest.mark.parametrize("name", sorted(catalog.builders))
def test_files_match_the_constructions(name):
    text = (catalog.CORPUS_DIR / f"{name}.vkd").read_text()
    assert text == catalog.render(catalog.build(name))


@pytest.mark.parametrize("name", sorted(catalog.builders))
def test_files_round_trip(name):
    text = (catalog.CORPUS_DIR / f"{name}.vkd").read_text()
    td = parse_torus_diagram(text)
    assert catalog.render(td if td.wraps else td.diagram) == text


def test_manifest_matches_the_catalog(tmp_path):
    catalog.write_corpus(tmp_path)
    assert catalog.load_manifest(tmp_path) == MANIFEST


@pytest.mark.parametrize("name", sorted(n for n, e in ENTRIES.items() if "conditionS" in e))
def test_condition_verdicts(name):
    td = parse_torus_diagram((catalog.CORPUS_DIR / f"{name}.vkd").read_text())
    assert condition_s_check(td).verdict == ENTRIES[name]["conditionS"]["verdict"]


def test_provenance_tags():
    tags = {c["provenance"] for e in MANIFEST["entries"] for c in e["expected"].values()}
    assert tags <= {"PAPER", "DERIVED"}
    for e in MANIFEST["entries"]:
        if "conditionS" in e:
            assert e["conditionS"]["provenance"] in {"PAPER", "DERIVED", "TRIVIAL"}


@pytest.mark.parametrize("name", ["unknot0", "empty", "hopf0", "Y", "C", "B"])
def test_small_expected_values(name):
    td = parse_torus_diagram((catalog.CORPUS_DIR / f"{name}.vkd").read_text())
    subject = td if td.wraps else td.diagram
    for r, cell in ENTRIES[name]["expected"].items():
        z = z_invariant(subject, int(r), cap=64).value
        assert abs(z - complex(cell["re"], cell["im"])) <= cell["tol"], (name, r)


def test_table_rows():
    labels = [row.label for row in catalog.TABLE_ROWS]
    assert labels == ["L1, L2", "L3, L4, Q, X, Y, A, B, C", "A1", "A2, J1", "J2", "R"]
    for row in catalog.TABLE_ROWS:
        for m in row.members:
            assert m in catalog.builders
    assert catalog.MU_PRINTED[5] == 0.37148


def test_unknown_entry():
    with pytest.raises(KeyError):
        catalog.build("nope")
