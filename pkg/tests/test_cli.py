import json
import subprocess
import sys

import pytest

from vkq import catalog
from vkq.cli import EXIT_CAP, EXIT_INPUT, EXIT_MOVE, EXIT_OK, fmt_complex, main
from vkq.surface import condition_s_check, parse_torus_diagram


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fmt_complex():
    assert fmt_complex(1 + 0j) == "1"
    assert fmt_complex(0.70710678 + 0.70710678j) == "0.707107 + 0.707107i"
    assert fmt_complex(0.5 - 0.2071067j) == "0.5 - 0.207107i"
    assert fmt_complex(2j) == "2i"
    assert fmt_complex(1 + 1e-14j) == "1"


def test_invariant_text(capsys):
    code, out, _ = run(capsys, "invariant", "corpus/unknot0.vkd", "--r", "3,4,5")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 3
    assert all("Z=1  " in ln for ln in lines)
    assert lines[0].startswith("unknot0  r=3")


def test_invariant_json(capsys):
    code, out, _ = run(capsys, "invariant", "empty", "--r", "3", "--format", "json")
    assert code == EXIT_OK
    (rec,) = json.loads(out)
    assert rec["z_re"] == pytest.approx(0.707107, abs=5e-5)
    assert rec["conditionS"] == "unknown"


def test_invariant_reports_condition(capsys):
    _, out, _ = run(capsys, "invariant", "X", "--r", "3")
    assert "conditionS=verified" in out


def test_bracket(capsys):
    code, out, _ = run(capsys, "bracket", "trefoil")
    assert code == EXIT_OK and out.strip() == "A^7 + A^3 + A^-1 - A^-9"
    code, out, _ = run(capsys, "bracket", "trefoil", "--r", "4")
    assert code == EXIT_OK and "r=4" in out


def test_missing_file(capsys):
    code, _, err = run(capsys, "invariant", "no/such/file.vkd")
    assert code == EXIT_INPUT
    assert "file not found" in err


def test_parse_error(tmp_path, capsys):
    p = tmp_path / "bad.vkd"
    p.write_text("link bad\ncomp K framing 0\nx+ a b c\n")
    code, _, err = run(capsys, "check", str(p))
    assert code == EXIT_INPUT
    assert "line 3" in err


def test_bad_r_is_an_input_error():
    with pytest.raises(SystemExit) as e:
        main(["invariant", "empty", "--r", "2"])
    assert e.value.code == 2


def test_cap(monkeypatch, capsys):
    monkeypatch.setenv("VKQ_MAX_CROSSINGS", "5")
    code, _, err = run(capsys, "invariant", "trefoil", "--r", "4")
    assert code == EXIT_CAP
    assert "cap" in err


def test_check(capsys):
    code, out, _ = run(capsys, "check", "A2")
    assert code == EXIT_OK
    assert "parse ok: A2" in out
    assert "condition S: verified" in out
    assert "linking matrix:" in out and "winding matrix:" in out
    _, out, _ = run(capsys, "check", "A1")
    assert "condition S: not verified" in out
    assert "projected virtual crossings: 3" in out or "projected virtual crossings:" in out


def test_moves_script(tmp_path, capsys):
    script = tmp_path / "s.txt"
    script.write_text("# add a blow-up circle\nblow_up +1\nR1+ t1\n")
    out = tmp_path / "o.vkd"
    code, _, err = run(capsys, "moves", "trefoil", str(script), "-o", str(out), "--check-z", "--r", "3")
    assert code == EXIT_OK
    assert "unchanged" in err
    d = parse_torus_diagram(out.read_text()).diagram
    assert d.num_components == 2


def test_moves_o3_script(tmp_path, capsys):
    script = tmp_path / "s.txt"
    script.write_text("o3 1 0\no3 0 1\n")
    out = tmp_path / "o.vkd"
    assert run(capsys, "moves", "C", str(script), "-o", str(out))[0] == EXIT_OK
    assert condition_s_check(parse_torus_diagram(out.read_text())).verified


def test_moves_bad_site(tmp_path, capsys):
    script = tmp_path / "s.txt"
    script.write_text("R1+ t1\nR2 nope t2 + 0\n")
    code, _, err = run(capsys, "moves", "trefoil", str(script))
    assert code == EXIT_MOVE
    assert "line 2" in err


def test_moves_missing_script(capsys):
    assert run(capsys, "moves", "trefoil", "no_such_script.txt")[0] == EXIT_INPUT


def test_augment(tmp_path, capsys):
    out = tmp_path / "a.vkd"
    code, _, err = run(capsys, "augment", "A1", "-o", str(out))
    assert code == EXIT_OK
    assert "condition S: verified" in err
    td = parse_torus_diagram(out.read_text())
    assert td.diagram.num_components == 3


def test_augment_virtual(tmp_path, capsys):
    out = tmp_path / "a.vkd"
    assert run(capsys, "augment", "virtual-hopf", "--virtual", "-o", str(out))[0] == EXIT_OK
    assert parse_torus_diagram(out.read_text()).diagram.num_components == 6


def test_augment_bad_generator(capsys):
    assert run(capsys, "augment", "C", "--generator", "2,0")[0] == EXIT_MOVE


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "vkq", "invariant", "unknot0"], capture_output=True, text=True)
    assert p.returncode == 0
    assert "Z=1" in p.stdout
