import io
import json
import subprocess
import sys

import pytest

from conftest import ALL_FIXTURES, fixture_path, setup_for
from wblowup import blowup as bl
from wblowup.iface.cli import main
from wblowup.iface.dsl import DslError, parse_setup, render_setup
from wblowup.iface.render import PieceTable, dumps, render, smith_json
from wblowup.gring import GradedRing
from wblowup.polyring import parse_poly

M12 = fixture_path("m12").read_text()


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


# -- parser -----------------------------------------------------------------------

def test_m12_document_is_valid():
    s = parse_setup(M12)
    assert s.truncation == 8 and s.codim == 2
    assert str(s.P) == "24*t^2"


def test_toric_document_top_chern():
    s = setup_for("toric")
    assert s.P == parse_poly("(x+2*t)*(x+3*t) - x^2", s.ext_x.sig)
    assert s.ext_x.equal(s.P, parse_poly("(x+2*t)*(x+3*t)", s.ext_x.sig))


def test_truncate_defaults_to_codim_plus_four():
    assert parse_setup(M12.replace("truncate 8\n", "")).truncation == 6


def test_module_gens_default():
    s = parse_setup(M12)
    assert len(s.pushforward.generators) == 1 and s.pushforward.generators[0] == 1


@pytest.mark.parametrize("edit,section,where", [
    (lambda t: t.replace("codim 2\n", ""), "codim", None),
    (lambda t: t.replace("24*y^3", "24*y^3 $"), "ring Y", (4, 15)),
    (lambda t: t.replace("y -> 0", "z -> 0"), "pullback", (7, 3)),
    (lambda t: t.replace("rels 24*y^3", "rels y^3 + y"), "ring Y", (4, 8)),
    (lambda t: t.replace("codim 2", "codim two"), "codim", (8, 7)),
    (lambda t: t.replace("gens y:1", "gens t:1"), "ring Y", (3, 8)),
    (lambda t: t.replace("mu1 -> 24*y^2", "mu1 -> 24*y"), "pushforward", None),
    (lambda t: t.replace("weight 6", "weight 0"), "bundle", None),
])
def test_parse_errors_name_the_section(edit, section, where):
    with pytest.raises(DslError) as info:
        parse_setup(edit(M12))
    msg = str(info.value)
    assert section in msg
    if where is not None:
        assert (info.value.line, info.value.column) == where
        assert f"line {where[0]}" in msg


def test_validation_failure_points_at_section():
    bad = fixture_path("conic").read_text().replace("chern 4*x", "chern 3*x")
    with pytest.raises(DslError) as info:
        parse_setup(bad)
    assert info.value.section == "pushforward" and "self-intersection" in str(info.value)
    assert info.value.line is not None


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_round_trip(name):
    s = setup_for(name)
    again = parse_setup(render_setup(s))
    assert render_setup(again) == render_setup(s)
    assert again.ring_y.sig == s.ring_y.sig and again.ring_y.relations == s.ring_y.relations
    assert again.ring_x.sig == s.ring_x.sig and again.ring_x.relations == s.ring_x.relations
    assert again.pullback.images == s.pullback.images
    assert again.pushforward == s.pushforward
    assert again.P == s.P and again.Q == s.Q and again.truncation == s.truncation


# -- rendering ---------------------------------------------------------------------

def test_render_examples():
    pres = bl.keel_presentation(setup_for("m12"))
    assert render(pres.ring) == "Z[y,t]/(t*y, 24*t^2 + 24*y^2)\n"
    assert dumps(smith_json(2, bl.blowup_graded_piece(setup_for("m12"), 2))) == \
        '{"degree":2,"free_rank":1,"torsion":[24]}'
    assert render(GradedRing.point()) == "Z\n"


def test_json_presentation_schema():
    code, out, _ = run("--format", "json", "keel", fixture_path("m12"))
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "keel" and doc["valid_through"] == 8
    assert doc["presentation"]["generators"] == [{"degree": 1, "name": "y"},
                                                 {"degree": 1, "name": "t"}]
    assert doc["presentation"]["relations"][0] == [{"coefficient": 1,
                                                    "monomial": {"t": 1, "y": 1}}]
    assert doc["pieces"][2] == {"degree": 2, "free_rank": 1, "torsion": [24]}


def test_piece_table_text():
    table = PieceTable(tuple(bl.blowup_graded_piece(setup_for("m12"), k) for k in range(4)))
    assert render(table) == "A^0 = Z\nA^1 = Z^2\nA^2 = Z + Z/24\nA^3 = Z/24 + Z/24\n"


# -- command line ---------------------------------------------------------------------

def test_cli_keel():
    code, out, _ = run("keel", fixture_path("m12"))
    assert code == 0 and out.splitlines()[0] == "Z[y,t]/(t*y, 24*t^2 + 24*y^2)"


def test_cli_gysin():
    assert run("gysin", fixture_path("m12"), "--class", "1")[:2] == (0, "24*t\n")
    code, out, _ = run("gysin", fixture_path("ptad"), "--class", "1")
    assert code == 0 and out == "6*t + 3*x1 + 2*x2\n"


def test_cli_verify():
    code, out, _ = run("verify", fixture_path("toric"), "--degree", "3")
    assert code == 0 and out == "degree 3: exact\nexact\n"


def test_cli_blowup_reports_model():
    code, out, _ = run("blowup", fixture_path("conic"))
    assert code == 0 and "model: general (i* not surjective in degree 1)" in out
    code, out, _ = run("blowup", fixture_path("m12"))
    assert code == 0 and "model: keel" in out


def test_cli_pbundle_and_pieces():
    code, out, _ = run("pbundle", fixture_path("p234"))
    assert code == 0 and out.splitlines()[0] == "Z[t]/(24*t^3)"
    code, out, _ = run("pieces", fixture_path("m12"), "--max-degree", "2")
    assert code == 0 and out == "A^0 = Z\nA^1 = Z^2\nA^2 = Z + Z/24\n"


def test_cli_global_flags_before_command():
    code, out, _ = run("--format", "json", "--max-degree", "2", "pieces", fixture_path("m12"))
    assert code == 0 and len(json.loads(out)) == 3


def test_cli_chern():
    code, out, _ = run("chern", fixture_path("p11"), "--total-chern-y", "(1+y)^3")
    assert code == 0 and out.splitlines()[-1] == "in A*(Y)[t]: -4*t^2 + t + 3*y + 1"


@pytest.mark.parametrize("argv,needle", [
    (["frobnicate", "x.wb"], "invalid choice"),
    (["keel"], "the following arguments are required"),
    (["keel", "fixtures/m12.wb", "--bogus"], "unrecognized arguments"),
    ([], "usage"),
    (["keel", "no/such/file.wb"], "No such file"),
    (["gysin", "fixtures/m12.wb", "--class", "y"], "--class"),
    (["gysin", "fixtures/m12.wb", "--class", "1 +"], "--class"),
    (["keel", "fixtures/conic.wb"], "not surjective"),
    (["pieces", "fixtures/m12.wb", "--format", "xml"], "invalid choice"),
])
def test_cli_input_errors_exit_1(argv, needle, monkeypatch):
    monkeypatch.chdir(fixture_path("m12").parent.parent)
    code, out, err = run(*argv)
    assert code == 1 and out == ""
    assert needle in err


def test_cli_bad_document_names_location(tmp_path):
    bad = tmp_path / "bad.wb"
    bad.write_text(M12.replace("y -> 0", "z -> 0"))
    code, _, err = run("keel", bad)
    assert code == 1 and "line 7" in err and "pullback" in err


@pytest.mark.parametrize("argv", [
    ["blowup", "fixtures/m12.wb"],
    ["--format", "json", "blowup", "fixtures/conic.wb"],
    ["chern", "fixtures/ptad.wb", "--total-chern-y", "(1+x1)*(1+x2)", "--format", "json"],
    ["verify", "fixtures/p11.wb", "--format", "json"],
])
def test_cli_output_is_deterministic(argv, monkeypatch):
    root = fixture_path("m12").parent.parent
    monkeypatch.chdir(root)
    first = run(*argv)
    assert first[0] == 0 and first == run(*argv)
    proc = subprocess.run([sys.executable, "-m", "wblowup", *argv], cwd=root,
                          capture_output=True, text=True, env={"PYTHONHASHSEED": "123",
                                                               "PATH": ""})
    assert proc.returncode == 0 and proc.stdout == first[1]


def test_cli_exit_2_on_nonexact(monkeypatch):
    broken = lambda s, k: bl.ExactnessReport(k, True, True, True, k != 2)  # noqa: E731
    monkeypatch.setattr(bl, "verify_key_sequence", broken)
    code, out, _ = run("verify", fixture_path("m12"))
    assert code == 2 and "implementation bug" in out and out.endswith("NOT exact\n")


def test_cli_exit_2_on_invariant_violation(monkeypatch):
    from wblowup.errors import InvariantViolation

    def boom(s):
        raise InvariantViolation("generators do not span A^3 of the blow-up")
    monkeypatch.setattr(bl, "general_presentation", boom)
    code, _, err = run("blowup", fixture_path("conic"))
    assert code == 2 and "invariant" in err
