import json

import pytest

from bvtensor import bimodules as bm
from bvtensor import io
from bvtensor.axial import column_axial, power_operad
from bvtensor.cli import FAILED, INVALID, OK, PARSE, USAGE, main, term
from bvtensor.operads import as_operad, com_operad
from bvtensor.samples import from_orbits
from bvtensor.symseq import point_seq

SEQ = from_orbits({1: ["point"], 2: ["regular", "sign"], 3: ["natural"]}, 3, "X")


def docs():
    Z2 = power_operad(range(2), lambda a, b: (a + b) % 2, 0, 3, "RZ2")
    S = bm.constant_bimodule(com_operad(3), com_operad(3), (0, 1), lambda a, b: a * b, 3, "S2")
    return [io.Document("sequence", SEQ), io.Document("operad", as_operad(3)),
            io.Document("operad", com_operad(4)), io.Document("bimodule", S, {"over": ("com", "com")}),
            io.Document("axial", (Z2, column_axial(Z2, 2)))]


@pytest.mark.parametrize("doc", docs(), ids=lambda d: d.kind)
def test_round_trip(doc):
    text = io.save_text(doc)
    again = io.parse(text)
    assert again.kind == doc.kind
    assert io.save_text(again) == text


def test_comments_and_blank_lines():
    text = io.save_text(io.Document("sequence", SEQ))
    noisy = "# a comment\n\n" + text.replace("\n", "   # trailing\n", 1)
    assert io.save_text(io.parse(noisy)) == text


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_bad_generator_table_is_a_validation_error(tmp_path):
    text = io.save_text(io.Document("sequence", point_seq(2, cap=2)))
    # the image of s_1 is not a permutation of the single element
    broken = text.replace("gen 2 1 0", "gen 2 1 1")
    assert broken != text
    with pytest.raises(io.ValidationError):
        io.parse(broken)
    assert main(["validate", _write(tmp_path, "bad.txt", broken)]) == INVALID


def test_broken_operad_is_a_validation_error(tmp_path):
    text = io.save_text(io.Document("operad", as_operad(3)))
    lines = text.splitlines()
    i = next(j for j, l in enumerate(lines) if l.startswith("comp 2 0 2:0 1:0 ="))
    head, val = lines[i].rsplit("=", 1)
    lines[i] = f"{head}= {(int(val) + 1) % 6}"
    path = _write(tmp_path, "bad.txt", "\n".join(lines) + "\n")
    assert main(["validate-operad", path]) == INVALID


@pytest.mark.parametrize("text", ["kind widget\nend\n", "kind sequence\ncap x\nend\n", "arity 1 1\n"])
def test_parse_errors(tmp_path, text):
    with pytest.raises(io.ParseError):
        io.parse(text)
    assert main(["validate", _write(tmp_path, "bad.txt", text)]) == PARSE


def test_usage_errors(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "missing.txt")]) == USAGE
    seq = _write(tmp_path, "x.txt", io.save_text(io.Document("sequence", SEQ)))
    assert main(["oracle", "--kind", "box", seq]) == USAGE
    assert main(["check", "--only", "no-such-check"]) == USAGE
    assert main(["tensor", "com", "nonsense"]) == USAGE
    with pytest.raises(SystemExit) as e:
        main(["product", "--kind", "smash", seq, seq])
    assert e.value.code == 2


def test_wrong_kind_is_a_parse_error(tmp_path):
    seq = _write(tmp_path, "x.txt", io.save_text(io.Document("sequence", SEQ)))
    assert main(["validate", "--kind", "operad", seq]) == PARSE
    assert main(["gamma-axial", "-n", "2", seq]) == PARSE


# -- commands ----------------------------------------------------------------------
@pytest.fixture
def files(tmp_path):
    def put(name, doc):
        return _write(tmp_path, name, io.save_text(doc))
    return {"pt2": put("pt2.txt", io.Document("sequence", point_seq(2, cap=6))),
            "pt3": put("pt3.txt", io.Document("sequence", point_seq(3, cap=6))),
            "x": put("x.txt", io.Document("sequence", SEQ)),
            "axial": put("ax.txt", docs()[-1]),
            "out": str(tmp_path / "out.txt")}


def test_product_table(files, capsys):
    assert main(["product", "--kind", "box", files["pt2"], files["pt3"], "--cap", "6", "--table"]) == OK
    rows = dict(l.split() for l in capsys.readouterr().out.splitlines())
    assert rows["6"] == "60" and rows.get("5", "0") == "0"


def test_product_writes_a_document(files):
    assert main(["product", "--kind", "graded", files["x"], files["x"], "-o", files["out"]]) == OK
    assert io.load(files["out"]).kind == "sequence"


def test_gamma(files, capsys):
    assert main(["gamma", "-n", "2", files["pt2"], "--cap", "3", "--table"]) == OK
    assert capsys.readouterr().out.splitlines()[0] == "1 1"  # the fixed point of pt2(2)


def test_gamma_axial(files, capsys):
    assert main(["gamma-axial", "-n", "2", files["axial"], "-o", files["out"]]) == OK
    assert capsys.readouterr().out.startswith("# unit:")
    P, ax = io.load(files["out"]).payload
    assert ax.n == 1
    assert main(["gamma-axial", "-n", "3", files["axial"]]) == USAGE


def test_tensor(files, capsys):
    assert main(["tensor", "com", "com", "--cap", "3", "-o", files["out"]]) == OK
    out = capsys.readouterr().out.splitlines()
    assert "2 2" in out and "3 8" in out
    assert any(l.strip().startswith(("L", "R")) for l in out)
    assert io.load(files["out"]).payload.carrier.sizes() == {0: 0, 1: 1, 2: 2, 3: 8}


def test_free_bimodule_and_lift(files, capsys, tmp_path):
    f1 = str(tmp_path / "f1.txt")
    assert main(["free-bimodule", "com", "j", files["x"], "--cap", "2", "-o", f1]) == OK
    assert main(["lift-tensor", f1, f1, "--table"]) == OK
    assert capsys.readouterr().out.strip()


def test_oracle_compare(files, capsys):
    assert main(["oracle", "--kind", "circ", files["x"], files["x"], "--compare"]) == OK
    assert "agree" in capsys.readouterr().out
    assert main(["oracle", "--kind", "box", files["pt2"], files["pt3"], "--cap", "6"]) == OK


def test_oracle_compare_reports_a_mismatch(files, monkeypatch, capsys):
    from bvtensor import products
    real = products.box
    monkeypatch.setattr(products, "box", lambda X, Y, cap, **kw: real(X, X, cap, **kw))
    assert main(["oracle", "--kind", "box", files["pt2"], files["pt3"], "--cap", "6", "--compare"]) == FAILED


def test_check_json(capsys):
    assert main(["check", "--only", "bv-sanity/unit", "--json"]) == OK
    report = json.loads(capsys.readouterr().out)
    assert [c["name"] for c in report["checks"]] == ["bv-sanity/unit"]


def test_term():
    assert term((1, 0, 0, ((0, 1), (1, 1, 0, ((0, 2), (0, 3)))))) == "L0(1,R0(2,3))"
