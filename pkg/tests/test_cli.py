"""Tests for the command-line layer: parsing, documents, verification."""

import json
from fractions import Fraction

import pytest

from arithdyn.cli import (
    MapDefinition,
    ParseError,
    canonical_json,
    family_document,
    main,
    make_document,
    parse_map,
    parse_polynomial,
    verify_document,
)
from arithdyn.canonical import certify_morphism
from arithdyn.certify import HeightRatioContext, family_builder
from arithdyn.heights import ProjPoint


# ---------------------------------------------------------------------------
# expression and map parsing
# ---------------------------------------------------------------------------

def test_parse_polynomial_exact_rationals():
    p = parse_polynomial("1/2*x^2 - 3*y + 7", ("x", "y"))
    assert p.coefficient((2, 0)) == Fraction(1, 2)
    assert p.coefficient((0, 1)) == -3
    assert p.coefficient((0, 0)) == 7


def test_parse_polynomial_parentheses_and_unary():
    p = parse_polynomial("-(x - y)^2", ("x", "y"))
    assert p.coefficient((2, 0)) == -1
    assert p.coefficient((1, 1)) == 2
    assert p.coefficient((0, 2)) == -1


def test_parse_map_projective():
    d = parse_map("P1; X,Y; X^2+Y^2, Y^2")
    assert d.kind == "projective" and d.dim == 1
    m = d.to_selfmap()
    assert m.degree == 2


def test_parse_map_affine_normal_form():
    d = parse_map("A2; x,y; y+1, x*y+1")
    m = d.to_selfmap()
    assert m.is_affine and m.degree == 2


def test_parse_map_unknown_variable_reports_position():
    with pytest.raises(ParseError) as exc:
        parse_map("P1; X,Y; X^2, X*Y + Z")
    assert "Z" in str(exc.value)
    assert "column" in str(exc.value)


def test_parse_map_inhomogeneous_rejected():
    with pytest.raises(ParseError):
        parse_map("P1; X,Y; X^2+Y, Y^2")


def test_parse_map_wrong_component_count():
    with pytest.raises(ParseError):
        parse_map("P2; X,Y,Z; X^2, Y^2")


def test_roundtrip_definitions():
    corpus = [
        "P1; X,Y; X^2+Y^2, Y^2",
        "A2; x,y; y+1, x*y+1",
        "A2; x,y; y, x^2+1",
        "P2; X,Y,Z; Y*Z, X*Z, X*Y",
        "P1; s,t; 2*s^3 - 1/3*t^3, s*t^2",
        "A2; u,v; v^2 - 3*u, u*(u - v) + 5/7",
    ]
    for text in corpus:
        first = parse_map(text)
        second = parse_map(first.format())
        assert first == second, text


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

MAP_TEXT = "P1; X,Y; X^2, Y^2"


def _family_doc():
    d = parse_map(MAP_TEXT)
    cert = certify_morphism(d.to_selfmap())
    fam = family_builder(HeightRatioContext(cert), 3)
    return family_document(MAP_TEXT, fam, {"scheme": "height-ratio", "size": "3"})


def test_document_verifies():
    doc = _family_doc()
    assert verify_document(doc) == []


def test_document_deterministic_bytes():
    a = canonical_json(_family_doc())
    b = canonical_json(_family_doc())
    assert a == b


def test_document_digest_catches_any_tamper():
    doc = _family_doc()
    blob = canonical_json(doc)
    # flip one digit inside some payload integer
    idx = blob.find('"K":"')
    assert idx != -1
    pos = idx + len('"K":"')
    flipped = blob[:pos] + ("7" if blob[pos] != "7" else "8") + blob[pos + 1:]
    tampered = json.loads(flipped)
    issues = verify_document(tampered)
    assert issues and "digest" in issues[0]


def test_document_logical_recheck_catches_consistent_retamper():
    # re-digesting after a tamper defeats the digest but not the re-checks
    doc = _family_doc()
    entry = next(e for e in doc["certificates"] if e["kind"] == "disjointness")
    entry["payload"]["K"] = str(int(entry["payload"]["K"]) + 1)
    from arithdyn.cli import _digest
    doc["reproduction"]["digest"] = _digest(doc["subject"], doc["certificates"])
    issues = verify_document(doc)
    assert issues
    assert any("K" in i or "exponent" in i for i in issues)


def test_unknown_schema_rejected():
    doc = _family_doc()
    doc["schema_version"] = "99"
    assert verify_document(doc) != []


# ---------------------------------------------------------------------------
# subcommands end to end
# ---------------------------------------------------------------------------

@pytest.fixture()
def fib_map(tmp_path):
    p = tmp_path / "fib.map"
    p.write_text("A2; x,y; y+1, x*y+1\n")
    return str(p)


@pytest.fixture()
def squaring_map(tmp_path):
    p = tmp_path / "squaring.map"
    p.write_text("P1; X,Y; X^2, Y^2\n")
    return str(p)


def test_cli_delta(fib_map, capsys):
    assert main(["delta", "--map", fib_map, "--iters", "8"]) == 0
    out = capsys.readouterr().out
    assert "[2, 3, 5, 8, 13, 21, 34, 55]" in out


def test_cli_stable(fib_map, capsys):
    assert main(["stable", "--map", fib_map, "--iters", "4"]) == 0
    assert "drop at iterate 2" in capsys.readouterr().out


def test_cli_canht_and_document(squaring_map, tmp_path, capsys):
    out = tmp_path / "height.json"
    code = main(["canht", "--map", squaring_map, "--point", "2,1",
                 "--width", "1e-12", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert verify_document(doc) == []


def test_cli_alpha(squaring_map, capsys):
    assert main(["alpha", "--map", squaring_map, "--point", "2,1"]) == 0
    out = capsys.readouterr().out
    assert "exactly 2" in out


def test_cli_count(capsys):
    assert main(["count", "--dim", "1", "--bound", "10,20"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3


def test_cli_family_document_verifies(squaring_map, tmp_path):
    out = tmp_path / "family.json"
    code = main(["family", "--map", squaring_map, "--scheme", "height-ratio",
                 "--size", "3", "--out", str(out)])
    assert code == 0
    assert main(["verify", "--in", str(out)]) == 0


def test_cli_family_tamper_fails(squaring_map, tmp_path, capsys):
    out = tmp_path / "family.json"
    main(["family", "--map", squaring_map, "--size", "2", "--out", str(out)])
    blob = out.read_text()
    idx = blob.find('"K":"')
    pos = idx + len('"K":"')
    blob = blob[:pos] + ("9" if blob[pos] != "9" else "8") + blob[pos + 1:]
    out.write_text(blob)
    assert main(["verify", "--in", str(out)]) == 1


def test_cli_prime_degree_family(squaring_map, tmp_path):
    out = tmp_path / "pd.json"
    code = main(["family", "--map", squaring_map, "--scheme", "prime-degree",
                 "--size", "2", "--out", str(out)])
    assert code == 0
    assert main(["verify", "--in", str(out)]) == 0


def test_cli_elliptic_ops(capsys, tmp_path):
    assert main(["elliptic", "--curve", "0,2", "--op", "nt-height",
                 "--point=-1,1"]) == 0
    assert main(["elliptic", "--curve", "0,1", "--op", "torsion",
                 "--point", "2,3"]) == 0
    assert "order 6" in capsys.readouterr().out
    assert main(["elliptic", "--curve", "0,2", "--op", "quadraticity",
                 "--point=-1,1", "--mult", "2"]) == 0
    out = tmp_path / "ec.json"
    assert main(["elliptic", "--curve", "0,2", "--op", "family",
                 "--point=-1,1", "--mult", "2", "--size", "3",
                 "--out", str(out)]) == 0
    assert main(["verify", "--in", str(out)]) == 0


def test_cli_quad_ops(tmp_path, capsys):
    m = tmp_path / "parab.map"
    m.write_text("A2; x,y; x^2+y, x\n")
    assert main(["quad", "--op", "analyze", "--map", str(m)]) == 0
    assert "collapsing-fixed" in capsys.readouterr().out
    assert main(["quad", "--op", "growth", "--map", str(m),
                 "--point", "1/2,1", "--iters", "3"]) == 0
    assert "[1, 2, 4, 8]" in capsys.readouterr().out
    out = tmp_path / "quadfam.json"
    assert main(["quad", "--op", "family", "--form", "xy-mix:1,1",
                 "--prime", "2", "--size", "3", "--out", str(out)]) == 0
    assert main(["verify", "--in", str(out)]) == 0


def test_cli_error_exit_code(tmp_path):
    bad = tmp_path / "bad.map"
    bad.write_text("P1; X,Y; X^2, X*Y + Z\n")
    assert main(["delta", "--map", str(bad)]) == 1
