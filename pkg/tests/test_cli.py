import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symsum import homology as hom
from symsum.homology import HomologyError
from symsum.cli import ParseError, main, parse_class, parse_manifold
from symsum.torusbundle import PATTERNS, FamilyTag, TorusBundle, format_bundle, mpow, parse_bundle, parse_tag, sl2_range


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def records(capsys, *argv):
    code, out, _ = run(capsys, "--format", "records", *argv)
    return code, [json.loads(line) for line in out.splitlines()]


def test_parse_manifold():
    assert parse_manifold("CP2") == hom.CP2Blowup(0)
    assert parse_manifold("CP2#9") == parse_manifold("E1") == hom.E1
    assert parse_manifold("S2xS2") == hom.S2xS2()
    assert parse_manifold("S2xT2#3") == hom.RuledTrivial(1, 3)
    assert parse_manifold("S2~xT2") == hom.RuledTwisted(1)
    for bad in ("CP2#x", "CP3", "S2xT2#", ""):
        with pytest.raises(ParseError):
            parse_manifold(bad)


def test_parse_class():
    X = hom.CP2Blowup(2)
    assert parse_class("[3, -1, -1]", X) == hom.anticanonical(X)
    with pytest.raises(HomologyError):
        parse_class("[3,-1]", X)
    with pytest.raises(ParseError):
        parse_class("3,-1,-1", X)


def test_invariants(capsys):
    code, [r] = records(capsys, "invariants", "CP2#9")
    assert code == 0
    assert (r["chi"], r["sigma"], r["c1sq"], r["genus"]) == (12, -8, 0, 1)
    assert r["anticanonical_coeffs"] == [3] + [-1] * 9
    code, [r] = records(capsys, "invariants", "S2xS2")
    assert r["c1sq"] == 8


def test_invariants_parse_error(capsys):
    code, out, err = run(capsys, "invariants", "CP2#x")
    assert code == 2 and out == "" and "parse error" in err


def test_classify_k3(capsys):
    code, [r] = records(capsys, "classify", "CP2#4", "CP2#14")
    assert code == 0
    assert r["verdict"] == "K3" and len(r["trades"]) == 5
    assert (r["chi"], r["sigma"]) == (24, -16)
    code, out, _ = run(capsys, "classify", "CP2#4", "CP2#14")
    assert "K3 surface" in out


def test_classify_bundles(capsys):
    code, [r] = records(capsys, "classify", "S2xT2", "S2~xT2", "--bound", "2")
    assert code == 0
    assert r["families"] == [str(PATTERNS[4]), str(PATTERNS[5])]
    assert all(w["b1"] == 2 for w in r["witnesses"])


def test_classify_negative(capsys):
    code, [r] = records(capsys, "classify", "CP2#3", "CP2#3")
    assert code == 4
    assert r["reason"] == "c1^2 = 12 != 0"


def test_classify_class_override(capsys):
    code, [r] = records(capsys, "classify", "S2xT2", "CP2#9", "--F1", "[1,0]")
    assert code == 4 and r["verdict"] == "HYPOTHESIS_FAILURE"
    # a well-formed vector of the wrong length is a domain error, a malformed one a parse error
    code, _, _ = run(capsys, "classify", "S2xT2", "CP2#9", "--F1", "[1,0,0]")
    assert code == 3
    code, _, _ = run(capsys, "classify", "S2xT2", "CP2#9", "--F1", "1,0")
    assert code == 2


def test_normalform(capsys):
    code, [r] = records(capsys, "normalform", "M([[-1,1],[0,-1]],[[1,-1],[0,1]];(0,0))")
    assert code == 0
    assert r["tag"] == "M(-I,[[1,2y+1],[0,1]];(0,0))[y=0]"
    t = r["trace"]
    assert (t["z"], t["p"], t["q"], t["r"], t["s"]) == (1, -1, 0, 1, -1)


def test_normalform_domain_error(capsys):
    code, _, err = run(capsys, "normalform", "M(I,I;(0,0))")
    assert code == 3 and err


def test_bundle_syntax_error(capsys):
    code, _, _ = run(capsys, "h1", "M([[1,0],[0,1]];(0,0))")
    assert code == 2
    code, _, _ = run(capsys, "h1", "M([[2,0],[0,1]],I;(0,0))")
    assert code == 3


def test_h1(capsys):
    code, [r] = records(capsys, "h1", "M(I,I;(0,1))")
    assert code == 0 and r["rank"] == 3


def test_glue(capsys):
    code, [r] = records(capsys, "glue", "--j", "0", "--k", "0", "--form", "even", "--params", "0,0,1,0,0")
    assert code == 0
    assert r["abelianization"] == r["h1"] == "Z^2 + Z/2 + Z/2"
    code, _, _ = run(capsys, "glue", "--j", "0", "--k", "0", "--form", "even", "--params", "1,1,1,0,0")
    assert code == 3
    code, _, _ = run(capsys, "glue", "--j", "0", "--k", "0", "--form", "even", "--params", "1,1")
    assert code == 2


def test_enumerate(capsys):
    code, [r] = records(capsys, "enumerate", "--j", "0", "--k", "1", "--bound", "2")
    assert code == 0
    assert r["families"] == [str(PATTERNS[4]), str(PATTERNS[5])]


def test_enumerate_emit_presentations(capsys):
    code, recs = records(capsys, "enumerate", "--j", "1", "--k", "1", "--bound", "1", "--emit-presentations")
    assert code == 0
    assert len(recs) > 1
    assert all(r["abelianization"] == r["h1"] for r in recs[1:])


def test_involution(capsys):
    code, [r] = records(capsys, "involution", "[[1,0],[1,1]]")
    assert code == 0
    assert r["kind"] == "FreeInvolution" and r["translation"] == ["0", "1/2"]
    code, _, _ = run(capsys, "involution", "[[1,1],[1,1]]")
    assert code == 3


def test_missing_subcommand_is_a_parse_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ("classify", "S2xT2", "S2xT2", "--bound", "1"),
        ("enumerate", "--j", "1", "--k", "0", "--bound", "1"),
        ("normalform", "M([[-1,3],[0,-1]],[[-1,5],[0,-1]];(0,1))"),
        ("invariants", "S2~xT2"),
    ],
)
def test_deterministic(capsys, argv):
    first = run(capsys, "--format", "records", *argv)
    second = run(capsys, "--format", "records", *argv)
    assert first == second


SL2 = list(sl2_range(2))


@st.composite
def bundles(draw):
    A = draw(st.sampled_from(SL2))
    n = draw(st.integers(-3, 3))
    B = mpow(A, n)
    v = (draw(st.integers(-5, 5)), draw(st.integers(-5, 5)))
    return TorusBundle(A, B, v)


@given(bundles())
@settings(max_examples=200, deadline=None)
def test_bundle_literal_round_trip(b):
    assert parse_bundle(format_bundle(b)) == b


@given(st.sampled_from(PATTERNS), st.integers(0, 50))
def test_tag_literal_round_trip(pattern, param):
    t = FamilyTag(pattern, param)
    assert parse_tag(str(t)) == t
