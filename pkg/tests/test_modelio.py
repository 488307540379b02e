import pytest
from hypothesis import given, settings, strategies as st

from bottchern.bicomplex import Form, FormBasisElement as E, validate_model
from bottchern.exactnum import GaussianRational
from bottchern.modelio import (
    BUILTIN_NAMES,
    ModelParseError,
    ModelSource,
    ModelValidationError,
    builtin_model,
    builtin_source,
    load_model_file,
    parse_model,
    parse_model_bytes,
    serialize_model,
)

from conftest import random_sigma_models, sigma_model

TORUS = "model torus3\ndim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = 0"
IWASAWA = "model iwasawa\ndim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = -1 phi1^phi2"
HEAD = "model x\ndim 3\nd phi1 = 0\nd phi2 = 0\n"


def test_parse_torus():
    m = parse_model(TORUS)
    assert m.name == "torus3" and m.n == 3
    assert m == builtin_model("torus3")


def test_parse_iwasawa():
    m = parse_model(ModelSource(IWASAWA, "inline"))
    assert m.del_phi[2] == Form(3, {E((1, 2), ()): -1})
    assert m.delbar_phi[2] == Form(3)
    assert m == builtin_model("iwasawa")


def test_serialize_torus():
    assert serialize_model(builtin_model("torus3")) == TORUS + "\n"


def test_serialize_complex_literal():
    text = serialize_model(builtin_model("iwasawa_iib"))
    assert "1i phi1^bar2" in text
    assert parse_model(text) == builtin_model("iwasawa_iib")


def test_serialize_orders_terms_and_emits_lf():
    m = parse_model("model y\r\ndim 2\r\nd phi1 = 0\r\nd phi2 = phi1^bar1 + 2 phi1^phi2\r\n")
    assert serialize_model(m) == "model y\ndim 2\nd phi1 = 0\nd phi2 = 2 phi1^phi2 + 1 phi1^bar1\n"


def test_comments_whitespace_and_literals():
    text = (
        "# heading\nmodel  w   # trailing\n\n dim 3\n"
        "d phi1 = 0\nd phi2=0\n"
        "d phi3 = i phi1^phi2 - 1/2i bar1^phi1 + phi1^phi2\n"
    )
    m = parse_model(text)
    assert m.del_phi[2] == Form(3, {E((1, 2), ()): GaussianRational(1, 1)})
    # bar1^phi1 = -phi1^bar1, so the coefficient flips sign
    assert m.delbar_phi[2] == Form(3, {E((1,), (1,)): GaussianRational(0, "1/2")})


@pytest.mark.parametrize(
    "body, line, column, fragment",
    [
        ("d phi3 = 1 bar1^bar2", 5, 17, "(0,2)"),
        ("d phi3 = phi1^phi4", 5, 18, "outside 1..3"),
        ("d phi3 = phi1^phi1", 5, 15, "repeated factor"),
        ("d phi3 = phi1", 5, 10, "degree 1"),
        ("d phi3 = phi1 * phi2", 5, 15, "unexpected character"),
        ("d phi3 = phi1^phi2 +", 5, 21, "dangling"),
        ("d phi3 =", 5, 9, "right-hand side"),
    ],
)
def test_positioned_errors(body, line, column, fragment):
    with pytest.raises(ModelParseError) as info:
        parse_model(HEAD + body)
    e = info.value
    assert (e.line, e.column) == (line, column)
    assert fragment in e.message


def test_duplicate_and_missing_lines():
    with pytest.raises(ModelParseError, match="already defined on line 3"):
        parse_model("model x\ndim 3\nd phi1 = 0\nd phi1 = 0\nd phi3 = 0")
    with pytest.raises(ModelParseError, match="missing equation for d phi2"):
        parse_model("model x\ndim 3\nd phi1 = 0\nd phi3 = 0")


@pytest.mark.parametrize("header", ["modle x\ndim 3\n", "model x\ndim 0\n", "model x\ndim 7\n", "model x\n", ""])
def test_header_errors(header):
    with pytest.raises(ModelParseError):
        parse_model(header)


def test_integrability_failure_names_identity():
    text = "model bad\ndim 3\nd phi1 = phi2^bar3\nd phi2 = 0\nd phi3 = phi1^phi2\n"
    with pytest.raises(ModelValidationError) as info:
        parse_model(ModelSource(text, "bad.cxm"))
    assert "bad.cxm" in str(info.value)
    assert "delbar^2 != 0 on (1,0)-forms" in info.value.report.violations


def test_bytes_entry_point():
    assert parse_model_bytes(TORUS.encode()) == builtin_model("torus3")
    with pytest.raises(ModelParseError, match="UTF-8"):
        parse_model_bytes(b"model x\ndim 3\n\xff")


def test_load_model_file(tmp_path):
    path = tmp_path / "iw.cxm"
    path.write_text(IWASAWA + "\n", encoding="utf-8")
    assert load_model_file(path) == builtin_model("iwasawa")
    with pytest.raises(OSError):
        load_model_file(tmp_path / "missing.cxm")


def test_registry():
    assert builtin_model("torus3").del_phi == builtin_model("torus3").delbar_phi
    assert all(not f for f in builtin_model("torus3").del_phi)
    with pytest.raises(KeyError) as info:
        builtin_model("kodaira")
    for name in BUILTIN_NAMES:
        assert name in str(info.value)
    assert set(BUILTIN_NAMES) == {
        "torus3", "iwasawa", "iwasawa_i", "iwasawa_iia", "iwasawa_iib",
        "iwasawa_iiia", "iwasawa_iiib", "calabi_eckmann"}


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_valid_and_sourced(name):
    assert validate_model(builtin_model(name)).valid
    assert builtin_source(name).origin == f"builtin:{name}"


def test_round_trip_random_sigma():
    for m in random_sigma_models(30, seed=5):
        text = serialize_model(m)
        assert parse_model(text) == m
        assert serialize_model(parse_model(text)) == text


frac = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(frac, frac), min_size=5, max_size=5))
def test_round_trip_property(pairs):
    m = sigma_model(*(GaussianRational(a, b) for a, b in pairs), name="prop")
    assert parse_model(serialize_model(m)) == m
