"""Concrete syntax: parsing, formatting, and their round trip."""

import pytest
from hypothesis import given, strategies as st

from ddrs.syntax import ParseError, format_term, parse_term
from ddrs.terms import App, Var


@pytest.mark.parametrize("text,expected", [
    ("0", App("0", ())),
    ("x", Var("x")),
    ("S(0)", App("S", (App("0", ()),))),
    ("-(x)", App("-", (Var("x"),))),
    ("x :b0", App(":b0", (Var("x"),))),
    ("x :d9", App(":d9", (Var("x"),))),
    ("(x ^b y)", App("^b", (Var("x"), Var("y")))),
    ("x + y", App("+", (Var("x"), Var("y")))),
    ("x * y", App("*", (Var("x"), Var("y")))),
])
def test_parse_basic_shapes(text, expected):
    assert parse_term(text) == expected


def test_postfix_appends_bind_tighter_than_plus():
    assert parse_term("x :b0 + y :b1") == App(
        "+", (App(":b0", (Var("x"),)), App(":b1", (Var("y"),))))


def test_appends_stack_leftwards():
    t = parse_term("x :b0 :b1")
    assert t == App(":b1", (App(":b0", (Var("x"),)),))


def test_product_binds_tighter_than_sum():
    assert format_term(parse_term("x + y * z")) == "x + y * z"
    assert format_term(parse_term("(x + y) * z")) == "(x + y) * z"


def test_chained_sums_need_explicit_parens():
    with pytest.raises(ParseError):
        parse_term("x + y + z")
    assert format_term(parse_term("(x + y) + z")) == "(x + y) + z"
    assert format_term(parse_term("x + (y + z)")) == "x + (y + z)"


def test_tree_constructors_require_parens():
    with pytest.raises(ParseError):
        parse_term("x ^b y")
    assert format_term(parse_term("(x ^b (y ^b z))")) == "(x ^b (y ^b z))"


@pytest.mark.parametrize("text", [
    "", "S(", "S(0", "S(0))", "x +", "(x ^q y)", ":b0", "x :b2", "S()",
    "x y",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text)


@pytest.mark.parametrize("text", [
    "-(0)",
    "-(-(x))",
    "1 + -(1)",
    "(x + 1) + -(1)",
    "S((0 + y) :b0)",
    "(x * 0) :b0 + x * 1",
    "(x + y ^b (z ^b w))",
    "P(x) + -(0)",
    "x :d3 + -(y :d7)",
])
def test_format_emits_minimal_parens(text):
    term = parse_term(text)
    assert format_term(term) == text
    assert parse_term(format_term(term)) == term


def _terms():
    leaf = st.sampled_from(
        [Var("x"), Var("y"), App("0", ()), App("1", ()), App("9", ())])
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.builds(lambda a: App("S", (a,)), sub),
            st.builds(lambda a: App("-", (a,)), sub),
            st.builds(lambda a: App(":b1", (a,)), sub),
            st.builds(lambda a, b: App("+", (a, b)), sub, sub),
            st.builds(lambda a, b: App("*", (a, b)), sub, sub),
            st.builds(lambda a, b: App("^d", (a, b)), sub, sub),
        ),
        max_leaves=10)


@given(_terms())
def test_round_trip_on_random_terms(term):
    assert parse_term(format_term(term)) == term


@given(_terms())
def test_format_is_stable(term):
    assert format_term(parse_term(format_term(term))) == format_term(term)
