"""Tests for the first-order term core."""

import pytest
from hypothesis import given, strategies as st

from ddrs.terms import (
    App,
    Rule,
    Term,
    Var,
    apply_subst,
    match,
    occurs,
    positions,
    rename_apart,
    replace_at,
    subterm_at,
    unify,
    variables,
)


def _app(sym, *args):
    return App(sym, tuple(args))


X, Y, Z = Var("x"), Var("y"), Var("z")
ZERO = _app("0")
ONE = _app("1")


def terms(max_leaves=6):
    """Hypothesis strategy for small terms over a fixed alphabet."""
    leaf = st.sampled_from([X, Y, Z, ZERO, ONE])
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.builds(lambda a: _app("S", a), sub),
            st.builds(lambda a, b: _app("+", a, b), sub, sub),
        ),
        max_leaves=max_leaves)


def test_app_equality_and_hashing():
    assert _app("+", X, ZERO) == _app("+", X, ZERO)
    assert _app("+", X, ZERO) != _app("+", ZERO, X)
    assert len({_app("S", ZERO), _app("S", ZERO), ZERO}) == 2


def test_match_binds_each_variable_once():
    pattern = _app("+", X, X)
    assert match(pattern, _app("+", ONE, ONE)) == {"x": ONE}
    assert match(pattern, _app("+", ONE, ZERO)) is None


def test_match_is_one_way():
    # A variable in the subject is just a constant for matching purposes.
    assert match(_app("S", ZERO), _app("S", Y)) is None
    assert match(X, _app("S", Y)) == {"x": _app("S", Y)}


def test_unify_produces_most_general_unifier():
    s = _app("+", X, _app("S", Y))
    t = _app("+", _app("S", Z), Z)
    sigma = unify(s, t)
    assert sigma is not None
    assert apply_subst(s, sigma) == apply_subst(t, sigma)


def test_unify_occurs_check():
    assert unify(X, _app("S", X)) is None
    assert occurs("x", _app("+", ZERO, _app("S", X)))


def test_unify_clash():
    assert unify(_app("S", X), _app("P", X)) is None


@given(terms(), terms())
def test_unifier_is_idempotent(s, t):
    sigma = unify(s, t)
    if sigma is not None:
        u = apply_subst(s, sigma)
        assert apply_subst(u, sigma) == u
        assert u == apply_subst(t, sigma)


def test_positions_are_preorder():
    t = _app("+", _app("S", X), ZERO)
    assert list(positions(t)) == [(), (1,), (1, 1), (2,)]
    assert list(positions(t, non_var_only=True)) == [(), (1,), (2,)]


@given(terms())
def test_subterm_replace_round_trip(t):
    for pos in positions(t):
        assert replace_at(t, pos, subterm_at(t, pos)) == t


def test_replace_at_changes_exactly_one_position():
    t = _app("+", _app("S", ZERO), _app("S", ZERO))
    out = replace_at(t, (1, 1), ONE)
    assert out == _app("+", _app("S", ONE), _app("S", ZERO))


def test_variables_in_first_occurrence_order():
    t = _app("+", _app("S", Y), _app("+", X, Y))
    assert variables(t) == ["y", "x"]


def test_rule_rejects_variable_lhs():
    with pytest.raises(ValueError):
        Rule("bad", X, ZERO)


def test_rule_rejects_fresh_rhs_variable():
    with pytest.raises(ValueError):
        Rule("bad", _app("S", X), Y)


def test_rename_apart_avoids_taken_names():
    rule = Rule("r", _app("+", X, Y), X)
    renamed = rule.renamed_apart({"x", "y"})
    lhs_vars = set(variables(renamed.lhs))
    assert lhs_vars.isdisjoint({"x", "y"})
    assert match(renamed.lhs, _app("+", ZERO, ONE)) is not None
