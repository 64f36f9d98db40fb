"""Rewriting engine: step enumeration, strategies, and outcome detection."""

import pytest

from ddrs.catalog import builtin_system
from ddrs.engine import (
    CYCLE,
    NORMAL_FORM,
    STEP_LIMIT,
    FullBreadth,
    LeftmostInnermost,
    LeftmostOutermost,
    RandomSeeded,
    normalize,
    rewrite_once,
    strategy_by_name,
    successors,
)
from ddrs.syntax import format_term, parse_term


N_BUD = builtin_system("N_bud")
Z_BUD = builtin_system("Z_bud")


def test_successors_enumerates_all_single_steps():
    term = parse_term("S(0) + S(1)")
    succ = successors(N_BUD, term)
    assert [(pos, rule) for pos, rule, _ in succ] == [
        ((1,), "b2"), ((2,), "b3")]
    results = {format_term(t) for _, _, t in succ}
    assert results == {"1 + S(1)", "S(0) + 1 :b0"}


def test_successors_orders_by_position_then_catalog():
    # at the root both b6 (x+0) and b7 (0+x) apply; catalog order decides
    succ = successors(N_BUD, parse_term("0 + 0"))
    assert [rule for _, rule, _ in succ] == ["b6", "b7"]


def test_rewrite_once_applies_a_chosen_rule_at_a_position():
    term = parse_term("S(0) + S(1)")
    result = rewrite_once(N_BUD, term, (1,), N_BUD.rule("b2"))
    assert result == parse_term("1 + S(1)")
    assert rewrite_once(N_BUD, term, (1,), N_BUD.rule("b4")) is None


def test_normalize_reaches_canonical_form():
    res = normalize(Z_BUD, parse_term("S(S(S(0)))"))
    assert res.outcome == NORMAL_FORM
    assert format_term(res.final) == "1 :b1"
    assert res.steps_taken == 3


def test_trace_records_rules_and_positions():
    res = normalize(N_BUD, parse_term("1 + 1"), LeftmostInnermost())
    assert res.trace.rule_names() == ("b8", "b3")
    assert [s.position for s in res.trace.steps] == [(), ()]
    assert res.trace.term_at(0) == parse_term("1 + 1")
    assert res.trace.final == parse_term("1 :b0")


def test_strategies_may_disagree_on_route_but_not_on_result():
    term = parse_term("S(0) + S(1)")
    routes = {}
    for strat in (LeftmostInnermost(), LeftmostOutermost(), RandomSeeded(3)):
        res = normalize(N_BUD, term, strat)
        assert res.outcome == NORMAL_FORM
        assert format_term(res.final) == "1 :b1"
        routes[type(strat).__name__] = [
            (s.rule, s.position) for s in res.trace.steps]
    assert routes["LeftmostInnermost"] != routes["LeftmostOutermost"]


def test_multiplication_normalizes_to_binary_notation():
    res = normalize(Z_BUD, parse_term("S(S(0)) * S(S(0))"))
    assert res.outcome == NORMAL_FORM
    assert format_term(res.final) == "1 :b0 :b0"


def test_step_limit_outcome():
    res = normalize(N_BUD, parse_term("1 + 1"), max_steps=1)
    assert res.outcome == STEP_LIMIT
    assert res.steps_taken == 1


def test_cycle_detection_under_random_walk():
    system = builtin_system("Z_dub", variant="unedited")
    res = normalize(system, parse_term("1 + 0"), RandomSeeded(0),
                    max_steps=200)
    assert res.outcome == CYCLE
    assert res.cycle_start == 0
    assert res.period == 2
    assert res.trace.rule_names() == ("d9.0", "d2.0")


def test_breadth_strategy_closes_interior_cycles():
    # 0 + 1 steps into a cycle it is not itself part of: the cycle interior
    # must be reported, not the seed
    system = builtin_system("N_dub", variant="unedited")
    res = normalize(system, parse_term("0 + 1"), FullBreadth(),
                    max_steps=200)
    assert res.outcome == CYCLE
    assert res.cycle_start == 1
    assert res.period == 2
    assert res.trace.rule_names() == ("d8.0", "d2.0", "d9.0")


def test_normal_form_has_no_successors():
    res = normalize(Z_BUD, parse_term("S(S(S(S(S(0)))))"))
    assert res.outcome == NORMAL_FORM
    assert successors(Z_BUD, res.final) == []


def test_strategy_by_name():
    assert isinstance(strategy_by_name("innermost"), LeftmostInnermost)
    assert isinstance(strategy_by_name("random", 7), RandomSeeded)
    with pytest.raises(ValueError):
        strategy_by_name("widest")
