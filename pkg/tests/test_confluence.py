"""Critical pairs, joinability, confluence verdicts, and completion."""

import pytest

from ddrs.catalog import RewriteSystem, builtin_system
from ddrs.confluence import (
    JOINABLE,
    NOT_JOINABLE,
    canonical_key,
    check_confluence,
    complete,
    critical_pairs,
    joinable,
)
from ddrs.syntax import format_term, parse_term
from ddrs.terms import Rule

N_BUD = builtin_system("N_bud")


def test_canonical_key_is_renaming_invariant():
    a = canonical_key(parse_term("x + -(y)"), parse_term("x"),
                      parse_term("-(y)"))
    b = canonical_key(parse_term("q + -(w)"), parse_term("q"),
                      parse_term("-(w)"))
    assert a == b
    c = canonical_key(parse_term("y + -(x)"), parse_term("-(x)"),
                      parse_term("y"))
    assert a == c  # reducts are unordered


def test_critical_pairs_of_the_edited_binary_system():
    pairs = critical_pairs(N_BUD)
    assert len(pairs) == 16
    # root overlap of the two one-rules, kept although the reducts agree
    keys = {p.key() for p in pairs}
    assert canonical_key(parse_term("1 + 1"), parse_term("S(1)"),
                         parse_term("S(1)")) in keys
    for p in pairs:
        assert p.outer in {r.name for r in N_BUD.rules}
        assert p.inner in {r.name for r in N_BUD.rules}


def test_critical_pairs_skip_self_root_overlap():
    for p in critical_pairs(N_BUD):
        assert not (p.outer == p.inner and p.position == ())


def test_joinable_finds_common_reduct():
    res = joinable(N_BUD, parse_term("(0 + y) :b0"), parse_term("0 + y :b0"))
    assert res.status == JOINABLE
    assert format_term(res.witness) == "y :b0"


def test_joinable_detects_disjoint_normal_forms():
    system = builtin_system("Z_r")
    res = joinable(system, parse_term("x + -(y)"),
                   parse_term("-((-(x)) + y)"))
    assert res.status == NOT_JOINABLE
    assert res.witness is None


def test_confluent_verdict_needs_a_termination_basis():
    res = check_confluence(N_BUD, weights="table7")
    assert res.verdict == "Confluent"
    assert res.termination_basis == "ProvenRTO"
    assert all(p.status == JOINABLE for p in res.pairs)


def test_joinable_alone_is_not_confluence():
    # every pair joins, but without a termination proof the verdict
    # must stay honest
    system = builtin_system("N_bud", variant="unedited")
    res = check_confluence(system)
    assert all(p.status == JOINABLE for p in res.pairs)
    assert res.verdict == "Unknown"
    assumed = check_confluence(system, assume_terminating=True)
    assert assumed.verdict == "Confluent"
    assert assumed.termination_basis == "assumed"


@pytest.mark.parametrize("name,expected", [
    ("Z_bud", 28),
    ("Z_bt", 48),
    ("N_dt", 11),
    ("Z_r", 9),
])
def test_counterexample_counts(name, expected):
    res = check_confluence(builtin_system(name))
    assert res.verdict == "NonConfluent"
    assert len(res.counterexamples) == expected


def test_result_serialization():
    res = check_confluence(builtin_system("Z_r"))
    payload = res.as_dict()
    assert payload["verdict"] == "NonConfluent"
    assert payload["pairs"] == len(res.pairs)
    assert len(payload["counterexamples"]) == 9
    first = payload["counterexamples"][0]
    assert set(first) == {"outer", "inner", "position", "peak", "left",
                          "right", "status"}


def test_completion_gives_up_on_the_ring_system():
    res = complete(builtin_system("Z_r"))
    assert res.status == "GaveUp"
    assert res.reason == "unorientable_pair"
    assert [r.name for r in res.added] == ["c1"]
    assert format_term(res.added[0].lhs) == "(x + -(1)) + 1"
    assert format_term(res.added[0].rhs) == "x"
    assert res.equation is not None


def test_completion_of_a_confluent_system_adds_nothing():
    res = complete(N_BUD, weights="table7", max_iterations=1)
    assert res.status == "Completed"
    assert res.added == ()
    assert res.iterations == 0
    assert res.system.rules == N_BUD.rules


def test_completion_of_the_empty_system():
    empty = RewriteSystem("empty", "edited", N_BUD.signature, ())
    res = complete(empty, max_iterations=1)
    assert res.status == "Completed"
    assert res.added == ()


def test_completion_can_repair_a_small_gap():
    sig = builtin_system("Z_bud").signature
    g1 = Rule("g1", parse_term("P(S(x))"), parse_term("x"))
    g2 = Rule("g2", parse_term("S(x)"), parse_term("x :b1"))
    system = RewriteSystem("toy", "edited", sig, (g1, g2))
    res = complete(system)
    assert res.status == "Completed"
    assert len(res.added) == 1
    added = res.added[0]
    assert added.lhs.sym == "P"
    # the extended system has no unjoinable pairs left
    for pair in critical_pairs(res.system):
        assert joinable(res.system, pair.left, pair.right).status == JOINABLE


def test_every_fixture_counterexample_is_found():
    from ddrs import cases

    for case in cases.COUNTEREXAMPLE_CASES:
        ok, detail = cases.run_counterexample_case(case)
        assert ok, detail
