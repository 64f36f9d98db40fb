"""Tree-ordering termination proofs and bounded loop search."""

import pytest

from ddrs.catalog import builtin_system
from ddrs.syntax import parse_term
from ddrs.termination import (
    Tree,
    find_loop,
    format_tree,
    parse_tree,
    prove_termination_rto,
    resolve_weights,
    term_tree,
    tree_path_search,
    tree_reduces,
)

TABLE7 = {
    "0": 0, "1": 0, ":b0": 2, ":b1": 2,
    "S": 3, "P": 3, "+": 4, "*": 5, "-": 1,
}


def test_resolve_weights_presets():
    sig = builtin_system("Z_bud").signature
    assert resolve_weights("table7", sig) == TABLE7
    default = resolve_weights(None, sig)
    assert set(default) == set(TABLE7)
    assert resolve_weights(dict(TABLE7, S=9), sig)["S"] == 9
    with pytest.raises(ValueError):
        resolve_weights("tableau", sig)
    with pytest.raises(ValueError):
        resolve_weights({"S": 9}, sig)  # mappings must cover every symbol


def test_tree_round_trip_including_marks():
    for text in ["0", "2(0)", "4(2(0),1(0))", "2(5*(0,2(0)),0)",
                 "3*(1(2(0)))"]:
        assert format_tree(parse_tree(text)) == text


def test_term_tree_abstracts_variables_to_tagged_leaves():
    sig = builtin_system("N_bud").signature
    weights = resolve_weights("table7", sig)
    t = term_tree(parse_term("S(x :b1)"), weights)
    assert t == Tree(3, (Tree(2, (Tree(0, (), tag="x"),)),))


def test_tree_reduces_respects_leaf_tags():
    # 4(0x, 0y) may not collapse onto a leaf with the wrong tag
    s = parse_tree("4(0,0)")
    x_left = Tree(4, (Tree(0, (), tag="x"), Tree(0, ())))
    to_x = Tree(0, (), tag="x")
    to_y = Tree(0, (), tag="y")
    assert tree_reduces(x_left, to_x) is not None
    assert tree_reduces(x_left, to_y) is None
    assert tree_reduces(s, Tree(0, ())) is not None


def test_proof_for_the_edited_binary_system():
    res = prove_termination_rto(builtin_system("N_bud"), "table7")
    assert res.verdict == "ProvenRTO"
    assert res.proven
    covered = [name for e in res.entries for name in e.rules]
    assert sorted(covered) == sorted(r.name for r in
                                     builtin_system("N_bud").rules)
    endpoints = {tuple(e.rules): (format_tree(e.start), format_tree(e.end))
                 for e in res.entries}
    assert endpoints[("b1.0", "b1.1")] == ("2(0)", "0")
    assert endpoints[("b3",)] == ("3(0)", "2(0)")
    assert endpoints[("b5",)] == ("3(2(0))", "2(3(0))")
    assert endpoints[("b10.0.0", "b10.1.0")] == ("4(2(0),2(0))", "2(4(0,0))")
    assert endpoints[("b13.0", "b13.1")] == (
        "5(0,2(0))", "4(2(5(0,0)),5(0,0))")
    assert len(res.entries) == 12


def test_unedited_binary_system_fails_on_digit_addition():
    res = prove_termination_rto(builtin_system("N_bud", variant="unedited"),
                                "table7")
    assert res.verdict == "Unknown"
    assert set(res.failing) == {"b10.0.0", "b10.0.1", "b10.1.0", "b10.1.1"}
    # the unedited abstraction asks for a derivation that does not exist
    assert tree_reduces(parse_tree("4(2(0),2(0))"),
                        parse_tree("4(2(4(0,0)),0)")) is None


def test_integer_binary_system_fails_only_on_negative_append():
    res = prove_termination_rto(builtin_system("Z_bud"), "table7")
    assert res.verdict == "Unknown"
    assert res.failing == ("b27",)


@pytest.mark.parametrize("name,verdict", [
    ("N_dub", "ProvenRTO"),
    ("Z_dub", "Unknown"),
    ("N_bt", "Unknown"),
    ("Z_dt", "Unknown"),
    ("Z_r", "Unknown"),
])
def test_default_weight_verdicts(name, verdict):
    res = prove_termination_rto(builtin_system(name))
    assert res.verdict == verdict


def test_ring_failures_are_the_three_structural_rules():
    res = prove_termination_rto(builtin_system("Z_r"))
    assert set(res.failing) == {"r3", "r7", "r14"}


def test_derivation_entries_replay():
    res = prove_termination_rto(builtin_system("N_dub"))
    for entry in res.entries:
        assert entry.derivation.steps
        assert entry.derivation.start == entry.start
        assert entry.derivation.end == entry.end


def test_tree_path_search_budget_is_respected():
    start = parse_tree("4(2(0),2(0))")
    goal = parse_tree("2(4(0,0))")
    assert tree_path_search(start, goal, 3) is None
    path = tree_path_search(start, goal, 6)
    assert path is not None
    assert len(path) == 6


def test_find_loop_on_seeded_term():
    system = builtin_system("Z_dub", variant="unedited")
    loop = find_loop(system, seeds=[parse_term("1 + 0")])
    assert loop is not None
    assert loop.period == 2
    assert loop.cycle_start == 0
    assert loop.trace.rule_names() == ("d9.0", "d2.0")
    assert [str(t) for t in loop.cycle_terms()] == \
        ["1 + 0", "S(0) + 0", "1 + 0"]


def test_find_loop_scans_small_terms_by_default():
    loop = find_loop(builtin_system("N_dub", variant="unedited"))
    assert loop is not None
    assert str(loop.seed) == "0 + 1"
    assert loop.period == 2
    assert loop.cycle_start == 1


def test_loop_free_systems_scan_clean():
    for name in ("N_bud", "Z_bud", "N_bt", "Z_bt"):
        assert find_loop(builtin_system(name)) is None


def test_loop_serialization():
    loop = find_loop(builtin_system("Z_dt", variant="unedited"),
                     seeds=[parse_term("-(1) + 0")])
    payload = loop.as_dict()
    assert payload["seed"] == "-(1) + 0"
    assert payload["period"] == 3
    assert payload["cycle_start"] == 0
    assert [s["rule"] for s in payload["trace"]["steps"]] == \
        ["dt29.0", "dt15", "dt13"]


@pytest.mark.parametrize("number", [5, 8, 12, 22, 24, 25])
def test_representative_tree_chains_replay(number):
    # the full set of worked chains is replayed in the fixture suite;
    # these exercise each arrow flavor and the endpoint-only form
    from ddrs import cases

    case = next(c for c in cases.TREE_CHAINS if c.number == number)
    ok, detail = cases.run_tree_chain(case)
    assert ok, detail
