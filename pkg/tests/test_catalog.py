"""The built-in rule systems: counts, spot checks, and lookup behavior."""

import pytest

from ddrs.catalog import builtin_system, system_names
from ddrs.syntax import format_term, parse_term

RULE_COUNTS = {
    "N_bud": 18,
    "Z_bud": 42,
    "N_dub": 170,
    "Z_dub": 442,
    "N_bt": 12,
    "Z_bt": 26,
    "N_dt": 62,
    "Z_dt": 218,
    "Z_r": 15,
}


def test_catalog_lists_all_nine_systems():
    assert tuple(system_names()) == tuple(RULE_COUNTS)


@pytest.mark.parametrize("name", sorted(RULE_COUNTS))
@pytest.mark.parametrize("variant", ["edited", "unedited"])
def test_rule_counts(name, variant):
    system = builtin_system(name, variant=variant)
    assert len(system.rules) == RULE_COUNTS[name]
    assert len({r.name for r in system.rules}) == len(system.rules)


@pytest.mark.parametrize("name,rule,lhs,rhs", [
    ("N_bud", "b5", "S(x :b1)", "S(x) :b0"),
    ("N_bud", "b10.0.1", "x :b0 + y :b1", "S((x + y) :b0)"),
    ("N_bud", "b13.1", "x * y :b1", "(x * y) :b0 + x * 1"),
    ("Z_bud", "b27", "-(x) :b1", "-(P(x) :b1)"),
    ("Z_bud", "b30.1.1", "x :b1 + -(y :b1)", "P((x + -(y)) :b1)"),
    ("N_dub", "d5", "S(x :d9)", "S(x) :d0"),
    ("N_dub", "d8.3", "x + 3", "S(S(S(x)))"),
    ("Z_dub", "d26.4", "-(x) :d4", "-(P(x) :d6)"),
    ("N_bt", "bt6", "x + (y ^b z)", "(y ^b x + z)"),
    ("Z_bt", "bt18", "(x ^b -((y ^b z)))", "-((y + -(x) ^b z))"),
    ("N_dt", "dt9.3", "x + (y ^d 3)", "(y ^d x) + 3"),
    ("Z_dt", "dt24.2.5", "(2 ^d -(5))", "(P(2) ^d 5)"),
    ("Z_dt", "dt27.4", "x + -(4)", "P(P(P(P(x))))"),
    ("Z_r", "r14", "x * -(y)", "-(x) * y"),
])
def test_edited_rule_spot_checks(name, rule, lhs, rhs):
    system = builtin_system(name)
    r = system.rule(rule)
    assert r.lhs == parse_term(lhs)
    assert r.rhs == parse_term(rhs)


@pytest.mark.parametrize("name,rule,lhs,rhs", [
    ("N_bud", "b10.0.1", "x :b0 + y :b1", "(x + y) :b0 + 1"),
    ("N_dub", "d8.0", "x + 1", "S(x) + 0"),
    ("N_dub", "d9.8", "9 + x", "S(x) + 8"),
    ("N_dub", "d10.2.7", "x :d2 + y :d7", "(x + y) :d2 + 7"),
    ("Z_dub", "d27.0", "x + -(1)", "P(x) + -(0)"),
    ("Z_dt", "dt29.0", "-(1) + x", "P(x) + -(0)"),
])
def test_unedited_rule_spot_checks(name, rule, lhs, rhs):
    system = builtin_system(name, variant="unedited")
    r = system.rule(rule)
    assert r.lhs == parse_term(lhs)
    assert r.rhs == parse_term(rhs)


def test_edits_change_exactly_the_flattened_rules():
    edited = builtin_system("N_dub")
    unedited = builtin_system("N_dub", variant="unedited")
    changed = [r.name for r, u in zip(edited.rules, unedited.rules)
               if (r.lhs, r.rhs) != (u.lhs, u.rhs)]
    # the nine x+i, nine i+x, and hundred digit-pair addition rules
    assert len(changed) == 118
    assert all(n.startswith(("d8.", "d9.", "d10.")) for n in changed)


def test_variantless_systems_alias_edited():
    assert builtin_system("N_bt", variant="unedited").rules == \
        builtin_system("N_bt", variant="edited").rules


def test_rules_for_root_filters_by_head_symbol():
    system = builtin_system("N_bud")
    names = [r.name for _, r in system.rules_for_root("S")]
    assert names == ["b2", "b3", "b4", "b5"]
    assert system.rules_for_root("no-such-symbol") == ()


def test_rule_lookup_errors():
    system = builtin_system("N_bud")
    with pytest.raises(KeyError):
        system.rule("zz9")
    with pytest.raises(KeyError):
        builtin_system("N_oct")
    with pytest.raises(ValueError):
        builtin_system("N_bud", variant="revised")


def test_signature_styles_and_bases():
    styles = {n: builtin_system(n).signature.style for n in system_names()}
    assert styles == {
        "N_bud": "append", "Z_bud": "append",
        "N_dub": "append", "Z_dub": "append",
        "N_bt": "tree", "Z_bt": "tree",
        "N_dt": "tree", "Z_dt": "tree",
        "Z_r": "ring",
    }
    assert builtin_system("Z_dub").signature.base == 10
    assert builtin_system("Z_r").signature.base is None


def test_every_rule_formats_and_parses_back():
    for name in system_names():
        for variant in ("edited", "unedited"):
            for rule in builtin_system(name, variant=variant).rules:
                assert parse_term(format_term(rule.lhs)) == rule.lhs
                assert parse_term(format_term(rule.rhs)) == rule.rhs
