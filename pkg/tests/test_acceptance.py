"""End-to-end acceptance checks, one test per headline behavior.

Each test exercises one deliverable at its stated budget: loop
reproduction, confluence counterexamples, positive confluence, tree
ordering proofs, the eleven-row verdict matrix, exhaustive ground
completeness at desk scale, rule soundness under random substitution,
and completion behavior.  A verbose run therefore prints one pass/fail
line per criterion.
"""

import io
import json
import random
import time

from ddrs import cases
from ddrs.catalog import builtin_system, system_names
from ddrs.confluence import check_confluence, complete
from ddrs.semantics import canonical_form, check_ground, eval_term
from ddrs.syntax import parse_term
from ddrs.termination import (
    find_loop,
    format_tree,
    parse_tree,
    prove_termination_rto,
    tree_reduces,
)
from ddrs.terms import apply_subst, variables
from ddrs.cli import run


def _cli(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out, err=io.StringIO())
    return code, out.getvalue()


def test_criterion_1_loop_reproduction_is_exact_and_fast():
    budget = 1.0
    for case in cases.LOOP_CASES:
        system = builtin_system(case.system, variant=case.variant)
        start = time.monotonic()
        loop = find_loop(system, seeds=[parse_term(case.seed)])
        elapsed = time.monotonic() - start
        assert loop is not None, case.name
        assert loop.trace.rule_names() == case.rules
        assert loop.period == case.period
        assert loop.cycle_start == case.cycle_start
        assert elapsed < budget, f"{case.name}: {elapsed:.2f}s"
    print("criterion 1: PASS - 3 seeded loops, exact traces, < 1 s each")


def test_criterion_2_nonconfluence_counterexamples():
    from ddrs.confluence import canonical_key

    budget = 60.0
    for case in cases.COUNTEREXAMPLE_CASES:
        system = builtin_system(case.system, variant=case.variant)
        start = time.monotonic()
        res = check_confluence(system)
        elapsed = time.monotonic() - start
        assert res.verdict == "NonConfluent", case.name
        want = canonical_key(parse_term(case.peak), parse_term(case.left),
                             parse_term(case.right))
        have = {cx.pair.key() for cx in res.counterexamples}
        assert want in have, case.name
        assert elapsed < budget, f"{case.name}: {elapsed:.2f}s"
    print("criterion 2: PASS - 6 expected peaks found, < 60 s per system")


def test_criterion_3_positive_confluence():
    start = time.monotonic()
    res_bud = check_confluence(builtin_system("N_bud"), weights="table7")
    assert res_bud.verdict == "Confluent"
    for case in cases.OVERLAP_CASES:
        ok, detail = cases.run_overlap_case(case)
        assert ok, f"{case.name}: {detail}"
    res_dub = check_confluence(builtin_system("N_dub"))
    assert res_dub.verdict == "Confluent"
    elapsed = time.monotonic() - start
    assert elapsed < 600.0, f"{elapsed:.2f}s"
    print(f"criterion 3: PASS - N_bud and N_dub Confluent, 12 overlap"
          f" families joined with the expected witnesses"
          f" ({elapsed:.1f} s)")


def test_criterion_4_tree_ordering_proofs():
    start = time.monotonic()

    res = prove_termination_rto(builtin_system("N_bud"), "table7")
    assert res.verdict == "ProvenRTO"
    assert len(res.entries) == 12
    by_rule = {name: e for e in res.entries for name in e.rules}
    for chain in cases.TREE_CHAINS:
        ok, detail = cases.run_tree_chain(chain)
        assert ok, f"{chain.name}: {detail}"
        if chain.matches_catalog and chain.number <= 12:
            for rule in chain.rules:
                entry = by_rule[rule]
                assert format_tree(entry.start) == chain.trees[0], rule
                assert format_tree(entry.end) == chain.trees[-1], rule

    unedited = prove_termination_rto(
        builtin_system("N_bud", variant="unedited"), "table7")
    assert unedited.verdict == "Unknown"
    assert set(unedited.failing) == {"b10.0.0", "b10.0.1", "b10.1.0",
                                     "b10.1.1"}
    assert tree_reduces(parse_tree("4(2(0),2(0))"),
                        parse_tree("4(2(4(0,0)),0)")) is None

    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"{elapsed:.2f}s"
    print(f"criterion 4: PASS - 28 worked chains replayed, catalog"
          f" endpoints exact, unedited failure localized to the b10"
          f" family ({elapsed:.1f} s)")


def test_criterion_5_verdict_matrix():
    start = time.monotonic()
    for row in cases.VERDICT_MATRIX:
        argv = [row.method == "rto" and "termination" or "loops",
                "--system", row.system, "--variant", row.variant,
                "--format", "json"]
        if row.weights:
            argv += ["--weights", row.weights]
        code, out = _cli(*argv)
        assert code == row.exit_code, f"{row.name}: exit {code}"
        payload = json.loads(out)
        if row.method == "rto":
            assert payload["verdict"] == row.expect, row.name
        else:
            found = payload.get("loop") is not None or "period" in payload
            assert found == (row.expect == "loop"), row.name
    elapsed = time.monotonic() - start
    assert elapsed < 1800.0, f"{elapsed:.2f}s"
    print(f"criterion 5: PASS - 11 rows, exit codes and verdicts match"
          f" ({elapsed:.1f} s)")


def test_criterion_6_ground_completeness_at_desk_scale():
    sizes = {"Z_dub": 5, "Z_dt": 5}
    start = time.monotonic()
    checked = {}
    for name in system_names():
        system = builtin_system(name)
        size = sizes.get(name, 6)
        report = check_ground(system, size)
        assert report.ok, (
            f"{name}: {len(report.failures)} failures, first: "
            f"{report.failures[0].as_dict() if report.failures else None}")
        checked[name] = report.terms_checked
    elapsed = time.monotonic() - start
    assert elapsed < 1200.0, f"{elapsed:.2f}s"
    total = sum(checked.values())
    print(f"criterion 6: PASS - {total} ground terms across 9 systems,"
          f" 5 strategies each, zero failures ({elapsed:.1f} s)")


def test_criterion_7_rule_soundness_under_substitution():
    start = time.monotonic()
    rng = random.Random(20260815)
    rules_checked = 0
    for name in system_names():
        sig = builtin_system(name).signature
        lo = 0 if name.startswith("N_") else -30
        for variant in ("edited", "unedited"):
            for rule in builtin_system(name, variant=variant).rules:
                names = variables(rule.lhs)
                for _ in range(100):
                    sigma = {v: canonical_form(rng.randint(lo, 30), sig)
                             for v in names}
                    left = eval_term(apply_subst(rule.lhs, sigma))
                    right = eval_term(apply_subst(rule.rhs, sigma))
                    assert left == right, f"{name}[{variant}] {rule.name}"
                rules_checked += 1
    elapsed = time.monotonic() - start
    assert elapsed < 300.0, f"{elapsed:.2f}s"
    print(f"criterion 7: PASS - {rules_checked} rules x 100 substitutions,"
          f" both sides always evaluate equal ({elapsed:.1f} s)")


def test_criterion_8_completion_behavior():
    start = time.monotonic()
    gave_up = complete(builtin_system("Z_r"), max_iterations=25)
    assert gave_up.status == "GaveUp"
    done = complete(builtin_system("N_bud"), weights="table7",
                    max_iterations=1)
    assert done.status == "Completed"
    assert done.added == ()
    elapsed = time.monotonic() - start
    assert elapsed < 120.0, f"{elapsed:.2f}s"
    print(f"criterion 8: PASS - ring completion gives up, edited binary"
          f" system completes with zero additions ({elapsed:.1f} s)")
