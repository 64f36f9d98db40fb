"""The curated case suite must replay green end to end."""

import pytest

from ddrs import cases


def test_case_census():
    assert len(cases.LOOP_CASES) == 3
    assert len(cases.COUNTEREXAMPLE_CASES) == 6
    assert len(cases.OVERLAP_CASES) == 12
    assert sum(len(c.instances) for c in cases.OVERLAP_CASES) == 14
    assert len(cases.TREE_CHAINS) == 28
    assert [c.number for c in cases.TREE_CHAINS] == list(range(1, 29))
    assert len(cases.VERDICT_MATRIX) == 11


def test_loop_case_data_is_consistent():
    for case in cases.LOOP_CASES:
        assert len(case.rules) == len(case.terms)
        assert case.period == len(case.rules) - case.cycle_start


def test_matrix_rows_have_invocations():
    for row in cases.VERDICT_MATRIX:
        assert row.invocation.startswith("ddrs ")
        assert row.system in row.invocation
        assert row.exit_code in (0, 1, 2)


@pytest.mark.parametrize(
    "name", [name for name, _ in cases.iter_cases()])
def test_replay(name):
    thunks = dict(cases.iter_cases())
    ok, detail = thunks[name]()
    assert ok, detail
