"""Command line behavior: outputs, exit codes, determinism."""

import io
import json

import pytest

from ddrs.cli import EX_FAIL, EX_OK, EX_UNKNOWN, EX_USAGE, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_normalize_prints_the_normal_form():
    code, out, err = invoke("normalize", "--system", "Z_bud",
                            "--term", "S(S(S(0)))")
    assert (code, out, err) == (EX_OK, "1 :b1\n", "")


def test_loops_reports_the_decimal_cycle():
    code, out, _ = invoke("loops", "--system", "Z_dub",
                          "--variant", "unedited", "--term", "1 + 0")
    assert code == EX_FAIL
    assert "period 2" in out
    assert "[d9.0 @ root] S(0) + 0" in out
    # seed line, step 0, and the closing step
    assert out.count("1 + 0") == 3


def test_loops_clean_scan_exits_zero():
    code, out, _ = invoke("loops", "--system", "N_bud")
    assert code == EX_OK
    assert "no loop found" in out


def test_confluence_counterexample_exit():
    code, out, _ = invoke("confluence", "--system", "Z_r")
    assert code == EX_FAIL
    assert out.startswith("verdict: NonConfluent\n")
    assert "critical pairs: 39" in out
    assert "-(-(x0)) + -(y)" in out


def test_termination_table_weights():
    code, out, _ = invoke("termination", "--system", "N_bud",
                          "--weights", "table7")
    assert code == EX_OK
    assert out.startswith("verdict: ProvenRTO (12 derivations)\n")
    assert len(out.splitlines()) == 13


def test_termination_unknown_exit():
    code, out, _ = invoke("termination", "--system", "Z_dt")
    assert code == EX_UNKNOWN
    assert out.startswith("verdict: Unknown\n")


def test_identical_invocations_are_byte_identical():
    first = invoke("termination", "--system", "N_dub", "--format", "json")
    second = invoke("termination", "--system", "N_dub", "--format", "json")
    assert first == second
    payload = json.loads(first[1])
    assert payload["verdict"] == "ProvenRTO"


def test_trace_json_is_a_step_array():
    code, out, _ = invoke("trace", "--system", "N_bud", "--term", "1 + 1",
                          "--format", "json")
    assert code == EX_OK
    steps = json.loads(out)
    assert steps == [
        {"rule": "b8", "position": [], "term": "S(1)"},
        {"rule": "b3", "position": [], "term": "1 :b0"},
    ]


def test_normalize_cycle_is_a_failure():
    code, out, _ = invoke("normalize", "--system", "Z_dub",
                          "--variant", "unedited", "--term", "1 + 0",
                          "--strategy", "random", "--seed", "0")
    assert code == EX_FAIL
    assert out.startswith("cycle after 2 steps")


def test_normalize_step_limit_is_unknown():
    code, out, _ = invoke("normalize", "--system", "N_bud",
                          "--term", "1 + 1", "--max-steps", "1")
    assert code == EX_UNKNOWN
    assert "no normal form within 1 steps" in out


def test_ground_check_json_is_run_independent():
    code, out, _ = invoke("ground-check", "--system", "Z_bt", "--size", "5",
                          "--format", "json")
    assert code == EX_OK
    payload = json.loads(out)
    assert payload["ok"] is True
    assert "duration_seconds" not in payload


@pytest.mark.parametrize("argv", [
    ("normalize", "--system", "N_oct", "--term", "0"),
    ("normalize", "--system", "N_bud", "--term", "S(S("),
    ("normalize", "--system", "N_bud", "--term", "0", "--strategy", "zigzag"),
    ("normalize", "--term", "0"),
    ("show",),
    ("termination", "--system", "N_bud", "--weights", "/no/such/file"),
    ("loops", "--system", "N_bud", "--max-steps", "0"),
    ("bogus-command",),
])
def test_usage_errors(argv):
    code, out, err = invoke(*argv)
    assert code == EX_USAGE
    assert out == ""
    assert err


def test_weights_file(tmp_path):
    table = tmp_path / "w.txt"
    table.write_text("0=0\n1=0\n:b0=2\n:b1=2\nS=3\nP=3\n+=4\n*=5\n-=1\n")
    code, out, _ = invoke("termination", "--system", "N_bud",
                          "--weights", str(table))
    assert code == EX_OK
    assert "ProvenRTO" in out


def test_weights_file_rejects_junk(tmp_path):
    table = tmp_path / "w.txt"
    table.write_text("S=three\n")
    code, _, err = invoke("termination", "--system", "N_bud",
                          "--weights", str(table))
    assert code == EX_USAGE
    assert "symbol=nat" in err


def test_export_import_round_trip(tmp_path):
    path = tmp_path / "nbud.trs"
    code, out, _ = invoke("export", "--system", "N_bud", "--out", str(path))
    assert code == EX_OK and out == ""
    assert path.read_text().startswith("(VAR ")
    code, shown, _ = invoke("show", "--from-file", str(path))
    assert code == EX_OK
    assert shown.startswith("nbud [imported], 18 rules")


def test_from_file_conflicts_with_system(tmp_path):
    path = tmp_path / "x.trs"
    path.write_text("(VAR x)\n(RULES\n  S(x) -> x\n)\n")
    code, _, err = invoke("show", "--system", "N_bud",
                          "--from-file", str(path))
    assert code == EX_USAGE
    assert "exclusive" in err


def test_systems_listing():
    code, out, _ = invoke("systems")
    assert code == EX_OK
    assert len(out.splitlines()) == 10
    code, out, _ = invoke("systems", "--format", "json")
    rows = json.loads(out)
    assert [r["name"] for r in rows] == [
        "N_bud", "Z_bud", "N_dub", "Z_dub", "N_bt", "Z_bt", "N_dt", "Z_dt",
        "Z_r"]


def test_complete_subcommand():
    code, out, _ = invoke("complete", "--system", "Z_r")
    assert code == EX_UNKNOWN
    assert out.startswith("GaveUp (unorientable_pair)")
    assert "c1: (x + -(1)) + 1 -> x" in out
    code, out, _ = invoke("complete", "--system", "N_bud",
                          "--weights", "table7", "--max-iterations", "1")
    assert code == EX_OK
    assert out == "Completed after 0 iterations, 0 rules added\n"


def test_help_exits_zero():
    code, _, _ = invoke("--help")
    assert code == EX_OK
