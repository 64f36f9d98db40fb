"""Rule-file export and import."""

import pytest

from ddrs.catalog import builtin_system, system_names
from ddrs.trs_io import export_trs, import_trs


def test_export_layout():
    text = export_trs(builtin_system("N_bt"))
    lines = text.splitlines()
    assert lines[0].startswith("(VAR ")
    assert lines[1] == "(RULES"
    assert lines[-1] == ")"
    assert all(line.startswith("  ") for line in lines[2:-1])
    assert "  (0 ^b x) -> x" in lines
    assert text.endswith(")\n")


def test_round_trip_is_byte_identical_for_every_system():
    for name in system_names():
        for variant in ("edited", "unedited"):
            system = builtin_system(name, variant=variant)
            text = export_trs(system)
            again = export_trs(import_trs(text))
            assert again == text, f"{name}[{variant}]"


def test_import_preserves_rules_up_to_renumbering():
    system = builtin_system("Z_r")
    imported = import_trs(export_trs(system), name="ring")
    assert imported.name == "ring"
    assert [(r.lhs, r.rhs) for r in imported.rules] == \
        [(r.lhs, r.rhs) for r in system.rules]
    assert [r.name for r in imported.rules] == \
        [str(i) for i in range(1, len(system.rules) + 1)]


def test_signature_inference_picks_the_smallest_cover():
    text = "(VAR x)\n(RULES\n  S(x) -> x\n)\n"
    assert import_trs(text).signature.name == "N_bud"
    text_p = "(VAR x)\n(RULES\n  P(S(x)) -> x\n)\n"
    assert import_trs(text_p).signature.name == "Z_bud"


def test_import_rejects_malformed_input():
    with pytest.raises(ValueError):
        import_trs("(RULES\n  0 -> 0\n)\n")  # missing VAR header
    with pytest.raises(ValueError):
        import_trs("(VAR x)\n(RULES\n  S(y) -> y\n)\n")  # undeclared var
    with pytest.raises(ValueError):
        import_trs("(VAR x y)\n(RULES\n  S(x) -> y\n)\n")  # fresh rhs var
    with pytest.raises(ValueError):
        import_trs("(VAR x)\n(RULES\n  Q(x) -> x\n)\n")  # unknown symbol
    with pytest.raises(ValueError):
        import_trs("(VAR x)\n(RULES\n  S(x) => x\n)\n")  # bad arrow
