"""Command line front end.

Every analysis in the package is reachable as a subcommand of ``ddrs``.
Exit codes follow one convention throughout: 0 when the checked property
holds (normal form reached, Confluent, ProvenRTO, clean ground sweep,
loop-free scan, completion succeeded), 1 when it demonstrably fails and
a counterexample is printed (a loop, a non-joinable peak, a wrong normal
form), 2 when the analysis ran out of budget or returned Unknown, and 64
for usage errors.  Output is deterministic: identical invocations print
identical bytes, and JSON objects keep a fixed key order.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from . import cases
from .catalog import RewriteSystem, VARIANT_SYSTEMS, builtin_system, system_names
from .confluence import check_confluence, complete
from .engine import (
    CYCLE,
    DEFAULT_MAX_STEPS,
    NORMAL_FORM,
    STEP_LIMIT,
    normalize,
    strategy_by_name,
)
from .semantics import check_ground, default_ground_strategies
from .syntax import ParseError, format_term, parse_term
from .termination import DEFAULT_LOOP_BUDGET, find_loop, prove_termination_rto
from .trs_io import export_trs, import_trs

EX_OK = 0
EX_FAIL = 1
EX_UNKNOWN = 2
EX_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with the BSD convention for bad invocations."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(f"{self.prog}: error: {message}")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_weights(spec: Optional[str]) -> Union[None, str, Dict[str, int]]:
    if spec is None or spec in ("table7", "default"):
        return spec
    path = Path(spec)
    if not path.is_file():
        raise UsageError(
            f"--weights must be 'table7', 'default', or a file of"
            f" symbol=nat lines; no file {spec!r}")
    table: Dict[str, int] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        sym, eq, value = line.partition("=")
        if eq != "=" or not sym.strip() or not value.strip().isdigit():
            raise UsageError(
                f"{spec}:{lineno}: expected symbol=nat, got {raw!r}")
        table[sym.strip()] = int(value.strip())
    return table


def _add_system_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", metavar="NAME",
                   help="built-in system name (see 'ddrs systems')")
    p.add_argument("--variant", default="edited",
                   choices=("edited", "unedited"))
    p.add_argument("--from-file", metavar="FILE", dest="from_file",
                   help="load the rule system from a rule file instead")


def _resolve_system(args) -> RewriteSystem:
    if args.from_file:
        if args.system:
            raise UsageError("--system and --from-file are exclusive")
        path = Path(args.from_file)
        if not path.is_file():
            raise UsageError(f"no rule file {args.from_file!r}")
        try:
            return import_trs(path.read_text(), name=path.stem)
        except (ValueError, ParseError) as exc:
            raise UsageError(f"{args.from_file}: {exc}")
    if not args.system:
        raise UsageError("one of --system or --from-file is required")
    try:
        return builtin_system(args.system, variant=args.variant)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\""))


def _parse_cli_term(text: str):
    try:
        return parse_term(text)
    except ParseError as exc:
        raise UsageError(f"malformed term {text!r}: {exc}")


def _trace_lines(trace) -> List[str]:
    lines = [f"0. {format_term(trace.initial)}"]
    for i, step in enumerate(trace.steps, start=1):
        pos = ".".join(str(p) for p in step.position) or "root"
        lines.append(f"{i}. [{step.rule} @ {pos}] {format_term(step.result)}")
    return lines


# ---------------------------------------------------------------------------
# Subcommands.  Each returns (text, exit_code).


def cmd_systems(args) -> Tuple[str, int]:
    rows = []
    for name in system_names():
        system = builtin_system(name)
        sig = system.signature
        rows.append({
            "name": name,
            "style": sig.style,
            "base": sig.base,
            "rules": len(system.rules),
            "distinct_unedited": name in VARIANT_SYSTEMS,
        })
    if args.format == "json":
        return _json_text(rows), EX_OK
    lines = [f"{'system':8} {'style':8} {'base':>4}  {'rules':>5}  variants"]
    for r in rows:
        variants = "edited, unedited" if r["distinct_unedited"] else "edited"
        base = "-" if r["base"] is None else str(r["base"])
        lines.append(f"{r['name']:8} {r['style']:8} {base:>4}"
                     f"  {r['rules']:>5}  {variants}")
    return "\n".join(lines) + "\n", EX_OK


def cmd_show(args) -> Tuple[str, int]:
    system = _resolve_system(args)
    rules = [{"name": r.name, "lhs": format_term(r.lhs),
              "rhs": format_term(r.rhs)} for r in system.rules]
    if args.format == "json":
        return _json_text({"system": system.name, "variant": system.variant,
                           "rules": rules}), EX_OK
    width = max(len(r["name"]) for r in rules)
    lines = [f"{system.name} [{system.variant}], {len(rules)} rules"]
    lines += [f"  {r['name']:>{width}}: {r['lhs']} -> {r['rhs']}"
              for r in rules]
    return "\n".join(lines) + "\n", EX_OK


def _normalize_exit(outcome: str) -> int:
    if outcome == NORMAL_FORM:
        return EX_OK
    if outcome == CYCLE:
        return EX_FAIL
    return EX_UNKNOWN


def cmd_normalize(args) -> Tuple[str, int]:
    system = _resolve_system(args)
    term = _parse_cli_term(args.term)
    strategy = strategy_by_name(args.strategy, args.seed)
    res = normalize(system, term, strategy, max_steps=args.max_steps)
    code = _normalize_exit(res.outcome)
    if args.format == "json":
        return _json_text(res.as_dict()), code
    if res.outcome == NORMAL_FORM:
        return format_term(res.final) + "\n", code
    if res.outcome == CYCLE:
        lines = [f"cycle after {res.steps_taken} steps"
                 f" (period {res.period}, from step {res.cycle_start}):"]
        lines += _trace_lines(res.trace)[res.cycle_start:]
        return "\n".join(lines) + "\n", code
    return (f"no normal form within {args.max_steps} steps;"
            f" stopped at {format_term(res.final)}\n"), code


def cmd_trace(args) -> Tuple[str, int]:
    system = _resolve_system(args)
    term = _parse_cli_term(args.term)
    strategy = strategy_by_name(args.strategy, args.seed)
    res = normalize(system, term, strategy, max_steps=args.max_steps)
    code = _normalize_exit(res.outcome)
    if args.format == "json":
        return _json_text([s.as_dict() for s in res.trace.steps]), code
    lines = _trace_lines(res.trace)
    lines.append(f"outcome: {res.outcome}")
    return "\n".join(lines) + "\n", code


def cmd_confluence(args) -> Tuple[str, int]:
    system = _resolve_system(args)
    weights = _load_weights(args.weights)
    res = check_confluence(system, weights=weights, max_steps=args.depth)
    code = {"Confluent": EX_OK, "NonConfluent": EX_FAIL}.get(
        res.verdict, EX_UNKNOWN)
    if args.format == "json":
        return _json_text(res.as_dict()), code
    joinable_n = sum(1 for p in res.pairs if p.status == "joinable")
    not_joinable_n = len(res.counterexamples)
    undecided_n = len(res.pairs) - joinable_n - not_joinable_n
    lines = [f"verdict: {res.verdict}",
             f"critical pairs: {len(res.pairs)} (joinable {joinable_n},"
             f" not joinable {not_joinable_n}, undecided {undecided_n})"]
    if res.verdict == "Confluent":
        lines.append(f"termination basis: {res.termination_basis}")
    elif res.verdict == "NonConfluent":
        cx = res.counterexample
        lines += ["counterexample:",
                  f"  peak:  {format_term(cx.pair.peak)}",
                  f"  left:  {format_term(cx.pair.left)}",
                  f"  right: {format_term(cx.pair.right)}"]
        rest = res.counterexamples[1:]
        if rest:
            lines.append("further non-joinable peaks:")
            for other in rest[:12]:
                lines.append(f"  {format_term(other.pair.peak)}  ~>"
                             f"  {format_term(other.pair.left)}"
                             f"  |  {format_term(other.pair.right)}")
            if len(rest) > 12:
                lines.append(f"  ({len(rest) - 12} more)")
    else:
        lines.append("joinability undecided within budget for"
                     f" {undecided_n} pairs"
                     if undecided_n else
                     "all pairs joinable but termination unproven")
    return "\n".join(lines) + "\n", code


def cmd_termination(args) -> Tuple[str, int]:
    system = _resolve_system(args)
    res = prove_termination_rto(system, _load_weights(args.weights))
    code = EX_OK if res.proven else EX_UNKNOWN
    if args.format == "json":
        return _json_text(res.as_dict()), code
    lines = [f"verdict: {res.verdict}"]
    if res.proven:
        lines[0] += f" ({len(res.entries)} derivations)"
        for e in res.entries:
            lines.append(f"  {', '.join(e.rules)}: {e.start} => {e.end}"
                         f" [{len(e.derivation.steps)} moves]")
    else:
        lines.append(f"unoriented rules: {', '.join(res.failing)}")
    return "\n".join(lines) + "\n", code


def cmd_loops(args) -> Tuple[str, int]:
    system = _resolve_system(args)
    seeds = [_parse_cli_term(args.term)] if args.term else None
    loop = find_loop(system, seeds=seeds, max_steps=args.max_steps)
    if loop is None:
        text = (f"no loop found for {system.label}"
                f" within {args.max_steps} steps\n")
        if args.format == "json":
            text = _json_text({"system": system.name,
                               "variant": system.variant, "loop": None})
        return text, EX_OK
    if args.format == "json":
        return _json_text(loop.as_dict()), EX_FAIL
    lines = [f"loop from {format_term(loop.seed)}"
             f" (period {loop.period}, cycle starts at step"
             f" {loop.cycle_start}):"]
    lines += _trace_lines(loop.trace)
    return "\n".join(lines) + "\n", EX_FAIL


def cmd_ground_check(args) -> Tuple[str, int]:
    system = _resolve_system(args)
    if args.strategy:
        strategies = [strategy_by_name(args.strategy, args.seed)]
    else:
        strategies = default_ground_strategies()
    report = check_ground(system, args.size, strategies=strategies,
                          max_steps=args.max_steps)
    code = EX_OK if report.ok else EX_FAIL
    if args.format == "json":
        payload = report.as_dict()
        del payload["duration_seconds"]  # keep output run-independent
        return _json_text(payload), code
    head = (f"checked {report.terms_checked} ground terms"
            f" (size <= {args.size})"
            f" under {len(report.strategies)} strategies: ")
    if report.ok:
        return head + "no failures\n", code
    lines = [head + f"{len(report.failures)} failures"]
    for f in report.failures[:10]:
        lines.append(f"  {f.term} [{f.strategy}]: {f.outcome},"
                     f" got {f.got}, expected {f.expected}")
    if len(report.failures) > 10:
        lines.append(f"  ({len(report.failures) - 10} further failures"
                     f" not shown)")
    return "\n".join(lines) + "\n", code


def cmd_complete(args) -> Tuple[str, int]:
    system = _resolve_system(args)
    res = complete(system, weights=_load_weights(args.weights),
                   max_iterations=args.max_iterations,
                   max_steps=args.depth)
    code = EX_OK if res.status == "Completed" else EX_UNKNOWN
    added = [{"name": r.name, "lhs": format_term(r.lhs),
              "rhs": format_term(r.rhs)} for r in res.added]
    if args.format == "json":
        payload = {
            "system": system.name,
            "variant": system.variant,
            "status": res.status,
            "reason": res.reason,
            "iterations": res.iterations,
            "added": added,
            "equation": ([format_term(res.equation[0]),
                          format_term(res.equation[1])]
                         if res.equation else None),
        }
        return _json_text(payload), code
    if res.status == "Completed":
        lines = [f"Completed after {res.iterations} iterations,"
                 f" {len(added)} rules added"]
    else:
        lines = [f"GaveUp ({res.reason}) after {res.iterations} iterations,"
                 f" {len(added)} rules added"]
        if res.equation:
            lines.append(f"  unorientable: {format_term(res.equation[0])}"
                         f" == {format_term(res.equation[1])}")
    lines += [f"  {r['name']}: {r['lhs']} -> {r['rhs']}" for r in added]
    return "\n".join(lines) + "\n", code


def cmd_export(args) -> Tuple[str, int]:
    return export_trs(_resolve_system(args)), EX_OK


def _replay_case(index: int) -> Tuple[str, bool, str]:
    for k, (name, thunk) in enumerate(cases.iter_cases()):
        if k == index:
            ok, detail = thunk()
            return name, ok, detail
    raise IndexError(index)


def cmd_fixtures(args) -> Tuple[str, int]:
    names = [name for name, _ in cases.iter_cases()]
    if args.jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(args.jobs) as pool:
            results = pool.map(_replay_case, range(len(names)))
    else:
        results = [(name, *thunk()) for name, thunk in cases.iter_cases()]
    failures = sum(1 for _, ok, _ in results if not ok)
    if args.format == "json":
        payload = {
            "cases": [{"name": n, "ok": ok, "detail": d}
                      for n, ok, d in results],
            "failures": failures,
        }
        return _json_text(payload), EX_OK if not failures else EX_FAIL
    lines = [f"{'ok  ' if ok else 'FAIL'} {name}: {detail}"
             for name, ok, detail in results]
    lines.append(f"{len(results)} cases, {failures} failures")
    return "\n".join(lines) + "\n", EX_OK if not failures else EX_FAIL


# ---------------------------------------------------------------------------
# Parser assembly


def _add_format(p):
    p.add_argument("--format", choices=("human", "json"), default="human")
    p.add_argument("--out", metavar="FILE",
                   help="write output to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ddrs",
        description="Rewrite-system workbench for integer representations")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("systems", help="list the built-in systems",
                       parents=[], description="List the built-in systems.")
    _add_format(p)
    p.set_defaults(func=cmd_systems)

    p = sub.add_parser("show", help="print the rules of a system")
    _add_system_flags(p)
    _add_format(p)
    p.set_defaults(func=cmd_show)

    for name, func, help_text in (
            ("normalize", cmd_normalize, "rewrite a term to normal form"),
            ("trace", cmd_trace, "print every rewrite step")):
        p = sub.add_parser(name, help=help_text)
        _add_system_flags(p)
        p.add_argument("--term", required=True, metavar="TERM")
        p.add_argument("--strategy", default="innermost",
                       choices=("innermost", "outermost", "random",
                                "breadth"))
        p.add_argument("--seed", type=int, default=0,
                       help="seed for the random strategy")
        p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
        _add_format(p)
        p.set_defaults(func=func)

    p = sub.add_parser("confluence",
                       help="critical-pair confluence analysis")
    _add_system_flags(p)
    p.add_argument("--weights", metavar="SPEC",
                   help="termination weights: table7, default, or a file"
                        " of symbol=nat lines")
    p.add_argument("--depth", type=int, default=500,
                   help="joinability search rounds per pair")
    _add_format(p)
    p.set_defaults(func=cmd_confluence)

    p = sub.add_parser("termination",
                       help="recursive tree ordering termination proof")
    _add_system_flags(p)
    p.add_argument("--weights", metavar="SPEC")
    _add_format(p)
    p.set_defaults(func=cmd_termination)

    p = sub.add_parser("loops", help="bounded search for rewrite loops")
    _add_system_flags(p)
    p.add_argument("--term", metavar="TERM",
                   help="seed term (default: scan small ground terms)")
    p.add_argument("--max-steps", type=int, default=DEFAULT_LOOP_BUDGET)
    _add_format(p)
    p.set_defaults(func=cmd_loops)

    p = sub.add_parser("ground-check",
                       help="normalize all small ground terms and compare"
                            " against exact integer values")
    _add_system_flags(p)
    p.add_argument("--size", type=int, default=5,
                   help="maximum term size to enumerate")
    p.add_argument("--strategy",
                   choices=("innermost", "outermost", "random"),
                   help="single strategy (default: the five-strategy"
                        " battery)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    _add_format(p)
    p.set_defaults(func=cmd_ground_check)

    p = sub.add_parser("complete",
                       help="bounded completion of non-joinable pairs")
    _add_system_flags(p)
    p.add_argument("--weights", metavar="SPEC")
    p.add_argument("--max-iterations", type=int, default=25)
    p.add_argument("--depth", type=int, default=500)
    _add_format(p)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("export", help="print a system in rule-file format")
    _add_system_flags(p)
    p.add_argument("--out", metavar="FILE")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("fixtures",
                       help="replay the curated loop/overlap/derivation"
                            " cases as a self-test")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes for case replay")
    _add_format(p)
    p.set_defaults(func=cmd_fixtures)

    return parser


def run(argv, out=None, err=None) -> int:
    """Parse ``argv`` and run one subcommand; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:  # argparse --help exits 0, errors carry text
        if isinstance(exc.code, str):
            print(exc.code, file=err)
            return EX_USAGE
        return exc.code or EX_OK
    if getattr(args, "jobs", 1) < 1:
        print("ddrs: error: --jobs must be at least 1", file=err)
        return EX_USAGE
    if getattr(args, "max_steps", 1) < 1 or getattr(args, "depth", 1) < 1 \
            or getattr(args, "size", 1) < 1 \
            or getattr(args, "max_iterations", 1) < 0:
        print("ddrs: error: budgets must be positive", file=err)
        return EX_USAGE
    try:
        text, code = args.func(args)
    except UsageError as exc:
        print(f"ddrs: error: {exc}", file=err)
        return EX_USAGE
    except ValueError as exc:
        print(f"ddrs: error: {exc}", file=err)
        return EX_USAGE
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
