"""Rule-file interchange: plain-text export and import of rewrite systems.

The file format is deliberately minimal so other tools can consume it:

    (VAR x y)
    (RULES
      S(0) -> 1
      x + 0 -> x
    )

Line one declares the variables (space separated, in order of first
occurrence across the rules), then one ``lhs -> rhs`` line per rule with
two-space indent, using the same concrete term grammar as the rest of
the package.  Export output is byte-stable: UTF-8, LF endings, one
trailing newline.

Import re-parses that shape, checks that every identifier in a rule is a
declared variable, infers the signature as the smallest catalog
signature covering every symbol used, and rebuilds the system with
positional rule names (so export then import is the identity up to rule
names).
"""

from __future__ import annotations

from typing import Dict, List, Set, Tuple

from .catalog import SIGNATURES, RewriteSystem, Signature
from .syntax import format_term, parse_term
from .terms import App, Rule, Term, variables


def export_trs(system: RewriteSystem) -> str:
    """Serialize the rules of a system to the rule-file format."""
    names: List[str] = []
    seen: Set[str] = set()
    for rule in system.rules:
        for v in variables(rule.lhs) + variables(rule.rhs):
            if v not in seen:
                seen.add(v)
                names.append(v)
    head = f"(VAR {' '.join(names)})" if names else "(VAR)"
    lines = [head, "(RULES"]
    for rule in system.rules:
        lines.append(f"  {format_term(rule.lhs)} -> {format_term(rule.rhs)}")
    lines.append(")")
    return "\n".join(lines) + "\n"


def _symbols_of(term: Term, out: Set[str]) -> None:
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, App):
            out.add(t.sym)
            stack.extend(t.args)


def _infer_signature(symbols: Set[str]) -> Signature:
    """Smallest catalog signature whose symbols cover the given set."""
    candidates = sorted(SIGNATURES.values(),
                        key=lambda sig: (len(sig.symbols), sig.name))
    for sig in candidates:
        if all(s in sig for s in symbols):
            return sig
    everything = {s.name for sig in SIGNATURES.values() for s in sig.symbols}
    unknown = sorted(symbols - everything)
    if unknown:
        raise ValueError(f"unknown symbol {unknown[0]!r}")
    raise ValueError(
        "rules mix symbols that no single catalog signature covers")


def import_trs(text: str, name: str = "imported",
               variant: str = "imported") -> RewriteSystem:
    """Parse a rule file back into a rewrite system.

    Raises ValueError on structural problems: missing VAR/RULES framing,
    a rule line without the arrow, an identifier not declared in the VAR
    line, a right-hand side with a fresh variable, or a symbol outside
    every catalog signature.
    """
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or not (lines[0].startswith("(VAR") and lines[0].endswith(")")):
        raise ValueError("expected a (VAR ...) line first")
    declared = set(lines[0][4:-1].split())
    if len(lines) < 3 or lines[1].strip() != "(RULES" or lines[-1].strip() != ")":
        raise ValueError("expected a (RULES ... ) block after the VAR line")
    rules: List[Rule] = []
    used: Set[str] = set()
    for ln in lines[2:-1]:
        body = ln.strip()
        if " -> " not in body:
            raise ValueError(f"rule line without '->': {body!r}")
        lhs_text, rhs_text = body.split(" -> ", 1)
        lhs = parse_term(lhs_text)
        rhs = parse_term(rhs_text)
        for v in variables(lhs) + variables(rhs):
            if v not in declared:
                raise ValueError(f"undeclared variable {v!r} in {body!r}")
        rules.append(Rule(str(len(rules) + 1), lhs, rhs))
        _symbols_of(lhs, used)
        _symbols_of(rhs, used)
    sig = _infer_signature(used)
    return RewriteSystem(name, variant, sig, tuple(rules))
