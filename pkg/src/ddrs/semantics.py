"""Integer semantics: evaluation, canonical forms, ground sweeps.

Every ground term of every built-in signature denotes an integer: digits
denote themselves, ``S``/``P`` add and subtract one, ``-`` negates, ``+``
and ``*`` are exact arithmetic, an append ``x :dK`` denotes ``base*x + K``,
and a tree node ``(x ^d y)`` denotes ``base*x + y``.

``canonical_form`` maps an integer back to the unique intended normal form
of a representation, and ``check_ground`` confirms that rewriting agrees
with arithmetic: every enumerated ground term must normalize, under every
requested strategy, to the canonical form of its value.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .catalog import RewriteSystem, Signature
from .engine import (
    CYCLE,
    NORMAL_FORM,
    STEP_LIMIT,
    DEFAULT_MAX_STEPS,
    LeftmostInnermost,
    LeftmostOutermost,
    RandomSeeded,
    Strategy,
    normalize,
)
from .syntax import format_term
from .terms import App, Term, TermLike, as_term

DEFAULT_RANDOM_SEEDS = (11, 23, 47)


def eval_term(term: TermLike) -> int:
    """Exact integer value of a ground term."""
    term = as_term(term)
    if not term.is_ground:
        raise ValueError(f"cannot evaluate open term {format_term(term)}")

    def go(t: Term) -> int:
        assert isinstance(t, App)
        sym = t.sym
        if not t.args:
            if sym.isdigit():
                return int(sym)
            raise ValueError(f"unknown constant {sym!r}")
        if sym == "S":
            return go(t.args[0]) + 1
        if sym == "P":
            return go(t.args[0]) - 1
        if sym == "-":
            return -go(t.args[0])
        if sym == "+":
            return go(t.args[0]) + go(t.args[1])
        if sym == "*":
            return go(t.args[0]) * go(t.args[1])
        if sym.startswith(":b"):
            return 2 * go(t.args[0]) + int(sym[2:])
        if sym.startswith(":d"):
            return 10 * go(t.args[0]) + int(sym[2:])
        if sym == "^b":
            return 2 * go(t.args[0]) + go(t.args[1])
        if sym == "^d":
            return 10 * go(t.args[0]) + go(t.args[1])
        raise ValueError(f"unknown symbol {sym!r}")

    return go(term)


def _digit_string(value: int, base: int) -> str:
    digits = []
    while value:
        digits.append(str(value % base))
        value //= base
    return "".join(reversed(digits)) or "0"


def _canonical_append(value: int, base: int, marker: str) -> Term:
    if value < 0:
        return App("-", (_canonical_append(-value, base, marker),))
    ds = _digit_string(value, base)
    term = App(ds[0])
    for ch in ds[1:]:
        term = App(f":{marker}{ch}", (term,))
    return term


def _canonical_tree(value: int, base: int, marker: str) -> Term:
    if value < 0:
        return App("-", (_canonical_tree(-value, base, marker),))
    ds = _digit_string(value, base)
    term = App(ds[0])
    for ch in ds[1:]:
        term = App(f"^{marker}", (term, App(ch)))
    return term


def _canonical_ring(value: int) -> Term:
    if value < 0:
        return App("-", (_canonical_ring(-value),))
    if value == 0:
        return App("0")
    term = App("1")
    for _ in range(value - 1):
        term = App("+", (term, App("1")))
    return term


Representation = Union[str, Signature, RewriteSystem]


def _rep_key(rep: Representation) -> str:
    if isinstance(rep, RewriteSystem):
        return rep.signature.representation
    if isinstance(rep, Signature):
        return rep.representation
    return rep


def canonical_form(value: int, rep: Representation) -> Term:
    """The intended normal form of an integer in a representation.

    Appends are most-significant-digit-first chains, trees are left combs,
    the ring writes positive numbers as left-nested sums of ones, and
    negatives wrap the positive form in one negation.  Zero is the digit 0
    everywhere.
    """
    key = _rep_key(rep)
    if key == "append2":
        return _canonical_append(value, 2, "b")
    if key == "append10":
        return _canonical_append(value, 10, "d")
    if key == "tree2":
        return _canonical_tree(value, 2, "b")
    if key == "tree10":
        return _canonical_tree(value, 10, "d")
    if key == "ring":
        return _canonical_ring(value)
    raise ValueError(f"unknown representation {key!r}")


def enumerate_ground_terms(
    signature: Signature, max_size: int, min_size: int = 1
) -> Iterator[Term]:
    """All ground terms of the signature with ``min_size <= size <= max_size``.

    Deterministic order: sizes ascending; within one size, symbols in
    signature order; binary symbols split the remaining size with the left
    argument growing first, and arguments iterate in enumeration order.
    Term size counts symbol occurrences.
    """
    by_size: List[List[Term]] = [[]]
    for size in range(1, max_size + 1):
        level: List[Term] = []
        if size == 1:
            level.extend(App(s.name) for s in signature.constants)
        else:
            for sym in signature.symbols:
                if sym.arity == 1:
                    level.extend(
                        App(sym.name, (a,)) for a in by_size[size - 1])
                elif sym.arity == 2 and size >= 3:
                    for left in range(1, size - 1):
                        for a in by_size[left]:
                            for b in by_size[size - 1 - left]:
                                level.append(App(sym.name, (a, b)))
        by_size.append(level)
        if size >= min_size:
            yield from level


def count_ground_terms(signature: Signature, max_size: int) -> Dict[int, int]:
    """Number of ground terms per size, computed arithmetically."""
    n_const = len(signature.constants)
    n_unary = len(signature.unary)
    n_binary = len(signature.binary)
    counts = {0: 0, 1: n_const}
    for size in range(2, max_size + 1):
        total = n_unary * counts[size - 1]
        total += n_binary * sum(
            counts[l] * counts[size - 1 - l] for l in range(1, size - 1))
        counts[size] = total
    return counts


@dataclass(frozen=True)
class GroundFailure:
    term: str
    strategy: str
    outcome: str  # step_limit | cycle | wrong_normal_form
    got: Optional[str]
    expected: str
    steps: int

    def as_dict(self) -> dict:
        return {
            "term": self.term,
            "strategy": self.strategy,
            "outcome": self.outcome,
            "got": self.got,
            "expected": self.expected,
            "steps": self.steps,
        }


@dataclass
class GroundReport:
    system: str
    variant: str
    max_size: int
    strategies: Tuple[str, ...]
    terms_checked: int
    failures: List[GroundFailure] = field(default_factory=list)
    duration_seconds: float = 0.0
    engine: str = "fast"

    @property
    def ok(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "system": self.system,
            "variant": self.variant,
            "max_size": self.max_size,
            "strategies": list(self.strategies),
            "terms_checked": self.terms_checked,
            "checks": self.terms_checked * len(self.strategies),
            "failures": [f.as_dict() for f in self.failures],
            "failure_count": len(self.failures),
            "duration_seconds": round(self.duration_seconds, 3),
            "engine": self.engine,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=False)

    def failures_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["term", "strategy", "outcome", "got", "expected", "steps"])
        for f in self.failures:
            writer.writerow(
                [f.term, f.strategy, f.outcome, f.got or "", f.expected,
                 f.steps])
        return buf.getvalue()


def default_ground_strategies(
    seeds: Sequence[int] = DEFAULT_RANDOM_SEEDS,
) -> List[Strategy]:
    return [LeftmostInnermost(), LeftmostOutermost()] + [
        RandomSeeded(s) for s in seeds]


def _check_ground_reference(
    system: RewriteSystem,
    max_size: int,
    strategies: Sequence[Strategy],
    max_steps: int,
    failure_limit: int,
) -> GroundReport:
    report = GroundReport(
        system=system.name,
        variant=system.variant,
        max_size=max_size,
        strategies=tuple(s.name for s in strategies),
        terms_checked=0,
        engine="reference",
    )
    for term in enumerate_ground_terms(system.signature, max_size):
        report.terms_checked += 1
        expected = canonical_form(eval_term(term), system.signature)
        expected_text = format_term(expected)
        for strategy in strategies:
            result = normalize(system, term, strategy, max_steps=max_steps)
            if result.outcome != NORMAL_FORM or result.final != expected:
                reached_nf = result.outcome == NORMAL_FORM
                report.failures.append(GroundFailure(
                    term=format_term(term),
                    strategy=strategy.name,
                    outcome=("wrong_normal_form" if reached_nf
                             else result.outcome),
                    got=format_term(result.final) if reached_nf else None,
                    expected=expected_text,
                    steps=result.steps_taken,
                ))
                if len(report.failures) >= failure_limit:
                    return report
    return report


def check_ground(
    system: RewriteSystem,
    max_size: int,
    strategies: Optional[Sequence[Strategy]] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    engine: str = "fast",
    failure_limit: int = 1000,
) -> GroundReport:
    """Normalize every ground term up to ``max_size`` under every strategy.

    A term passes when every strategy reaches a normal form within the step
    budget and that normal form is the canonical form of the term's value.
    The default strategy set is leftmost-innermost, leftmost-outermost, and
    three fixed-seed random walks.

    ``engine="fast"`` runs a tuple-encoded rewriter with memoized subterm
    normalization; ``engine="reference"`` runs the plain engine (use it for
    small sweeps and cross-checks).  Both produce the same report contents.
    """
    if strategies is None:
        strategies = default_ground_strategies()
    start = time.monotonic()
    if engine == "fast":
        from . import _sweep

        report = _sweep.check_ground_fast(
            system, max_size, strategies, max_steps, failure_limit)
    elif engine == "reference":
        report = _check_ground_reference(
            system, max_size, strategies, max_steps, failure_limit)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    report.duration_seconds = time.monotonic() - start
    return report
