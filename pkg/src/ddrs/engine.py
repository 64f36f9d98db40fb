"""Strategy-driven normalization with full traces.

A strategy picks the next redex.  ``LeftmostInnermost`` and
``LeftmostOutermost`` are the usual deterministic orders; ``RandomSeeded``
draws uniformly among all (position, rule) redexes using a generator seeded
once per normalization, so runs are reproducible; ``FullBreadth`` abandons
the single-path view and explores every one-step successor breadth-first,
reporting a cycle if the rewrite graph has one reachable from the start,
and otherwise the first normal form found.

``normalize`` keeps the entire history of visited terms, so any syntactic
revisit is reported as a cycle together with the index where the loop
closes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .catalog import RewriteSystem
from .syntax import format_term
from .terms import App, Position, Rule, Term, apply_subst, match, replace_at

DEFAULT_MAX_STEPS = 10_000


@dataclass(frozen=True)
class RewriteStep:
    """One rewrite: which rule fired, where, and the whole resulting term."""

    rule: str
    position: Position
    result: Term

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "position": list(self.position),
            "term": format_term(self.result),
        }


@dataclass(frozen=True)
class Trace:
    initial: Term
    steps: Tuple[RewriteStep, ...] = ()

    @property
    def final(self) -> Term:
        return self.steps[-1].result if self.steps else self.initial

    def term_at(self, index: int) -> Term:
        """The index-th term of the trace; index 0 is the initial term."""
        return self.initial if index == 0 else self.steps[index - 1].result

    def rule_names(self) -> Tuple[str, ...]:
        return tuple(s.rule for s in self.steps)

    def as_dict(self) -> dict:
        return {
            "initial": format_term(self.initial),
            "steps": [s.as_dict() for s in self.steps],
        }

    def __len__(self) -> int:
        return len(self.steps)


NORMAL_FORM = "normal_form"
STEP_LIMIT = "step_limit"
CYCLE = "cycle"


@dataclass(frozen=True)
class NormalizeResult:
    outcome: str  # normal_form | step_limit | cycle
    trace: Trace
    cycle_start: Optional[int] = None

    @property
    def final(self) -> Term:
        return self.trace.final

    @property
    def steps_taken(self) -> int:
        return len(self.trace)

    @property
    def period(self) -> Optional[int]:
        """Length of the closing loop for cycle outcomes."""
        if self.outcome != CYCLE or self.cycle_start is None:
            return None
        return len(self.trace) - self.cycle_start

    def as_dict(self) -> dict:
        d = {
            "outcome": self.outcome,
            "final": format_term(self.final),
            "steps": len(self.trace),
            "trace": self.trace.as_dict(),
        }
        if self.outcome == CYCLE:
            d["cycle_start"] = self.cycle_start
            d["period"] = self.period
        return d


def match_root(system: RewriteSystem, term: Term) -> Optional[Tuple[Rule, Term]]:
    """First catalog rule applicable at the root, with the rewritten term."""
    if not isinstance(term, App):
        return None
    for _, rule in system.rules_for_root(term.sym):
        subst = match(rule.lhs, term)
        if subst is not None:
            return rule, apply_subst(rule.rhs, subst)
    return None


def rewrite_once(
    system: RewriteSystem, term: Term, position: Position, rule: Rule
) -> Optional[Term]:
    """Apply one named rule at one position, or None if it does not match."""
    sub = term
    for i in position:
        if not isinstance(sub, App) or not 1 <= i <= len(sub.args):
            return None
        sub = sub.args[i - 1]
    subst = match(rule.lhs, sub)
    if subst is None:
        return None
    return replace_at(term, position, apply_subst(rule.rhs, subst))


def successors(
    system: RewriteSystem, term: Term
) -> List[Tuple[Position, str, Term]]:
    """All one-step rewrites of ``term``.

    Ordered by position (lexicographic, which equals preorder) and then by
    catalog rule order, so every consumer sees the same deterministic list.
    """
    tagged: List[Tuple[Position, int, str, Term]] = []
    stack: List[Tuple[Position, Term]] = [((), term)]
    while stack:
        pos, sub = stack.pop()
        if not isinstance(sub, App):
            continue
        for idx, rule in system.rules_for_root(sub.sym):
            subst = match(rule.lhs, sub)
            if subst is not None:
                tagged.append(
                    (pos, idx, rule.name,
                     replace_at(term, pos, apply_subst(rule.rhs, subst)))
                )
        for i in range(len(sub.args), 0, -1):
            stack.append((pos + (i,), sub.args[i - 1]))
    tagged.sort(key=lambda item: (item[0], item[1]))
    return [(pos, name, result) for pos, _, name, result in tagged]


class Strategy:
    """Chooses the next rewrite.  Subclasses define ``pick``."""

    name = "strategy"

    def start(self):
        """Per-normalization state (for example a seeded generator)."""
        return None

    def pick(
        self, system: RewriteSystem, term: Term, state
    ) -> Optional[Tuple[Position, str, Term]]:
        raise NotImplementedError

    def describe(self) -> str:
        return self.name


class LeftmostInnermost(Strategy):
    name = "innermost"

    def pick(self, system, term, state):
        def search(sub: Term, pos: Position):
            if not isinstance(sub, App):
                return None
            for i, arg in enumerate(sub.args, start=1):
                found = search(arg, pos + (i,))
                if found is not None:
                    return found
            for _, rule in system.rules_for_root(sub.sym):
                subst = match(rule.lhs, sub)
                if subst is not None:
                    return pos, rule.name, apply_subst(rule.rhs, subst)
            return None

        found = search(term, ())
        if found is None:
            return None
        pos, name, replacement = found
        return pos, name, replace_at(term, pos, replacement)


class LeftmostOutermost(Strategy):
    name = "outermost"

    def pick(self, system, term, state):
        def search(sub: Term, pos: Position):
            if not isinstance(sub, App):
                return None
            for _, rule in system.rules_for_root(sub.sym):
                subst = match(rule.lhs, sub)
                if subst is not None:
                    return pos, rule.name, apply_subst(rule.rhs, subst)
            for i, arg in enumerate(sub.args, start=1):
                found = search(arg, pos + (i,))
                if found is not None:
                    return found
            return None

        found = search(term, ())
        if found is None:
            return None
        pos, name, replacement = found
        return pos, name, replace_at(term, pos, replacement)


class RandomSeeded(Strategy):
    """Uniform choice among all redexes, reproducible from a seed."""

    def __init__(self, seed: int):
        self.seed = seed
        self.name = f"random({seed})"

    def start(self):
        return random.Random(self.seed)

    def pick(self, system, term, state):
        options = successors(system, term)
        if not options:
            return None
        return options[state.randrange(len(options))]


class FullBreadth(Strategy):
    """Breadth-first exploration of the whole rewrite graph.

    Not a single-path strategy: ``normalize`` treats it specially.  A cycle
    anywhere in the reachable graph takes priority over normal forms; with
    no cycle in budget, the first normal form in breadth-first order is
    returned.
    """

    name = "breadth"

    def pick(self, system, term, state):  # pragma: no cover - not used
        raise RuntimeError("FullBreadth does not pick single steps")


def ancestor_cycle_search(
    system: RewriteSystem, seed: Term, budget: int
) -> Tuple[Optional[Tuple[Trace, int]], bool]:
    """Breadth-first search for a path from ``seed`` back into itself.

    Expands successors in deterministic order and tests each generated child
    against the chain of its ancestors; the first hit yields the trace
    (path from the seed through the loop and back to the revisited term)
    and the index at which the loop closes.  Returns (result, exhausted)
    where ``exhausted`` is True when the budget ran out before the graph
    was fully explored.
    """
    # parents: child -> (parent, rule, position); seed has no parent.
    parents: Dict[Term, Optional[Tuple[Term, str, Position]]] = {seed: None}
    queue: List[Term] = [seed]
    head = 0
    expanded = 0
    while head < len(queue):
        if expanded >= budget:
            return None, True
        current = queue[head]
        head += 1
        expanded += 1
        ancestors = set()
        node: Optional[Term] = current
        while node is not None:
            ancestors.add(node)
            entry = parents[node]
            node = entry[0] if entry else None
        for pos, rule_name, result in successors(system, current):
            if result in ancestors:
                # Walk the parent chain from current all the way back to
                # the seed, then assemble the forward trace and close it.
                chain: List[Tuple[Term, str, Position]] = []
                node = current
                while parents[node] is not None:
                    parent, rname, rpos = parents[node]
                    chain.append((node, rname, rpos))
                    node = parent
                chain.reverse()
                steps = [RewriteStep(rname, rpos, node_term)
                         for node_term, rname, rpos in chain]
                steps.append(RewriteStep(rule_name, pos, result))
                # Index of the first occurrence of the revisited term along
                # the path seed .. current: distance from seed to `result`.
                prefix = 0
                node = result
                while parents[node] is not None:
                    node = parents[node][0]
                    prefix += 1
                return (Trace(seed, tuple(steps)), prefix), False
            if result not in parents:
                parents[result] = (current, rule_name, pos)
                queue.append(result)
    return None, False


def _breadth_normalize(
    system: RewriteSystem, term: Term, max_steps: int
) -> NormalizeResult:
    found, exhausted = ancestor_cycle_search(system, term, max_steps)
    if found is not None:
        trace, cycle_start = found
        return NormalizeResult(CYCLE, trace, cycle_start=cycle_start)
    # No reachable cycle (within budget): find the first normal form.
    parents: Dict[Term, Optional[Tuple[Term, str, Position]]] = {term: None}
    queue: List[Term] = [term]
    head = 0
    expanded = 0
    last = term
    while head < len(queue):
        if expanded >= max_steps:
            return NormalizeResult(STEP_LIMIT, _chain_trace(parents, term, last))
        current = queue[head]
        head += 1
        expanded += 1
        last = current
        succ = successors(system, current)
        if not succ:
            return NormalizeResult(NORMAL_FORM, _chain_trace(parents, term, current))
        for pos, rule_name, result in succ:
            if result not in parents:
                parents[result] = (current, rule_name, pos)
                queue.append(result)
    return NormalizeResult(STEP_LIMIT, _chain_trace(parents, term, last))


def _chain_trace(parents, seed: Term, node: Term) -> Trace:
    chain: List[Tuple[Term, str, Position]] = []
    while parents[node] is not None:
        parent, rname, rpos = parents[node]
        chain.append((node, rname, rpos))
        node = parent
    chain.reverse()
    return Trace(seed, tuple(
        RewriteStep(rname, rpos, node_term) for node_term, rname, rpos in chain))


def normalize(
    system: RewriteSystem,
    term: Term,
    strategy: Optional[Strategy] = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> NormalizeResult:
    """Rewrite ``term`` until a normal form, a revisit, or the step budget.

    The full history of visited terms is kept, so cycles are recognized the
    moment any earlier term reappears; ``cycle_start`` indexes the first
    occurrence of the repeated term within the trace.
    """
    if strategy is None:
        strategy = LeftmostInnermost()
    if isinstance(strategy, FullBreadth):
        return _breadth_normalize(system, term, max_steps)
    state = strategy.start()
    history: Dict[Term, int] = {term: 0}
    steps: List[RewriteStep] = []
    current = term
    while True:
        picked = strategy.pick(system, current, state)
        if picked is None:
            return NormalizeResult(NORMAL_FORM, Trace(term, tuple(steps)))
        pos, rule_name, result = picked
        steps.append(RewriteStep(rule_name, pos, result))
        seen = history.get(result)
        if seen is not None:
            return NormalizeResult(
                CYCLE, Trace(term, tuple(steps)), cycle_start=seen)
        history[result] = len(steps)
        current = result
        if len(steps) >= max_steps:
            return NormalizeResult(STEP_LIMIT, Trace(term, tuple(steps)))


STRATEGY_BUILDERS = {
    "innermost": lambda seed=None: LeftmostInnermost(),
    "outermost": lambda seed=None: LeftmostOutermost(),
    "random": lambda seed=0: RandomSeeded(0 if seed is None else seed),
    "breadth": lambda seed=None: FullBreadth(),
}


def strategy_by_name(name: str, seed: Optional[int] = None) -> Strategy:
    try:
        builder = STRATEGY_BUILDERS[name]
    except KeyError:
        raise ValueError(
            f"unknown strategy {name!r}; choose from "
            f"{', '.join(STRATEGY_BUILDERS)}") from None
    return builder(seed)
