"""Termination proofs over weighted commutative trees, and loop search.

Each rewrite rule is abstracted to a pair of finite trees labeled with
natural-number weights: apply ``term_tree`` to both sides with a weight
table for the signature.  A rule is strictly decreasing when the left
tree rewrites to the right tree in a small calculus on marked trees:

  1. mark any unmarked node,
  2. a marked node of weight n may become a fresh node of any smaller
     weight m whose children are copies of the marked node,
  3. a marked node may trade its mark to one child,
  4. a marked node may collapse to one of its children.

Children are unordered, so trees are compared up to permutation.  The
resulting order is decidable for these finite trees; ``tree_reduces``
implements the decision and, on success, returns an explicit step list
that ``replay_steps`` can re-execute mechanically.  ``prove_termination_rto``
runs the check over a whole system, grouping rules that abstract to the
same tree pair.  Variables are kept apart from weight-0 digits (a leaf
carrying a variable tag only matches itself), which makes a per-rule
proof stable under ground substitution.

``find_loop`` is the complementary disproof: a breadth-first search of
the rewrite graph from small ground seeds that reports the first path
leading back into one of its own ancestors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import _sweep
from .catalog import RewriteSystem, Signature
from .engine import RewriteStep, Trace, rewrite_once
from .semantics import enumerate_ground_terms
from .syntax import format_term
from .terms import Term, Var

__all__ = [
    "Tree",
    "TreeStep",
    "TreeDerivation",
    "parse_tree",
    "format_tree",
    "apply_tree_step",
    "replay_steps",
    "tree_reduces",
    "tree_path_search",
    "term_tree",
    "weight_preset",
    "resolve_weights",
    "parse_weights",
    "DerivationEntry",
    "TerminationResult",
    "prove_termination_rto",
    "Loop",
    "find_loop",
]


# ---------------------------------------------------------------------------
# Trees


@dataclass(frozen=True)
class Tree:
    """Finite tree with natural-number labels and optional node marks.

    ``tag`` distinguishes leaves that stand for rule variables: two
    tagged leaves are equal only if their tags agree, and no rewrite in
    the tree calculus can manufacture a tagged leaf.  Ordinary nodes
    (including digit leaves) have ``tag None``.
    """

    label: int
    children: Tuple["Tree", ...] = ()
    star: bool = False
    tag: Optional[str] = None

    def __post_init__(self):
        if self.tag is not None and self.children:
            raise ValueError("tagged tree nodes must be leaves")

    @property
    def key(self):
        """Hashable form invariant under reordering of children."""
        return (self.label, self.star, self.tag or "",
                tuple(sorted(c.key for c in self.children)))

    def canon(self) -> "Tree":
        kids = tuple(sorted((c.canon() for c in self.children),
                            key=lambda c: c.key))
        return Tree(self.label, kids, self.star, self.tag)

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    def __str__(self) -> str:
        return format_tree(self)


def format_tree(t: Tree) -> str:
    head = f"{t.label}{'*' if t.star else ''}"
    if not t.children:
        return head
    return head + "(" + ",".join(format_tree(c) for c in t.children) + ")"


def parse_tree(text: str) -> Tree:
    """Inverse of ``format_tree`` for untagged trees, e.g. ``4(2(0),0)``."""
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def node() -> Tree:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(text) and text[pos].isdigit():
            pos += 1
        if pos == start:
            raise ValueError(f"expected a label at index {start} in {text!r}")
        label = int(text[start:pos])
        star = False
        if pos < len(text) and text[pos] == "*":
            star = True
            pos += 1
        kids: List[Tree] = []
        skip_ws()
        if pos < len(text) and text[pos] == "(":
            pos += 1
            kids.append(node())
            skip_ws()
            while pos < len(text) and text[pos] == ",":
                pos += 1
                kids.append(node())
                skip_ws()
            if pos >= len(text) or text[pos] != ")":
                raise ValueError(f"unclosed subtree in {text!r}")
            pos += 1
        return Tree(label, tuple(kids), star)

    t = node()
    skip_ws()
    if pos != len(text):
        raise ValueError(f"trailing input at index {pos} in {text!r}")
    return t


# ---------------------------------------------------------------------------
# The marked-tree calculus


@dataclass(frozen=True)
class TreeStep:
    """One calculus move at an explicit position (1-based child indices).

    rule 1: mark the node (must be unmarked).
    rule 2: replace the marked node by ``label`` with ``copies`` copies
            of itself as children (``label`` strictly smaller).
    rule 3: unmark the node and mark child ``child``.
    rule 4: collapse the marked node to child ``child``.
    """

    rule: int
    pos: Tuple[int, ...] = ()
    child: int = 0
    label: int = 0
    copies: int = 0

    def as_dict(self) -> dict:
        d = {"rule": self.rule, "pos": list(self.pos)}
        if self.rule in (3, 4):
            d["child"] = self.child
        if self.rule == 2:
            d["label"] = self.label
            d["copies"] = self.copies
        return d


def _subtree(t: Tree, pos: Tuple[int, ...]) -> Tree:
    for i in pos:
        t = t.children[i - 1]
    return t


def _replace(t: Tree, pos: Tuple[int, ...], new: Tree) -> Tree:
    if not pos:
        return new
    i = pos[0]
    kids = list(t.children)
    kids[i - 1] = _replace(kids[i - 1], pos[1:], new)
    return Tree(t.label, tuple(kids), t.star, t.tag)


def apply_tree_step(t: Tree, step: TreeStep) -> Tree:
    """Apply one move, raising ValueError if it is not legal there."""
    node = _subtree(t, step.pos)
    if step.rule == 1:
        if node.star:
            raise ValueError("rule 1 needs an unmarked node")
        new = Tree(node.label, node.children, True, node.tag)
    elif step.rule == 2:
        if not node.star:
            raise ValueError("rule 2 needs a marked node")
        if node.tag is not None or step.label >= node.label:
            raise ValueError("rule 2 needs a strictly smaller plain label")
        new = Tree(step.label, (node,) * step.copies)
    elif step.rule == 3:
        if not node.star:
            raise ValueError("rule 3 needs a marked node")
        c = node.children[step.child - 1]
        if c.star:
            raise ValueError("rule 3 target child is already marked")
        kids = list(node.children)
        kids[step.child - 1] = Tree(c.label, c.children, True, c.tag)
        new = Tree(node.label, tuple(kids), False, node.tag)
    elif step.rule == 4:
        if not node.star:
            raise ValueError("rule 4 needs a marked node")
        new = node.children[step.child - 1]
    else:
        raise ValueError(f"no such rule {step.rule}")
    return _replace(t, step.pos, new)


def replay_steps(start: Tree, steps: Sequence[TreeStep]) -> Tree:
    cur = start
    for step in steps:
        cur = apply_tree_step(cur, step)
    return cur


def _has_star(t: Tree) -> bool:
    return t.star or any(_has_star(c) for c in t.children)


@dataclass(frozen=True)
class TreeDerivation:
    """A replayed, validated witness that ``start`` reduces to ``end``."""

    start: Tree
    steps: Tuple[TreeStep, ...]
    end: Tree

    def __len__(self) -> int:
        return len(self.steps)

    def as_dict(self) -> dict:
        return {
            "start": format_tree(self.start),
            "end": format_tree(self.end),
            "steps": [s.as_dict() for s in self.steps],
        }


# ---------------------------------------------------------------------------
# Deciding the order

# The decision works on plain (unmarked) trees.  reach = reflexive
# closure of the strict order.  The three ways s = n(c...) can strictly
# reduce to g mirror the calculus moves available after marking s:
#   A. collapse to some child that reaches g                (rule 4)
#   B. n > label(g), g plain, and s reduces strictly to every
#      child of g                                           (rule 2)
#   C. labels and arity agree and some pairing of children is
#      reach everywhere and strict somewhere                (rule 3)
# Marks never change arity under one label, so case C needs a bijection
# rather than a general multiset comparison.


def _reach(s: Tree, g: Tree, memo: dict) -> bool:
    return s.key == g.key or _strict(s, g, memo)


def _strict(s: Tree, g: Tree, memo: dict) -> bool:
    key = (s.key, g.key)
    hit = memo.get(key)
    if hit is not None:
        return hit
    memo[key] = False  # cycles in the recursion cannot prove anything
    res = any(_reach(c, g, memo) for c in s.children)
    if not res and g.tag is None and s.tag is None and s.label > g.label:
        res = all(_strict(s, gc, memo) for gc in g.children)
    if (not res and s.tag == g.tag and s.label == g.label
            and len(s.children) == len(g.children) and s.children):
        res = any(
            all(_reach(c, g.children[p], memo)
                for c, p in zip(s.children, perm))
            and any(c.key != g.children[p].key
                    for c, p in zip(s.children, perm))
            for perm in itertools.permutations(range(len(g.children))))
    memo[key] = res
    return res


def _build_star(s: Tree, g: Tree, pos: Tuple[int, ...], memo: dict,
                out: List[TreeStep]) -> None:
    """Emit moves taking the marked copy of ``s`` at ``pos`` down to ``g``.

    Follows the same case order as ``_strict``, so a witness always
    exists when ``_strict(s, g)`` holds.
    """
    for i, c in enumerate(s.children, start=1):
        if c.key == g.key:
            out.append(TreeStep(4, pos, child=i))
            return
        if _strict(c, g, memo):
            out.append(TreeStep(4, pos, child=i))
            out.append(TreeStep(1, pos))
            _build_star(c, g, pos, memo, out)
            return
    if g.tag is None and s.tag is None and s.label > g.label:
        if all(_strict(s, gc, memo) for gc in g.children):
            out.append(TreeStep(2, pos, label=g.label,
                                copies=len(g.children)))
            for j, gc in enumerate(g.children, start=1):
                _build_star(s, gc, pos + (j,), memo, out)
            return
    if (s.tag == g.tag and s.label == g.label
            and len(s.children) == len(g.children) and s.children):
        for perm in itertools.permutations(range(len(g.children))):
            pairs = list(zip(s.children, [g.children[p] for p in perm]))
            if not all(_reach(c, gc, memo) for c, gc in pairs):
                continue
            diffs = [i for i, (c, gc) in enumerate(pairs, start=1)
                     if c.key != gc.key]
            if not diffs:
                continue
            first = diffs[0]
            out.append(TreeStep(3, pos, child=first))
            _build_star(pairs[first - 1][0], pairs[first - 1][1],
                        pos + (first,), memo, out)
            for i in diffs[1:]:
                out.append(TreeStep(1, pos + (i,)))
                _build_star(pairs[i - 1][0], pairs[i - 1][1],
                            pos + (i,), memo, out)
            return
    raise AssertionError("no witness found for a claimed strict pair")


def tree_reduces(s: Tree, g: Tree,
                 memo: Optional[dict] = None) -> Optional[TreeDerivation]:
    """Decide s > g and return a validated step-by-step witness, or None."""
    if memo is None:
        memo = {}
    if s.key == g.key or not _strict(s, g, memo):
        return None
    steps: List[TreeStep] = [TreeStep(1, ())]
    _build_star(s, g, (), memo, steps)
    end = replay_steps(s, steps)
    if _has_star(end) or end.key != g.key:
        raise AssertionError("witness replay does not land on the goal")
    return TreeDerivation(s, tuple(steps), end)


def _labels(t: Tree) -> set:
    out = {t.label}
    for c in t.children:
        out |= _labels(c)
    return out


def tree_path_search(start: Tree, goal: Tree, max_steps: int,
                     max_copies: int = 2) -> Optional[Tuple[TreeStep, ...]]:
    """Breadth-first search for a short move sequence from start to goal.

    Endpoints may carry marks; trees are compared up to reordering of
    children.  Rule 2 is throttled to labels occurring in the goal and
    at most ``max_copies`` copies, which keeps the search space small.
    """
    goal_key = goal.key
    if start.key == goal_key:
        return ()
    goal_labels = sorted(_labels(goal))

    def positions(t: Tree, prefix=()):
        yield prefix, t
        for i, c in enumerate(t.children, start=1):
            yield from positions(c, prefix + (i,))

    def moves(t: Tree):
        for pos, node in positions(t):
            if not node.star:
                yield TreeStep(1, pos)
                continue
            if node.tag is None:
                for m in goal_labels:
                    if m >= node.label:
                        break
                    for k in range(max_copies + 1):
                        yield TreeStep(2, pos, label=m, copies=k)
            for i, c in enumerate(node.children, start=1):
                if not c.star:
                    yield TreeStep(3, pos, child=i)
                yield TreeStep(4, pos, child=i)

    frontier: List[Tuple[Tree, Tuple[TreeStep, ...]]] = [(start, ())]
    seen = {start.key}
    for _ in range(max_steps):
        nxt: List[Tuple[Tree, Tuple[TreeStep, ...]]] = []
        for t, path in frontier:
            for step in moves(t):
                u = apply_tree_step(t, step)
                k = u.key
                if k == goal_key:
                    return path + (step,)
                if k not in seen:
                    seen.add(k)
                    nxt.append((u, path + (step,)))
        if not nxt:
            return None
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# From terms to trees


def weight_preset(name: str, signature: Signature) -> Dict[str, int]:
    """Built-in weight tables.

    ``table7`` layers the binary-append signature as digits 0, appends 2,
    successor/predecessor 3, plus 4, times 5, with minus at 1; the same
    layering is reused verbatim on any signature.  ``default`` picks a
    table per signature style: ``table7`` for base-2 appends, digit-value
    weights for base-10 systems (each digit weighs its value, so the
    per-digit product rules decrease), and small layered tables for the
    tree and ring styles.
    """
    if name == "table7":
        by_kind = {"digit": 0, "append": 2, "tree": 2, "succ": 3,
                   "pred": 3, "plus": 4, "times": 5, "neg": 1}
        return {s.name: by_kind[s.kind] for s in signature.symbols}
    if name != "default":
        raise ValueError(f"unknown weight preset {name!r}")
    if signature.style == "append" and signature.base == 2:
        return weight_preset("table7", signature)
    if signature.style == "ring":
        by_kind = {"neg": 1, "plus": 12, "times": 13}
        return {s.name: s.value if s.kind == "digit" else by_kind[s.kind]
                for s in signature.symbols}
    if signature.style == "tree" and signature.base == 2:
        by_kind = {"tree": 10, "neg": 1, "plus": 12, "times": 13}
        return {s.name: s.value if s.kind == "digit" else by_kind[s.kind]
                for s in signature.symbols}
    by_kind = {"append": 10, "tree": 10, "succ": 11, "pred": 11,
               "neg": 1, "plus": 12, "times": 13}
    return {s.name: s.value if s.kind == "digit" else by_kind[s.kind]
            for s in signature.symbols}


def parse_weights(text: str) -> Dict[str, int]:
    """Parse ``symbol=weight`` lines; '#' starts a comment."""
    out: Dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected symbol=weight")
        sym, _, val = line.partition("=")
        sym = sym.strip()
        try:
            w = int(val.strip())
        except ValueError:
            raise ValueError(f"line {lineno}: weight must be an integer")
        if w < 0:
            raise ValueError(f"line {lineno}: weight must be nonnegative")
        if sym in out:
            raise ValueError(f"line {lineno}: duplicate symbol {sym!r}")
        out[sym] = w
    return out


def resolve_weights(spec, signature: Signature) -> Dict[str, int]:
    """Accept a preset name, a mapping, or None (meaning ``default``)."""
    if spec is None:
        spec = "default"
    if isinstance(spec, str):
        return weight_preset(spec, signature)
    weights = dict(spec)
    for s in signature.symbols:
        if s.name not in weights:
            raise ValueError(f"no weight given for symbol {s.name!r}")
        if not isinstance(weights[s.name], int) or weights[s.name] < 0:
            raise ValueError(f"weight of {s.name!r} must be a natural")
    return {s.name: weights[s.name] for s in signature.symbols}


def term_tree(term: Term, weights: Mapping[str, int]) -> Tree:
    """Weight abstraction of a term; variables become tagged 0-leaves."""
    if isinstance(term, Var):
        return Tree(0, tag=term.name)
    kids = tuple(term_tree(a, weights) for a in term.args)
    try:
        w = weights[term.sym]
    except KeyError:
        raise ValueError(f"no weight for symbol {term.sym!r}") from None
    return Tree(w, kids)


# ---------------------------------------------------------------------------
# Whole-system proofs


@dataclass(frozen=True)
class DerivationEntry:
    """One distinct tree pair and the rules that abstract to it."""

    rules: Tuple[str, ...]
    start: Tree
    end: Tree
    derivation: TreeDerivation

    def as_dict(self) -> dict:
        return {
            "rules": list(self.rules),
            "start": format_tree(self.start),
            "end": format_tree(self.end),
            "steps": [s.as_dict() for s in self.derivation.steps],
        }


@dataclass(frozen=True)
class TerminationResult:
    system: str
    variant: str
    verdict: str  # ProvenRTO | Unknown
    weights: Dict[str, int]
    entries: Tuple[DerivationEntry, ...] = ()
    failing: Tuple[str, ...] = ()

    @property
    def proven(self) -> bool:
        return self.verdict == "ProvenRTO"

    def as_dict(self) -> dict:
        return {
            "system": self.system,
            "variant": self.variant,
            "verdict": self.verdict,
            "weights": dict(self.weights),
            "derivations": [e.as_dict() for e in self.entries],
            "failing": list(self.failing),
        }


def prove_termination_rto(system: RewriteSystem,
                          weights=None) -> TerminationResult:
    """Try to orient every rule of the system with one weight table.

    Rules whose two sides abstract to the same tree pair share a single
    derivation entry.  If any rule fails, the verdict is Unknown and the
    failing rule names are reported (the order may still hold; only this
    proof method gave up).
    """
    table = resolve_weights(weights, system.signature)
    memo: dict = {}
    entries: List[DerivationEntry] = []
    by_pair: Dict[tuple, int] = {}
    failing: List[str] = []
    for rule in system.rules:
        s = term_tree(rule.lhs, table)
        g = term_tree(rule.rhs, table)
        pair = (s.key, g.key)
        if pair in by_pair:
            idx = by_pair[pair]
            entries[idx] = DerivationEntry(
                entries[idx].rules + (rule.name,),
                entries[idx].start, entries[idx].end,
                entries[idx].derivation)
            continue
        d = tree_reduces(s, g, memo)
        if d is None:
            failing.append(rule.name)
            continue
        by_pair[pair] = len(entries)
        entries.append(DerivationEntry((rule.name,), s, g, d))
    verdict = "ProvenRTO" if not failing else "Unknown"
    return TerminationResult(system.name, system.variant, verdict, table,
                             tuple(entries), tuple(failing))


# ---------------------------------------------------------------------------
# Loop search


@dataclass(frozen=True)
class Loop:
    """A rewrite path from ``seed`` that closes back on an earlier term."""

    system: str
    variant: str
    seed: Term
    trace: Trace
    cycle_start: int

    @property
    def period(self) -> int:
        return len(self.trace) - self.cycle_start

    def cycle_terms(self) -> Tuple[Term, ...]:
        return tuple(self.trace.term_at(i)
                     for i in range(self.cycle_start, len(self.trace) + 1))

    def as_dict(self) -> dict:
        return {
            "system": self.system,
            "variant": self.variant,
            "seed": format_term(self.seed),
            "trace": self.trace.as_dict(),
            "cycle_start": self.cycle_start,
            "period": self.period,
        }


DEFAULT_LOOP_BUDGET = 300


def _seed_size(signature: Signature) -> int:
    return 8 if signature.style == "ring" else 4


def _fast_ancestor_cycle(fs, seed, budget):
    """Mirror of the reference breadth-first ancestor search on fast terms."""
    parents = {seed: None}
    queue = [seed]
    head = 0
    expanded = 0
    while head < len(queue):
        if expanded >= budget:
            return None
        current = queue[head]
        head += 1
        expanded += 1
        ancestors = set()
        node = current
        while node is not None:
            ancestors.add(node)
            entry = parents[node]
            node = entry[0] if entry else None
        for pos, idx, result in _sweep.successors_fast(fs, current):
            if result in ancestors:
                chain = []
                node = current
                while parents[node] is not None:
                    parent, pidx, ppos = parents[node]
                    chain.append((node, pidx, ppos))
                    node = parent
                chain.reverse()
                steps = [(pidx, ppos, term) for term, pidx, ppos in chain]
                steps.append((idx, pos, result))
                prefix = 0
                node = result
                while parents[node] is not None:
                    node = parents[node][0]
                    prefix += 1
                return steps, prefix
            if result not in parents:
                parents[result] = (current, idx, pos)
                queue.append(result)
    return None


def _validate_loop(system: RewriteSystem, loop: Loop) -> None:
    current = loop.trace.initial
    for step in loop.trace.steps:
        redone = rewrite_once(system, current, step.position,
                              system.rule(step.rule))
        if redone != step.result:
            raise AssertionError("loop trace does not replay")
        current = redone
    if loop.trace.final != loop.trace.term_at(loop.cycle_start):
        raise AssertionError("loop trace does not close")


def find_loop(
    system: RewriteSystem,
    seeds: Optional[Iterable[Term]] = None,
    max_steps: int = DEFAULT_LOOP_BUDGET,
) -> Optional[Loop]:
    """First cycle found from the given seeds, or None.

    Without explicit seeds, every ground term up to a small size is
    tried in enumeration order.  ``max_steps`` bounds the number of
    breadth-first expansions per seed, so None means no loop was found
    within budget, not a termination proof.  Any returned loop has been
    replayed against the reference engine.
    """
    if seeds is None:
        seeds = enumerate_ground_terms(system.signature,
                                       _seed_size(system.signature))
    fs = _sweep.compile_system(system)
    for seed in seeds:
        found = _fast_ancestor_cycle(fs, _sweep.encode(seed), max_steps)
        if found is None:
            continue
        raw_steps, prefix = found
        steps = tuple(
            RewriteStep(fs.rule_names[idx], pos, _sweep.decode(term))
            for idx, pos, term in raw_steps)
        loop = Loop(system.name, system.variant, seed,
                    Trace(seed, steps), prefix)
        _validate_loop(system, loop)
        return loop
    return None
