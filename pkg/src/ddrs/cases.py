"""Curated regression cases: loops, overlap joins, counterexamples, chains.

Everything here is concrete, named data replayed by the runner at the
bottom (and by the ``fixtures`` CLI subcommand): known rewrite loops of
the unedited decimal systems, the non-joinable critical pairs that
refute confluence of the integer systems, the full overlap census of
the edited binary-append system with its join witnesses, worked
reduction chains in the marked-tree calculus for the layered weight
table, and a verdict matrix giving one documented invocation per
cataloged system and variant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, List, Optional, Tuple

from .catalog import builtin_system
from .confluence import JOINABLE, NOT_JOINABLE, canonical_key, critical_pairs, joinable
from .engine import NORMAL_FORM, LeftmostInnermost, normalize
from .syntax import parse_term
from .termination import (
    find_loop,
    parse_tree,
    prove_termination_rto,
    tree_path_search,
    tree_reduces,
)

# Search budgets for replaying a printed derivation chain: a plain arrow
# may abbreviate up to two calculus moves (mark-and-act), a squiggly
# arrow a short routine of up to six.
STEP_BUDGET = 2
MULTI_BUDGET = 6


@dataclass(frozen=True)
class LoopCase:
    """A seed that provably cycles, with the exact closing trace."""

    system: str
    variant: str
    seed: str
    rules: Tuple[str, ...]
    terms: Tuple[str, ...]
    cycle_start: int

    @property
    def period(self) -> int:
        return len(self.rules) - self.cycle_start

    @property
    def name(self) -> str:
        return f"loop {self.system}[{self.variant}] {self.seed}"


LOOP_CASES: Tuple[LoopCase, ...] = (
    LoopCase("Z_dub", "unedited", "1 + 0",
             ("d9.0", "d2.0"),
             ("S(0) + 0", "1 + 0"), 0),
    LoopCase("Z_dub", "unedited", "-(1) + 0",
             ("d28.0", "d17", "d15"),
             ("P(0) + -(0)", "-(1) + -(0)", "-(1) + 0"), 0),
    LoopCase("Z_dt", "unedited", "-(1) + 0",
             ("dt29.0", "dt15", "dt13"),
             ("P(0) + -(0)", "-(1) + -(0)", "-(1) + 0"), 0),
)


@dataclass(frozen=True)
class CounterexampleCase:
    """A critical pair with disjoint closures, refuting confluence."""

    system: str
    variant: str
    peak: str
    left: str
    right: str
    nf_left: str
    nf_right: str

    @property
    def name(self) -> str:
        return f"counterexample {self.system}[{self.variant}] {self.peak}"


COUNTEREXAMPLE_CASES: Tuple[CounterexampleCase, ...] = (
    CounterexampleCase("Z_bud", "edited", "P(-(-(x)))",
                       "-(S(-(x)))", "P(x)",
                       "-(S(-(x)))", "P(x)"),
    CounterexampleCase("Z_dub", "edited", "P(-(-(x)))",
                       "-(S(-(x)))", "P(x)",
                       "-(S(-(x)))", "P(x)"),
    CounterexampleCase("Z_bt", "edited", "(x ^b (y ^b (z ^b w)))",
                       "((x + y) ^b (z ^b w))", "(x ^b ((y + z) ^b w))",
                       "(((x + y) + z) ^b w)", "((x + (y + z)) ^b w)"),
    CounterexampleCase("N_dt", "edited", "(0 ^d (y ^d z))",
                       "(y ^d z)", "((0 + y) ^d z)",
                       "(y ^d z)", "((0 + y) ^d z)"),
    CounterexampleCase("Z_dt", "edited", "(0 ^d (y ^d z))",
                       "(y ^d z)", "((0 + y) ^d z)",
                       "(y ^d z)", "((0 + y) ^d z)"),
    CounterexampleCase("Z_r", "edited", "(-(-(x))) + -(y)",
                       "-((-(x)) + y)", "x + -(y)",
                       "-((-(x)) + y)", "x + -(y)"),
)


@dataclass(frozen=True)
class OverlapInstance:
    outer: str
    inner: str
    position: Tuple[int, ...]
    peak: str
    left: str
    right: str
    witness: str


@dataclass(frozen=True)
class OverlapCase:
    """A joinable overlap family of the edited binary-append system."""

    label: str
    instances: Tuple[OverlapInstance, ...]

    @property
    def name(self) -> str:
        return f"overlap {self.label}"


OVERLAP_CASES: Tuple[OverlapCase, ...] = (
    OverlapCase("i", (
        OverlapInstance("b4", "b1.0", (1,), "S(0 :b0)",
                        "0 :b1", "S(0)", "1"),)),
    OverlapCase("ii", (
        OverlapInstance("b5", "b1.1", (1,), "S(0 :b1)",
                        "S(0) :b0", "S(1)", "1 :b0"),)),
    OverlapCase("iii", (
        OverlapInstance("b6", "b7", (), "0 + 0", "0", "0", "0"),)),
    OverlapCase("iv", (
        OverlapInstance("b7", "b8", (), "0 + 1", "1", "S(0)", "1"),)),
    OverlapCase("v", (
        OverlapInstance("b6", "b9", (), "1 + 0", "1", "S(0)", "1"),)),
    OverlapCase("vi", (
        OverlapInstance("b8", "b9", (), "1 + 1", "S(1)", "S(1)", "S(1)"),)),
    OverlapCase("vii", (
        OverlapInstance("b10.0.0", "b1.0", (1,), "0 :b0 + y :b0",
                        "(0 + y) :b0", "0 + y :b0", "y :b0"),
        OverlapInstance("b10.0.0", "b1.0", (2,), "x :b0 + 0 :b0",
                        "(x + 0) :b0", "x :b0 + 0", "x :b0"))),
    OverlapCase("viii", (
        OverlapInstance("b10.0.1", "b1.0", (1,), "0 :b0 + y :b1",
                        "S((0 + y) :b0)", "0 + y :b1", "y :b1"),)),
    OverlapCase("ix", (
        OverlapInstance("b10.1.0", "b1.1", (1,), "0 :b1 + y :b0",
                        "(0 + y) :b1", "1 + y :b0", "y :b1"),)),
    OverlapCase("x", (
        OverlapInstance("b10.1.1", "b1.1", (1,), "0 :b1 + y :b1",
                        "S((0 + y) :b1)", "1 + y :b1", "S(y) :b0"),
        OverlapInstance("b10.1.1", "b1.1", (2,), "x :b1 + 0 :b1",
                        "S((x + 0) :b1)", "x :b1 + 1", "S(x) :b0"))),
    OverlapCase("xi", (
        OverlapInstance("b13.0", "b1.0", (2,), "x * 0 :b0",
                        "(x * 0) :b0 + x * 0", "x * 0", "0"),)),
    OverlapCase("xii", (
        OverlapInstance("b13.1", "b1.1", (2,), "x * 0 :b1",
                        "(x * 0) :b0 + x * 1", "x * 1", "x"),)),
)


@dataclass(frozen=True)
class TreeChainCase:
    """A worked derivation chain in the marked-tree calculus.

    ``trees`` is the printed sequence; ``arrows[k]`` says whether the
    k-th printed arrow is a plain step (budget 2 moves) or a squiggly
    multi-step (budget 6).  ``endpoint_only`` cases record just the two
    endpoints and are certified by the decision procedure directly.
    ``matches_catalog`` is False where the printed endpoint differs from
    the weight abstraction of the cataloged rule text (the chain still
    replays; the catalog derivation is produced separately).
    """

    number: int
    rules: Tuple[str, ...]
    trees: Tuple[str, ...]
    arrows: Tuple[str, ...] = ()
    endpoint_only: bool = False
    matches_catalog: bool = True

    @property
    def name(self) -> str:
        return f"chain ({self.number}) {','.join(self.rules)}"


def _chain(number, rules, spec, endpoint_only=False, matches_catalog=True):
    """Build a chain from 'tree -> tree ->> tree' arrow notation."""
    parts = spec.replace("->>", " ->> ").replace("-> ", " -> ").split()
    trees: List[str] = []
    arrows: List[str] = []
    expect_tree = True
    for p in parts:
        if p == "->":
            arrows.append("step")
            expect_tree = True
        elif p == "->>":
            arrows.append("multi")
            expect_tree = True
        else:
            assert expect_tree, spec
            trees.append(p)
            expect_tree = False
    assert len(trees) == len(arrows) + 1, spec
    return TreeChainCase(number, tuple(rules), tuple(trees), tuple(arrows),
                         endpoint_only, matches_catalog)


TREE_CHAINS: Tuple[TreeChainCase, ...] = (
    _chain(1, ("b1.0", "b1.1"), "2(0) -> 2*(0) -> 0"),
    _chain(2, ("b2",), "3(0) -> 3*(0) -> 0"),
    _chain(3, ("b3",), "3(0) -> 3*(0) -> 2(3*(0)) -> 2(0)"),
    _chain(4, ("b4",), "3(2(0)) -> 3*(2(0)) -> 2(0)"),
    _chain(5, ("b5",),
           "3(2(0)) -> 3*(2(0)) -> 2(3*(2(0))) -> 2(3(2*(0))) -> 2(3(0))"),
    _chain(6, ("b6", "b7"), "4(0,0) -> 4*(0,0) -> 0"),
    _chain(7, ("b8", "b9"), "4(0,0) -> 4*(0,0) -> 3(4*(0,0)) -> 3(0)"),
    _chain(8, ("b10.0.0", "b10.1.0"),
           "4(2(0),2(0)) -> 4*(2(0),2(0)) -> 2(4*(2(0),2(0))) ->> 2(4(0,0))"),
    _chain(9, ("b10.0.1", "b10.1.1"),
           "4(2(0),2(0)) -> 4*(2(0),2(0)) -> 2(4*(2(0),2(0)))"
           " -> 2(3(4*(2(0),2(0)))) ->> 2(3(4(0,0)))",
           matches_catalog=False),
    _chain(10, ("b11", "b12"), "5(0,0) -> 5*(0,0) -> 0"),
    _chain(11, ("b13.0",),
           "5(0,2(0)) -> 2(5*(0,2(0))) ->> 2(5(0,0))",
           matches_catalog=False),
    _chain(12, ("b13.1",),
           "5(0,2(0)) -> 4(5*(0,2(0)),5*(0,2(0))) ->> 4(5*(0,2(0)),0)"
           " -> 4(2(5*(0,2(0))),0) ->> 4(2(5(0,0)),0)",
           matches_catalog=False),
    _chain(13, ("b16",), "1(0) -> 1*(0) -> 0"),
    _chain(14, ("b17",), "1(1(0)) -> 1*(1(0)) -> 1(0) -> 1*(0) -> 0"),
    _chain(15, ("b18",), "3(0) -> 3*(0) -> 1(3*(0)) -> 1(0)"),
    _chain(16, ("b19",), "3(0) -> 3*(0) -> 0"),
    _chain(17, ("b20",),
           "3(2(0)) -> 3*(2(0)) -> 2(3*(2(0))) ->> 2(3(0))"),
    _chain(18, ("b21",), "3(2(0)) -> 3*(2(0)) -> 2(0)"),
    _chain(19, ("b22",),
           "3(1(0)) -> 3*(1(0)) -> 1(3*(1(0))) ->> 1(3(0))"),
    _chain(20, ("b23",), "3(1(0)) -> 3*(1(0)) -> 1(0) -> 1*(0) -> 0"),
    _chain(21, ("b24",),
           "3(1(2(0))) -> 3*(1(2(0))) -> 1(3*(1(2(0))))"
           " -> 1(2(3*(1(2(0))))) ->> 1(2(3(0)))"),
    _chain(22, ("b25",),
           "3(1(2(0))) -> 3*(1(2(0))) -> 1(3*(1(2(0))))"
           " -> 1(2(3*(1(2(0))))) ->> 1(2(3(0))) -> 1(2(3*(0))) -> 1(2(0))"),
    _chain(23, ("b28",),
           "4(0,1(0)) -> 4*(0,1(0)) -> 3(4*(0,1(0))) -> 3(0)"),
    _chain(24, ("b29",), "4(1(0),0) ->> 3(0)", endpoint_only=True),
    _chain(25, ("b30.0.0", "b30.1.0"),
           "4(2(0),1(2(0))) -> 4*(2(0),1(2(0))) -> 2(4*(2(0),1(2(0))))"
           " -> 2(4(2*(0),1(2(0)))) -> 2(4(0,1(2(0)))) -> 2(4(0,1*(2(0))))"
           " ->> 2(4(0,1(0)))"),
    _chain(26, ("b30.0.1", "b30.1.1"),
           "4(2(0),1(2(0))) -> 4*(2(0),1(2(0))) -> 2(4*(2(0),1(2(0))))"
           " -> 2(3(4*(2(0),1(2(0))))) ->> 2(3(4(0,1(0))))",
           matches_catalog=False),
    _chain(27, ("b32",),
           "4(1(0),1(0)) -> 4*(1(0),1(0)) -> 1(4*(1(0),1(0))) ->> 1(4(0,0))"),
    _chain(28, ("b33",),
           "5(0,1(0)) -> 5*(0,1(0)) -> 1(5*(0,1(0))) -> 1(5(0,1*(0)))"
           " -> 1(5(0,0))"),
)


@dataclass(frozen=True)
class MatrixRow:
    """One documented invocation per system row with its expected outcome.

    ``method`` is the analysis the row relies on: ``rto`` rows run the
    tree-ordering prover directly, ``loops`` rows run the bounded loop
    search (a found loop disproves termination; a clean scan matches the
    row's positive polarity without claiming a proof).
    """

    system: str
    variant: str
    method: str  # rto | loops
    weights: Optional[str]
    expect: str  # ProvenRTO | Unknown | loop-free | loop
    exit_code: int

    @property
    def name(self) -> str:
        return f"matrix {self.system}[{self.variant}] {self.method}"

    @property
    def invocation(self) -> str:
        if self.method == "rto":
            w = f" --weights {self.weights}" if self.weights else ""
            return (f"ddrs termination --system {self.system}"
                    f" --variant {self.variant}{w}")
        return f"ddrs loops --system {self.system} --variant {self.variant}"


VERDICT_MATRIX: Tuple[MatrixRow, ...] = (
    MatrixRow("N_bud", "unedited", "loops", None, "loop-free", 0),
    MatrixRow("N_bud", "edited", "rto", "table7", "ProvenRTO", 0),
    MatrixRow("Z_bud", "edited", "loops", None, "loop-free", 0),
    MatrixRow("N_dub", "unedited", "loops", None, "loop", 1),
    MatrixRow("N_dub", "edited", "rto", None, "ProvenRTO", 0),
    MatrixRow("Z_dub", "edited", "loops", None, "loop-free", 0),
    MatrixRow("Z_bt", "edited", "loops", None, "loop-free", 0),
    MatrixRow("Z_dt", "unedited", "loops", None, "loop", 1),
    MatrixRow("N_dt", "edited", "loops", None, "loop-free", 0),
    MatrixRow("Z_dt", "edited", "rto", None, "Unknown", 2),
    MatrixRow("Z_r", "edited", "loops", None, "loop-free", 0),
)


# ---------------------------------------------------------------------------
# Replay


def run_loop_case(case: LoopCase) -> Tuple[bool, str]:
    system = builtin_system(case.system, variant=case.variant)
    seed = parse_term(case.seed)
    loop = find_loop(system, seeds=[seed])
    if loop is None:
        return False, "no loop found"
    got_rules = loop.trace.rule_names()
    got_terms = tuple(str(s.result) for s in loop.trace.steps)
    want_terms = case.terms
    ok = (got_rules == case.rules and got_terms == want_terms
          and loop.cycle_start == case.cycle_start
          and loop.period == case.period)
    return ok, (f"rules={','.join(got_rules)} period={loop.period}"
                f" cycle_start={loop.cycle_start}")


def run_counterexample_case(case: CounterexampleCase) -> Tuple[bool, str]:
    system = builtin_system(case.system, variant=case.variant)
    peak = parse_term(case.peak)
    left = parse_term(case.left)
    right = parse_term(case.right)
    res = joinable(system, left, right)
    if res.status != NOT_JOINABLE:
        return False, f"pair status {res.status}, wanted not_joinable"
    for reduct, nf_text in ((left, case.nf_left), (right, case.nf_right)):
        got = normalize(system, reduct, LeftmostInnermost())
        if got.outcome != NORMAL_FORM or got.final != parse_term(nf_text):
            return False, f"{reduct} did not normalize to {nf_text}"
    want = canonical_key(peak, left, right)
    have = {cp.key() for cp in critical_pairs(system)}
    if want not in have:
        return False, "pair missing from the critical-pair census"
    return True, f"peak {case.peak} splits into {case.nf_left} | {case.nf_right}"


def run_overlap_case(case: OverlapCase,
                     keys: Optional[set] = None) -> Tuple[bool, str]:
    system = builtin_system("N_bud", variant="edited")
    if keys is None:
        keys = {cp.key() for cp in critical_pairs(system)}
    details = []
    for inst in case.instances:
        peak = parse_term(inst.peak)
        left = parse_term(inst.left)
        right = parse_term(inst.right)
        if canonical_key(peak, left, right) not in keys:
            return False, f"{inst.peak}: not among the computed critical pairs"
        res = joinable(system, left, right)
        if res.status != JOINABLE:
            return False, f"{inst.peak}: status {res.status}"
        if res.witness != parse_term(inst.witness):
            return False, (f"{inst.peak}: witness {res.witness},"
                           f" wanted {inst.witness}")
        details.append(f"{inst.peak} joins at {inst.witness}")
    return True, "; ".join(details)


def run_tree_chain(case: TreeChainCase) -> Tuple[bool, str]:
    trees = [parse_tree(t) for t in case.trees]
    if case.endpoint_only:
        d = tree_reduces(trees[0], trees[-1])
        if d is None:
            return False, "endpoints not related by the ordering"
        return True, f"endpoint derivation in {len(d.steps)} moves"
    moves = []
    for k, kind in enumerate(case.arrows):
        budget = STEP_BUDGET if kind == "step" else MULTI_BUDGET
        path = tree_path_search(trees[k], trees[k + 1], budget)
        if path is None:
            return False, (f"arrow {k + 1} ({case.trees[k]} to"
                           f" {case.trees[k + 1]}) not replayable"
                           f" within {budget} moves")
        moves.append(len(path))
    return True, f"arrow moves {moves}"


def run_matrix_row(row: MatrixRow) -> Tuple[bool, str]:
    system = builtin_system(row.system, variant=row.variant)
    if row.method == "rto":
        res = prove_termination_rto(system, row.weights)
        return res.verdict == row.expect, f"verdict {res.verdict}"
    loop = find_loop(system)
    if row.expect == "loop":
        if loop is None:
            return False, "expected a loop, none found"
        return True, f"loop from {loop.seed} period {loop.period}"
    if loop is not None:
        return False, f"unexpected loop from {loop.seed}"
    return True, "no loop within budget"


def iter_cases() -> Iterator[Tuple[str, Callable[[], Tuple[bool, str]]]]:
    """Every fixture as a (name, thunk) pair, in replay order."""
    for lc in LOOP_CASES:
        yield lc.name, (lambda c=lc: run_loop_case(c))
    for cc in COUNTEREXAMPLE_CASES:
        yield cc.name, (lambda c=cc: run_counterexample_case(c))
    keys = {cp.key()
            for cp in critical_pairs(builtin_system("N_bud", variant="edited"))}
    for oc in OVERLAP_CASES:
        yield oc.name, (lambda c=oc: run_overlap_case(c, keys))
    for tc in TREE_CHAINS:
        yield tc.name, (lambda c=tc: run_tree_chain(c))
    for mr in VERDICT_MATRIX:
        yield mr.name, (lambda c=mr: run_matrix_row(c))


def run_all() -> List[Tuple[str, bool, str]]:
    return [(name, *thunk()) for name, thunk in iter_cases()]
