"""Workbench for datatype-defining rewrite systems over integer representations.

The package bundles a small first-order term-rewriting core with a catalog of
rewrite systems that compute integer arithmetic on four successor-free
representations (binary and decimal digit-append notations, binary and decimal
tree notations) plus a unary ring presentation.  On top of the core it offers
strategy-driven normalization with traces, critical-pair confluence analysis,
a bounded completion loop, termination proofs in a recursive tree ordering,
loop search for non-termination, and exhaustive ground checks against exact
integer semantics.
"""

from .terms import App, Rule, Subst, Term, Var, match, unify
from .syntax import ParseError, format_term, parse_term
from .catalog import RewriteSystem, Signature, builtin_system, system_names
from .engine import (
    FullBreadth,
    LeftmostInnermost,
    LeftmostOutermost,
    NormalizeResult,
    RandomSeeded,
    Trace,
    normalize,
    rewrite_once,
    strategy_by_name,
    successors,
)
from .confluence import (
    CompletionResult,
    ConfluenceResult,
    CriticalPair,
    check_confluence,
    complete,
    critical_pairs,
    joinable,
)
from .termination import (
    Loop,
    TerminationResult,
    Tree,
    find_loop,
    parse_tree,
    prove_termination_rto,
    resolve_weights,
    term_tree,
    tree_reduces,
)
from .semantics import (
    GroundReport,
    canonical_form,
    check_ground,
    enumerate_ground_terms,
    eval_term,
)
from .trs_io import export_trs, import_trs

__all__ = [
    "App",
    "CompletionResult",
    "ConfluenceResult",
    "CriticalPair",
    "FullBreadth",
    "GroundReport",
    "LeftmostInnermost",
    "LeftmostOutermost",
    "Loop",
    "NormalizeResult",
    "ParseError",
    "RandomSeeded",
    "RewriteSystem",
    "Rule",
    "Signature",
    "Subst",
    "Term",
    "TerminationResult",
    "Trace",
    "Tree",
    "Var",
    "builtin_system",
    "canonical_form",
    "check_confluence",
    "check_ground",
    "complete",
    "critical_pairs",
    "enumerate_ground_terms",
    "eval_term",
    "export_trs",
    "find_loop",
    "format_term",
    "import_trs",
    "joinable",
    "match",
    "normalize",
    "parse_term",
    "parse_tree",
    "prove_termination_rto",
    "resolve_weights",
    "rewrite_once",
    "strategy_by_name",
    "successors",
    "system_names",
    "term_tree",
    "tree_reduces",
    "unify",
]

__version__ = "0.1.0"
