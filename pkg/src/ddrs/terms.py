"""First-order terms, substitutions, matching, and unification.

Terms are either variables or applications of a fixed symbol to a tuple of
argument terms.  Constants are zero-argument applications.  Both node types
are immutable and hash-consed per instance: the hash, node count, and
groundness of a term are computed once at construction so that the rewrite
engine can use them as cheap filters.

Positions follow the usual convention: the root is the empty tuple and the
i-th argument (1-based) of an application extends the path by i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union


class Term:
    """Base class for :class:`Var` and :class:`App`."""

    __slots__ = ()

    size: int
    is_ground: bool

    def __str__(self) -> str:
        from .syntax import format_term

        return format_term(self)


class Var(Term):
    """A variable, identified by name."""

    __slots__ = ("name", "_hash")

    size = 1
    is_ground = False

    def __init__(self, name: str):
        self.name = name
        self._hash = hash(("v", name))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Var) and other.name == self.name

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Var({self.name!r})"


class App(Term):
    """An application of a function symbol to argument terms."""

    __slots__ = ("sym", "args", "size", "is_ground", "_hash")

    def __init__(self, sym: str, args: Sequence[Term] = ()):
        args = tuple(args)
        self.sym = sym
        self.args = args
        size = 1
        ground = True
        for a in args:
            size += a.size
            ground = ground and a.is_ground
        self.size = size
        self.is_ground = ground
        self._hash = hash(("a", sym, args))

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return (
            isinstance(other, App)
            and other._hash == self._hash
            and other.sym == self.sym
            and other.args == self.args
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        if not self.args:
            return f"App({self.sym!r})"
        return f"App({self.sym!r}, {list(self.args)!r})"


Position = Tuple[int, ...]
Subst = Dict[str, Term]


def positions(term: Term, non_var_only: bool = False) -> Iterator[Position]:
    """Yield all positions of ``term`` in preorder, root first.

    With ``non_var_only`` set, positions holding bare variables are skipped.
    """
    stack: List[Tuple[Position, Term]] = [((), term)]
    while stack:
        pos, t = stack.pop()
        if not (non_var_only and isinstance(t, Var)):
            yield pos
        if isinstance(t, App):
            for i in range(len(t.args), 0, -1):
                stack.append((pos + (i,), t.args[i - 1]))


def subterm_at(term: Term, pos: Position) -> Term:
    for i in pos:
        if not isinstance(term, App) or not 1 <= i <= len(term.args):
            raise IndexError(f"position {pos} not in term")
        term = term.args[i - 1]
    return term


def replace_at(term: Term, pos: Position, replacement: Term) -> Term:
    """Return ``term`` with the subterm at ``pos`` replaced."""
    if not pos:
        return replacement
    if not isinstance(term, App) or not 1 <= pos[0] <= len(term.args):
        raise IndexError(f"position {pos} not in term")
    i = pos[0] - 1
    args = list(term.args)
    args[i] = replace_at(args[i], pos[1:], replacement)
    return App(term.sym, args)


def variables(term: Term) -> List[str]:
    """Variable names occurring in ``term``, in first-occurrence order."""
    seen: List[str] = []
    have = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t.name not in have:
                have.add(t.name)
                seen.append(t.name)
        else:
            assert isinstance(t, App)
            stack.extend(reversed(t.args))
    return seen


def apply_subst(term: Term, subst: Subst) -> Term:
    if term.is_ground or not subst:
        return term
    if isinstance(term, Var):
        return subst.get(term.name, term)
    assert isinstance(term, App)
    return App(term.sym, [apply_subst(a, subst) for a in term.args])


def match(pattern: Term, subject: Term) -> Optional[Subst]:
    """Syntactic matching: a substitution s with s(pattern) == subject.

    Returns None when no such substitution exists.  The subject is treated
    as rigid; its variables are never bound.
    """
    bindings: Subst = {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = bindings.get(p.name)
            if bound is None:
                bindings[p.name] = s
            elif bound != s:
                return None
        else:
            assert isinstance(p, App)
            if not isinstance(s, App) or s.sym != p.sym or len(s.args) != len(p.args):
                return None
            stack.extend(zip(p.args, s.args))
    return bindings


def occurs(name: str, term: Term) -> bool:
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            if t.name == name:
                return True
        else:
            assert isinstance(t, App)
            stack.extend(t.args)
    return False


def unify(s: Term, t: Term) -> Optional[Subst]:
    """Most general unifier of ``s`` and ``t``, or None.

    The result is idempotent: applying it twice equals applying it once.
    Includes the occurs check, so cyclic problems fail cleanly.
    """
    subst: Subst = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a = apply_subst(a, subst)
        b = apply_subst(b, subst)
        if a == b:
            continue
        if isinstance(a, Var):
            if occurs(a.name, b):
                return None
            binding = {a.name: b}
            subst = {k: apply_subst(v, binding) for k, v in subst.items()}
            subst[a.name] = b
        elif isinstance(b, Var):
            stack.append((b, a))
        else:
            assert isinstance(a, App) and isinstance(b, App)
            if a.sym != b.sym or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
    return subst


def fresh_names(count: int, avoid: Sequence[str], base: str = "v") -> List[str]:
    """Generate ``count`` identifier names not present in ``avoid``."""
    taken = set(avoid)
    out: List[str] = []
    n = 0
    while len(out) < count:
        cand = f"{base}{n}"
        if cand not in taken:
            taken.add(cand)
            out.append(cand)
        n += 1
    return out


def rename_apart(term: Term, avoid: Sequence[str]) -> Tuple[Term, Subst]:
    """Rename the variables of ``term`` away from ``avoid``.

    Returns the renamed term together with the renaming substitution.
    Variables whose names do not clash are kept as they are.
    """
    taken = set(avoid)
    renaming: Subst = {}
    for name in variables(term):
        if name in taken:
            new = fresh_names(1, taken | set(renaming), base=name)[0]
            renaming[name] = Var(new)
            taken.add(new)
    if not renaming:
        return term, {}
    return apply_subst(term, renaming), renaming


@dataclass(frozen=True)
class Rule:
    """A rewrite rule lhs -> rhs with a display name.

    The left-hand side must not be a bare variable, and every variable of
    the right-hand side must occur on the left; both properties are checked
    at construction.
    """

    name: str
    lhs: Term
    rhs: Term

    def __post_init__(self) -> None:
        if isinstance(self.lhs, Var):
            raise ValueError(f"rule {self.name}: left-hand side is a variable")
        lv = set(variables(self.lhs))
        rv = set(variables(self.rhs))
        extra = rv - lv
        if extra:
            raise ValueError(
                f"rule {self.name}: right-hand side introduces variables {sorted(extra)}"
            )

    def renamed_apart(self, avoid: Sequence[str]) -> "Rule":
        """A variant of the rule whose variables avoid the given names."""
        taken = set(avoid)
        renaming: Subst = {}
        for name in variables(self.lhs):
            if name in taken:
                new = fresh_names(1, taken | {v.name for v in renaming.values() if isinstance(v, Var)}, base=name)[0]
                renaming[name] = Var(new)
                taken.add(new)
        if not renaming:
            return self
        return Rule(self.name, apply_subst(self.lhs, renaming), apply_subst(self.rhs, renaming))

    def __str__(self) -> str:
        from .syntax import format_term

        return f"{self.name}: {format_term(self.lhs)} -> {format_term(self.rhs)}"


TermLike = Union[Term, str]


def as_term(t: TermLike) -> Term:
    """Accept either a Term or concrete syntax and return a Term."""
    if isinstance(t, Term):
        return t
    from .syntax import parse_term

    return parse_term(t)
