"""Digit-parameterized rule schemata and their expansion into concrete rules.

A schema is a rule template over digit counters.  Counters range over a
declared interval and may appear with a successor modifier (value + 1) or a
base-complement modifier (base - value).  Templates can also contain power
nodes: the successor or predecessor symbol applied counter-many times.
Expansion instantiates counters lexicographically and yields rules named
``<schema>.<i>`` or ``<schema>.<i>.<j>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, List, Sequence, Tuple, Union

from .terms import App, Rule, Term, Var


@dataclass(frozen=True)
class Lit:
    value: int

    def eval(self, env: Dict[str, int], base: int) -> int:
        return self.value


@dataclass(frozen=True)
class Meta:
    name: str

    def eval(self, env: Dict[str, int], base: int) -> int:
        return env[self.name]


@dataclass(frozen=True)
class Succ:
    of: Meta

    def eval(self, env: Dict[str, int], base: int) -> int:
        return env[self.of.name] + 1


@dataclass(frozen=True)
class StarComplement:
    of: Meta

    def eval(self, env: Dict[str, int], base: int) -> int:
        return base - env[self.of.name]


DigitExpr = Union[Lit, Meta, Succ, StarComplement]


@dataclass(frozen=True)
class TVar:
    """Template leaf: a rule variable."""

    name: str


@dataclass(frozen=True)
class TDigit:
    """Template leaf: a digit constant whose value is a digit expression."""

    expr: DigitExpr


@dataclass(frozen=True)
class TApp:
    """Template node with a fixed symbol."""

    sym: str
    args: Tuple["Template", ...]


@dataclass(frozen=True)
class TAppend:
    """Template node: append constructor whose digit is a digit expression."""

    base_char: str  # "b" or "d"
    expr: DigitExpr
    arg: "Template"


@dataclass(frozen=True)
class TPow:
    """Template node: S or P applied expr-many times (zero times = identity)."""

    op: str  # "S" or "P"
    expr: DigitExpr
    arg: "Template"


Template = Union[TVar, TDigit, TApp, TAppend, TPow]


def _instantiate(tpl: Template, env: Dict[str, int], base: int) -> Term:
    if isinstance(tpl, TVar):
        return Var(tpl.name)
    if isinstance(tpl, TDigit):
        v = tpl.expr.eval(env, base)
        if not 0 <= v <= 9:
            raise ValueError(f"digit expression out of range: {v}")
        return App(str(v))
    if isinstance(tpl, TApp):
        return App(tpl.sym, tuple(_instantiate(a, env, base) for a in tpl.args))
    if isinstance(tpl, TAppend):
        v = tpl.expr.eval(env, base)
        if not 0 <= v < base:
            raise ValueError(f"append digit out of range for base {base}: {v}")
        return App(f":{tpl.base_char}{v}", (_instantiate(tpl.arg, env, base),))
    if isinstance(tpl, TPow):
        count = tpl.expr.eval(env, base)
        if count < 0:
            raise ValueError(f"negative power: {count}")
        term = _instantiate(tpl.arg, env, base)
        for _ in range(count):
            term = App(tpl.op, (term,))
        return term
    raise TypeError(f"not a template: {tpl!r}")


@dataclass(frozen=True)
class RuleSchema:
    """A named rule template over declared digit-counter ranges."""

    name: str
    metas: Tuple[Tuple[str, int, int], ...]  # (name, lo, hi) inclusive
    lhs: Template
    rhs: Template
    base: int = 10

    def expand(self) -> List[Rule]:
        """All instances, counters iterated lexicographically."""
        if not self.metas:
            return [Rule(self.name, _instantiate(self.lhs, {}, self.base),
                         _instantiate(self.rhs, {}, self.base))]
        names = [m[0] for m in self.metas]
        ranges = [range(lo, hi + 1) for _, lo, hi in self.metas]
        rules = []
        for values in product(*ranges):
            env = dict(zip(names, values))
            suffix = ".".join(str(v) for v in values)
            rules.append(Rule(
                f"{self.name}.{suffix}",
                _instantiate(self.lhs, env, self.base),
                _instantiate(self.rhs, env, self.base),
            ))
        return rules

    @property
    def instance_count(self) -> int:
        n = 1
        for _, lo, hi in self.metas:
            n *= hi - lo + 1
        return n


def expand_schema(schema: RuleSchema) -> List[Rule]:
    return schema.expand()


def expand_all(schemata: Sequence[RuleSchema]) -> List[Rule]:
    rules: List[Rule] = []
    for s in schemata:
        rules.extend(s.expand())
    return rules
