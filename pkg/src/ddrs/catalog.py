"""Built-in rewrite systems for integer representations.

Nine systems over four representation styles:

* binary append (``N_bud``, ``Z_bud``): digits 0/1, postfix append ``:b0``/``:b1``
* decimal append (``N_dub``, ``Z_dub``): digits 0..9, appends ``:d0``..``:d9``
* binary tree (``N_bt``, ``Z_bt``): digits 0/1, two-argument constructor ``^b``
* decimal tree (``N_dt``, ``Z_dt``): digits 0..9, constructor ``^d``
* ring (``Z_r``): 0, 1, negation, sum, product only

``N_*`` systems define the naturals, ``Z_*`` and ``Z_r`` the integers.  Five
of the systems come in two variants: the ``edited`` variant replaces a few
addition rules by successor/predecessor towers (``S^j``/``P^j``), while the
``unedited`` variant keeps the original right-appended digit forms, which
cost the decimal systems their termination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Tuple

from .schema import (
    Lit,
    Meta,
    RuleSchema,
    StarComplement,
    Succ,
    TApp,
    TAppend,
    TDigit,
    TPow,
    TVar,
    expand_all,
)
from .terms import Rule


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    kind: str  # digit | succ | pred | neg | append | tree | plus | times
    value: Optional[int] = None  # digit value, or appended digit for appends


@dataclass(frozen=True)
class Signature:
    """Symbol inventory of a system, in canonical enumeration order."""

    name: str
    style: str  # append | tree | ring
    base: Optional[int]
    symbols: Tuple[Symbol, ...]

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {s.name: s for s in self.symbols})

    def symbol(self, name: str) -> Symbol:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"symbol {name!r} not in signature {self.name}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def arity(self, name: str) -> int:
        return self.symbol(name).arity

    @property
    def constants(self) -> Tuple[Symbol, ...]:
        return tuple(s for s in self.symbols if s.arity == 0)

    @property
    def unary(self) -> Tuple[Symbol, ...]:
        return tuple(s for s in self.symbols if s.arity == 1)

    @property
    def binary(self) -> Tuple[Symbol, ...]:
        return tuple(s for s in self.symbols if s.arity == 2)

    @property
    def representation(self) -> str:
        """Key selecting the canonical-form builder for this signature."""
        if self.style == "ring":
            return "ring"
        return f"{self.style}{self.base}"


@dataclass(frozen=True)
class RewriteSystem:
    name: str
    variant: str
    signature: Signature
    rules: Tuple[Rule, ...]
    _by_name: Dict[str, Rule] = field(init=False, repr=False, compare=False)
    _by_root: Dict[str, Tuple[Tuple[int, Rule], ...]] = field(
        init=False, repr=False, compare=False)

    def __post_init__(self):
        by_name = {}
        index = {}
        for idx, r in enumerate(self.rules):
            if r.name in by_name:
                raise ValueError(f"duplicate rule name {r.name}")
            by_name[r.name] = r
            index[r.name] = idx
        by_root: Dict[str, list] = {}
        for idx, r in enumerate(self.rules):
            by_root.setdefault(r.lhs.sym, []).append((idx, r))
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_by_root",
                           {k: tuple(v) for k, v in by_root.items()})

    def rule(self, name: str) -> Rule:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no rule {name!r} in {self.label}") from None

    def rules_for_root(self, sym: str) -> Tuple[Tuple[int, Rule], ...]:
        """(catalog index, rule) pairs whose left side is rooted at sym."""
        return self._by_root.get(sym, ())

    def rule_index(self, name: str) -> int:
        return self._index[name]

    @property
    def label(self) -> str:
        return f"{self.name}[{self.variant}]"

    def __len__(self) -> int:
        return len(self.rules)


def _digits(n: int) -> Tuple[Symbol, ...]:
    return tuple(Symbol(str(i), 0, "digit", i) for i in range(n))


def _appends(ch: str, base: int) -> Tuple[Symbol, ...]:
    return tuple(Symbol(f":{ch}{i}", 1, "append", i) for i in range(base))


_S = Symbol("S", 1, "succ")
_P = Symbol("P", 1, "pred")
_NEG = Symbol("-", 1, "neg")
_PLUS = Symbol("+", 2, "plus")
_TIMES = Symbol("*", 2, "times")

SIGNATURES: Dict[str, Signature] = {
    "N_bud": Signature("N_bud", "append", 2,
                       _digits(2) + (_S,) + _appends("b", 2) + (_PLUS, _TIMES)),
    "Z_bud": Signature("Z_bud", "append", 2,
                       _digits(2) + (_S, _P, _NEG) + _appends("b", 2)
                       + (_PLUS, _TIMES)),
    "N_dub": Signature("N_dub", "append", 10,
                       _digits(10) + (_S,) + _appends("d", 10) + (_PLUS, _TIMES)),
    "Z_dub": Signature("Z_dub", "append", 10,
                       _digits(10) + (_S, _P, _NEG) + _appends("d", 10)
                       + (_PLUS, _TIMES)),
    "N_bt": Signature("N_bt", "tree", 2,
                      _digits(2) + (Symbol("^b", 2, "tree"), _PLUS, _TIMES)),
    "Z_bt": Signature("Z_bt", "tree", 2,
                      _digits(2) + (_NEG, Symbol("^b", 2, "tree"),
                                    _PLUS, _TIMES)),
    "N_dt": Signature("N_dt", "tree", 10,
                      _digits(10) + (_S, Symbol("^d", 2, "tree"),
                                     _PLUS, _TIMES)),
    "Z_dt": Signature("Z_dt", "tree", 10,
                      _digits(10) + (_S, _P, _NEG, Symbol("^d", 2, "tree"),
                                     _PLUS, _TIMES)),
    "Z_r": Signature("Z_r", "ring", None,
                     _digits(2) + (_NEG, _PLUS, _TIMES)),
}

# Template shorthands.  Rule variables are x, y, z; digit counters are i, j.
_x, _y, _z = TVar("x"), TVar("y"), TVar("z")
_I, _J = Meta("i"), Meta("j")


def _d(v: int) -> TDigit:
    return TDigit(Lit(v))


def _di() -> TDigit:
    return TDigit(_I)


def _dj() -> TDigit:
    return TDigit(_J)


def _succ_i() -> TDigit:
    return TDigit(Succ(_I))


def _comp_i() -> TDigit:
    return TDigit(StarComplement(_I))


def _comp_j() -> TDigit:
    return TDigit(StarComplement(_J))


def _S1(t) -> TApp:
    return TApp("S", (t,))


def _P1(t) -> TApp:
    return TApp("P", (t,))


def _neg(t) -> TApp:
    return TApp("-", (t,))


def _plus(a, b) -> TApp:
    return TApp("+", (a, b))


def _times(a, b) -> TApp:
    return TApp("*", (a, b))


def _ab(expr, t) -> TAppend:
    return TAppend("b", expr, t)


def _ad(expr, t) -> TAppend:
    return TAppend("d", expr, t)


def _tb(a, b) -> TApp:
    return TApp("^b", (a, b))


def _td(a, b) -> TApp:
    return TApp("^d", (a, b))


def _one(name: str, lhs, rhs, base: int = 10) -> RuleSchema:
    return RuleSchema(name, (), lhs, rhs, base)


def _over_i(name: str, lo: int, hi: int, lhs, rhs, base: int = 10) -> RuleSchema:
    return RuleSchema(name, (("i", lo, hi),), lhs, rhs, base)


def _over_ij(name: str, lo: int, hi: int, lhs, rhs, base: int = 10) -> RuleSchema:
    return RuleSchema(name, (("i", lo, hi), ("j", lo, hi)), lhs, rhs, base)


def _binary_append_nat(edited: bool):
    b10_rhs_edited = TPow("S", _J, _ab(_I, _plus(_x, _y)))
    b10_rhs_unedited = _plus(_ab(_I, _plus(_x, _y)), _dj())
    return [
        _over_i("b1", 0, 1, _ab(_I, _d(0)), _di(), base=2),
        _one("b2", _S1(_d(0)), _d(1), base=2),
        _one("b3", _S1(_d(1)), _ab(Lit(0), _d(1)), base=2),
        _one("b4", _S1(_ab(Lit(0), _x)), _ab(Lit(1), _x), base=2),
        _one("b5", _S1(_ab(Lit(1), _x)), _ab(Lit(0), _S1(_x)), base=2),
        _one("b6", _plus(_x, _d(0)), _x, base=2),
        _one("b7", _plus(_d(0), _x), _x, base=2),
        _one("b8", _plus(_x, _d(1)), _S1(_x), base=2),
        _one("b9", _plus(_d(1), _x), _S1(_x), base=2),
        _over_ij("b10", 0, 1, _plus(_ab(_I, _x), _ab(_J, _y)),
                 b10_rhs_edited if edited else b10_rhs_unedited, base=2),
        _one("b11", _times(_x, _d(0)), _d(0), base=2),
        _one("b12", _times(_x, _d(1)), _x, base=2),
        _over_i("b13", 0, 1, _times(_x, _ab(_I, _y)),
                _plus(_ab(Lit(0), _times(_x, _y)), _times(_x, _di())), base=2),
    ]


def _binary_append_int_extra():
    return [
        _one("b16", _neg(_d(0)), _d(0), base=2),
        _one("b17", _neg(_neg(_x)), _x, base=2),
        _one("b18", _P1(_d(0)), _neg(_d(1)), base=2),
        _one("b19", _P1(_d(1)), _d(0), base=2),
        _one("b20", _P1(_ab(Lit(0), _x)), _ab(Lit(1), _P1(_x)), base=2),
        _one("b21", _P1(_ab(Lit(1), _x)), _ab(Lit(0), _x), base=2),
        _one("b22", _P1(_neg(_x)), _neg(_S1(_x)), base=2),
        _one("b23", _S1(_neg(_d(1))), _d(0), base=2),
        _one("b24", _S1(_neg(_ab(Lit(0), _x))), _neg(_ab(Lit(1), _P1(_x))),
             base=2),
        _one("b25", _S1(_neg(_ab(Lit(1), _x))), _neg(_ab(Lit(0), _x)), base=2),
        _one("b26", _ab(Lit(0), _neg(_x)), _neg(_ab(Lit(0), _x)), base=2),
        _one("b27", _ab(Lit(1), _neg(_x)), _neg(_ab(Lit(1), _P1(_x))), base=2),
        _one("b28", _plus(_x, _neg(_d(1))), _P1(_x), base=2),
        _one("b29", _plus(_neg(_d(1)), _x), _P1(_x), base=2),
        _over_ij("b30", 0, 1, _plus(_ab(_I, _x), _neg(_ab(_J, _y))),
                 TPow("P", _J, _ab(_I, _plus(_x, _neg(_y)))), base=2),
        _over_ij("b31", 0, 1, _plus(_neg(_ab(_J, _y)), _ab(_I, _x)),
                 TPow("P", _J, _ab(_I, _plus(_x, _neg(_y)))), base=2),
        _one("b32", _plus(_neg(_x), _neg(_y)), _neg(_plus(_x, _y)), base=2),
        _one("b33", _times(_x, _neg(_y)), _neg(_times(_x, _y)), base=2),
    ]


def _decimal_append_nat(edited: bool):
    if edited:
        d8 = _over_i("d8", 1, 9, _plus(_x, _di()), TPow("S", _I, _x))
        d9 = _over_i("d9", 1, 9, _plus(_di(), _x), TPow("S", _I, _x))
        d10 = _over_ij("d10", 0, 9, _plus(_ad(_I, _x), _ad(_J, _y)),
                       TPow("S", _J, _ad(_I, _plus(_x, _y))))
    else:
        d8 = _over_i("d8", 0, 8, _plus(_x, _succ_i()),
                     _plus(_S1(_x), _di()))
        d9 = _over_i("d9", 0, 8, _plus(_succ_i(), _x),
                     _plus(_S1(_x), _di()))
        d10 = _over_ij("d10", 0, 9, _plus(_ad(_I, _x), _ad(_J, _y)),
                       _plus(_ad(_I, _plus(_x, _y)), _dj()))
    return [
        _over_i("d1", 0, 9, _ad(_I, _d(0)), _di()),
        _over_i("d2", 0, 8, _S1(_di()), _succ_i()),
        _one("d3", _S1(_d(9)), _ad(Lit(0), _d(1))),
        _over_i("d4", 0, 8, _S1(_ad(_I, _x)), _ad(Succ(_I), _x)),
        _one("d5", _S1(_ad(Lit(9), _x)), _ad(Lit(0), _S1(_x))),
        _one("d6", _plus(_x, _d(0)), _x),
        _one("d7", _plus(_d(0), _x), _x),
        d8,
        d9,
        d10,
        _one("d11", _times(_x, _d(0)), _d(0)),
        _over_i("d12", 0, 8, _times(_x, _succ_i()),
                _plus(_times(_x, _di()), _x)),
        _over_i("d13", 0, 9, _times(_x, _ad(_I, _y)),
                _plus(_ad(Lit(0), _times(_x, _y)), _times(_x, _di()))),
    ]


def _decimal_append_int_extra(edited: bool):
    if edited:
        d27 = _over_i("d27", 1, 9, _plus(_x, _neg(_di())), TPow("P", _I, _x))
        d28 = _over_i("d28", 1, 9, _plus(_neg(_di()), _x), TPow("P", _I, _x))
        d29 = _over_ij("d29", 0, 9, _plus(_ad(_I, _x), _neg(_ad(_J, _y))),
                       TPow("P", _J, _ad(_I, _plus(_x, _neg(_y)))))
        d30 = _over_ij("d30", 0, 9, _plus(_neg(_ad(_J, _y)), _ad(_I, _x)),
                       TPow("P", _J, _ad(_I, _plus(_x, _neg(_y)))))
    else:
        d27 = _over_i("d27", 0, 8, _plus(_x, _neg(_succ_i())),
                      _plus(_P1(_x), _neg(_di())))
        d28 = _over_i("d28", 0, 8, _plus(_neg(_succ_i()), _x),
                      _plus(_P1(_x), _neg(_di())))
        d29 = _over_ij("d29", 0, 9, _plus(_ad(_I, _x), _neg(_ad(_J, _y))),
                       _plus(_ad(_I, _plus(_x, _neg(_y))), _neg(_dj())))
        d30 = _over_ij("d30", 0, 9, _plus(_neg(_ad(_J, _y)), _ad(_I, _x)),
                       _plus(_ad(_I, _plus(_x, _neg(_y))), _neg(_dj())))
    return [
        _one("d15", _neg(_d(0)), _d(0)),
        _one("d16", _neg(_neg(_x)), _x),
        _one("d17", _P1(_d(0)), _neg(_d(1))),
        _over_i("d18", 0, 8, _P1(_succ_i()), _di()),
        _one("d19", _P1(_ad(Lit(0), _x)), _ad(Lit(9), _P1(_x))),
        _over_i("d20", 0, 8, _P1(_ad(Succ(_I), _x)), _ad(_I, _x)),
        _one("d21", _P1(_neg(_x)), _neg(_S1(_x))),
        _over_i("d22", 0, 8, _S1(_neg(_succ_i())), _neg(_di())),
        _one("d23", _S1(_neg(_ad(Lit(0), _x))), _neg(_ad(Lit(9), _P1(_x)))),
        _over_i("d24", 0, 8, _S1(_neg(_ad(Succ(_I), _x))), _neg(_ad(_I, _x))),
        _one("d25", _ad(Lit(0), _neg(_x)), _neg(_ad(Lit(0), _x))),
        _over_i("d26", 1, 9, _ad(_I, _neg(_x)),
                _neg(_ad(StarComplement(_I), _P1(_x)))),
        d27,
        d28,
        d29,
        d30,
        _one("d31", _plus(_neg(_x), _neg(_y)), _neg(_plus(_x, _y))),
        _one("d32", _times(_x, _neg(_y)), _neg(_times(_x, _y))),
    ]


def _binary_tree_nat():
    return [
        _one("bt1", _tb(_d(0), _x), _x, base=2),
        _one("bt2", _tb(_x, _tb(_y, _z)), _tb(_plus(_x, _y), _z), base=2),
        _one("bt3", _plus(_d(0), _x), _x, base=2),
        _one("bt4", _plus(_x, _d(0)), _x, base=2),
        _one("bt5", _plus(_d(1), _d(1)), _tb(_d(1), _d(0)), base=2),
        _one("bt6", _plus(_x, _tb(_y, _z)), _tb(_y, _plus(_x, _z)), base=2),
        _one("bt7", _plus(_tb(_x, _y), _z), _tb(_x, _plus(_y, _z)), base=2),
        _one("bt8", _times(_x, _d(0)), _d(0), base=2),
        _one("bt9", _times(_d(0), _x), _d(0), base=2),
        _one("bt10", _times(_d(1), _d(1)), _d(1), base=2),
        _one("bt11", _times(_x, _tb(_y, _z)),
             _tb(_times(_x, _y), _times(_x, _z)), base=2),
        _one("bt12", _times(_tb(_x, _y), _z),
             _tb(_times(_x, _z), _times(_y, _z)), base=2),
    ]


def _binary_tree_int_extra():
    return [
        _one("bt13", _neg(_d(0)), _d(0), base=2),
        _one("bt14", _neg(_neg(_x)), _x, base=2),
        _one("bt15", _tb(_d(1), _neg(_d(1))), _d(1), base=2),
        _one("bt16", _tb(_tb(_x, _d(0)), _neg(_d(1))),
             _tb(_tb(_x, _neg(_d(1))), _d(1)), base=2),
        _one("bt17", _tb(_tb(_x, _d(1)), _neg(_d(1))),
             _tb(_tb(_x, _d(0)), _d(1)), base=2),
        _one("bt18", _tb(_x, _neg(_tb(_y, _z))),
             _neg(_tb(_plus(_y, _neg(_x)), _z)), base=2),
        _one("bt19", _tb(_neg(_x), _y), _neg(_tb(_x, _neg(_y))), base=2),
        _one("bt20", _plus(_d(1), _neg(_d(1))), _d(0), base=2),
        _one("bt21", _plus(_neg(_d(1)), _d(1)), _d(0), base=2),
        _one("bt22", _plus(_neg(_d(1)), _neg(_d(1))),
             _neg(_tb(_d(1), _d(0))), base=2),
        _one("bt23", _plus(_x, _neg(_tb(_y, _z))),
             _neg(_tb(_y, _plus(_z, _neg(_x)))), base=2),
        _one("bt24", _plus(_neg(_tb(_x, _y)), _z),
             _neg(_tb(_x, _plus(_y, _neg(_z)))), base=2),
        _one("bt25", _times(_x, _neg(_y)), _neg(_times(_x, _y)), base=2),
        _one("bt26", _times(_neg(_x), _y), _neg(_times(_x, _y)), base=2),
    ]


def _decimal_tree_nat():
    return [
        _one("dt1", _td(_d(0), _x), _x),
        _one("dt2", _td(_x, _td(_y, _z)), _td(_plus(_x, _y), _z)),
        _over_i("dt3", 0, 8, _S1(_di()), _succ_i()),
        _one("dt4", _S1(_d(9)), _td(_d(1), _d(0))),
        _over_i("dt5", 0, 8, _S1(_td(_x, _di())), _td(_x, _succ_i())),
        _one("dt6", _S1(_td(_x, _d(9))), _td(_S1(_x), _d(0))),
        _one("dt7", _plus(_x, _d(0)), _x),
        _over_i("dt8", 0, 8, _plus(_x, _succ_i()), _plus(_S1(_x), _di())),
        _over_i("dt9", 0, 9, _plus(_x, _td(_y, _di())),
                _plus(_td(_y, _x), _di())),
        _one("dt10", _times(_x, _d(0)), _d(0)),
        _over_i("dt11", 0, 8, _times(_x, _succ_i()),
                _plus(_x, _times(_x, _di()))),
        _over_i("dt12", 0, 9, _times(_x, _td(_y, _di())),
                _plus(_td(_times(_x, _y), _d(0)), _times(_x, _di()))),
    ]


def _decimal_tree_int_extra(edited: bool):
    if edited:
        dt27 = _over_i("dt27", 1, 9, _plus(_x, _neg(_di())), TPow("P", _I, _x))
        dt29 = _over_i("dt29", 1, 9, _plus(_neg(_di()), _x), TPow("P", _I, _x))
    else:
        dt27 = _over_i("dt27", 0, 8, _plus(_x, _neg(_succ_i())),
                       _plus(_P1(_x), _neg(_di())))
        dt29 = _over_i("dt29", 0, 8, _plus(_neg(_succ_i()), _x),
                       _plus(_P1(_x), _neg(_di())))
    return [
        _one("dt13", _neg(_d(0)), _d(0)),
        _one("dt14", _neg(_neg(_x)), _x),
        _one("dt15", _P1(_d(0)), _neg(_d(1))),
        _over_i("dt16", 0, 8, _P1(_succ_i()), _di()),
        _one("dt17", _P1(_td(_x, _d(0))), _td(_P1(_x), _d(9))),
        _over_i("dt18", 0, 8, _P1(_td(_x, _succ_i())), _td(_x, _di())),
        _one("dt19", _P1(_neg(_x)), _neg(_S1(_x))),
        _over_i("dt20", 0, 8, _S1(_neg(_succ_i())), _neg(_di())),
        _one("dt21", _S1(_neg(_td(_x, _d(0)))), _neg(_td(_P1(_x), _d(9)))),
        _over_i("dt22", 0, 8, _S1(_neg(_td(_x, _succ_i()))),
                _neg(_td(_x, _di()))),
        _one("dt23", _td(_neg(_x), _y), _neg(_td(_x, _neg(_y)))),
        RuleSchema("dt24", (("i", 1, 9), ("j", 1, 9)),
                   _td(_di(), _neg(_dj())),
                   _td(_P1(_di()), _comp_j()), 10),
        _over_i("dt25", 1, 9, _td(_td(_x, _y), _neg(_di())),
                _td(_P1(_td(_x, _y)), _comp_i())),
        _one("dt26", _td(_x, _neg(_td(_y, _z))),
             _neg(_td(_plus(_y, _neg(_x)), _z))),
        dt27,
        _one("dt28", _plus(_x, _neg(_td(_y, _z))),
             _neg(_td(_y, _plus(_z, _neg(_x))))),
        dt29,
        _one("dt30", _plus(_neg(_td(_x, _y)), _z),
             _neg(_td(_x, _plus(_y, _neg(_z))))),
        _one("dt31", _times(_x, _neg(_y)), _neg(_times(_x, _y))),
        _one("dt32", _times(_neg(_x), _y), _neg(_times(_x, _y))),
    ]


def _ring_int():
    return [
        _one("r1", _neg(_d(0)), _d(0), base=2),
        _one("r2", _neg(_neg(_x)), _x, base=2),
        _one("r3", _plus(_x, _plus(_y, _z)), _plus(_plus(_x, _y), _z), base=2),
        _one("r4", _plus(_x, _d(0)), _x, base=2),
        _one("r5", _plus(_d(1), _neg(_d(1))), _d(0), base=2),
        _one("r6", _plus(_plus(_x, _d(1)), _neg(_d(1))), _x, base=2),
        _one("r7", _plus(_x, _neg(_plus(_y, _d(1)))),
             _plus(_plus(_x, _neg(_y)), _neg(_d(1))), base=2),
        _one("r8", _plus(_d(0), _x), _x, base=2),
        _one("r9", _plus(_neg(_d(1)), _d(1)), _d(0), base=2),
        _one("r10", _plus(_neg(_plus(_x, _d(1))), _d(1)), _neg(_x), base=2),
        _one("r11", _plus(_neg(_x), _neg(_y)), _neg(_plus(_x, _y)), base=2),
        _one("r12", _times(_x, _d(0)), _d(0), base=2),
        _one("r13", _times(_x, _d(1)), _x, base=2),
        _one("r14", _times(_x, _neg(_y)), _times(_neg(_x), _y), base=2),
        _one("r15", _times(_x, _plus(_y, _z)),
             _plus(_times(_x, _y), _times(_x, _z)), base=2),
    ]


def _schemata(name: str, edited: bool):
    if name == "N_bud":
        return _binary_append_nat(edited)
    if name == "Z_bud":
        return _binary_append_nat(edited) + _binary_append_int_extra()
    if name == "N_dub":
        return _decimal_append_nat(edited)
    if name == "Z_dub":
        return _decimal_append_nat(edited) + _decimal_append_int_extra(edited)
    if name == "N_bt":
        return _binary_tree_nat()
    if name == "Z_bt":
        return _binary_tree_nat() + _binary_tree_int_extra()
    if name == "N_dt":
        return _decimal_tree_nat()
    if name == "Z_dt":
        return _decimal_tree_nat() + _decimal_tree_int_extra(edited)
    if name == "Z_r":
        return _ring_int()
    raise KeyError(f"unknown system {name!r}")


EXPECTED_RULE_COUNTS = {
    "N_bud": 18, "Z_bud": 42, "N_dub": 170, "Z_dub": 442,
    "N_bt": 12, "Z_bt": 26, "N_dt": 62, "Z_dt": 218, "Z_r": 15,
}

# Systems where the edited and unedited rule sets actually differ.
VARIANT_SYSTEMS = ("N_bud", "Z_bud", "N_dub", "Z_dub", "Z_dt")

VARIANTS = ("edited", "unedited")


def system_names() -> Tuple[str, ...]:
    return tuple(EXPECTED_RULE_COUNTS)


def has_unedited_variant(name: str) -> bool:
    return name in VARIANT_SYSTEMS


@lru_cache(maxsize=None)
def builtin_system(name: str, variant: str = "edited") -> RewriteSystem:
    """Look up a built-in system by name.

    ``variant`` is ``"edited"`` or ``"unedited"``.  For systems whose two
    variants coincide the same rule set is returned under either label.
    """
    if name not in EXPECTED_RULE_COUNTS:
        raise KeyError(f"unknown system {name!r}; choose from "
                       f"{', '.join(system_names())}")
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; choose from "
                         f"{', '.join(VARIANTS)}")
    rules = tuple(expand_all(_schemata(name, edited=(variant == "edited"))))
    if len(rules) != EXPECTED_RULE_COUNTS[name]:
        raise AssertionError(
            f"{name}[{variant}] expanded to {len(rules)} rules, "
            f"expected {EXPECTED_RULE_COUNTS[name]}")
    return RewriteSystem(name, variant, SIGNATURES[name], rules)
