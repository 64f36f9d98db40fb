"""Concrete syntax for terms over the integer-representation signatures.

Grammar (operator chains at the same level must be parenthesized):

    term   := sum
    sum    := prod [ '+' prod ]
    prod   := post [ '*' post ]
    post   := atom { append }
    append := ':b0' | ':b1' | ':d0' .. ':d9'
    atom   := digit | variable
            | 'S(' term ')' | 'P(' term ')' | '-(' term ')'
            | '(' term ')'
            | '(' term ('^b' | '^d') term ')'

Digits are single characters 0-9 and denote constants.  Variables are
identifiers; ``S`` and ``P`` are reserved for the successor and predecessor
operators.  The tree constructors ``^b`` and ``^d`` always appear inside
parentheses.  ``format_term`` emits the minimal parenthesization that parses
back to the same term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

from .terms import App, Term, Var

APPEND_MARKERS = (":b0", ":b1") + tuple(f":d{i}" for i in range(10))
TREE_MARKERS = ("^b", "^d")
DIGITS = tuple(str(i) for i in range(10))
RESERVED_IDENTS = ("S", "P")


class ParseError(ValueError):
    """Raised on malformed input, with 1-based line and column."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


@dataclass
class _Token:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(source: str) -> List[_Token]:
    tokens: List[_Token] = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_col = col
        if ch in "()+*":
            kind = {"(": "lparen", ")": "rparen", "+": "plus", "*": "star"}[ch]
            tokens.append(_Token(kind, ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch == "-":
            tokens.append(_Token("minus", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch == ":":
            marker = source[i : i + 3]
            if marker not in APPEND_MARKERS:
                raise ParseError(f"malformed append marker {marker!r}", line, start_col)
            tokens.append(_Token("append", marker, line, start_col))
            i += 3
            col += 3
            continue
        if ch == "^":
            marker = source[i : i + 2]
            if marker not in TREE_MARKERS:
                raise ParseError(f"malformed tree marker {marker!r}", line, start_col)
            tokens.append(_Token("tree", marker, line, start_col))
            i += 2
            col += 2
            continue
        if ch.isdigit():
            tokens.append(_Token("digit", ch, line, start_col))
            i += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(_Token("ident", source[i:j], line, start_col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, start_col)
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: List[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.next()
        if tok.kind != kind:
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}", tok.line, tok.col)
        return tok

    def fail(self, tok: _Token, message: str) -> None:
        raise ParseError(message, tok.line, tok.col)

    def parse_term(self) -> Term:
        return self.parse_sum()

    def parse_sum(self) -> Term:
        left = self.parse_prod()
        if self.peek().kind == "plus":
            self.next()
            right = self.parse_prod()
            tok = self.peek()
            if tok.kind in ("plus", "star"):
                self.fail(tok, f"chained {tok.text!r} needs parentheses")
            return App("+", (left, right))
        return left

    def parse_prod(self) -> Term:
        left = self.parse_post()
        if self.peek().kind == "star":
            self.next()
            right = self.parse_post()
            if self.peek().kind == "star":
                tok = self.peek()
                self.fail(tok, "chained '*' needs parentheses")
            return App("*", (left, right))
        return left

    def parse_post(self) -> Term:
        term = self.parse_atom()
        while self.peek().kind == "append":
            tok = self.next()
            term = App(tok.text, (term,))
        return term

    def parse_atom(self) -> Term:
        tok = self.next()
        if tok.kind == "digit":
            return App(tok.text)
        if tok.kind == "ident":
            if tok.text in RESERVED_IDENTS:
                self.expect("lparen", f"'(' after {tok.text}")
                inner = self.parse_term()
                self.expect("rparen", "')'")
                return App(tok.text, (inner,))
            return Var(tok.text)
        if tok.kind == "minus":
            self.expect("lparen", "'(' after '-'")
            inner = self.parse_term()
            self.expect("rparen", "')'")
            return App("-", (inner,))
        if tok.kind == "lparen":
            inner = self.parse_term()
            nxt = self.next()
            if nxt.kind == "rparen":
                return inner
            if nxt.kind == "tree":
                right = self.parse_term()
                self.expect("rparen", "')'")
                return App(nxt.text, (inner, right))
            self.fail(nxt, f"expected ')' or tree marker, found {nxt.text!r}")
        self.fail(tok, f"unexpected {tok.text or 'end of input'!r}")
        raise AssertionError("unreachable")


def parse_term(source: str) -> Term:
    """Parse concrete syntax into a term.

    Raises :class:`ParseError` on malformed input, including unparenthesized
    operator chains such as ``a + b + c``.
    """
    parser = _Parser(_tokenize(source))
    term = parser.parse_term()
    tok = parser.peek()
    if tok.kind != "eof":
        raise ParseError(f"trailing input starting at {tok.text!r}", tok.line, tok.col)
    return term


def _fmt(term: Term, parent: str) -> str:
    """Format with minimal parentheses; ``parent`` names the hole context."""
    if isinstance(term, Var):
        return term.name
    assert isinstance(term, App)
    sym = term.sym
    if not term.args:
        return sym
    if sym in ("S", "P"):
        return f"{sym}({_fmt(term.args[0], 'top')})"
    if sym == "-":
        return f"-({_fmt(term.args[0], 'top')})"
    if sym in TREE_MARKERS:
        left = _fmt(term.args[0], "top")
        right = _fmt(term.args[1], "top")
        return f"({left} {sym} {right})"
    if sym in APPEND_MARKERS:
        base = term.args[0]
        inner = _fmt(base, "post")
        if isinstance(base, App) and base.sym in ("+", "*"):
            inner = f"({inner})"
        return f"{inner} {sym}"
    if sym == "*":
        parts = []
        for arg in term.args:
            text = _fmt(arg, "prod")
            if isinstance(arg, App) and arg.sym in ("+", "*"):
                text = f"({text})"
            parts.append(text)
        text = f"{parts[0]} * {parts[1]}"
        return text
    if sym == "+":
        parts = []
        for arg in term.args:
            text = _fmt(arg, "sum")
            if isinstance(arg, App) and arg.sym == "+":
                text = f"({text})"
            parts.append(text)
        return f"{parts[0]} + {parts[1]}"
    raise ValueError(f"cannot format unknown symbol {sym!r}")


def format_term(term: Term) -> str:
    """Render a term; ``parse_term(format_term(t)) == t`` for supported symbols."""
    return _fmt(term, "top")
