"""Recursive-descent parser for the chart expression language.

Grammar (whitespace insignificant)::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := number | coord | func '(' expr ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-y^2``
is ``-(y^2)`` and ``2^-1`` is ``2^(-1)``.  Parsing produces the same
:class:`~paralab.jets.ScalarField` trees that evaluation uses.
"""

from __future__ import annotations

import math
import re

from .errors import ParseError, UnknownFunctionError, UnknownIdentifierError
from .jets import FUNCTIONS, Add, Apply, Const, Coord, Div, Mul, Neg, Pow, Sub

MAX_DEPTH = 200

_NUMBER = re.compile(r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_SPACE = " \t\r\n"
_OPS = "+-*/^()"


def _byte_offset(src, pos):
    return len(src[:pos].encode("utf-8", "surrogatepass"))


def tokenize(src):
    """Yield ``(kind, text, char_offset)`` tuples ending with an ``end`` token."""
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        ch = src[pos]
        if ch in _SPACE:
            pos += 1
            continue
        if ch in _OPS:
            tokens.append(("op", ch, pos))
            pos += 1
            continue
        m = _NUMBER.match(src, pos)
        if m:
            tokens.append(("num", m.group(), pos))
            pos = m.end()
            continue
        m = _IDENT.match(src, pos)
        if m:
            tokens.append(("ident", m.group(), pos))
            pos = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", _byte_offset(src, pos))
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, src, coords):
        self.src = src
        self.coords = {name: i for i, name in enumerate(coords)}
        self.tokens = tokenize(src)
        self.i = 0
        self.depth = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def error(self, message, cls=ParseError, pos=None):
        return cls(message, _byte_offset(self.src, self.tok[2] if pos is None else pos))

    def expect(self, text):
        kind, t, _ = self.tok
        if kind != "op" or t != text:
            found = "end of input" if kind == "end" else repr(t)
            raise self.error(f"expected {text!r}, found {found}")
        self.i += 1

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise self.error("expression nested too deeply")

    def parse(self):
        if self.tok[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.tok[0] != "end":
            raise self.error(f"unexpected {self.tok[1]!r}")
        return node

    def expr(self):
        self.enter()
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.tok[1]
            self.i += 1
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        self.depth -= 1
        return node

    def term(self):
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.tok[1]
            self.i += 1
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self):
        self.enter()
        if self.tok == ("op", "-", self.tok[2]):
            self.i += 1
            if self.tok[0] == "num" and self.tokens[self.i + 1][1] != "^":
                # signed literal: printed negative constants reparse as constants
                node = Const(-self.atom().c)
            else:
                node = Neg(self.unary())
        else:
            node = self.power()
        self.depth -= 1
        return node

    def power(self):
        base = self.atom()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.i += 1
            return Pow(base, self.unary())
        return base

    def atom(self):
        kind, text, pos = self.tok
        if kind == "num":
            value = float(text)
            if not math.isfinite(value):
                raise self.error(f"number out of range: {text}")
            self.i += 1
            return Const(value)
        if kind == "ident":
            self.i += 1
            if self.tok[0] == "op" and self.tok[1] == "(":
                if text not in FUNCTIONS:
                    raise self.error(f"unknown function {text!r}", UnknownFunctionError, pos)
                self.i += 1
                arg = self.expr()
                self.expect(")")
                return Apply(text, arg)
            if text not in self.coords:
                raise self.error(f"unknown identifier {text!r}", UnknownIdentifierError, pos)
            return Coord(self.coords[text], text)
        if kind == "op" and text == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(text)
        raise self.error(f"expected a number, coordinate, function or '(', found {found}")


def parse_expression(src, coords):
    """Parse ``src`` into a scalar field over the named coordinates."""
    if not isinstance(src, str):
        raise ParseError(f"expression must be a string, got {type(src).__name__}")
    return _Parser(src, list(coords)).parse()


def as_expression(value, coords):
    """Accept a field, a number or a source string."""
    from .jets import ScalarField, as_field

    if isinstance(value, ScalarField):
        return value
    if isinstance(value, str):
        return parse_expression(value, coords)
    return as_field(value)
