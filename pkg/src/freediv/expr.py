"""Parser for the polynomial expression grammar.

Grammar (whitespace between tokens is ignored)::

    expr    := sign? term (("+" | "-") term)*
    term    := factor (("*" factor) | ("/" INTEGER))*
    factor  := atom ("^" INTEGER)?
    atom    := INTEGER | IDENT | "(" expr ")"

``^`` takes non-negative integer exponents, ``/`` only divides by a nonzero
integer literal (so ``3/4`` and ``x^2/2`` are valid) and juxtaposition is
not multiplication.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .pseries import EXACT, Series

_TOKEN = re.compile(r"(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S)")


class ParseError(ValueError):
    """Malformed expression; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at byte {offset}")


def _byte_offset(text: str, char_offset: int) -> int:
    return len(text[:char_offset].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, names: Sequence[str], prec):
        self.text = text
        self.names = {name: i for i, name in enumerate(names)}
        self.nvars = len(names)
        self.prec = prec
        self.tokens = self._tokenize()
        self.pos = 0

    def _tokenize(self):
        toks = []
        text = self.text
        for m in _TOKEN.finditer(text):
            start = m.start(m.lastindex)
            if m.group(1) is not None:
                toks.append(("int", m.group(1), start))
            elif m.group(2) is not None:
                toks.append(("name", m.group(2), start))
            else:
                ch = m.group(3)
                if ch not in "+-*/^()":
                    raise self.error(f"unexpected character {ch!r}", start)
                toks.append((ch, ch, start))
        toks.append(("end", "", len(text)))
        return toks

    def error(self, msg, char_offset):
        return ParseError(msg, _byte_offset(self.text, char_offset), self.text)

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise self.error(f"expected {kind}, found {what}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> Series:
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("int", "name", "("):
                raise self.error("implicit multiplication is not allowed; use '*'", tok[2])
            raise self.error(f"unexpected {tok[1]!r}", tok[2])
        return result

    def expr(self) -> Series:
        sign = 1
        if self.peek()[0] in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        total = self.term().scale(sign)
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self) -> Series:
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            op = self.take()[0]
            if op == "*":
                value = value * self.factor()
            else:
                tok = self.take("int")
                d = int(tok[1])
                if d == 0:
                    raise self.error("division by zero", tok[2])
                value = value.scale(Fraction(1, d))
        return value

    def factor(self) -> Series:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                raise self.error("exponents must be non-negative integers", tok[2])
            tok = self.take("int")
            base = base ** int(tok[1])
        return base

    def atom(self) -> Series:
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return Series.constant(int(tok[1]), self.nvars, self.prec)
        if tok[0] == "name":
            self.take()
            if tok[1] not in self.names:
                raise self.error(f"unknown variable {tok[1]!r}", tok[2])
            return Series.var(self.names[tok[1]], self.nvars, self.prec)
        if tok[0] == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if tok[0] == "end" else repr(tok[1])
        raise self.error(f"expected a number, variable or '(', found {what}", tok[2])


def parse(text: str, names: Sequence[str], prec=EXACT) -> Series:
    """Parse ``text`` into a :class:`Series` over the variables ``names``.

    >>> from freediv.pseries import to_string
    >>> to_string(parse("(x + y)*(x - y)", ["x", "y"]), ["x", "y"])
    'x^2 - y^2'
    """
    if len(set(names)) != len(names):
        raise ValueError("variable names must be distinct")
    return _Parser(text, list(names), prec).parse()
