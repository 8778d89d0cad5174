"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('-')* base ('^' uint)?
    base   := INT ('/' INT)? | ident | '(' expr ')'

The Unicode minus sign is accepted for '-'.  Identifiers must belong to the
ring the expression is parsed into.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..exactalg import Poly, PolyRing


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.message = message
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}")

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.pos}^ {self.message}"


_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()−]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "ident", "op", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m:
            raise ParseError(f"unexpected character {text[i]!r}", text, i)
        kind = m.lastgroup
        tok = m.group(kind)
        start = m.start(kind)
        if tok == "−":
            tok = "-"
        out.append(Token(kind, tok, start))
        i = m.end()
    out.append(Token("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        tok = tok or self.cur
        raise ParseError(msg, self.text, tok.pos)

    def eat(self, op: str) -> bool:
        if self.cur.kind == "op" and self.cur.text == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Poly:
        if self.cur.kind == "end":
            self.error("empty expression")
        p = self.expr()
        if self.cur.kind != "end":
            self.error(f"unexpected {self.cur.text!r}")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while True:
            if self.eat("+"):
                p = p + self.term()
            elif self.eat("-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> Poly:
        p = self.factor()
        while self.eat("*"):
            p = p * self.factor()
        return p

    def factor(self) -> Poly:
        if self.eat("-"):
            return -self.factor()
        b = self.base()
        if self.eat("^"):
            tok = self.cur
            if tok.kind != "int":
                self.error("exponent must be a nonnegative integer")
            self.i += 1
            b = b ** int(tok.text)
        return b

    def base(self) -> Poly:
        tok = self.cur
        if tok.kind == "int":
            self.i += 1
            value = Fraction(int(tok.text))
            if self.eat("/"):
                den = self.cur
                if den.kind != "int":
                    self.error("denominator of a rational literal must be an integer")
                if int(den.text) == 0:
                    self.error("zero denominator", den)
                self.i += 1
                value = value / int(den.text)
            return self.ring.const(value)
        if tok.kind == "ident":
            if tok.text not in self.ring.names:
                allowed = ", ".join(self.ring.names)
                self.error(f"unknown variable {tok.text!r} (allowed: {allowed})")
            self.i += 1
            return self.ring.gen(tok.text)
        if self.eat("("):
            p = self.expr()
            if not self.eat(")"):
                self.error("expected ')'")
            return p
        if tok.kind == "end":
            self.error("unexpected end of input")
        self.error(f"unexpected {tok.text!r}")


def parse_poly(text: str, ring: PolyRing) -> Poly:
    return _Parser(text, ring).parse()
