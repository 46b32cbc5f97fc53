"""Text grammar for polynomials and differential operators.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("-" | "+") unary | power
    power  := atom ("^" INT)?
    atom   := INT | NAME | "(" expr ")"

Juxtaposition is rejected.  Division is only by nonzero constants, which is
how ``p/q`` coefficients are read.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .polynomial import Polynomial, VarSet, natural_key

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([a-z][a-z0-9_]*)|(.))")


class ParseError(ValueError):
    """Syntax error carrying a 1-based column."""

    def __init__(self, message: str, column: int, text: str = ""):
        super().__init__(f"column {column}: {message}")
        self.column = column
        self.text = text


def tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("INT", m.group(1), m.start(1) + 1))
        elif m.group(2) is not None:
            tokens.append(("NAME", m.group(2), m.start(2) + 1))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", m.start(3) + 1, text)
            tokens.append((ch, ch, m.start(3) + 1))
        pos = m.end()
    tokens.append(("END", "", len(text) + 1))
    return tokens


def names_in(text: str) -> list:
    return sorted({v for k, v, _ in tokenize(text) if k == "NAME"}, key=natural_key)


class _Parser:
    def __init__(self, text, atom, one):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.atom_of = atom
        self.one = one

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def parse(self):
        if self.peek()[0] == "END":
            self.fail("empty expression")
        value = self.expr()
        tok = self.peek()
        if tok[0] != "END":
            if tok[0] in ("INT", "NAME", "("):
                self.fail("implicit multiplication is not allowed; use '*'")
            self.fail(f"unexpected {tok[1]!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op[0] == "*":
                value = value * rhs
            else:
                c = _constant_of(rhs)
                if c is None:
                    self.fail("division only by a constant", op)
                if c == 0:
                    self.fail("division by zero", op)
                value = value * (Fraction(1) / c)
        return value

    def unary(self):
        tok = self.peek()
        if tok[0] == "-":
            self.take()
            return -self.unary()
        if tok[0] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] != "INT":
                self.fail("exponent must be a non-negative integer")
            self.take()
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        kind = tok[0]
        if kind == "INT":
            return self.one * Fraction(int(tok[1]))
        if kind == "NAME":
            try:
                return self.atom_of(tok[1])
            except KeyError as exc:
                raise ParseError(str(exc.args[0]), tok[2], self.text) from None
        if kind == "(":
            value = self.expr()
            if self.peek()[0] != ")":
                self.fail("expected ')'")
            self.take()
            return value
        if kind == "END":
            self.fail("unexpected end of input", tok)
        self.fail(f"unexpected {tok[1]!r}", tok)


def _constant_of(value):
    if isinstance(value, Polynomial):
        return value.constant_term() if value.is_constant() else None
    const = getattr(value, "as_constant", None)
    return const() if const else None


def parse_polynomial(text: str, varset: VarSet | None = None) -> Polynomial:
    """Parse text into a Polynomial.

    Without an explicit VarSet the variables are the names that occur, in
    natural sort order (x2 before x10).
    """
    if varset is None:
        varset = VarSet(tuple(names_in(text)))
    one = Polynomial.constant(varset, 1)

    def atom(name):
        return Polynomial.variable(varset, name)

    return _Parser(text, atom, one).parse()


def parse_with(text: str, atom, one):
    """Parse into any ring given an atom constructor and its unit element."""
    return _Parser(text, atom, one).parse()


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not an exact rational: {text!r}")
    return Fraction(text)


def parse_rational_list(text: str) -> list:
    return [parse_rational(p) for p in text.split(",") if p.strip()]


def parse_int_list(text: str) -> list:
    out = []
    for p in text.split(","):
        p = p.strip()
        if not re.fullmatch(r"\d+", p):
            raise ValueError(f"not a non-negative integer: {p!r}")
        out.append(int(p))
    return out
