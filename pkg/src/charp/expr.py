"""Concrete syntax for tower elements.

Grammar, loosest binding first::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' exponent)?          # right associative
    atom   := INTEGER | NAME | '(' expr ')'

Exponents must be nonnegative integer constants.  There is no implicit
multiplication: ``2X`` is rejected.  Error offsets are byte offsets into the
UTF-8 source.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Callable

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([^\W\d]\w*)|(.))", re.UNICODE)


@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Var:
    name: str
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: Any
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Any
    right: Any
    pos: int


@dataclass(frozen=True)
class Pow:
    base: Any
    exp: int
    pos: int


def _tokenize(src: str):
    tokens = []
    pos = 0
    n = len(src)
    while pos < n:
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            tokens.append(("int", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", _byte(src, m.start(3)), src)
            tokens.append((ch, ch, m.start(3)))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def _byte(src: str, i: int) -> int:
    return len(src[:i].encode("utf-8"))


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, _byte(self.src, tok[2]), self.src)

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            what = "identifier" if tok[0] == "name" else repr(tok[1])
            raise self.error(f"unexpected {what} (implicit multiplication is not supported)"
                             if tok[0] in ("name", "int", "(") else f"unexpected {what}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            tok = self.take()
            node = BinOp(tok[0], node, self.term(), tok[2])
        return node

    def term(self):
        node = self.unary()
        while self.peek()[0] in ("*", "/"):
            tok = self.take()
            node = BinOp(tok[0], node, self.unary(), tok[2])
        return node

    def unary(self):
        if self.peek()[0] == "-":
            tok = self.take()
            return Neg(self.unary(), tok[2])
        return self.power()

    def power(self):
        node = self.atom()
        if self.peek()[0] == "^":
            tok = self.take()
            return Pow(node, self.exponent(), tok[2])
        return node

    def exponent(self) -> int:
        tok = self.peek()
        if tok[0] == "-":
            raise self.error("negative exponent")
        if tok[0] == "(":
            self.take()
            val = self.exponent()
            if self.peek()[0] != ")":
                raise self.error("expected ')'")
            self.take()
        elif tok[0] == "int":
            self.take()
            val = int(tok[1])
        else:
            raise self.error("exponent must be a nonnegative integer")
        if self.peek()[0] == "^":
            self.take()
            val = val ** self.exponent()
        return val

    def atom(self):
        tok = self.take()
        if tok[0] == "int":
            return Num(int(tok[1]), tok[2])
        if tok[0] == "name":
            return Var(tok[1], tok[2])
        if tok[0] == "(":
            node = self.expr()
            if self.peek()[0] != ")":
                raise self.error("expected ')'")
            self.take()
            return node
        if tok[0] == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {tok[1]!r}", tok)


def parse_ast(src: str):
    """Parse ``src`` into an expression tree."""
    return _Parser(src).parse()


def evaluate(node, lookup: Callable[[str, int], Any], const: Callable[[int], Any], src: str = ""):
    """Fold an expression tree with ``lookup(name, pos)`` and ``const(n)``."""
    if isinstance(node, Num):
        return const(node.value)
    if isinstance(node, Var):
        return lookup(node.name, node.pos)
    if isinstance(node, Neg):
        return -evaluate(node.arg, lookup, const, src)
    if isinstance(node, Pow):
        return evaluate(node.base, lookup, const, src) ** node.exp
    a = evaluate(node.left, lookup, const, src)
    b = evaluate(node.right, lookup, const, src)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    try:
        return a / b
    except ZeroDivisionError:
        raise ParseError("division by zero", _byte(src, node.pos), src) from None


def parse_expr(src: str, tower):
    """Parse ``src`` and lower it to a canonical element of ``tower``."""
    node = parse_ast(src)
    names = set(tower.names)

    def lookup(name, pos):
        if name not in names:
            raise ParseError(f"unknown variable {name!r}", _byte(src, pos), src)
        return tower.gen(name)

    return evaluate(node, lookup, tower.elem, src)


# -- printing ---------------------------------------------------------------

_SUM, _PROD, _POW, _ATOM = 1, 2, 3, 4


def _fmt(x):
    if isinstance(x, int):
        return str(x), _ATOM
    F = x.field
    n = _fmt_poly(x.num, F)
    if x.den.degree() == 0:
        return n
    d = _fmt_poly(x.den, F)
    ns = n[0] if n[1] >= _PROD else f"({n[0]})"
    ds = d[0] if d[1] >= _POW else f"({d[0]})"
    return f"{ns}/{ds}", _PROD


def _fmt_poly(P, F):
    terms = []
    for k, c in P.terms():
        cs, cp = _fmt(c)
        if k == 0:
            terms.append((cs, cp))
            continue
        mono = F.name if k == 1 else f"{F.name}^{k}"
        if F.base.is_one(c):
            terms.append((mono, _ATOM if k == 1 else _POW))
        else:
            terms.append((f"{cs if cp >= _PROD else '(' + cs + ')'}*{mono}", _PROD))
    if not terms:
        return "0", _ATOM
    if len(terms) == 1:
        return terms[0]
    return "+".join(t for t, _ in terms), _SUM


def format_elem(e, tower=None, mode: str = "text") -> str:
    """Canonical text for ``e``; coefficients are printed in ``[0, p)``.

    ``parse_expr(format_elem(e), tower) == e`` for every element.  In ``json``
    mode the text is returned as a JSON string literal.
    """
    if tower is not None:
        e = tower.elem(e)
    text = _fmt(e)[0]
    if mode == "json":
        return json.dumps(text)
    if mode != "text":
        raise ValueError(f"unknown format mode {mode!r}")
    return text
