"""Recursive-descent parser for the canonical expression text.

Grammar (whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | "+" unary | power
    power  := atom ("^" INT)?
    atom   := NUMBER ["i"] | "i" | NAME | "(" expr ")"

Names are resolved through a callback, so the same parser reads polynomials
(``z0``, ``zb1``) and linear combinations of named sections.
"""
from __future__ import annotations

import re
from typing import Callable

from .poly import Poly, Ring
from .ratfunc import RatFunc
from .scalar import I, Scalar

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)(?P<imag>i(?![A-Za-z0-9_]))?|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        self.text = text
        self.pos = pos
        self.message = message
        super().__init__(f"{message} at position {pos}\n  {text}\n  {' ' * pos}^")


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(text, bad, f"unexpected character {text[bad]!r}")
        start = m.start(m.lastgroup) if m.lastgroup else m.start()
        if m.group("num") is not None:
            start = m.start("num")
            toks.append(("imagnum" if m.group("imag") else "num", m.group("num"), start))
        elif m.group("name") is not None:
            toks.append(("name", m.group("name"), start))
        else:
            toks.append(("op", m.group("op"), start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, resolve: Callable[[str], object]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.resolve = resolve

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(self.text, tok[2], msg)

    def parse(self):
        if self.peek()[0] == "end":
            self.fail("empty expression")
        v = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected token {self.peek()[1]!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()
            w = self.term()
            v = self._apply(op, v, w)
        return v

    def term(self):
        v = self.unary()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()
            w = self.unary()
            v = self._apply(op, v, w)
        return v

    def unary(self):
        t = self.peek()
        if t[:2] == ("op", "-"):
            self.take()
            return -self.unary()
        if t[:2] == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            t = self.take()
            if t[0] != "num":
                self.fail("exponent must be a non-negative integer", t)
            try:
                return base ** int(t[1])
            except TypeError:
                self.fail("this operand cannot be raised to a power", t)
        return base

    def atom(self):
        t = self.take()
        kind, val, _ = t
        if kind == "num":
            return Scalar(int(val))
        if kind == "imagnum":
            return Scalar(0, int(val))
        if kind == "name":
            if val == "i":
                return I
            try:
                return self.resolve(val)
            except KeyError:
                self.fail(f"unknown name {val!r}", t)
        if t[:2] == ("op", "("):
            v = self.expr()
            if self.peek()[:2] != ("op", ")"):
                self.fail("expected ')'")
            self.take()
            return v
        if kind == "end":
            self.fail("unexpected end of input", t)
        self.fail(f"unexpected token {val!r}", t)

    def _apply(self, op, a, b):
        sym = op[1]
        try:
            if sym == "+":
                r = a + b
            elif sym == "-":
                r = a - b
            elif sym == "*":
                r = a * b
            else:
                r = a / b
        except (TypeError, ZeroDivisionError) as exc:
            self.fail(f"cannot apply {sym!r}: {exc}", op)
        return r


def parse_expr(text: str, resolve: Callable[[str], object]):
    return _Parser(text, resolve).parse()


def _ring_resolver(ring: Ring, wrap=None):
    def resolve(name):
        p = ring.var(name)
        return wrap(p) if wrap else p

    return resolve


def parse_poly(text: str, ring: Ring) -> Poly:
    v = parse_expr(text, _ring_resolver(ring))
    if isinstance(v, Scalar):
        return Poly.const(ring, v)
    if not isinstance(v, Poly):
        raise ParseError(text, 0, "expression is not a polynomial")
    return v


def parse_ratfunc(text: str, ring: Ring) -> RatFunc:
    v = parse_expr(text, _ring_resolver(ring, RatFunc))
    return RatFunc.coerce(v, ring)
