"""Concrete syntax for pattern-calculus terms.

    \\[x,y] PAT . BODY    abstraction binding x and y
    \\x . BODY            shorthand for \\[x] ^x . BODY
    ^x                   matchable
    x                    variable
    t u                  application, left associative

An abstraction body extends as far right as possible.  A pattern is a
sequence of atoms, so an abstraction used as a pattern needs parentheses.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .terms import Abs, App, Mat, Term, Var

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_']*)|(\S))")


class Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                break
            if m.group(1):
                self.items.append(("id", m.group(1), m.start(1)))
            elif m.group(2):
                self.items.append(("sym", m.group(2), m.start(2)))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.items[self.i] if self.i < len(self.items) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.i += 1
        return tok

    def at(self, value: str) -> bool:
        kind, v, _ = self.peek()
        return kind == "sym" and v == value

    def expect(self, value: str):
        kind, v, off = self.next()
        if kind != "sym" or v != value:
            self.fail(f"expected {value!r}, found {v or 'end of input'!r}", off)

    def ident(self) -> str:
        kind, v, off = self.next()
        if kind != "id":
            self.fail(f"expected identifier, found {v or 'end of input'!r}", off)
        return v

    def fail(self, message, offset=None):
        if offset is None:
            offset = self.peek()[2]
        raise ParseError(message, self.text, offset)

    def finish(self):
        kind, v, off = self.peek()
        if kind != "eof":
            self.fail(f"unexpected {v!r}", off)


def parse_term(text: str) -> Term:
    toks = Tokens(text)
    t = _term(toks)
    toks.finish()
    return t


def _starts_atom(toks: Tokens) -> bool:
    kind, v, _ = toks.peek()
    return kind == "id" or (kind == "sym" and v in "^(")


def _term(toks: Tokens) -> Term:
    items = []
    while _starts_atom(toks):
        items.append(_atom(toks))
    if toks.at("\\"):
        items.append(_abstraction(toks))
    if not items:
        toks.fail("expected a term")
    t = items[0]
    for u in items[1:]:
        t = App(t, u)
    return t


def _abstraction(toks: Tokens) -> Term:
    toks.expect("\\")
    if toks.at("["):
        toks.next()
        names = []
        if not toks.at("]"):
            names.append(toks.ident())
            while toks.at(","):
                toks.next()
                names.append(toks.ident())
        toks.expect("]")
        items = []
        while _starts_atom(toks):
            items.append(_atom(toks))
        if not items:
            toks.fail("expected a pattern")
        pattern = items[0]
        for u in items[1:]:
            pattern = App(pattern, u)
    else:
        x = toks.ident()
        names, pattern = [x], Mat(x)
    toks.expect(".")
    return Abs(frozenset(names), pattern, _term(toks))


def _atom(toks: Tokens) -> Term:
    kind, v, off = toks.next()
    if kind == "id":
        return Var(v)
    if v == "^":
        return Mat(toks.ident())
    if v == "(":
        t = _term(toks)
        toks.expect(")")
        return t
    toks.fail(f"unexpected {v!r}", off)


def show(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Mat):
        return "^" + t.name
    if isinstance(t, App):
        fun = f"({show(t.fun)})" if isinstance(t.fun, Abs) else show(t.fun)
        arg = f"({show(t.arg)})" if isinstance(t.arg, (App, Abs)) else show(t.arg)
        return f"{fun} {arg}"
    pattern = f"({show(t.pattern)})" if isinstance(t.pattern, Abs) else show(t.pattern)
    return f"\\[{','.join(sorted(t.binders))}] {pattern} . {show(t.body)}"
