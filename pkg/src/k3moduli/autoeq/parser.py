"""Recursive-descent parser for functor expressions.

Grammar::

    expr    := term (("∘" | ".") term)*
    term    := primary postfix*
    postfix := "^-1" | "^{-1}" | "⁻¹" | "[" int "]"
    primary := "P" "(" expr ")" | "(" expr ")" | NAME [ "(" intexpr ("," intexpr)* ")" ]
    intexpr := ["-"] iterm (("+" | "-") iterm)*        (linear in g)
    iterm   := INT | INT ["*"] "g" | "g"

Parsing yields an untyped tree; ``elaborate`` then builds typed terms for a
given genus, inferring the category of every bare ``Id`` from its
neighbours in a composition.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ExprSyntaxError, ExprTypeError, UnknownAtom
from ..lattice import K3Context
from .terms import Expr, Inverse, PTwist, Shift, Signature, compose

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<inv>\^\{?-1\}?|⁻¹|\^\{?−1\}?)
  | (?P<comp>∘|\.)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*'?)
  | (?P<punct>[()\[\],+*])
  | (?P<minus>-|−)
""", re.VERBOSE)

KNOWN_ATOMS = ("F", "F'", "FM", "AJcomp", "KNflop", "KNhilb", "T", "Phi", "Id")


@dataclass(frozen=True)
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Tok]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind != "ws":
            toks.append(Tok(kind, m.group(), i))
        i = m.end()
    toks.append(Tok("eof", "", len(text)))
    return toks


# Untyped syntax tree
@dataclass(frozen=True)
class RawAtom:
    name: str
    args: tuple[int, ...]
    pos: int


@dataclass(frozen=True)
class RawCompose:
    parts: tuple


@dataclass(frozen=True)
class RawInverse:
    arg: object
    pos: int


@dataclass(frozen=True)
class RawTwist:
    arg: object
    pos: int


@dataclass(frozen=True)
class RawShift:
    arg: object
    n: int


class _Parser:
    def __init__(self, text: str, g: int | None):
        self.toks = tokenize(text)
        self.i = 0
        self.g = g

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def advance(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Tok:
        t = self.tok
        if t.kind != kind or (text is not None and t.text != text):
            want = text or kind
            raise ExprSyntaxError(f"expected {want!r}, found {t.text or 'end of input'!r}",
                                  t.pos, [want])
        return self.advance()

    def parse(self):
        e = self.expr()
        if self.tok.kind != "eof":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.pos,
                                  ["∘", ".", "^-1", "[", "end of input"])
        return e

    def expr(self):
        parts = [self.term()]
        while self.tok.kind == "comp":
            self.advance()
            parts.append(self.term())
        return parts[0] if len(parts) == 1 else RawCompose(tuple(parts))

    def term(self):
        e = self.primary()
        while True:
            if self.tok.kind == "inv":
                e = RawInverse(e, self.advance().pos)
            elif self.tok.kind == "punct" and self.tok.text == "[":
                self.advance()
                n = self.intexpr()
                self.expect("punct", "]")
                e = RawShift(e, n)
            else:
                return e

    def primary(self):
        t = self.tok
        if t.kind == "punct" and t.text == "(":
            self.advance()
            e = self.expr()
            self.expect("punct", ")")
            return e
        if t.kind != "name":
            raise ExprSyntaxError(f"expected an atom, found {t.text or 'end of input'!r}",
                                  t.pos, ["atom", "P(", "("])
        self.advance()
        if t.text == "P":
            self.expect("punct", "(")
            e = self.expr()
            self.expect("punct", ")")
            return RawTwist(e, t.pos)
        if t.text not in KNOWN_ATOMS:
            raise UnknownAtom(t.text, t.pos)
        args = []
        if self.tok.kind == "punct" and self.tok.text == "(":
            self.advance()
            args.append(self.intexpr())
            while self.tok.kind == "punct" and self.tok.text == ",":
                self.advance()
                args.append(self.intexpr())
            self.expect("punct", ")")
        return RawAtom(t.text, tuple(args), t.pos)

    def intexpr(self) -> int:
        sign = 1
        if self.tok.kind == "minus":
            self.advance()
            sign = -1
        total = sign * self.iterm()
        while self.tok.kind == "minus" or (self.tok.kind == "punct" and self.tok.text == "+"):
            sign = -1 if self.advance().kind == "minus" else 1
            total += sign * self.iterm()
        return total

    def iterm(self) -> int:
        t = self.tok
        if t.kind == "int":
            self.advance()
            coeff = int(t.text)
            if self.tok.kind == "punct" and self.tok.text == "*":
                self.advance()
                return coeff * self._genus(self.expect("name", "g"))
            if self.tok.kind == "name" and self.tok.text == "g":
                return coeff * self._genus(self.advance())
            return coeff
        if t.kind == "name" and t.text == "g":
            return self._genus(self.advance())
        raise ExprSyntaxError(f"expected an integer, found {t.text or 'end of input'!r}",
                              t.pos, ["integer", "g"])

    def _genus(self, tok: Tok) -> int:
        if self.g is None:
            raise ExprSyntaxError("parameter mentions g but no genus was given", tok.pos)
        return self.g


def parse_raw(text: str, g: int | None = None):
    return _Parser(text, g).parse()


# Elaboration to typed terms ------------------------------------------------

def elaborate(raw, sig: Signature, expect_source=None, expect_target=None) -> Expr:
    if isinstance(raw, RawAtom):
        if raw.name == "Id":
            if raw.args:
                raise ExprTypeError("Id takes no parameters")
            cat = expect_source or expect_target
            if cat is None:
                raise ExprTypeError(f"cannot infer the category of Id at position {raw.pos}")
            return sig.identity(cat)
        try:
            return sig.build(raw.name, raw.args)
        except TypeError as exc:
            raise ExprTypeError(f"{exc} (position {raw.pos})") from None
    if isinstance(raw, RawCompose):
        return _elaborate_compose(raw.parts, sig, expect_source, expect_target)
    if isinstance(raw, RawInverse):
        return Inverse(elaborate(raw.arg, sig, expect_target, expect_source))
    if isinstance(raw, RawTwist):
        return PTwist(elaborate(raw.arg, sig, None, expect_target))
    if isinstance(raw, RawShift):
        return Shift(elaborate(raw.arg, sig, expect_source, expect_target), raw.n)
    raise TypeError(raw)


def _is_bare_id(raw) -> bool:
    return isinstance(raw, RawAtom) and raw.name == "Id"


def _elaborate_compose(parts, sig, expect_source, expect_target) -> Expr:
    typed: list[Expr | None] = [None if _is_bare_id(p) else elaborate(p, sig) for p in parts]
    # propagate categories into identities until nothing changes
    changed = True
    while changed and any(t is None for t in typed):
        changed = False
        for i, t in enumerate(typed):
            if t is not None:
                continue
            cat = None
            if i + 1 < len(typed) and typed[i + 1] is not None:
                cat = typed[i + 1].target
            elif i > 0 and typed[i - 1] is not None:
                cat = typed[i - 1].source
            elif i == len(typed) - 1 and expect_source is not None:
                cat = expect_source
            elif i == 0 and expect_target is not None:
                cat = expect_target
            if cat is not None:
                typed[i] = sig.identity(cat)
                changed = True
    if any(t is None for t in typed):
        raise ExprTypeError("cannot infer the category of Id")
    return compose(*typed)


def parse(text: str, ctx: K3Context) -> Expr:
    """Parse and type-check an expression at genus ctx.g."""
    return elaborate(parse_raw(text, ctx.g), Signature(ctx))
