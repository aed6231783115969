"""Expression grammar for field, series, rational and form literals.

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary | unary)*      juxtaposition multiplies
    unary   := '-' unary | power
    power   := primary ('^' exponent)?
    exponent:= '-'? INT | '(' '-'? INT ')'
    primary := INT | NAME | DIFF | 'd' '(' expr ')' | 'dlog' '(' expr ')'
             | 'O' '(' NAME '^' exponent ')' | '(' expr ')'

DIFF is ``d`` glued to a variable name (``dt``, ``dx``, ``ds``).  Names that
start with ``d`` are differentials only when the rest is a declared variable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(ValueError):
    def __init__(self, message: str, source: str, pos: int, expected=()):
        line = source.count("\n", 0, pos) + 1
        col = pos - (source.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col, self.expected = line, col, tuple(sorted(set(expected)))
        self.msg = message
        exp = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"{message} at line {line}, column {col}{exp}")

    def as_dict(self) -> dict:
        return {"error": "ParseError", "message": self.msg, "line": self.line,
                "column": self.col, "expected": list(self.expected)}


# --- AST --------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Diff:
    var: str


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Call:
    fn: str
    arg: object


@dataclass(frozen=True)
class Prec:
    var: str
    n: int


Expr = object  # any of the node classes above

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")
_START = ("INT", "NAME", "(", "-")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    pos: int


def tokenize(source: str) -> list:
    toks = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(_Tok("INT", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            toks.append(_Tok("NAME", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", source, m.start(3),
                                 ["+", "-", "*", "/", "^", "(", ")", "number", "name"])
            toks.append(_Tok(ch, ch, m.start(3)))
        pos = m.end()
    toks.append(_Tok("EOF", "", len(source)))
    return toks


class _Parser:
    def __init__(self, source: str, variables):
        self.src = source
        self.vars = set(variables)
        self.toks = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            self.fail(f"unexpected {self._desc(self.tok)}", [kind])
        return self.advance()

    def fail(self, message, expected=()):
        raise ParseError(message, self.src, self.tok.pos, expected)

    @staticmethod
    def _desc(tok):
        return "end of input" if tok.kind == "EOF" else repr(tok.text)

    def parse(self):
        if self.tok.kind == "EOF":
            self.fail("empty expression", ["number", "name", "("])
        e = self.expr()
        if self.tok.kind != "EOF":
            self.fail(f"unexpected {self._desc(self.tok)}", ["+", "-", "*", "/", "^", "end of input"])
        return e

    def expr(self):
        left = self.term()
        while self.tok.kind in ("+", "-"):
            op = self.advance().kind
            left = BinOp(op, left, self.term())
        return left

    def _starts_primary(self):
        return self.tok.kind in ("INT", "NAME", "(")

    def term(self):
        left = self.unary()
        while True:
            if self.tok.kind in ("*", "/"):
                op = self.advance().kind
                left = BinOp(op, left, self.unary())
            elif self._starts_primary():
                left = BinOp("*", left, self.power())
            else:
                return left

    def unary(self):
        if self.tok.kind == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def exponent(self) -> int:
        paren = self.tok.kind == "("
        if paren:
            self.advance()
        sign = 1
        if self.tok.kind == "-":
            self.advance()
            sign = -1
        n = int(self.expect("INT").text)
        if paren:
            self.expect(")")
        return sign * n

    def power(self):
        base = self.primary()
        if self.tok.kind == "^":
            self.advance()
            if self.tok.kind not in ("INT", "-", "("):
                self.fail("exponent must be an integer", ["integer"])
            return Pow(base, self.exponent())
        return base

    def primary(self):
        tok = self.tok
        if tok.kind == "INT":
            self.advance()
            return Num(int(tok.text))
        if tok.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if tok.kind == "NAME":
            self.advance()
            name = tok.text
            if name in ("d", "dlog", "O") and self.tok.kind == "(":
                self.advance()
                if name == "O":
                    var = self.expect("NAME").text
                    if self.tok.kind == "^":
                        self.advance()
                        n = self.exponent()
                    else:
                        n = 1
                    self.expect(")")
                    return Prec(var, n)
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name.startswith("d") and name[1:] in self.vars:
                return Diff(name[1:])
            return Name(name)
        self.fail(f"unexpected {self._desc(tok)}", ["number", "name", "("])


def parse(source: str, variables=("t", "s", "u", "x", "y")):
    """Parse ``source``; ``variables`` are the names that ``d<name>`` differentiates."""
    return _Parser(source, variables).parse()


# --- canonical printing -------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(e) -> str:
    """Canonical text; ``parse(to_text(e)) == e`` for trees built from the grammar."""
    return _show(e, 0)


def _show(e, ctx: int) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Diff):
        return "d" + e.var
    if isinstance(e, Prec):
        return f"O({e.var}^{e.n})"
    if isinstance(e, Call):
        return f"{e.fn}({_show(e.arg, 0)})"
    if isinstance(e, Pow):
        base = _show(e.base, 4)
        if isinstance(e.base, (Pow, Neg, BinOp)):
            base = f"({base})" if not base.startswith("(") or isinstance(e.base, Pow) else base
        return f"{base}^{e.exp}"
    if isinstance(e, Neg):
        s = "-" + _show(e.arg, 3)
        return f"({s})" if ctx >= 2 else s
    if isinstance(e, BinOp):
        prec = _PREC[e.op]
        s = f"{_show(e.left, prec)} {e.op} {_show(e.right, prec + 1)}"
        return f"({s})" if prec < ctx else s
    raise TypeError(f"not an expression node: {e!r}")
