"""Polynomial text grammar and the system file format.

Grammar (whitespace insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (['*'] factor)*        # '*' optional before a variable or '('
    factor := atom ['^' INT]
    atom   := NUMBER ['/' NUMBER] | VAR | '(' expr ')'

System files::

    # comment
    vars: x y z
    x^2 + y^2 + z^2 - 1
    points:
    1, 0, 0
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from gmpy2 import mpq

from .polycore import Poly, PolySystem, Rational


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1, source: str | None = None):
        where = f"{source}:" if source else ""
        super().__init__(f"{where}line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message
        self.source = source


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


class _Parser:
    def __init__(self, text: str, variables, line: int):
        self.text = text
        self.index = {v: i for i, v in enumerate(variables)}
        self.n = len(variables)
        self.line = line
        self.tokens = []
        for m in _TOKEN.finditer(text):
            if m.group(1):
                self.tokens.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.tokens.append(("var", m.group(2), m.start(2)))
            elif m.group(3) and not m.group(3).isspace():
                self.tokens.append(("op", m.group(3), m.start(3)))
        self.pos = 0

    def error(self, msg, tok=None):
        if tok is None:
            tok = self.peek()
        col = (tok[2] if tok else len(self.text)) + 1
        raise ParseError(msg, self.line, col)

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def is_op(self, ch):
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == ch

    def parse(self) -> Poly:
        if not self.tokens:
            raise ParseError("empty polynomial", self.line, 1)
        p = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        sign = 1
        if self.is_op("+") or self.is_op("-"):
            sign = -1 if self.take()[1] == "-" else 1
        total = self.term() * sign
        while self.is_op("+") or self.is_op("-"):
            s = self.take()[1]
            t = self.term()
            total = total + t if s == "+" else total - t
        return total

    def term(self):
        p = self.factor()
        while True:
            if self.is_op("*"):
                self.take()
                p = p * self.factor()
                continue
            tok = self.peek()
            if tok is not None and (tok[0] == "var" or (tok[0] == "op" and tok[1] == "(")):
                p = p * self.factor()
                continue
            if tok is not None and tok[0] == "num":
                self.error("missing operator before number")
            return p

    def factor(self):
        base = self.atom()
        if self.is_op("^"):
            self.take()
            tok = self.take()
            if tok is None or tok[0] != "num":
                self.error("expected integer exponent", tok)
            base = base ** int(tok[1])
        return base

    def atom(self):
        tok = self.take()
        if tok is None:
            self.error("unexpected end of input")
        kind, val, _ = tok
        if kind == "num":
            num = int(val)
            if self.is_op("/"):
                self.take()
                d = self.take()
                if d is None or d[0] != "num":
                    self.error("expected integer denominator", d)
                if int(d[1]) == 0:
                    self.error("zero denominator", d)
                return Poly.const(self.n, mpq(num, int(d[1])))
            return Poly.const(self.n, num)
        if kind == "var":
            if val not in self.index:
                self.error(f"unknown variable {val!r}", tok)
            return Poly.var(self.n, self.index[val])
        if val == "(":
            p = self.expr()
            if not self.is_op(")"):
                self.error("expected ')'")
            self.take()
            return p
        self.error(f"unexpected token {val!r}", tok)


def parse_poly(text: str, variables, line: int = 1) -> Poly:
    return _Parser(text, list(variables), line).parse()


def format_poly(f: Poly, variables) -> str:
    return f.to_str(list(variables))


def parse_rational(text: str, line: int = 1, column: int = 1) -> Rational:
    s = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", s):
        raise ParseError(f"not a rational number: {s!r}", line, column)
    num, _, den = s.partition("/")
    if den and int(den) == 0:
        raise ParseError("zero denominator", line, column)
    return mpq(int(num), int(den) if den else 1)


@dataclass
class SystemFile:
    system: PolySystem
    points: list[tuple[Rational, ...]] = field(default_factory=list)


def parse_system(text: str) -> SystemFile:
    variables = None
    polys = []
    points = []
    in_points = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        stripped = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if variables is None:
            if not stripped.startswith("vars:"):
                raise ParseError("first line must be 'vars: <names>'", lineno, col)
            variables = stripped[5:].split()
            if not variables:
                raise ParseError("no variables declared", lineno, col)
            if len(set(variables)) != len(variables):
                raise ParseError("duplicate variable name", lineno, col)
            for v in variables:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                    raise ParseError(f"bad variable name {v!r}", lineno, col)
            continue
        if stripped.startswith("points:"):
            in_points = True
            rest = stripped[7:].strip()
            if rest:
                raise ParseError("points must follow on separate lines", lineno, col)
            continue
        if in_points:
            parts = [p for p in re.split(r"[,\s]+", stripped) if p]
            if len(parts) != len(variables):
                raise ParseError(f"point needs {len(variables)} coordinates", lineno, col)
            points.append(tuple(parse_rational(p, lineno, col) for p in parts))
            continue
        offset = len(line) - len(line.lstrip())
        try:
            polys.append(parse_poly(line.strip(), variables, lineno))
        except ParseError as exc:
            raise ParseError(exc.reason, lineno, exc.column + offset) from None
    if variables is None:
        raise ParseError("missing 'vars:' line", 1, 1)
    if not polys:
        raise ParseError("no polynomials given", 1, 1)
    return SystemFile(PolySystem(tuple(variables), tuple(polys)), points)
