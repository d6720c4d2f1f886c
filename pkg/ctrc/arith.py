"""
Arithmetic expressions over the naturals used in interpretation files.

    expr   := term (("+" | "-" | "monus") term)*
    term   := power ("*" power)*
    power  := atom ("^" power)?          base must be a constant >= 2
    atom   := NUMBER | NAME | "(" expr ")" | "max(" expr ("," expr)* ")" | "pow(" NUMBER "," expr ")"

`-` is truncated subtraction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ctrc.errors import ParseError, UnboundReference


class ArithExpr:
    def eval(self, env: dict) -> int:
        raise NotImplementedError

    def substitute(self, mapping: dict) -> ArithExpr:
        raise NotImplementedError

    def refs(self) -> set[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(ArithExpr):
    value: int

    def eval(self, env):
        return self.value

    def substitute(self, mapping):
        return self

    def refs(self):
        return set()

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Ref(ArithExpr):
    name: str

    def eval(self, env):
        try:
            return env[self.name]
        except KeyError:
            raise UnboundReference(f"No value for {self.name}") from None

    def substitute(self, mapping):
        return mapping.get(self.name, self)

    def refs(self):
        return {self.name}

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class _Binary(ArithExpr):
    left: ArithExpr
    right: ArithExpr
    symbol = "?"

    def substitute(self, mapping):
        return type(self)(self.left.substitute(mapping), self.right.substitute(mapping))

    def refs(self):
        return self.left.refs() | self.right.refs()

    def __str__(self):
        return f"({self.left} {self.symbol} {self.right})"


class Add(_Binary):
    symbol = "+"

    def eval(self, env):
        return self.left.eval(env) + self.right.eval(env)


class Mul(_Binary):
    symbol = "*"

    def eval(self, env):
        left = self.left.eval(env)
        return 0 if left == 0 else left * self.right.eval(env)


class Monus(_Binary):
    symbol = "-"

    def eval(self, env):
        return max(0, self.left.eval(env) - self.right.eval(env))


@dataclass(frozen=True)
class Max(ArithExpr):
    args: tuple

    def eval(self, env):
        return max(a.eval(env) for a in self.args)

    def substitute(self, mapping):
        return Max(tuple(a.substitute(mapping) for a in self.args))

    def refs(self):
        return set().union(*(a.refs() for a in self.args))

    def __str__(self):
        return "max(" + ", ".join(str(a) for a in self.args) + ")"


@dataclass(frozen=True)
class Pow(ArithExpr):
    base: int
    exponent: ArithExpr

    def __post_init__(self):
        if self.base < 2:
            raise ParseError(f"pow needs a constant base of at least 2, got {self.base}")

    def eval(self, env):
        return self.base ** self.exponent.eval(env)

    def substitute(self, mapping):
        return Pow(self.base, self.exponent.substitute(mapping))

    def refs(self):
        return self.exponent.refs()

    def __str__(self):
        return f"{self.base}^{self.exponent}"


def add_all(terms: list[ArithExpr]) -> ArithExpr:
    terms = [t for t in terms if t != Const(0)]
    if not terms:
        return Const(0)
    total = terms[0]
    for t in terms[1:]:
        total = Add(total, t)
    return total


def times(left: ArithExpr, right: ArithExpr) -> ArithExpr:
    if Const(0) in (left, right):
        return Const(0)
    if left == Const(1):
        return right
    if right == Const(1):
        return left
    return Mul(left, right)


_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z0-9_.#]*|[-+*^(),])")


def _tokens(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"Unexpected character in expression at {text[pos:pos + 10]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _ExprReader:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokens(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected: str | None = None) -> str:
        token = self.peek()
        if token is None or (expected is not None and token != expected):
            raise ParseError(f"Expected {expected or 'more input'} in {self.text!r}, found {token!r}")
        self.pos += 1
        return token

    def expr(self) -> ArithExpr:
        left = self.term()
        while self.peek() in ("+", "-", "monus"):
            op = self.take()
            right = self.term()
            left = Add(left, right) if op == "+" else Monus(left, right)
        return left

    def term(self) -> ArithExpr:
        left = self.power()
        while self.peek() == "*":
            self.take()
            left = Mul(left, self.power())
        return left

    def power(self) -> ArithExpr:
        base = self.atom()
        if self.peek() != "^":
            return base
        self.take()
        if not isinstance(base, Const):
            raise ParseError(f"Exponentiation needs a constant base in {self.text!r}")
        return Pow(base.value, self.power())

    def atom(self) -> ArithExpr:
        token = self.take()
        if token.isdigit():
            return Const(int(token))
        if token == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if token == "max" and self.peek() == "(":
            self.take("(")
            args = [self.expr()]
            while self.peek() == ",":
                self.take()
                args.append(self.expr())
            self.take(")")
            return Max(tuple(args))
        if token == "pow" and self.peek() == "(":
            self.take("(")
            base = self.take()
            if not base.isdigit():
                raise ParseError(f"pow needs a constant base in {self.text!r}")
            self.take(",")
            exponent = self.expr()
            self.take(")")
            return Pow(int(base), exponent)
        if token in ("+", "-", "*", "^", ")", ","):
            raise ParseError(f"Unexpected {token!r} in {self.text!r}")
        return Ref(token)


def parse_expr(text: str) -> ArithExpr:
    reader = _ExprReader(text)
    result = reader.expr()
    if reader.peek() is not None:
        raise ParseError(f"Trailing input {reader.peek()!r} in {text!r}")
    return result
