"""
First-order terms shared by the plain, labeled and transformed signatures.

A term is either a `Var` or an `App`. Labeled terms are `App` nodes whose
`label` holds the indices (1-based, within R restricted to the root symbol)
of the rules not yet tried at that occurrence; unlabeled nodes carry `None`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterator, Union

from ctrc.errors import ParseError

TOP = "top"
BOT = "bot"


class SymbolKind(Enum):
    CONSTRUCTOR = "constructor"
    DEFINED = "defined"
    PROGRESS = "progress"
    AUXILIARY = "auxiliary"


@dataclass(frozen=True)
class Symbol:
    name: str
    arity: int
    kind: SymbolKind
    # (f, i, j) for progress symbols f#i#j
    decoration: tuple | None = None


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=False)
class App:
    name: str
    args: tuple = ()
    label: frozenset | None = None
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.name, self.args, self.label)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, App) or self._hash != other._hash:
            return False
        return self.name == other.name and self.label == other.label and self.args == other.args

    def __str__(self):
        return render(self)


Term = Union[Var, App]
Position = tuple
Substitution = dict


def const(name: str) -> App:
    return App(name, ())


def render(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    head = t.name
    if t.label is not None:
        head += "{" + ",".join(str(i) for i in sorted(t.label)) + "}"
    if not t.args:
        return head
    return head + "(" + ",".join(render(a) for a in t.args) + ")"


def positions(t: Term, prefix: Position = ()) -> Iterator[tuple[Position, Term]]:
    """Pre-order walk yielding (position, subterm); positions are 1-based."""
    yield prefix, t
    if isinstance(t, App):
        for i, arg in enumerate(t.args, start=1):
            yield from positions(arg, prefix + (i,))


def subterm_at(t: Term, pos: Position) -> Term:
    for i in pos:
        t = t.args[i - 1]
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    i = pos[0]
    args = list(t.args)
    args[i - 1] = replace_at(args[i - 1], pos[1:], new)
    return App(t.name, tuple(args), t.label)


def variables(t: Term) -> list[str]:
    """Variable names in order of first occurrence."""
    seen: dict[str, None] = {}
    for _, sub in positions(t):
        if isinstance(sub, Var):
            seen.setdefault(sub.name)
    return list(seen)


def variable_occurrences(t: Term) -> list[str]:
    return [sub.name for _, sub in positions(t) if isinstance(sub, Var)]


def is_linear(t: Term) -> bool:
    occ = variable_occurrences(t)
    return len(occ) == len(set(occ))


def is_ground(t: Term) -> bool:
    return all(not isinstance(sub, Var) for _, sub in positions(t))


def size(t: Term) -> int:
    """Number of function symbols, not counting `top` and variables."""
    return sum(1 for _, sub in positions(t) if isinstance(sub, App) and sub.name != TOP)


def apply_subst(t: Term, sigma: Substitution) -> Term:
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if not t.args:
        return t
    return App(t.name, tuple(apply_subst(a, sigma) for a in t.args), t.label)


def rename(t: Term, mapping: dict[str, str]) -> Term:
    return apply_subst(t, {old: Var(new) for old, new in mapping.items()})


def match(pattern: Term, subject: Term, sigma: Substitution | None = None) -> Substitution | None:
    """
    First-order matching.

    Returns:
        dict | None: sigma with pattern·sigma == subject, extending the given
        sigma, or None when no such substitution exists.
    """
    sigma = dict(sigma) if sigma else {}
    stack = [(pattern, subject)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = sigma.get(p.name)
            if bound is None:
                sigma[p.name] = s
            elif bound != s:
                return None
            continue
        if not isinstance(s, App) or p.name != s.name or len(p.args) != len(s.args):
            return None
        if p.label != s.label:
            return None
        stack.extend(zip(p.args, s.args))
    return sigma


def _walk(t: Term, sigma: Substitution) -> Term:
    while isinstance(t, Var) and t.name in sigma:
        t = sigma[t.name]
    return t


def _occurs(name: str, t: Term, sigma: Substitution) -> bool:
    t = _walk(t, sigma)
    if isinstance(t, Var):
        return t.name == name
    return any(_occurs(name, a, sigma) for a in t.args)


def _resolve(t: Term, sigma: Substitution) -> Term:
    t = _walk(t, sigma)
    if isinstance(t, Var) or not t.args:
        return t
    return App(t.name, tuple(_resolve(a, sigma) for a in t.args), t.label)


def unify(s: Term, t: Term) -> Substitution | None:
    """Syntactic unification with occurs check; returns an idempotent mgu or None."""
    sigma: Substitution = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, sigma), _walk(b, sigma)
        match a, b:
            case Var(name=x), Var(name=y) if x == y:
                continue
            case Var(name=x), _:
                if _occurs(x, b, sigma):
                    return None
                sigma[x] = b
            case _, Var(name=y):
                if _occurs(y, a, sigma):
                    return None
                sigma[y] = a
            case App(), App():
                if a.name != b.name or len(a.args) != len(b.args) or a.label != b.label:
                    return None
                stack.extend(zip(a.args, b.args))
    return {x: _resolve(v, sigma) for x, v in sigma.items()}


class FreshNames:
    """Deterministic fresh variable supply: x#1, x#2, ... skipping reserved names."""

    def __init__(self, prefix: str = "x#", avoid: set[str] | None = None):
        self.prefix = prefix
        self.avoid = set(avoid or ())
        self.counter = 0

    def __call__(self) -> str:
        while True:
            self.counter += 1
            name = f"{self.prefix}{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name


def ground_terms_of_size(symbols: tuple[tuple[str, int], ...], n: int) -> list[App]:
    """All ground terms with exactly n symbols over (name, arity) pairs, in a fixed order."""
    return list(_ground_terms_of_size(tuple(symbols), n))


@lru_cache(maxsize=None)
def _ground_terms_of_size(symbols: tuple[tuple[str, int], ...], n: int) -> tuple[App, ...]:
    if n <= 0:
        return ()
    found = []
    for name, arity in symbols:
        if arity == 0:
            if n == 1:
                found.append(App(name, ()))
            continue
        for split in compositions(n - 1, arity):
            choices = [_ground_terms_of_size(symbols, k) for k in split]
            for args in itertools.product(*choices):
                found.append(App(name, tuple(args)))
    return tuple(found)


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways to write total as a sum of `parts` positive integers."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


# Surface syntax shared by system files, interpretation files and the command line.
_PUNCTUATION = {"(", ")", ",", "{", "}", "|", ";", "->", "->=", "=="}
_TOKEN = re.compile(r"\s*(->=|->|==|[(),{}|;]|[^\s(),{}|;]+?(?=\s|[(),{}|;]|->|==|$))")


def tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"Unexpected character at offset {pos}: {text[pos:pos + 20]!r}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class TermReader:
    """Recursive-descent reader over a token list; names in `variables` become Var nodes."""

    def __init__(self, tokens: list[str], variables: set[str] | frozenset = frozenset()):
        self.tokens = tokens
        self.pos = 0
        self.variables = variables

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def expect(self, token: str):
        if self.peek() != token:
            raise ParseError(f"Expected {token!r} but found {self.peek()!r}")
        self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def read_term(self) -> Term:
        name = self.peek()
        if name is None or name in _PUNCTUATION:
            raise ParseError(f"Expected a symbol or variable but found {name!r}")
        self.pos += 1

        label = None
        if self.peek() == "{":
            self.pos += 1
            indices = []
            while self.peek() != "}":
                token = self.peek()
                if token is None or not token.isdigit():
                    raise ParseError(f"Bad rule index {token!r} in label of {name}")
                indices.append(int(token))
                self.pos += 1
                if self.peek() == ",":
                    self.pos += 1
            self.expect("}")
            label = frozenset(indices)

        if self.peek() != "(":
            if name in self.variables and label is None:
                return Var(name)
            return App(name, (), label)

        self.pos += 1
        args = []
        if self.peek() != ")":
            args.append(self.read_term())
            while self.peek() == ",":
                self.pos += 1
                args.append(self.read_term())
        self.expect(")")
        if name in self.variables:
            raise ParseError(f"Variable {name} used as a function symbol")
        return App(name, tuple(args), label)


def parse_term(text: str, variables: set[str] | frozenset = frozenset()) -> Term:
    reader = TermReader(tokenize(text), variables)
    term = reader.read_term()
    if not reader.at_end():
        raise ParseError(f"Trailing input after term: {' '.join(reader.tokens[reader.pos:])}")
    return term
