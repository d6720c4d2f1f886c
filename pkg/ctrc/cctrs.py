"""
Conditional constructor systems: parsing, validation and the plain relations.

Input is COPS-style oriented CTRS text:

    (CONDITIONTYPE ORIENTED)
    (VAR x y)
    (RULES
      even(0) -> true
      even(s(x)) -> true | odd(x) == true
    )

`;` starts a comment running to the end of the line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from loguru import logger

from ctrc.errors import BudgetExceeded, InvalidSystem, ParseError
from ctrc.terms import (
    BOT,
    TOP,
    App,
    Term,
    TermReader,
    Var,
    apply_subst,
    compositions,
    ground_terms_of_size,
    is_linear,
    match,
    positions,
    replace_at,
    tokenize,
    variable_occurrences,
    variables,
)


@dataclass(frozen=True)
class SearchBudget:
    max_states: int = 20000
    max_depth: int = 12

    def __post_init__(self):
        if self.max_states <= 0 or self.max_depth <= 0:
            raise ValueError("Search budgets must be positive")


@dataclass(frozen=True)
class ConditionalRule:
    number: int  # position in the file, 1-based
    index: int  # position within the rules of its root symbol, 1-based
    lhs: App
    rhs: Term
    conditions: tuple = ()

    @property
    def root(self) -> str:
        return self.lhs.name

    def __str__(self):
        text = f"{self.lhs} -> {self.rhs}"
        if self.conditions:
            text += " | " + ", ".join(f"{a} == {b}" for a, b in self.conditions)
        return text


@dataclass(frozen=True)
class Violation:
    rule: int
    restriction: str
    witness: str

    def __str__(self):
        return f"rule {self.rule}: {self.restriction} ({self.witness})"


@dataclass
class ValidationReport:
    mode: str
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class RawSystem:
    variables: frozenset
    rules: list  # (lhs, rhs, conditions) in file order
    arities: dict  # name -> arity, first use wins
    arity_clashes: list  # (name, expected, found)


def _strip_comments(text: str) -> str:
    return "\n".join(line.split(";", 1)[0] for line in text.splitlines())


def _skip_block(tokens: list[str], pos: int) -> int:
    depth = 0
    while pos < len(tokens):
        if tokens[pos] == "(":
            depth += 1
        elif tokens[pos] == ")":
            depth -= 1
            if depth == 0:
                return pos + 1
        pos += 1
    raise ParseError("Unbalanced parentheses")


def parse_system(text: str) -> RawSystem:
    tokens = tokenize(_strip_comments(text))
    declared: set[str] = set()
    rule_tokens = None
    pos = 0
    while pos < len(tokens):
        if tokens[pos] != "(" or pos + 1 >= len(tokens):
            raise ParseError(f"Expected a block such as (VAR ...) but found {tokens[pos]!r}")
        keyword = tokens[pos + 1]
        end = _skip_block(tokens, pos)
        body = tokens[pos + 2 : end - 1]
        match keyword:
            case "VAR":
                declared.update(body)
            case "RULES":
                rule_tokens = body
            case "CONDITIONTYPE":
                if body != ["ORIENTED"]:
                    raise ParseError(f"Only oriented conditions are supported, got {' '.join(body)}")
            case _:
                logger.warning(f"Ignoring unsupported block ({keyword} ...)")
        pos = end

    if rule_tokens is None:
        raise ParseError("No (RULES ...) block found")

    reader = TermReader(rule_tokens, frozenset(declared))
    rules = []
    while not reader.at_end():
        lhs = reader.read_term()
        reader.expect("->")
        rhs = reader.read_term()
        conditions = []
        if reader.peek() == "|":
            reader.pos += 1
            while True:
                a = reader.read_term()
                reader.expect("==")
                b = reader.read_term()
                conditions.append((a, b))
                if reader.peek() != ",":
                    break
                reader.pos += 1
        rules.append((lhs, rhs, tuple(conditions)))

    arities: dict[str, int] = {}
    clashes = []
    for lhs, rhs, conditions in rules:
        for t in (lhs, rhs, *itertools.chain.from_iterable(conditions)):
            for _, sub in positions(t):
                if isinstance(sub, App):
                    known = arities.setdefault(sub.name, len(sub.args))
                    if known != len(sub.args) and (sub.name, known, len(sub.args)) not in clashes:
                        clashes.append((sub.name, known, len(sub.args)))

    logger.info(f"Parsed {len(rules)} rules over {len(arities)} symbols")
    return RawSystem(frozenset(declared), rules, arities, clashes)


def validate(raw: RawSystem, mode: str = "cctrs") -> ValidationReport:
    """
    Check the CCTRS restrictions (and linearity in strong mode).

    Args:
        raw (RawSystem): parsed rules.
        mode (str): "cctrs" or "strong".

    Returns:
        ValidationReport: every violated restriction with a witness, in rule order.
    """
    if mode not in ("cctrs", "strong"):
        raise ValueError(f"Unknown validation mode {mode}")
    report = ValidationReport(mode)
    add = report.violations.append

    for name, expected, found in raw.arity_clashes:
        add(Violation(0, "ARITY", f"{name} used with arity {expected} and {found}"))
    for name in raw.arities:
        if name in (TOP, BOT) or "#" in name:
            add(Violation(0, "RESERVED_NAME", f"{name} clashes with generated symbol names"))
    for name in sorted(raw.variables):
        if "#" in name:
            add(Violation(0, "RESERVED_NAME", f"variable {name} clashes with generated variable names"))

    defined = {lhs.name for lhs, _, _ in raw.rules if isinstance(lhs, App)}

    def defined_at(t: Term):
        return [(p, sub.name) for p, sub in positions(t) if isinstance(sub, App) and sub.name in defined]

    for number, (lhs, rhs, conditions) in enumerate(raw.rules, start=1):
        if isinstance(lhs, Var):
            add(Violation(number, "LHS_VARIABLE", f"left-hand side is the variable {lhs}"))
            continue
        for p, name in defined_at(lhs):
            if p:
                add(Violation(number, "LHS_NOT_BASIC", f"defined symbol {name} at position {_pos(p)}"))
        if mode == "strong" and not is_linear(lhs):
            add(Violation(number, "NONLINEAR_LHS", f"non-linear lhs at {_repeated(lhs)}"))

        bound = set(variables(lhs))
        for i, (a, b) in enumerate(conditions, start=1):
            for x in variables(a):
                if x not in bound:
                    add(Violation(number, "UNBOUND_CONDITION_VARIABLE", f"Var(a_{i}) ⊄ Var(ℓ, b_0..b_{i - 1}) at {x}"))
            for p, name in defined_at(b):
                add(Violation(number, "CONDITION_RHS_NOT_CONSTRUCTOR", f"b_{i} has defined symbol {name} at position {_pos(p)}"))
            for x in variables(b):
                if x in bound:
                    add(Violation(number, "CONDITION_RHS_SHARED_VARIABLE", f"{x} of b_{i} already occurs in ℓ or an earlier b"))
            if mode == "strong" and not is_linear(b):
                add(Violation(number, "NONLINEAR_CONDITION_RHS", f"non-linear b_{i} at {_repeated(b)}"))
            bound.update(variables(b))
        for x in variables(rhs):
            if x not in bound:
                add(Violation(number, "UNBOUND_RHS_VARIABLE", f"Var(r) ⊄ Var(ℓ, b_1..b_{len(conditions)}) at {x}"))

    if report.violations:
        logger.info(f"Validation ({mode}) found {len(report.violations)} violation(s)")
    return report


def _pos(p: tuple) -> str:
    return ".".join(str(i) for i in p) if p else "ε"


def _repeated(t: Term) -> str:
    occ = variable_occurrences(t)
    return next(x for x in occ if occ.count(x) > 1)


class CCTRS:
    """A validated constructor-based conditional system with ordered rules per defined symbol."""

    def __init__(self, raw: RawSystem, strong: bool):
        self.strong = strong
        self.variables = raw.variables
        self.arity = dict(raw.arities)
        self.rules: list[ConditionalRule] = []
        self._by_root: dict[str, list[ConditionalRule]] = {}

        for number, (lhs, rhs, conditions) in enumerate(raw.rules, start=1):
            group = self._by_root.setdefault(lhs.name, [])
            rule = ConditionalRule(number, len(group) + 1, lhs, rhs, conditions)
            group.append(rule)
            self.rules.append(rule)

        self.defined = list(self._by_root)
        self.constructors = [name for name in self.arity if name not in self._by_root]

    def rules_of(self, name: str) -> list[ConditionalRule]:
        return self._by_root.get(name, [])

    def m(self, name: str) -> int:
        return len(self._by_root.get(name, ()))

    def is_defined(self, name: str) -> bool:
        return name in self._by_root

    def is_constructor_term(self, t: Term) -> bool:
        return all(not (isinstance(sub, App) and sub.name in self._by_root) for _, sub in positions(t))

    def is_basic(self, t: Term) -> bool:
        return isinstance(t, App) and self.is_defined(t.name) and all(self.is_constructor_term(a) for a in t.args)

    def symbols(self) -> tuple:
        return tuple((name, self.arity[name]) for name in self.constructors + self.defined)

    def constructor_symbols(self) -> tuple:
        return tuple((name, self.arity[name]) for name in self.constructors)

    def ground_terms(self, n: int, basic: bool = False) -> list[App]:
        """All ground terms (or basic terms) with at most n symbols, smaller terms first."""
        found = []
        if not basic:
            for k in range(1, n + 1):
                found.extend(ground_terms_of_size(self.symbols(), k))
            return found
        cons = self.constructor_symbols()
        for k in range(1, n + 1):
            for f in self.defined:
                arity = self.arity[f]
                if arity == 0:
                    if k == 1:
                        found.append(App(f, ()))
                    continue
                for split in compositions(k - 1, arity):
                    choices = [ground_terms_of_size(cons, j) for j in split]
                    found.extend(App(f, tuple(args)) for args in itertools.product(*choices))
        return found

    def check_term(self, t: Term):
        """Reject symbols unknown to the signature or used with the wrong arity."""
        for _, sub in positions(t):
            if isinstance(sub, App):
                if sub.name not in self.arity:
                    raise ParseError(f"Unknown symbol {sub.name}")
                if self.arity[sub.name] != len(sub.args):
                    raise ParseError(f"{sub.name} expects {self.arity[sub.name]} argument(s), got {len(sub.args)}")

    def conditional_steps(self, s: Term, budget: SearchBudget | None = None) -> set:
        return PlainSearch(self, budget or SearchBudget()).steps(s)

    def quasi_steps(self, s: Term, budget: SearchBudget | None = None) -> set:
        return PlainSearch(self, budget or SearchBudget()).quasi_steps(s)


def load_system(path: str, mode: str = "cctrs") -> CCTRS:
    with open(path, "r") as stream:
        return build_system(stream.read(), mode)


def build_system(text: str, mode: str = "cctrs") -> CCTRS:
    raw = parse_system(text)
    report = validate(raw, mode)
    if not report.ok:
        raise InvalidSystem(report)
    return CCTRS(raw, strong=(mode == "strong"))


class PlainSearch:
    """Bounded search for the conditional rewrite relation and the quasi-step relation."""

    def __init__(self, system: CCTRS, budget: SearchBudget):
        self.system = system
        self.budget = budget
        self._steps: dict = {}
        self._reach: dict = {}
        self._in_progress: set = set()
        self._depth = 0
        self._states = 0

    def _redexes(self, s: Term):
        for pos, sub in positions(s):
            if isinstance(sub, App) and self.system.is_defined(sub.name):
                for rule in self.system.rules_of(sub.name):
                    sigma = match(rule.lhs, sub)
                    if sigma is not None:
                        yield pos, rule, sigma

    def steps(self, s: Term) -> set:
        if s in self._steps:
            return self._steps[s]
        found = set()
        for pos, rule, sigma in self._redexes(s):
            for extended in self.satisfy(rule.conditions, sigma):
                found.add((replace_at(s, pos, apply_subst(rule.rhs, extended)), rule.number, pos))
        self._steps[s] = found
        return found

    def quasi_steps(self, s: Term) -> set:
        found = set()
        for _, rule, sigma in self._redexes(s):
            states = [sigma]
            for j, (a, b) in enumerate(rule.conditions, start=1):
                found.update(apply_subst(a, st) for st in states)
                if j < len(rule.conditions):
                    states = self._extend(states, a, b)
        return found

    def satisfy(self, conditions: tuple, sigma: dict) -> list:
        states = [sigma]
        for a, b in conditions:
            states = self._extend(states, a, b)
            if not states:
                break
        return states

    def _extend(self, states: list, a: Term, b: Term) -> list:
        extended = []
        for sigma in states:
            for t in self.reach(apply_subst(a, sigma)):
                candidate = match(b, t, sigma)
                if candidate is not None and candidate not in extended:
                    extended.append(candidate)
        return extended

    def reach(self, t: Term) -> frozenset:
        """All terms reachable from t by the conditional rewrite relation, t included."""
        if t in self._reach:
            return self._reach[t]
        if t in self._in_progress:
            raise BudgetExceeded(f"Condition evaluation of {t} depends on itself")
        if self._depth >= self.budget.max_depth:
            raise BudgetExceeded(f"Condition nesting deeper than {self.budget.max_depth}")

        self._in_progress.add(t)
        self._depth += 1
        try:
            seen = {t}
            frontier = [t]
            while frontier:
                u = frontier.pop()
                for v, _, _ in self.steps(u):
                    if v not in seen:
                        self._states += 1
                        if self._states > self.budget.max_states:
                            raise BudgetExceeded(f"More than {self.budget.max_states} states explored")
                        seen.add(v)
                        frontier.append(v)
        finally:
            self._depth -= 1
            self._in_progress.discard(t)

        result = frozenset(seen)
        self._reach[t] = result
        return result
