"""
Labeled conditional rewriting with cost.

A defined symbol occurrence carries the set of its rules (indices within the
rules of that symbol) that have not been ruled out yet. A step either removes
a rule that can never apply (bot), removes a rule whose condition evaluation
failed (fail), or applies a rule whose conditions all succeeded (success).
Condition evaluation is itself labeled reduction, and its cost is charged to
the step that needed it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from loguru import logger

from ctrc.cctrs import CCTRS, SearchBudget
from ctrc.errors import BudgetExceeded, CtrcError, DivergenceDetected, NoGroundTerms
from ctrc.terms import (
    App,
    FreshNames,
    Term,
    Var,
    apply_subst,
    is_ground,
    match,
    positions,
    replace_at,
    unify,
)

__all__ = [
    "Cost",
    "CostKind",
    "LabeledRewriter",
    "LabeledStep",
    "SearchBudget",
    "StepKind",
    "erase",
    "is_labeled_normal_form",
    "label",
    "label_weight",
    "lnf_generalization",
]


class CostKind(Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    AT_LEAST = "at_least"


@dataclass(frozen=True)
class Cost:
    kind: CostKind
    value: int = 0

    @classmethod
    def finite(cls, n: int) -> Cost:
        return cls(CostKind.FINITE, n)

    @classmethod
    def infinite(cls) -> Cost:
        return cls(CostKind.INFINITE)

    @classmethod
    def at_least(cls, n: int) -> Cost:
        return cls(CostKind.AT_LEAST, n)

    @property
    def is_finite(self) -> bool:
        return self.kind == CostKind.FINITE

    def _key(self):
        if self.kind == CostKind.AT_LEAST:
            raise TypeError("AT_LEAST is a search verdict and has no order")
        return (self.kind == CostKind.INFINITE, self.value)

    def __lt__(self, other: Cost) -> bool:
        return self._key() < other._key()

    def __le__(self, other: Cost) -> bool:
        return self._key() <= other._key()

    def __str__(self):
        match self.kind:
            case CostKind.FINITE:
                return str(self.value)
            case CostKind.INFINITE:
                return "inf"
            case _:
                return f">={self.value}"


class StepKind(Enum):
    BOT = "bot"
    SUCCESS = "success"
    FAIL = "fail"


@dataclass(frozen=True)
class LabeledStep:
    source: App
    target: Term
    kind: StepKind
    position: tuple
    symbol: str
    rule: int  # index within the rules of `symbol`
    cost: int
    # cost of each evaluated condition, in order
    condition_costs: tuple = field(default=(), compare=False)

    def __str__(self):
        pos = ".".join(str(i) for i in self.position) or "ε"
        return f"{self.kind.value} {self.symbol}#{self.rule} at {pos} cost {self.cost}: {self.target}"


def label(t: Term, system: CCTRS) -> Term:
    """Give every unlabeled defined symbol its full rule set; labeled occurrences keep theirs."""
    if isinstance(t, Var):
        return t
    args = tuple(label(a, system) for a in t.args)
    tag = t.label
    if tag is None and system.is_defined(t.name):
        tag = frozenset(range(1, system.m(t.name) + 1))
    return App(t.name, args, tag)


def erase(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    return App(t.name, tuple(erase(a) for a in t.args))


def label_weight(t: Term) -> int:
    return sum(len(sub.label) for _, sub in positions(t) if isinstance(sub, App) and sub.label)


def is_labeled_normal_form(t: Term, system: CCTRS) -> bool:
    return all(
        sub.label == frozenset()
        for _, sub in positions(t)
        if isinstance(sub, App) and system.is_defined(sub.name)
    )


def _is_pending(t: Term) -> bool:
    return isinstance(t, App) and bool(t.label)


def lnf_generalization(t: Term, fresh: FreshNames | None = None) -> tuple[Term, dict]:
    """
    Maximal linear labeled normal form above t.

    Every maximal subterm rooted by a symbol with a non-empty label becomes a
    distinct fresh variable.

    Returns:
        tuple: (pattern, sigma) with pattern·sigma == t.
    """
    fresh = fresh or FreshNames()
    sigma: dict = {}

    def walk(u: Term) -> Term:
        if _is_pending(u):
            x = fresh()
            sigma[x] = u
            return Var(x)
        if isinstance(u, Var) or not u.args:
            return u
        return App(u.name, tuple(walk(a) for a in u.args), u.label)

    return walk(t), sigma


def _key(sigma: dict) -> frozenset:
    return frozenset(sigma.items())


class LabeledRewriter:
    """
    Exhaustive labeled reduction over one system.

    Memo tables live as long as the rewriter, so successive queries share the
    work done for common subterms and condition instances. The budget is
    applied per query.
    """

    def __init__(self, system: CCTRS, budget: SearchBudget | None = None):
        self.system = system
        self.budget = budget or SearchBudget()
        self._steps: dict[Term, tuple[LabeledStep, ...]] = {}
        self._reach: dict[Term, dict[Term, int]] = {}
        self._on_stack: set[Term] = set()
        self._frames: list[dict] = []
        self._explored = 0
        self._depth = 0

    def _start_query(self):
        self._frames = []
        self._explored = 0
        self._depth = 0

    def reach(self, s: Term) -> dict[Term, int]:
        """Every t with s ⇁* t, mapped to the highest cost of such a reduction."""
        if s in self._reach:
            return self._reach[s]
        if s in self._on_stack:
            raise DivergenceDetected(f"{s} reaches itself through reduction and condition evaluation")
        self._explored += 1
        if self._explored > self.budget.max_states:
            raise BudgetExceeded(f"More than {self.budget.max_states} states explored")

        self._on_stack.add(s)
        reached = {s: 0}
        self._frames.append(reached)
        try:
            for step in self.labeled_steps(s):
                for t, cost in self.reach(step.target).items():
                    cost += step.cost
                    if reached.get(t, -1) < cost:
                        reached[t] = cost
        finally:
            self._on_stack.discard(s)
        self._frames.pop()
        self._reach[s] = reached
        return reached

    def _condition_reach(self, start: Term) -> dict[Term, int]:
        if self._depth >= self.budget.max_depth:
            raise BudgetExceeded(f"Condition nesting deeper than {self.budget.max_depth}")
        self._depth += 1
        try:
            return self.reach(start)
        finally:
            self._depth -= 1

    def labeled_steps(self, s: Term) -> tuple[LabeledStep, ...]:
        """
        All one-step labeled reductions of a ground labeled term.

        Each (kind, position, rule, target) appears once, carrying the highest
        cost reachable for it. Raises DivergenceDetected when a condition
        evaluation leads back to a term whose reductions are being computed.
        """
        if s in self._steps:
            return self._steps[s]
        if not is_ground(s):
            raise CtrcError(f"Labeled reduction needs a ground term, got {s}")

        best: dict[tuple, LabeledStep] = {}

        def offer(step: LabeledStep):
            k = (step.kind, step.position, step.rule, step.target)
            if k not in best or best[k].cost < step.cost:
                best[k] = step

        for pos, sub in positions(s):
            if not _is_pending(sub) or not self.system.is_defined(sub.name):
                continue
            for i in sorted(sub.label):
                for step in self._steps_at(s, pos, sub, i):
                    offer(step)

        steps = tuple(sorted(best.values(), key=lambda st: (st.position, st.rule, st.kind.value, str(st.target))))
        logger.debug(f"{s}: {len(steps)} labeled step(s)")
        self._steps[s] = steps
        return steps

    def _steps_at(self, s: Term, pos: tuple, sub: App, i: int):
        rule = self.system.rules_of(sub.name)[i - 1]
        removed = replace_at(s, pos, App(sub.name, sub.args, sub.label - {i}))

        fresh = FreshNames()
        generalized = App(sub.name, tuple(lnf_generalization(a, fresh)[0] for a in sub.args))
        if unify(generalized, rule.lhs) is None:
            yield LabeledStep(s, removed, StepKind.BOT, pos, sub.name, i, 0)
            return

        sigma = match(rule.lhs, App(sub.name, sub.args))
        if sigma is None:
            return

        states = {_key(sigma): (sigma, ())}
        failed: tuple | None = None
        for a, b in rule.conditions:
            extended: dict = {}
            for sigma, costs in states.values():
                start = apply_subst(label(a, self.system), sigma)
                spent = sum(costs)
                for t, c in self._condition_reach(start).items():
                    bound = match(b, t, sigma)
                    if bound is not None:
                        k = _key(bound)
                        if k not in extended or sum(extended[k][1]) < spent + c:
                            extended[k] = (bound, costs + (c,))
                    elif unify(lnf_generalization(t)[0], b) is None:
                        if failed is None or sum(failed) < spent + c:
                            failed = costs + (c,)
            states = extended

        if failed is not None:
            yield LabeledStep(s, removed, StepKind.FAIL, pos, sub.name, i, sum(failed), failed)
        for sigma, costs in states.values():
            target = replace_at(s, pos, apply_subst(label(rule.rhs, self.system), sigma))
            yield LabeledStep(s, target, StepKind.SUCCESS, pos, sub.name, i, 1 + sum(costs), costs)

    def quasi_steps_labeled(self, s: Term) -> set[Term]:
        """All labeled condition starts label(a_{j+1})σ whose first j conditions hold."""
        self._start_query()
        found = set()
        for pos, sub in positions(s):
            if not _is_pending(sub) or not self.system.is_defined(sub.name):
                continue
            for i in sorted(sub.label):
                rule = self.system.rules_of(sub.name)[i - 1]
                sigma = match(rule.lhs, App(sub.name, sub.args))
                if sigma is None:
                    continue
                states = {_key(sigma): sigma}
                for j, (a, b) in enumerate(rule.conditions, start=1):
                    extended = {}
                    for sigma in states.values():
                        start = apply_subst(label(a, self.system), sigma)
                        found.add(start)
                        if j == len(rule.conditions):
                            continue
                        for t in self._condition_reach(start):
                            bound = match(b, t, sigma)
                            if bound is not None:
                                extended[_key(bound)] = bound
                    states = extended
        return found

    def derivation_height(self, s: Term) -> Cost:
        """Highest cost of a labeled reduction from s; infinite on divergence, a lower bound on exhaustion."""
        s = label(s, self.system)
        if not is_ground(s):
            raise CtrcError(f"Labeled reduction needs a ground term, got {s}")
        self._start_query()
        try:
            return Cost.finite(max(self.reach(s).values()))
        except DivergenceDetected as e:
            logger.info(f"dh({s}) is infinite: {e}")
            return Cost.infinite()
        except BudgetExceeded as e:
            best = max(self._frames[0].values()) if self._frames else 0
            logger.warning(f"Search for dh({s}) stopped early: {e}; best cost so far {best}")
            return Cost.at_least(best)

    def conditional_complexity(self, n: int, mode: str = "crc") -> Cost:
        """
        Maximum derivation height over ground terms of size at most n.

        A defined constant is a basic term of size 1, so either kind of
        constant gives both modes ground terms.

        Args:
            n (int): size bound.
            mode (str): "crc" restricts to basic terms, "cdc" takes every ground term.

        Returns:
            Cost: INFINITE as soon as one term diverges; AT_LEAST when some search ran out of budget.
        """
        if mode not in ("crc", "cdc"):
            raise ValueError(f"Unknown complexity mode {mode}")
        constants = [name for name, arity in self.system.symbols() if arity == 0]
        if not constants:
            raise NoGroundTerms("The signature has no constants, so there are no ground terms")

        terms = self.system.ground_terms(n, basic=(mode == "crc"))
        logger.info(f"{mode}({n}): measuring {len(terms)} term(s)")
        highest, truncated = 0, False
        for t in terms:
            cost = self.derivation_height(t)
            match cost.kind:
                case CostKind.INFINITE:
                    return cost
                case CostKind.AT_LEAST:
                    truncated = True
            highest = max(highest, cost.value)
        return Cost.at_least(highest) if truncated else Cost.finite(highest)


def derivation_height(system: CCTRS, s: Term, budget: SearchBudget | None = None) -> Cost:
    return LabeledRewriter(system, budget).derivation_height(s)


def conditional_complexity(system: CCTRS, n: int, mode: str = "crc", budget: SearchBudget | None = None) -> Cost:
    return LabeledRewriter(system, budget).conditional_complexity(n, mode)
