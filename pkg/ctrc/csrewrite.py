"""Context-sensitive rewriting over a transformed system, counting only cost-1 rule applications."""

from __future__ import annotations

from loguru import logger

from ctrc.cctrs import SearchBudget
from ctrc.errors import BudgetExceeded, DivergenceDetected
from ctrc.labeled import Cost
from ctrc.terms import App, Term, apply_subst, match, replace_at
from ctrc.transform import TransformedTRS


def active_positions(t: Term, mu: dict, prefix: tuple = ()):
    """Root is active; argument i of an active f(...) is active when i is in mu(f)."""
    yield prefix, t
    if isinstance(t, App):
        allowed = mu.get(t.name, frozenset())
        for i, arg in enumerate(t.args, start=1):
            if i in allowed:
                yield from active_positions(arg, mu, prefix + (i,))


def cs_steps(t: Term, trs: TransformedTRS) -> set[tuple]:
    """All (reduct, cost, rule id, position) for redexes at active positions."""
    found = set()
    for pos, sub in active_positions(t, trs.mu):
        if not isinstance(sub, App):
            continue
        for rule in trs.rules_of(sub.name):
            sigma = match(rule.lhs, sub)
            if sigma is not None:
                found.add((replace_at(t, pos, apply_subst(rule.rhs, sigma)), rule.cost, rule.id, pos))
    return found


class CsRewriter:
    def __init__(self, trs: TransformedTRS, budget: SearchBudget | None = None):
        self.trs = trs
        self.budget = budget or SearchBudget()
        self._heights: dict[Term, int] = {}
        self._steps: dict[Term, list] = {}

    def steps(self, t: Term) -> list:
        if t not in self._steps:
            self._steps[t] = sorted(cs_steps(t, self.trs), key=lambda s: (s[3], s[2], str(s[0])))
        return self._steps[t]

    def height(self, t: Term) -> int:
        """Longest-path search without recursion; raises on a cycle or when the budget runs out."""
        if t in self._heights:
            return self._heights[t]

        explored = 0
        on_path = {t}
        # term, steps, next step, best completed, cost of the step being explored
        stack = [[t, self.steps(t), 0, 0, 0]]
        while stack:
            frame = stack[-1]
            term, steps, idx = frame[0], frame[1], frame[2]
            if idx < len(steps):
                target, cost = steps[idx][0], steps[idx][1]
                frame[2] += 1
                if target in self._heights:
                    frame[3] = max(frame[3], cost + self._heights[target])
                    continue
                if self._embeds(target, on_path):
                    raise DivergenceDetected(f"{target} repeats a term of its own reduction at an active position")
                explored += 1
                if explored > self.budget.max_states:
                    raise BudgetExceeded(f"More than {self.budget.max_states} states explored", best=self._lower_bound(stack))
                frame[4] = cost
                on_path.add(target)
                stack.append([target, self.steps(target), 0, 0, 0])
                continue

            self._heights[term] = frame[3]
            on_path.discard(term)
            stack.pop()
            if stack:
                parent = stack[-1]
                parent[3] = max(parent[3], parent[4] + frame[3])
        return self._heights[t]

    def _embeds(self, target: Term, on_path: set) -> bool:
        # u ->* C[u] with u active in C repeats forever inside C
        return any(sub in on_path for _, sub in active_positions(target, self.trs.mu))

    @staticmethod
    def _lower_bound(stack: list) -> int:
        best, spent = 0, 0
        for frame in stack:
            best = max(best, spent + frame[3])
            spent += frame[4]
        return max(best, spent)

    def derivation_height(self, t: Term) -> Cost:
        try:
            return Cost.finite(self.height(t))
        except DivergenceDetected as e:
            logger.info(f"cs dh({t}) is infinite: {e}")
            return Cost.infinite()
        except BudgetExceeded as e:
            logger.warning(f"Search for cs dh({t}) stopped early: {e}")
            return Cost.at_least(e.best)

    def normal_forms(self, t: Term) -> set[Term]:
        seen = {t}
        frontier = [t]
        found = set()
        while frontier:
            u = frontier.pop()
            steps = self.steps(u)
            if not steps:
                found.add(u)
            for v, *_ in steps:
                if v not in seen:
                    if len(seen) >= self.budget.max_states:
                        raise BudgetExceeded(f"More than {self.budget.max_states} states explored")
                    seen.add(v)
                    frontier.append(v)
        return found


def cs_derivation_height(t: Term, trs: TransformedTRS, budget: SearchBudget | None = None) -> Cost:
    return CsRewriter(trs, budget).derivation_height(t)


def cs_normal_forms(t: Term, trs: TransformedTRS, budget: SearchBudget | None = None) -> set[Term]:
    return CsRewriter(trs, budget).normal_forms(t)
