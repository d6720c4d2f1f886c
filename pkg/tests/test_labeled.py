import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import relabel
from ctrc.cctrs import PlainSearch, SearchBudget, build_system
from ctrc.errors import CtrcError, DivergenceDetected, NoGroundTerms
from ctrc.labeled import (
    Cost,
    CostKind,
    LabeledRewriter,
    StepKind,
    conditional_complexity,
    derivation_height,
    erase,
    is_labeled_normal_form,
    label,
    label_weight,
    lnf_generalization,
)
from ctrc.terms import App, Var, match, parse_term, positions, replace_at, subterm_at


def numeral(n: int) -> str:
    return "s(" * n + "0" + ")" * n


def test_label_and_erase(fib):
    t = parse_term("fib(+(s(0), 0))")
    assert label(t, fib) == parse_term("fib{1,2}(+{1,2}(s(0),0))")
    assert erase(label(t, fib)) == t
    assert label(parse_term("s(0)"), fib) == parse_term("s(0)")


def test_label_keeps_given_labels(fib):
    t = parse_term("fib{2}(0)")
    assert label(t, fib) == t


def test_label_weight(fib):
    assert label_weight(parse_term("fib{1,2}(+{1,2}(s(0),0))")) == 4
    assert label_weight(parse_term("pair(0, fib{}(0))")) == 0


def test_lnf_generalization():
    t = parse_term("s(+{1}(0, 0))")
    assert lnf_generalization(t) == (parse_term("s(x#1)", {"x#1"}), {"x#1": parse_term("+{1}(0,0)")})

    normal = parse_term("pair(0, fib{}(0))")
    assert lnf_generalization(normal) == (normal, {})

    pending = parse_term("even{1}(0)")
    assert lnf_generalization(pending) == (Var("x#1"), {"x#1": pending})


def test_labeled_normal_form(even):
    assert is_labeled_normal_form(parse_term("s(even{}(0))"), even)
    assert not is_labeled_normal_form(parse_term("even{1}(0)"), even)


def test_fail_step_costs_condition(even):
    steps = LabeledRewriter(even).labeled_steps(parse_term("even{1,2,3}(s(0))"))
    fail = [step for step in steps if step.kind == StepKind.FAIL]
    assert len(fail) == 1
    assert (fail[0].rule, fail[0].cost, fail[0].target) == (2, 1, parse_term("even{1,3}(s(0))"))
    assert fail[0].condition_costs == (1,)


def test_success_step_costs_one_more(even):
    steps = LabeledRewriter(even).labeled_steps(parse_term("even{3}(s(0))"))
    assert [(step.kind, step.cost, step.target) for step in steps] == [(StepKind.SUCCESS, 2, App("false"))]


def follow(rewriter, start, path):
    term, costs = parse_term(start), []
    for kind, text in path:
        target = parse_term(text)
        step = next(step for step in rewriter.labeled_steps(term) if step.kind == kind and step.target == target)
        costs.append(step.cost)
        term = target
    return costs


def test_worked_reductions(fib, even):
    path = [
        (StepKind.BOT, "fib{1,2}(+{2}(s(0),0))"),
        (StepKind.SUCCESS, "fib{1,2}(s(+{1,2}(0,0)))"),
        (StepKind.SUCCESS, "pair(s(0),s(0))"),
    ]
    assert follow(LabeledRewriter(fib), "fib{1,2}(+{1,2}(s(0),0))", path) == [0, 1, 4]

    path = [
        (StepKind.FAIL, "even{1,3}(s(0))"),
        (StepKind.BOT, "even{3}(s(0))"),
        (StepKind.SUCCESS, "false"),
    ]
    assert follow(LabeledRewriter(even), "even{1,2,3}(s(0))", path) == [1, 0, 2]


def test_bot_step(fib):
    steps = LabeledRewriter(fib).labeled_steps(parse_term("fib{1,2}(+{1,2}(s(0),0))"))
    bots = [step for step in steps if step.kind == StepKind.BOT]
    assert [(step.position, step.symbol, step.rule, step.cost) for step in bots] == [((1,), "+", 1, 0)]
    assert bots[0].target == parse_term("fib{1,2}(+{2}(s(0),0))")


def test_bot_steps_have_no_cost(even):
    rewriter = LabeledRewriter(even)
    for t in even.ground_terms(4):
        for step in rewriter.labeled_steps(label(t, even)):
            if step.kind == StepKind.BOT:
                assert step.cost == 0
            elif step.kind == StepKind.SUCCESS:
                assert step.cost == 1 + sum(step.condition_costs)
            else:
                assert step.cost == sum(step.condition_costs)


def test_quasi_steps_labeled(fib, loop):
    assert LabeledRewriter(loop).quasi_steps_labeled(label(App("a"), loop)) == {parse_term("a{1}")}
    found = LabeledRewriter(fib).quasi_steps_labeled(label(parse_term("fib(s(0))"), fib))
    assert label(parse_term("fib(0)"), fib) in found


@pytest.mark.parametrize("n", range(9))
def test_even_and_odd_heights(even, n):
    rewriter = LabeledRewriter(even)
    assert rewriter.derivation_height(parse_term(f"even({numeral(n)})")) == Cost.finite(2 ** (n + 1) - 1)
    assert rewriter.derivation_height(parse_term(f"odd({numeral(n)})")) == Cost.finite(2 ** (n + 1) - 1)


def test_normal_form_height(even):
    assert derivation_height(even, parse_term("s(true)")) == Cost.finite(0)
    assert derivation_height(even, parse_term("even{}(0)")) == Cost.finite(0)


def test_divergent_condition(loop):
    assert derivation_height(loop, App("a")) == Cost.infinite()
    assert conditional_complexity(loop, 1).kind == CostKind.INFINITE


def test_worked_costs(fg):
    assert derivation_height(fg, parse_term("f(a)")) == Cost.finite(1)
    assert derivation_height(fg, parse_term("g(a)")) == Cost.finite(0)
    assert derivation_height(fg, parse_term("g(b)")) == Cost.finite(1)
    assert derivation_height(fg, parse_term("f(g(b))")) == Cost.finite(2)


def test_fib_height_counts_condition_work(fib):
    assert derivation_height(fib, parse_term("fib(0)")) == Cost.finite(1)
    # fib(0) then +(0, s(0)) in the conditions, then the rule itself
    assert derivation_height(fib, parse_term("fib(s(0))")) == Cost.finite(3)


def test_complexity(fg, even):
    assert conditional_complexity(fg, 2) == Cost.finite(1)
    assert conditional_complexity(fg, 1) == Cost.finite(0)
    assert conditional_complexity(even, 2) == Cost.finite(1)
    assert conditional_complexity(even, 3) == Cost.finite(3)
    assert conditional_complexity(even, 1, "cdc") == Cost.finite(0)


def test_complexity_needs_constants():
    system = build_system("(VAR x) (RULES f(x) -> x)")
    with pytest.raises(NoGroundTerms):
        conditional_complexity(system, 2)


def test_height_needs_ground_terms(even):
    with pytest.raises(CtrcError):
        derivation_height(even, parse_term("even(x)", {"x"}))


def test_budget_gives_lower_bound(even):
    cost = derivation_height(even, parse_term(f"even({numeral(6)})"), SearchBudget(max_states=5))
    assert cost.kind == CostKind.AT_LEAST
    with pytest.raises(TypeError):
        _ = cost < Cost.finite(3)


def test_cost_order():
    assert Cost.finite(2) < Cost.finite(3) < Cost.infinite()
    assert [str(Cost.finite(7)), str(Cost.infinite()), str(Cost.at_least(7))] == ["7", "inf", ">=7"]


def test_plain_steps_are_labeled_steps(even, fg):
    for system in (even, fg):
        rewriter = LabeledRewriter(system)
        for s in system.ground_terms(5):
            targets = {step.target for step in rewriter.labeled_steps(label(s, system)) if step.kind == StepKind.SUCCESS}
            for t, _, _ in system.conditional_steps(s):
                assert label(t, system) in targets


def test_quasi_steps_are_labeled_quasi_steps(even, fg):
    for system in (even, fg):
        rewriter = LabeledRewriter(system)
        for s in system.ground_terms(5):
            found = rewriter.quasi_steps_labeled(label(s, system))
            for t in system.quasi_steps(s):
                assert label(t, system) in found


@given(st.data())
@settings(deadline=None, max_examples=50)
def test_erase_undoes_label(even, data):
    t = data.draw(st.sampled_from(even.ground_terms(5)))
    assert erase(label(t, even)) == t
    assert label_weight(label(t, even)) == sum(even.m(sub.name) for _, sub in positions(t))


def naive_fg_steps(t):
    """(target, cost) of every labeled step of an f/g term, read off the two rules directly."""
    found = set()
    for pos, sub in positions(t):
        if not isinstance(sub, App) or not sub.label:
            continue
        (arg,) = sub.args
        if sub.name == "f":
            found.add((replace_at(t, pos, arg), 1))
            continue
        # g(x) -> a | x == b
        for u, cost in naive_fg_reductions(arg):
            if u == App("b"):
                found.add((replace_at(t, pos, App("a")), 1 + cost))
            elif not u.label and u.name != "b":
                found.add((replace_at(t, pos, App("g", sub.args, frozenset())), cost))
    return found


def naive_fg_reductions(t):
    yield t, 0
    for target, cost in naive_fg_steps(t):
        for u, rest in naive_fg_reductions(target):
            yield u, cost + rest


@pytest.mark.parametrize("n, m", [(n, m) for n in range(5) for m in range(5)])
def test_fg_heights_match_exhaustive_walk(fg, n, m):
    t = parse_term("f(" * n + "g(" + "f(" * m + "a" + ")" * (m + n + 1))
    expected = max(cost for _, cost in naive_fg_reductions(label(t, fg)))
    assert derivation_height(fg, t) == Cost.finite(expected)
    assert expected <= 2 * m + n


def test_labeled_steps_project_to_plain_steps(even, fg):
    for system in (even, fg):
        rewriter = LabeledRewriter(system)
        for s in system.ground_terms(5):
            plain = {t for t, _, _ in system.conditional_steps(s)}
            for step in rewriter.labeled_steps(label(s, system)):
                if step.kind == StepKind.SUCCESS:
                    assert erase(step.target) in plain
                else:
                    assert erase(step.target) == s
                    assert label_weight(step.target) < label_weight(step.source)


WIDE = SearchBudget(max_states=10**6)


def has_step_or_diverges(rewriter, s):
    try:
        return bool(rewriter.labeled_steps(s))
    except DivergenceDetected:
        return True


def test_ground_terms_are_normal_reducible_or_divergent(even, loop):
    rewriter = LabeledRewriter(even, WIDE)
    for t in even.ground_terms(4):
        s = label(t, even)
        assert is_labeled_normal_form(s, even) or has_step_or_diverges(rewriter, s)
    assert has_step_or_diverges(LabeledRewriter(loop), label(App("a"), loop))


@given(st.data())
@settings(deadline=None, max_examples=100)
def test_relabeled_terms_are_normal_reducible_or_divergent(even, data):
    s = relabel(data.draw(st.sampled_from(even.ground_terms(4))), even, data)
    assert is_labeled_normal_form(s, even) or has_step_or_diverges(LabeledRewriter(even), s)


@pytest.mark.parametrize("name, size", [("even", 4), ("fg", 4), ("fib", 3)])
def test_height_covers_every_single_step(name, size, request):
    system = request.getfixturevalue(name)
    rewriter = LabeledRewriter(system, WIDE)
    for t in system.ground_terms(size):
        s = label(t, system)
        height = rewriter.derivation_height(s)
        for step in rewriter.labeled_steps(s):
            assert Cost.finite(step.cost) <= height
            assert step.cost + rewriter.derivation_height(step.target).value <= height.value


@pytest.mark.parametrize("name, size", [("even", 5), ("fib", 4)])
def test_bot_steps_stay_disabled(name, size, request):
    system = request.getfixturevalue(name)
    rewriter = LabeledRewriter(system, WIDE)
    for t in system.ground_terms(size):
        for step in rewriter.labeled_steps(label(t, system)):
            if step.kind != StepKind.BOT:
                continue
            sub = subterm_at(step.source, step.position)
            rule = system.rules_of(step.symbol)[step.rule - 1]
            # no reduction below the position makes the rule match again
            for args in itertools.product(*(rewriter.reach(a) for a in sub.args)):
                assert match(rule.lhs, erase(App(sub.name, args))) is None


def test_failed_conditions_have_no_solution(even):
    rewriter = LabeledRewriter(even, WIDE)
    search = PlainSearch(even, WIDE)
    failures = 0
    for t in even.ground_terms(5):
        for step in rewriter.labeled_steps(label(t, even)):
            if step.kind != StepKind.FAIL:
                continue
            failures += 1
            rule = even.rules_of(step.symbol)[step.rule - 1]
            sigma = match(rule.lhs, erase(subterm_at(step.source, step.position)))
            assert sigma is not None
            assert search.satisfy(rule.conditions, sigma) == []
    assert failures


@pytest.mark.parametrize("n", range(1, 5))
def test_complexity_is_attained(even, fg, n):
    for system in (even, fg):
        rewriter = LabeledRewriter(system, WIDE)
        heights = [rewriter.derivation_height(t).value for t in system.ground_terms(n, basic=True)]
        assert rewriter.conditional_complexity(n) == Cost.finite(max(heights, default=0))


def test_labeled_steps_need_ground_terms(even):
    with pytest.raises(CtrcError):
        LabeledRewriter(even).labeled_steps(parse_term("even{1}(x)", {"x"}))


def test_defined_constants_are_basic_terms():
    system = build_system("(RULES a -> a)")
    assert system.ground_terms(1, basic=True) == [App("a")]
    assert conditional_complexity(system, 1).kind == CostKind.INFINITE
