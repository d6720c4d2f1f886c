import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import relabel
from ctrc.cctrs import SearchBudget
from ctrc.csrewrite import CsRewriter, active_positions, cs_derivation_height, cs_normal_forms, cs_steps
from ctrc.interpretations import derive_usable_map
from ctrc.labeled import Cost, CostKind, LabeledRewriter, label
from ctrc.terms import TOP, App, parse_term, render
from ctrc.transform import classify_hterm, transform, xi, zeta


def test_condition_start(even_trs):
    found = cs_steps(parse_term("even(s(0), top, top, top)"), even_trs)
    assert (parse_term("even#2#1(s(0), top, odd(0, top, top, top), top)"), 0, "2_2", ()) in found


def test_direct_rule_costs_one(even_trs):
    found = cs_steps(parse_term("even(0, top, top, top)"), even_trs)
    assert (App("true"), 1, "1_1", ()) in found


def test_inactive_arguments_are_frozen(even_trs):
    t = parse_term("even#2#1(s(even(0, top, top, top)), top, true, top)")
    assert [p for p, _ in active_positions(t, even_trs.mu)] == [(), (3,)]
    assert all(not pos or pos[0] == 3 for *_, pos in cs_steps(t, even_trs))


def test_heights(even_trs, fg_trs):
    assert cs_derivation_height(parse_term("even(s(0), top, top, top)"), even_trs) == Cost.finite(3)
    assert cs_derivation_height(parse_term("even(0, bot, bot, bot)"), even_trs) == Cost.finite(0)
    assert cs_derivation_height(parse_term("f(g(b, top), top)"), fg_trs) == Cost.finite(2)


def test_divergence(loop):
    trs = transform(loop)
    assert cs_derivation_height(zeta(label(App("a"), loop), loop), trs) == Cost.infinite()


def test_budget_gives_lower_bound(even_trs):
    t = xi(parse_term("even(s(s(s(s(0)))))"), TOP, even_trs.system)
    cost = CsRewriter(even_trs, SearchBudget(max_states=10)).derivation_height(t)
    assert cost.kind == CostKind.AT_LEAST


def test_normal_forms(even_trs, fg_trs):
    assert cs_normal_forms(parse_term("f(a, top)"), fg_trs) == {App("a")}
    assert cs_normal_forms(App("true"), even_trs) == {App("true")}
    found = cs_normal_forms(xi(parse_term("even(s(0))"), TOP, even_trs.system), even_trs)
    assert found == {App("false")}


@pytest.mark.parametrize("name", ["even_trs", "fg_trs"])
def test_normal_forms_are_bot_patterns(name, request):
    trs = request.getfixturevalue(name)
    system = trs.system
    for t in system.ground_terms(4):
        for nf in cs_normal_forms(xi(t, TOP, system), trs):
            assert classify_hterm(nf, system).bot_pattern


@given(st.data())
@settings(deadline=None, max_examples=500)
def test_normal_forms_of_proper_terms_are_bot_patterns(even, even_cs, data):
    t = relabel(data.draw(st.sampled_from(even.ground_terms(5))), even, data)
    for nf in even_cs.normal_forms(zeta(t, even)):
        assert classify_hterm(nf, even).bot_pattern


@pytest.mark.parametrize("name, max_size", [("even", 5), ("fg", 5), ("fib", 4)])
def test_transformed_height_matches_labeled_height(name, max_size, request):
    system = request.getfixturevalue(name)
    trs = transform(system)
    labeled, cs = LabeledRewriter(system), CsRewriter(trs)
    for t in system.ground_terms(max_size):
        assert cs.derivation_height(zeta(label(t, system), system)) == labeled.derivation_height(t), render(t)


def reachable(rewriter, t):
    seen, frontier = {t}, [t]
    while frontier:
        for v, *_ in rewriter.steps(frontier.pop()):
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return seen


@pytest.mark.parametrize("name", ["fib", "odd"])
def test_usable_map_only_removes_steps(name, request):
    system = request.getfixturevalue(name)
    trs = transform(system)
    narrowed = trs.with_map(derive_usable_map(system))
    assert all(narrowed.mu[s] <= trs.mu[s] for s in trs.mu)
    rewriter = CsRewriter(trs)
    for t in system.ground_terms(4):
        for u in reachable(rewriter, xi(t, TOP, system)):
            assert cs_steps(u, narrowed) <= cs_steps(u, trs)


@given(st.data())
@settings(deadline=None, max_examples=60)
def test_narrower_maps_never_add_steps(even, even_trs, data):
    upsilon = {
        name: data.draw(st.sets(st.sampled_from(sorted(even_trs.mu[name])))) if even_trs.mu[name] else set()
        for name in even.constructors + even.defined
    }
    narrowed = even_trs.with_map(upsilon)
    t = zeta(relabel(data.draw(st.sampled_from(even.ground_terms(5))), even, data), even)
    assert cs_steps(t, narrowed) <= cs_steps(t, even_trs)
