import pytest

from conftest import system_path
from ctrc.cctrs import SearchBudget, build_system, load_system, parse_system, validate
from ctrc.errors import BudgetExceeded, InvalidSystem, ParseError
from ctrc.terms import App, parse_term, render


def restrictions(text: str, mode: str = "cctrs") -> list:
    return [(v.restriction, v.witness) for v in validate(parse_system(text), mode).violations]


def test_fib_is_strong(fib):
    assert fib.strong
    assert fib.defined == ["+", "fib"]
    assert fib.constructors == ["0", "s", "pair"]
    assert [r.index for r in fib.rules] == [1, 2, 1, 2]


def test_nonlinear_lhs_only_rejected_in_strong_mode():
    text = open(system_path("nonlinear.ctrs")).read()
    assert restrictions(text) == []
    assert restrictions(text, "strong") == [("NONLINEAR_LHS", "non-linear lhs at x")]


def test_unbound_condition_variable():
    found = restrictions("(VAR x y z) (RULES f(x) -> y | g(y) == z)")
    assert ("UNBOUND_CONDITION_VARIABLE", "Var(a_1) ⊄ Var(ℓ, b_0..b_0) at y") in found
    assert ("UNBOUND_RHS_VARIABLE", "Var(r) ⊄ Var(ℓ, b_1..b_1) at y") in found


def test_restriction_catalogue():
    text = """
    (VAR x y)
    (RULES
      f(g(x)) -> x
      g(x) -> x | f(x) == f(y)
      h(x) -> y | x == x
      h(x, x) -> x
      x -> a
    )
    """
    found = [r for r, _ in restrictions(text)]
    assert found == [
        "ARITY",
        "LHS_NOT_BASIC",
        "CONDITION_RHS_NOT_CONSTRUCTOR",
        "CONDITION_RHS_SHARED_VARIABLE",
        "UNBOUND_RHS_VARIABLE",
        "LHS_VARIABLE",
    ]


def test_reserved_names():
    found = [r for r, _ in restrictions("(RULES f(top) -> a#1)")]
    assert found == ["RESERVED_NAME", "RESERVED_NAME"]

    found = restrictions("(VAR x#1 y) (RULES f(x#1) -> x#1)")
    assert [r for r, _ in found] == ["RESERVED_NAME"]
    assert "x#1" in found[0][1]


def test_validate_is_stable():
    raw = parse_system("(VAR x y z) (RULES f(x) -> y | g(y) == z)")
    assert validate(raw).violations == validate(raw).violations


def test_build_raises_with_report():
    with pytest.raises(InvalidSystem) as err:
        build_system("(VAR x) (RULES f(x, x) -> x)", "strong")
    assert not err.value.report.ok


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_system("(VAR x)")
    with pytest.raises(ParseError):
        parse_system("(CONDITIONTYPE JOIN) (RULES a -> b)")
    with pytest.raises(ParseError):
        parse_system("(RULES a -> b")


def test_comments_are_ignored():
    system = build_system("; header\n(RULES\n  a -> b ; trailing\n)")
    assert [str(r) for r in system.rules] == ["a -> b"]


def test_conditional_steps(even, fg):
    assert even.conditional_steps(parse_term("even(s(0))")) == {(App("false"), 3, ())}
    assert even.conditional_steps(parse_term("even(0)")) == {(App("true"), 1, ())}
    assert fg.conditional_steps(parse_term("g(a)")) == set()
    assert fg.conditional_steps(parse_term("g(b)")) == {(App("a"), 2, ())}


def test_conditional_steps_inside_context(even):
    found = even.conditional_steps(parse_term("even(even(0))"))
    assert found == {(parse_term("even(true)"), 1, (1,))}


def test_quasi_steps(fib, loop):
    found = {render(t) for t in fib.quasi_steps(parse_term("fib(s(0))"))}
    assert found == {"fib(0)", "+(0,s(0))"}
    assert loop.quasi_steps(App("a")) == {App("a")}
    assert fib.quasi_steps(parse_term("s(0)")) == set()


def test_self_dependent_condition_exceeds_budget(loop):
    with pytest.raises(BudgetExceeded):
        loop.conditional_steps(App("a"))


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        SearchBudget(0, 3)


def test_ground_terms(fg):
    assert sorted(map(render, fg.ground_terms(2, basic=True))) == ["f(a)", "f(b)", "g(a)", "g(b)"]
    assert sorted(map(render, fg.ground_terms(1))) == ["a", "b"]


def test_check_term_rejects_unknown_symbols(even):
    with pytest.raises(ParseError):
        even.check_term(parse_term("half(0)"))
    with pytest.raises(ParseError):
        even.check_term(parse_term("s(0, 0)"))


def test_load_system_reads_files():
    system = load_system(system_path("odd.ctrs"))
    assert system.defined == ["odd", "not"]
    assert not system.strong
