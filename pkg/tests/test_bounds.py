import pytest

from conftest import interpretation
from ctrc.bounds import argument_vectors, bound, exact_bound, general_bound, size_estimate, verify_size_premise
from ctrc.errors import UnsupportedMode, UnverifiedPremise
from ctrc.interpretations import build, parse_interpretation


def test_argument_vectors():
    assert list(argument_vectors(2, 1)) == [(0, 0), (0, 1), (1, 0)]
    assert list(argument_vectors(0, 5)) == [()]


def test_even_polynomial(even_trs):
    interp = interpretation(even_trs, "even_poly.interp")
    assert bound(interp, 3) == 21
    assert bound(interp, 3, estimate="exact") == 8
    # n + 2 * 3^(n - 1)
    assert [size_estimate(interp, n) for n in range(1, 6)] == [n + 2 * 3 ** (n - 1) for n in range(1, 6)]


def test_general_premise(fg_trs):
    interp = interpretation(fg_trs, "fg_recipeA.interp")
    assert bound(interp, 3, general=(2, 1)) == 7
    assert general_bound(interp, 5, 2, 1) == 31
    with pytest.raises(UnverifiedPremise):
        general_bound(interp, 3, 1, 1)


def test_fib_runtime(fib_trs):
    interp = interpretation(fib_trs, "fib_recipeB.interp")
    assert bound(interp, 3) == 3 + 5 * (3**2 - 1)
    with pytest.raises(UnsupportedMode):
        bound(interp, 3, mode="cdc")


@pytest.mark.parametrize("n", range(1, 7))
def test_cost_size_bound(even_trs, n):
    assert bound(interpretation(even_trs, "even_costsize.interp"), n) == 2**n - 1


def test_exact_bound_covers_derivational_mode(even_trs):
    interp = interpretation(even_trs, "even_poly.interp")
    assert exact_bound(interp, 3, "cdc") >= exact_bound(interp, 3, "crc")


def test_general_premise_needs_naturals(even_trs):
    with pytest.raises(UnsupportedMode):
        bound(interpretation(even_trs, "even_costsize.interp"), 3, general=(2, 1))


def test_oversized_constructors_are_refused(fg_trs):
    source = parse_interpretation(
        "FUN 0 a = 0\nFUN 0 b = 5\nFUN 0 f(x) = x\nFUN 1 f(x) = 1\nFUN 0 g(x) = x\nFUN 1 g(x) = x\nCOND g 1 1 (x; y) = y\n"
    )
    with pytest.raises(UnverifiedPremise):
        verify_size_premise(build(source, fg_trs))


def test_unknown_modes(fg_trs):
    interp = interpretation(fg_trs, "fg_recipeA.interp")
    with pytest.raises(ValueError):
        bound(interp, 3, mode="both")
    with pytest.raises(ValueError):
        bound(interp, 3, estimate="guess")
