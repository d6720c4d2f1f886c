"""Complexity bounds read off a compatible interpretation."""

from __future__ import annotations

import itertools

from loguru import logger

from ctrc.errors import NoGroundTerms, UnsupportedMode, UnverifiedPremise
from ctrc.interpretations import Interpretation, grid_points, require_runtime, show_valuation
from ctrc.terms import compositions


def _top_value(interp: Interpretation, name: str, args: list):
    return interp.apply(name, list(args) + [interp.top()] * interp.trs.system.m(name))


def argument_vectors(arity: int, total: int):
    """Tuples of `arity` naturals whose sum is at most total."""
    if arity == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in argument_vectors(arity - 1, total - first):
            yield (first,) + rest


def verify_size_premise(interp: Interpretation, grid: int = 4, max_valuations: int = 50000):
    """
    Constructor terms must be interpreted below their size.

    Over N: I_c(x) <= x1 + ... + xn + 1. Over N x N: the cost does not grow
    and the size grows by at most one.
    """
    system = interp.trs.system
    for name in system.constructors:
        arity = system.arity[name]
        names = [f"x{k}" for k in range(1, arity + 1)]
        for valuation in grid_points(grid, names, interp.pair, max_valuations):
            args = [v for _, v in valuation]
            value = interp.apply(name, args)
            if interp.pair:
                ok = value[0] <= sum(a[0] for a in args) and value[1] <= sum(a[1] for a in args) + 1
            else:
                ok = value <= sum(args) + 1
            if not ok:
                raise UnverifiedPremise(f"Constructor {name} exceeds the size of its terms at {show_valuation(valuation) or 'no arguments'}")


def size_estimate(interp: Interpretation, n: int) -> int:
    """Maximum of I_f(args, top, ...) over defined f with argument values summing to at most n - 1."""
    system = interp.trs.system
    best = 0
    for name in system.defined:
        for vector in argument_vectors(system.arity[name], n - 1):
            args = [(0, x) for x in vector] if interp.pair else list(vector)
            best = max(best, interp.cost(_top_value(interp, name, args)))
    return best


def exact_bound(interp: Interpretation, n: int, mode: str) -> int:
    """Maximum interpreted cost over ground terms of size at most n (basic terms for crc)."""
    system = interp.trs.system
    inner = system.constructors if mode == "crc" else system.constructors + system.defined
    if not any(system.arity[name] == 0 for name in inner):
        raise NoGroundTerms("The signature has no constants, so there are no ground terms")

    by_size: dict[int, set] = {}
    for k in range(1, n + 1):
        found = set()
        for name in inner:
            arity = system.arity[name]
            for split in compositions(k - 1, arity):
                for args in itertools.product(*(by_size[j] for j in split)):
                    found.add(_top_value(interp, name, args))
        by_size[k] = found

    if mode == "cdc":
        return max((interp.cost(v) for k in by_size for v in by_size[k]), default=0)

    best = 0
    for k in range(1, n + 1):
        for name in system.defined:
            for split in compositions(k - 1, system.arity[name]):
                for args in itertools.product(*(by_size[j] for j in split)):
                    best = max(best, interp.cost(_top_value(interp, name, args)))
    return best


def general_bound(interp: Interpretation, n: int, k: int, m: int, grid: int = 4, max_valuations: int = 50000) -> int:
    """
    Verify I_h(x, top, ...) <= k * (x1 + ... + xn) + m for every original symbol h,
    then return m * (k^0 + ... + k^(n-1)).
    """
    if interp.pair:
        raise UnsupportedMode("The linear premise bound is defined for interpretations over N")
    system = interp.trs.system
    for name in system.constructors + system.defined:
        names = [f"x{i}" for i in range(1, system.arity[name] + 1)]
        for valuation in grid_points(grid, names, False, max_valuations):
            args = [v for _, v in valuation]
            if _top_value(interp, name, args) > k * sum(args) + m:
                raise UnverifiedPremise(f"{name} exceeds {k}*sum+{m} at {show_valuation(valuation) or 'no arguments'}")
    return m * sum(k**i for i in range(n))


def bound(
    interp: Interpretation,
    n: int,
    mode: str = "crc",
    estimate: str = "size",
    general: tuple[int, int] | None = None,
    grid: int = 4,
    max_valuations: int = 50000,
) -> int:
    """
    Upper bound on crc(n) or cdc(n) from an interpretation that passed `check`.

    Args:
        estimate (str): "size" relaxes constructor arguments to any values
            summing to less than n (crc only); "exact" enumerates the values
            of actual ground terms.
        general (tuple): (K, M) for the linear premise bound.

    Returns:
        int: the bound on the cost component.
    """
    if mode not in ("crc", "cdc"):
        raise ValueError(f"Unknown complexity mode {mode}")
    if estimate not in ("size", "exact"):
        raise ValueError(f"Unknown estimate {estimate}")
    require_runtime(interp, mode)

    if general is not None:
        result = general_bound(interp, n, *general, grid=grid, max_valuations=max_valuations)
    elif mode == "cdc" or estimate == "exact":
        result = exact_bound(interp, n, mode)
    else:
        verify_size_premise(interp, grid, max_valuations)
        result = size_estimate(interp, n)
    logger.info(f"{mode}({n}) <= {result}")
    return result
