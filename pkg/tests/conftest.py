import os

import pytest
from hypothesis import strategies as st

from ctrc.cctrs import load_system
from ctrc.csrewrite import CsRewriter
from ctrc.interpretations import build, load_interpretation
from ctrc.terms import App
from ctrc.transform import transform

SYSTEMS = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "systems")


def system_path(name: str) -> str:
    return os.path.join(SYSTEMS, name)


@pytest.fixture(scope="session")
def even():
    return load_system(system_path("even.ctrs"), "strong")


@pytest.fixture(scope="session")
def odd():
    return load_system(system_path("odd.ctrs"), "strong")


@pytest.fixture(scope="session")
def fg():
    return load_system(system_path("fg.ctrs"), "strong")


@pytest.fixture(scope="session")
def fib():
    return load_system(system_path("fib.ctrs"), "strong")


@pytest.fixture(scope="session")
def loop():
    return load_system(system_path("loop.ctrs"), "strong")


@pytest.fixture(scope="session")
def even_trs(even):
    return transform(even)


@pytest.fixture(scope="session")
def fg_trs(fg):
    return transform(fg)


@pytest.fixture(scope="session")
def fib_trs(fib):
    return transform(fib)


def interpretation(trs, name: str, recipe: str | None = None):
    return build(load_interpretation(system_path(name)), trs, recipe)


@pytest.fixture(scope="session")
def even_cs(even_trs):
    return CsRewriter(even_trs)


def relabel(t, system, data):
    """Draw an arbitrary label for every defined symbol of a ground term."""
    if not isinstance(t, App):
        return t
    args = tuple(relabel(a, system, data) for a in t.args)
    if not system.is_defined(t.name):
        return App(t.name, args)
    rules = range(1, system.m(t.name) + 1)
    return App(t.name, args, frozenset(data.draw(st.sets(st.sampled_from(list(rules))))))
