import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from latticecalc import (
    ExactSupportFunction,
    LocalFunction,
    builtin_interaction,
    configuration,
    lattice_window,
)


@pytest.fixture(scope="session")
def exclusion():
    return builtin_interaction("exclusion")


@pytest.fixture(scope="session")
def ms2():
    return builtin_interaction("multispecies:2")


@pytest.fixture(scope="session")
def annihilation():
    return builtin_interaction("two-species-ac")


@pytest.fixture(scope="session")
def quastel():
    return builtin_interaction("quastel2")


@pytest.fixture(scope="session")
def window13():
    return lattice_window(1, -6, 6)


def small_fractions():
    return st.fractions(min_value=-8, max_value=8, max_denominator=6)


def tables_for(n_states: int, arity: int):
    return st.lists(
        small_fractions(),
        min_size=n_states**arity,
        max_size=n_states**arity,
    ).map(tuple)


@st.composite
def local_functions(draw, states, max_arity=3, sites=range(-3, 4)):
    arity = draw(st.integers(min_value=0, max_value=max_arity))
    support = tuple(sorted(draw(
        st.sets(st.sampled_from(list(sites)), min_size=arity, max_size=arity)
    )))
    table = draw(tables_for(states.n, arity))
    return LocalFunction(states=states, support=support, table=table)


@st.composite
def exact_support_functions(draw, states, base, max_arity=2, sites=range(-4, 5)):
    arity = draw(st.integers(min_value=1, max_value=max_arity))
    support = tuple(sorted(draw(
        st.sets(st.sampled_from(list(sites)), min_size=arity, max_size=arity)
    )))
    probe = LocalFunction.zero(states, support)
    table = list(draw(tables_for(states.n, arity)))
    for assignment in probe.assignments():
        if base in assignment:
            table[probe.index_of(assignment)] = Fraction(0)
    return ExactSupportFunction(
        states=states, support=support, table=tuple(table), base_index=base
    )


@st.composite
def window_configurations(draw, graph, states, base, max_occupied=4):
    nonbase = [s for s in range(states.n) if s != base]
    count = draw(st.integers(min_value=0, max_value=max_occupied))
    sites = draw(
        st.sets(st.sampled_from(list(graph.vertices)), min_size=count, max_size=count)
    )
    table = {x: draw(st.sampled_from(nonbase)) for x in sites}
    return configuration(graph, states, base, table)


def random_configuration(rng: random.Random, graph, states, base, max_occupied=4):
    nonbase = [s for s in range(states.n) if s != base]
    count = rng.randint(0, max_occupied)
    sites = rng.sample(list(graph.vertices), count)
    return configuration(
        graph, states, base, {x: rng.choice(nonbase) for x in sites}
    )
