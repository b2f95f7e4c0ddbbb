"""Transition enumeration, reachable components, swap and permutation paths."""

import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticecalc import errors
from latticecalc.interaction import builtin_interaction, consv_basis
from latticecalc.sitegraph import lattice_window, path_graph
from latticecalc.transitions import (
    Transition,
    component_bfs,
    is_invariant,
    neighbors,
    permutation_path,
    swap_path,
    transition_from_document,
)
from latticecalc.uniform import configuration, xi_X

from conftest import window_configurations

EXCLUSION = builtin_interaction("exclusion")
MS2 = builtin_interaction("multispecies:2")
AC = builtin_interaction("two-species-ac")
G13 = lattice_window(1, -6, 6)


def full_transition_graph(phi, graph):
    """Oracle: apply the interaction definition to every configuration."""
    n = phi.states.n
    verts = list(graph.vertices)
    g = nx.Graph()
    for config in itertools.product(range(n), repeat=len(verts)):
        g.add_node(config)
        for x, y in graph.unordered_edges():
            ix, iy = verts.index(x), verts.index(y)
            for (a, b), (c, d) in phi.edges:
                if config[ix] == a and config[iy] == b:
                    after = list(config)
                    after[ix], after[iy] = c, d
                    if tuple(after) != config:
                        g.add_edge(config, tuple(after))
    return g


def test_lone_particle_has_two_moves():
    eta = configuration(G13, EXCLUSION.states, 0, {0: 1})
    docs = [t.to_document() for t in neighbors(EXCLUSION, eta)]
    assert docs == [
        {"edge": [-1, 0], "from": ["0", "1"], "to": ["1", "0"]},
        {"edge": [0, 1], "from": ["1", "0"], "to": ["0", "1"]},
    ]


def test_pair_creation_from_vacuum():
    g = lattice_window(1, 0, 1)
    eta = configuration(g, AC.states, 1, {})
    docs = [t.to_document() for t in neighbors(AC, eta)]
    assert docs == [
        {"edge": [0, 1], "from": ["0", "0"], "to": ["-1", "1"]},
        {"edge": [0, 1], "from": ["0", "0"], "to": ["1", "-1"]},
    ]


def test_swap_moves_are_not_double_counted():
    g = lattice_window(1, 0, 1)
    eta = configuration(g, MS2.states, 0, {0: 1, 1: 2})
    found = neighbors(MS2, eta)
    # both orientations of the edge produce the same swapped configuration
    assert len(found) == 1
    assert found[0].after == eta.with_sites({0: 2, 1: 1})


def test_edge_window_restricts_firing():
    eta = configuration(G13, EXCLUSION.states, 0, {0: 1})
    found = neighbors(EXCLUSION, eta, edge_window=[(0, 1)])
    assert len(found) == 1
    with pytest.raises(errors.UnknownVertexError):
        neighbors(EXCLUSION, eta, edge_window=[(0, 99)])


def test_transition_validation_rejects_mismatched_states():
    eta = configuration(G13, EXCLUSION.states, 0, {0: 1})
    good = neighbors(EXCLUSION, eta)[0]
    with pytest.raises(errors.MismatchError):
        Transition(
            before=good.before,
            after=good.before,
            edge=good.edge,
            phi_edge=good.phi_edge,
        )


def test_component_size_is_binomial_for_exclusion():
    g = lattice_window(1, -2, 2)
    for count in range(0, 4):
        eta = configuration(g, EXCLUSION.states, 0, {x: 1 for x in range(count)})
        res = component_bfs(EXCLUSION, eta)
        assert not res.truncated
        assert len(res.configurations) == math.comb(5, count)


def test_component_matches_networkx_for_annihilation():
    g = path_graph(3)
    oracle = full_transition_graph(AC, g)
    eta = configuration(g, AC.states, 1, {0: 0})
    res = component_bfs(AC, eta)
    key = tuple(eta.state_at(x) for x in g.vertices)
    want = nx.node_connected_component(oracle, key)
    mine = {
        tuple(c.state_at(x) for x in g.vertices) for c in res.configurations
    }
    assert mine == want


def test_component_truncation_reports_instead_of_raising():
    g = lattice_window(1, -3, 3)
    eta = configuration(g, EXCLUSION.states, 0, {0: 1, 1: 1})
    res = component_bfs(EXCLUSION, eta, max_states=4)
    assert res.truncated
    assert len(res.configurations) == 4


def test_discovery_transitions_replay():
    g = lattice_window(1, -2, 2)
    eta = configuration(g, EXCLUSION.states, 0, {0: 1, 1: 1})
    res = component_bfs(EXCLUSION, eta)
    for tr in res.discovery:
        replayed = transition_from_document(tr.to_document(), EXCLUSION, tr.before)
        assert replayed.after == tr.after


def test_transition_document_mismatch_raises():
    eta = configuration(G13, EXCLUSION.states, 0, {0: 1})
    doc = {"edge": [3, 4], "from": ["1", "0"], "to": ["0", "1"]}
    with pytest.raises(errors.MismatchError):
        transition_from_document(doc, EXCLUSION, eta)


@settings(deadline=None, max_examples=50)
@given(
    window_configurations(G13, EXCLUSION.states, 0),
    st.sampled_from(list(G13.vertices)),
    st.sampled_from(list(G13.vertices)),
)
def test_swap_path_realizes_the_exchange_exclusion(eta, x, y):
    if x == y:
        return
    path = swap_path(EXCLUSION, eta, x, y)
    cur = eta
    for tr in path:
        assert tr.before == cur
        cur = tr.after
    assert cur == eta.with_sites({x: eta.state_at(y), y: eta.state_at(x)})


@settings(deadline=None, max_examples=50)
@given(
    window_configurations(G13, AC.states, 1),
    st.sampled_from(list(G13.vertices)),
    st.sampled_from(list(G13.vertices)),
)
def test_swap_path_realizes_the_exchange_annihilation(eta, x, y):
    if x == y:
        return
    path = swap_path(AC, eta, x, y)
    cur = eta
    for tr in path:
        cur = tr.after
    assert cur == eta.with_sites({x: eta.state_at(y), y: eta.state_at(x)})


def test_swap_path_rejects_unswappable_states():
    q = builtin_interaction("quastel2")
    eta = configuration(G13, q.states, 0, {0: 1, 1: 2})
    with pytest.raises(errors.NotExchangeableError):
        swap_path(q, eta, 0, 1)
    # swapping with a vacancy is still available in this variant
    path = swap_path(q, eta, 1, 3)
    assert path[-1].after == eta.with_sites({1: 0, 3: 2})


@settings(deadline=None, max_examples=60)
@given(
    window_configurations(G13, MS2.states, 0),
    st.permutations(list(range(-2, 3))),
)
def test_permutation_path_realizes_eta_sigma(eta, image):
    sigma = dict(zip(range(-2, 3), image))
    path = permutation_path(MS2, eta, sigma)
    cur = eta
    for tr in path:
        assert tr.before == cur
        cur = tr.after
    want = eta.with_sites({x: eta.state_at(sigma[x]) for x in sigma})
    assert cur == want


def test_permutation_must_be_a_bijection_on_its_domain():
    eta = configuration(G13, MS2.states, 0, {})
    with pytest.raises(errors.SchemaError):
        permutation_path(MS2, eta, {0: 1, 1: 1})
    with pytest.raises(errors.SchemaError):
        permutation_path(MS2, eta, {0: 1})


def test_is_invariant_accepts_conserved_sum_and_finds_witness():
    (xi,) = consv_basis(EXCLUSION, 0)
    f = xi_X(xi, G13, 0)
    probes = [
        configuration(G13, EXCLUSION.states, 0, {}),
        configuration(G13, EXCLUSION.states, 0, {0: 1, 1: 1}),
        configuration(G13, EXCLUSION.states, 0, {-3: 1, 2: 1, 3: 1}),
    ]
    check = is_invariant(f, EXCLUSION, state_probe=probes)
    assert check.invariant
    assert check.witness is None
    assert check.coverage == "probe-set-only"
    assert check.transitions_checked > 0

    from latticecalc.localfn import ExactSupportFunction
    from latticecalc.uniform import explicit_uniform
    from fractions import Fraction

    bump = ExactSupportFunction(
        states=EXCLUSION.states, support=(0,), table=(Fraction(0), Fraction(1)),
        base_index=0,
    )
    lopsided = explicit_uniform(EXCLUSION.states, G13, 0, 0, {(0,): bump})
    bad = is_invariant(lopsided, EXCLUSION, state_probe=probes)
    assert not bad.invariant
    assert bad.witness is not None
    assert bad.witness.before in probes
