"""Transitions of configurations along graph edges.

A transition fires an interaction edge at a graph edge: the two endpoint
states move together, every other site is untouched.  Enumeration, reachable
components, explicit exchange paths and permutation replays all live here, as
does the probe-based invariance check for uniform functions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import caps
from .errors import MismatchError, SchemaError, UnknownVertexError
from .interaction import Interaction, PhiEdge, pair_exchange_path
from .sitegraph import Site, SiteGraph
from .uniform import Configuration, UniformFunction, difference


@dataclass(frozen=True)
class Transition:
    before: Configuration
    after: Configuration
    edge: tuple[Site, Site]
    phi_edge: PhiEdge

    def __post_init__(self) -> None:
        x, y = self.edge
        if (
            self.before.graph != self.after.graph
            or self.before.states != self.after.states
            or self.before.base_index != self.after.base_index
        ):
            raise MismatchError("transition endpoints live in different systems")
        (a, b), (c, d) = self.phi_edge
        if (self.before.state_at(x), self.before.state_at(y)) != (a, b):
            raise MismatchError("before-configuration disagrees with the fired edge")
        if (self.after.state_at(x), self.after.state_at(y)) != (c, d):
            raise MismatchError("after-configuration disagrees with the fired edge")
        moved = {x, y}
        for site in set(self.before.support()) | set(self.after.support()):
            if site in moved:
                continue
            if self.before.state_at(site) != self.after.state_at(site):
                raise MismatchError(f"site {site!r} changed away from the fired edge")

    def to_document(self) -> dict:
        labels = self.before.states.labels
        (a, b), (c, d) = self.phi_edge
        return {
            "edge": list(self.edge),
            "from": [labels[a], labels[b]],
            "to": [labels[c], labels[d]],
        }


def _canonical_edge_window(graph: SiteGraph, edge_window) -> list[tuple[Site, Site]]:
    if edge_window is None:
        return graph.unordered_edges()
    out = set()
    for x, y in edge_window:
        if (x, y) not in graph.edges:
            raise UnknownVertexError(f"({x!r}, {y!r}) is not a graph edge")
        out.add(tuple(sorted((x, y))))
    return sorted(out)  # type: ignore[arg-type]


def neighbors(
    phi: Interaction, eta: Configuration, edge_window=None
) -> list[Transition]:
    """Single transitions out of ``eta`` along the given edges.

    Each unordered edge is tried in both orientations (the interaction need
    not be symmetric under coordinate swap); transitions reaching the same
    configuration through the same edge are reported once.  Results follow a
    fixed (edge, interaction-edge) order.
    """
    if eta.states != phi.states:
        raise MismatchError("configuration built over a different state space")
    out = []
    for x, y in _canonical_edge_window(eta.graph, edge_window):
        seen: set[tuple[tuple[Site, int], ...]] = set()
        for ox, oy in ((x, y), (y, x)):
            pair = (eta.state_at(ox), eta.state_at(oy))
            for c, d in phi.targets(pair):
                after = eta.with_sites({ox: c, oy: d})
                if after.assignments in seen:
                    continue
                seen.add(after.assignments)
                out.append(
                    Transition(
                        before=eta, after=after, edge=(ox, oy), phi_edge=(pair, (c, d))
                    )
                )
    return out


@dataclass(frozen=True)
class ComponentResult:
    """Reachable component of a configuration; truncation is an outcome."""

    configurations: frozenset[Configuration]
    truncated: bool
    discovery: tuple[Transition, ...]


def component_bfs(
    phi: Interaction,
    eta: Configuration,
    edge_window=None,
    max_states: int | None = None,
) -> ComponentResult:
    """Breadth-first enumeration of every configuration reachable from ``eta``.

    Stops after ``max_states`` visited configurations (default from caps) and
    reports ``truncated=True`` rather than raising.
    """
    if max_states is None:
        max_states = caps.current().max_bfs
    window = _canonical_edge_window(eta.graph, edge_window)
    visited = {eta}
    queue = deque([eta])
    discovery: list[Transition] = []
    truncated = False
    while queue:
        cur = queue.popleft()
        for tr in neighbors(phi, cur, window):
            if tr.after in visited:
                continue
            if len(visited) >= max_states:
                truncated = True
                queue.clear()
                break
            visited.add(tr.after)
            discovery.append(tr)
            queue.append(tr.after)
    return ComponentResult(
        configurations=frozenset(visited),
        truncated=truncated,
        discovery=tuple(discovery),
    )


def _shortest_site_path(graph: SiteGraph, x: Site, y: Site) -> list[Site]:
    """Vertices of a shortest path, ties broken by scanning sorted neighbors."""
    if x == y:
        return [x]
    parents: dict[Site, Site] = {}
    seen = {x}
    queue = deque([x])
    while queue:
        cur = queue.popleft()
        for nxt in graph.neighbors_of(cur):
            if nxt in seen:
                continue
            seen.add(nxt)
            parents[nxt] = cur
            if nxt == y:
                path = [y]
                while path[-1] != x:
                    path.append(parents[path[-1]])
                return path[::-1]
            queue.append(nxt)
    raise UnknownVertexError(f"no path between {x!r} and {y!r}")


def swap_path(
    phi: Interaction, eta: Configuration, x: Site, y: Site
) -> list[Transition]:
    """Transitions realizing the exchange of the states at x and y.

    Walks a shortest site path e1..eN, exchanging along e1..eN and then back
    along e(N-1)..e1; each adjacent exchange plays the interaction-edge path
    that carries (s, t) to (t, s).  The final configuration always equals
    ``eta`` with x and y swapped.
    """
    eta.graph.require_vertex(x)
    eta.graph.require_vertex(y)
    expected = eta.with_sites({x: eta.state_at(y), y: eta.state_at(x)})
    if x == y:
        return []
    sites = _shortest_site_path(eta.graph, x, y)
    hops = list(zip(sites, sites[1:]))
    schedule = hops + hops[-2::-1]
    out: list[Transition] = []
    cur = eta
    for u, v in schedule:
        su, sv = cur.state_at(u), cur.state_at(v)
        if su == sv:
            continue
        for (a, b), (c, d) in pair_exchange_path(phi, su, sv):
            nxt = cur.with_sites({u: c, v: d})
            out.append(
                Transition(before=cur, after=nxt, edge=(u, v), phi_edge=((a, b), (c, d)))
            )
            cur = nxt
    if cur != expected:
        raise SchemaError("exchange schedule failed to realize the swap")  # defensive
    return out


def permutation_path(
    phi: Interaction, eta: Configuration, sigma: dict[Site, Site]
) -> list[Transition]:
    """Transitions realizing eta^sigma, where eta^sigma(x) = eta(sigma(x)).

    The permutation is decomposed into cycles (ordered by smallest member)
    and each cycle into adjacent transpositions realized by ``swap_path``.
    """
    domain = set(sigma)
    if domain != set(sigma.values()):
        raise SchemaError("sigma is not a bijection of its domain")
    for site in domain:
        eta.graph.require_vertex(site)
    expected = eta.with_sites({site: eta.state_at(sigma[site]) for site in domain})
    swaps: list[tuple[Site, Site]] = []
    seen: set[Site] = set()
    for start in sorted(domain):
        if start in seen or sigma[start] == start:
            seen.add(start)
            continue
        cycle = [start]
        seen.add(start)
        nxt = sigma[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = sigma[nxt]
        swaps.extend(zip(cycle, cycle[1:]))
    out: list[Transition] = []
    cur = eta
    for u, v in swaps:
        steps = swap_path(phi, cur, u, v)
        out.extend(steps)
        if steps:
            cur = steps[-1].after
    if cur != expected:
        raise SchemaError("transposition schedule failed to realize sigma")  # defensive
    return out


@dataclass(frozen=True)
class InvarianceCheck:
    """Outcome of probing a uniform function against transitions.

    The probe set never exhausts the configuration space, so a passing check
    certifies invariance only over the probes; ``coverage`` records that.
    """

    invariant: bool
    witness: Transition | None
    probes_checked: int
    transitions_checked: int
    coverage: str = "probe-set-only"


def is_invariant(
    f: UniformFunction,
    phi: Interaction,
    edge_window=None,
    state_probe=(),
) -> InvarianceCheck:
    """Check that f does not change along any transition out of the probes."""
    probes = list(state_probe)
    checked = 0
    for eta in probes:
        for tr in neighbors(phi, eta, edge_window):
            checked += 1
            if difference(f, tr.before, tr.after) != 0:
                return InvarianceCheck(
                    invariant=False,
                    witness=tr,
                    probes_checked=len(probes),
                    transitions_checked=checked,
                )
    return InvarianceCheck(
        invariant=True,
        witness=None,
        probes_checked=len(probes),
        transitions_checked=checked,
    )


def transition_from_document(
    doc: dict, phi: Interaction, eta: Configuration
) -> Transition:
    """Replay a serialized transition against the configuration it fires from."""
    if not isinstance(doc, dict):
        raise SchemaError("transition document must be an object")
    try:
        x, y = doc["edge"]
        from_labels = doc["from"]
        to_labels = doc["to"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"transition document needs edge/from/to: {exc}") from exc
    states = eta.states
    if isinstance(eta.graph.vertices[0], int):
        x, y = int(x), int(y)
    phi_edge = (
        (states.index(from_labels[0]), states.index(from_labels[1])),
        (states.index(to_labels[0]), states.index(to_labels[1])),
    )
    (a, b), (c, d) = phi_edge
    if (eta.state_at(x), eta.state_at(y)) != (a, b):
        raise MismatchError(
            f"configuration does not match the transition source at edge ({x}, {y})"
        )
    after = eta.with_sites({x: c, y: d})
    return Transition(before=eta, after=after, edge=(x, y), phi_edge=phi_edge)
