"""Site graphs: connected, locally finite symmetric digraphs of sites.

Four kinds are supported.  ``explicit`` graphs list their vertices and edges
outright; ``path`` and ``cycle`` are finite integer graphs; ``lattice_z`` is a
finite window [a, b] of the integer lattice whose edges join sites at distance
at most k.  A lattice window carries ``is_window_of_infinite=True`` to record
that it is a truncated view of an unbounded graph, which matters to operations
that reason about translation-invariant families.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import (
    AsymmetricEdgesError,
    SchemaError,
    UnknownVertexError,
)

Site = int | str

EXPLICIT = "explicit"
PATH = "path"
CYCLE = "cycle"
LATTICE_Z = "lattice_z"

_KINDS = (EXPLICIT, PATH, CYCLE, LATTICE_Z)


@dataclass(frozen=True)
class SiteGraph:
    kind: str
    vertices: tuple[Site, ...]
    edges: frozenset[tuple[Site, Site]]
    k: int | None = None
    window: tuple[int, int] | None = None
    is_window_of_infinite: bool = False

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown graph kind {self.kind!r}")
        if not self.vertices:
            raise SchemaError("graph needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise SchemaError("duplicate vertices")
        vset = set(self.vertices)
        for x, y in self.edges:
            if x not in vset or y not in vset:
                raise UnknownVertexError(f"edge ({x!r}, {y!r}) leaves the vertex set")
            if x == y:
                raise SchemaError(f"self-loop at {x!r}")
            if (y, x) not in self.edges:
                raise AsymmetricEdgesError(f"missing reverse of edge ({x!r}, {y!r})")
        self._check_connected()

    def _check_connected(self) -> None:
        seen = {self.vertices[0]}
        queue = deque(seen)
        adjacency: dict[Site, list[Site]] = {}
        for x, y in self.edges:
            adjacency.setdefault(x, []).append(y)
        while queue:
            x = queue.popleft()
            for y in adjacency.get(x, ()):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        if len(seen) != len(self.vertices):
            raise SchemaError("graph is not connected")

    @cached_property
    def _adjacency(self) -> dict[Site, tuple[Site, ...]]:
        out: dict[Site, list[Site]] = {x: [] for x in self.vertices}
        for x, y in self.edges:
            out[x].append(y)
        return {x: tuple(sorted(ys)) for x, ys in out.items()}

    @cached_property
    def _vertex_set(self) -> frozenset[Site]:
        return frozenset(self.vertices)

    def has_vertex(self, x: Site) -> bool:
        return x in self._vertex_set

    def require_vertex(self, x: Site) -> None:
        if x not in self._vertex_set:
            raise UnknownVertexError(f"not a vertex: {x!r}")

    def neighbors_of(self, x: Site) -> tuple[Site, ...]:
        self.require_vertex(x)
        return self._adjacency[x]

    def unordered_edges(self) -> list[tuple[Site, Site]]:
        """Each edge once, endpoints sorted, the list sorted."""
        return sorted({tuple(sorted(e)) for e in self.edges})  # type: ignore[arg-type]


def explicit_graph(vertices, edges, symmetry: str = "lenient") -> SiteGraph:
    """Build an explicit graph; ``lenient`` symmetry adds missing reverse edges."""
    vs = tuple(vertices)
    es = {(x, y) for x, y in edges}
    if symmetry == "lenient":
        es |= {(y, x) for x, y in es}
    elif symmetry != "strict":
        raise SchemaError(f"unknown symmetry mode {symmetry!r}")
    return SiteGraph(kind=EXPLICIT, vertices=vs, edges=frozenset(es))


def path_graph(n: int) -> SiteGraph:
    if n < 1:
        raise SchemaError("path graph needs n >= 1")
    edges = set()
    for i in range(n - 1):
        edges |= {(i, i + 1), (i + 1, i)}
    return SiteGraph(kind=PATH, vertices=tuple(range(n)), edges=frozenset(edges))


def cycle_graph(n: int) -> SiteGraph:
    if n < 3:
        raise SchemaError("cycle graph needs n >= 3")
    edges = set()
    for i in range(n):
        j = (i + 1) % n
        edges |= {(i, j), (j, i)}
    return SiteGraph(kind=CYCLE, vertices=tuple(range(n)), edges=frozenset(edges))


def lattice_window(k: int, a: int, b: int) -> SiteGraph:
    """Window [a, b] of the integer lattice with edges 1 <= |i - j| <= k."""
    if k < 1:
        raise SchemaError("lattice range k must be >= 1")
    if a > b:
        raise SchemaError(f"empty window [{a}, {b}]")
    edges = set()
    for i in range(a, b + 1):
        for d in range(1, k + 1):
            if i + d <= b:
                edges |= {(i, i + d), (i + d, i)}
    return SiteGraph(
        kind=LATTICE_Z,
        vertices=tuple(range(a, b + 1)),
        edges=frozenset(edges),
        k=k,
        window=(a, b),
        is_window_of_infinite=True,
    )


def distance(g: SiteGraph, x: Site, y: Site) -> int:
    """Graph distance (number of edges on a shortest path)."""
    g.require_vertex(x)
    g.require_vertex(y)
    if x == y:
        return 0
    dist = {x: 0}
    queue = deque([x])
    while queue:
        cur = queue.popleft()
        for nxt in g._adjacency[cur]:
            if nxt in dist:
                continue
            dist[nxt] = dist[cur] + 1
            if nxt == y:
                return dist[nxt]
            queue.append(nxt)
    raise UnknownVertexError(f"no path between {x!r} and {y!r}")  # unreachable: graphs are connected


def ball(g: SiteGraph, x: Site, radius) -> frozenset[Site]:
    """Sites at distance strictly less than ``radius`` from x.

    The strict inequality means ``ball(g, x, 0)`` is empty and
    ``ball(g, x, 1)`` is ``{x}``.  ``radius`` may be an int or a Fraction.
    """
    g.require_vertex(x)
    r = Fraction(radius)
    if r < 0:
        raise SchemaError("radius must be nonnegative")
    if r <= 0:
        return frozenset()
    out = {x}
    frontier = [x]
    level = 1
    while frontier and level < r:
        nxt = []
        for cur in frontier:
            for y in g._adjacency[cur]:
                if y not in out:
                    out.add(y)
                    nxt.append(y)
        frontier = nxt
        level += 1
    return frozenset(out)


def diameter_of(g: SiteGraph, sites) -> int:
    """Max pairwise distance within ``sites``; 0 for the empty set and singletons."""
    sites = list(sites)
    for s in sites:
        g.require_vertex(s)
    best = 0
    for i, x in enumerate(sites):
        for y in sites[i + 1 :]:
            d = distance(g, x, y)
            if d > best:
                best = d
    return best


def load_graph(doc: dict) -> SiteGraph:
    """Build a graph from its JSON document form."""
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SchemaError("graph document needs a 'kind'")
    kind = doc["kind"]
    if kind == LATTICE_Z:
        try:
            a, b = doc["window"]
            return lattice_window(int(doc.get("k", 1)), int(a), int(b))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad lattice document: {exc}") from exc
    if kind == PATH:
        return path_graph(int(doc.get("n", 0)))
    if kind == CYCLE:
        return cycle_graph(int(doc.get("n", 0)))
    if kind == EXPLICIT:
        try:
            vertices = list(doc["vertices"])
            edges = [(x, y) for x, y in doc["edges"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad explicit graph document: {exc}") from exc
        return explicit_graph(vertices, edges, doc.get("symmetry", "lenient"))
    raise SchemaError(f"unknown graph kind {kind!r}")


def graph_to_document(g: SiteGraph) -> dict:
    if g.kind == LATTICE_Z:
        return {"kind": LATTICE_Z, "k": g.k, "window": list(g.window)}
    if g.kind in (PATH, CYCLE):
        return {"kind": g.kind, "n": len(g.vertices)}
    return {
        "kind": EXPLICIT,
        "vertices": list(g.vertices),
        "edges": [list(e) for e in sorted(g.edges)],
        "symmetry": "strict",
    }
