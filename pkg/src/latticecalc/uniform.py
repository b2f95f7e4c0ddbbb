"""Uniform functions: families of exact-support components over a site graph.

A uniform function of radius R is a family {support -> exact-support
component} whose supports all have diameter at most R.  Two representations
are carried:

* ``explicit`` lists every component outright;
* ``translated`` (integer-lattice windows only) lists templates anchored at
  site 0, standing for every integer translate that fits inside the window.

Configurations assign a state to each site and agree with a designated base
state away from a finite support.  Evaluation sums the components contained
in a configuration's support; the difference of a uniform function along a
pair of configurations sums only the components meeting the sites that
changed, which is what makes the family meaningful on windows of unbounded
lattices.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import (
    LocalityError,
    MismatchError,
    NormalizationError,
    SchemaError,
    SupportError,
    UnknownVertexError,
)
from .interaction import ConservedQuantity, StateSpace
from .localfn import ExactSupportFunction, LocalFunction, assemble, expand
from .rationals import format_rational, parse_rational
from .sitegraph import LATTICE_Z, Site, SiteGraph, ball, diameter_of

EXPLICIT = "explicit"
TRANSLATED = "translated"

ComponentKey = tuple[Site, ...]


# ---------------------------------------------------------------------------
# configurations


@dataclass(frozen=True)
class Configuration:
    """Finite-support assignment of states to the sites of a graph.

    ``assignments`` holds (site, state index) pairs sorted by site, never
    containing the base state, so equal configurations have equal encodings.
    """

    graph: SiteGraph = field(hash=False)
    states: StateSpace = field(hash=False)
    base_index: int
    assignments: tuple[tuple[Site, int], ...]

    def __post_init__(self) -> None:
        if not 0 <= self.base_index < self.states.n:
            raise SchemaError(f"base index {self.base_index} out of range")
        previous = None
        for site, state in self.assignments:
            self.graph.require_vertex(site)
            if not 0 <= state < self.states.n:
                raise SchemaError(f"state index {state} out of range")
            if state == self.base_index:
                raise SchemaError(f"assignment at {site!r} equals the base state")
            if previous is not None and not previous < site:
                raise SchemaError("assignments must be sorted by site")
            previous = site

    @property
    def _lookup(self) -> dict[Site, int]:
        cached = self.__dict__.get("_lookup_cache")
        if cached is None:
            cached = dict(self.assignments)
            self.__dict__["_lookup_cache"] = cached
        return cached

    def support(self) -> tuple[Site, ...]:
        return tuple(site for site, _ in self.assignments)

    def state_at(self, site: Site) -> int:
        self.graph.require_vertex(site)
        return self._lookup.get(site, self.base_index)

    def with_sites(self, updates: Mapping[Site, int]) -> "Configuration":
        table = dict(self._lookup)
        for site, state in updates.items():
            self.graph.require_vertex(site)
            if state == self.base_index:
                table.pop(site, None)
            else:
                table[site] = state
        return Configuration(
            graph=self.graph,
            states=self.states,
            base_index=self.base_index,
            assignments=tuple(sorted(table.items())),
        )


def configuration(
    graph: SiteGraph, states: StateSpace, base: int, assignments: Mapping[Site, int] = ()
) -> Configuration:
    table = {
        site: state for site, state in dict(assignments).items() if state != base
    }
    return Configuration(
        graph=graph,
        states=states,
        base_index=base,
        assignments=tuple(sorted(table.items())),
    )


# ---------------------------------------------------------------------------
# uniform functions


def _lattice_diameter(template: ComponentKey, k: int) -> int:
    if len(template) < 2:
        return 0
    span = max(template) - min(template)
    return -(-span // k)


@dataclass(frozen=True)
class UniformFunction:
    states: StateSpace
    graph: SiteGraph
    base_index: int
    radius: int
    kind: str
    components: tuple[tuple[ComponentKey, ExactSupportFunction], ...]

    def __post_init__(self) -> None:
        if self.kind not in (EXPLICIT, TRANSLATED):
            raise SchemaError(f"unknown uniform-function kind {self.kind!r}")
        if not isinstance(self.radius, int) or self.radius < 0:
            raise SchemaError("radius must be a nonnegative integer")
        if not 0 <= self.base_index < self.states.n:
            raise SchemaError(f"base index {self.base_index} out of range")
        if self.kind == TRANSLATED and self.graph.kind != LATTICE_Z:
            raise SchemaError("translated families require an integer-lattice window")
        seen: set[ComponentKey] = set()
        order = [(len(key), key) for key, _ in self.components]
        if order != sorted(order):
            raise SchemaError("components must be sorted by (size, support)")
        for key, comp in self.components:
            if key in seen:
                raise SchemaError(f"duplicate component support {key}")
            seen.add(key)
            if comp.support != key:
                raise SupportError(f"component keyed {key} has support {comp.support}")
            if comp.states != self.states:
                raise MismatchError("component built over a different state space")
            if comp.base_index != self.base_index:
                raise MismatchError("component normalized at a different base state")
            if comp.is_zero() and key != ():
                raise SchemaError(f"zero component at {key} (drop it)")
            if self.kind == TRANSLATED:
                if not key:
                    raise SchemaError("translated families cannot carry a constant term")
                if min(key) != 0:
                    raise SchemaError(f"template {key} is not anchored at 0")
                if _lattice_diameter(key, self.graph.k) > self.radius:
                    raise LocalityError(f"template {key} exceeds radius {self.radius}")
            else:
                for site in key:
                    self.graph.require_vertex(site)
                if key and diameter_of(self.graph, key) > self.radius:
                    raise LocalityError(f"support {key} exceeds radius {self.radius}")

    def component_map(self) -> dict[ComponentKey, ExactSupportFunction]:
        return dict(self.components)

    def constant_term(self) -> Fraction:
        for key, comp in self.components:
            if key == ():
                return comp.table[0]
        return Fraction(0)


def _canonical_components(items) -> tuple:
    out = []
    for key, comp in items:
        key = tuple(key)
        if comp.is_zero():
            continue
        out.append((key, comp))
    out.sort(key=lambda kv: (len(kv[0]), kv[0]))
    return tuple(out)


def explicit_uniform(
    states: StateSpace,
    graph: SiteGraph,
    base: int,
    radius: int,
    components: Mapping[ComponentKey, LocalFunction],
) -> UniformFunction:
    """Canonical explicit family; zero components are dropped, order normalized."""
    normalized = []
    for key, comp in components.items():
        if not isinstance(comp, ExactSupportFunction):
            comp = ExactSupportFunction(
                states=comp.states, support=comp.support, table=comp.table, base_index=base
            )
        normalized.append((tuple(key), comp))
    return UniformFunction(
        states=states,
        graph=graph,
        base_index=base,
        radius=radius,
        kind=EXPLICIT,
        components=_canonical_components(normalized),
    )


def translated_uniform(
    states: StateSpace,
    graph: SiteGraph,
    base: int,
    radius: int,
    templates: Mapping[ComponentKey, LocalFunction],
) -> UniformFunction:
    normalized = []
    for key, comp in templates.items():
        if not isinstance(comp, ExactSupportFunction):
            comp = ExactSupportFunction(
                states=comp.states, support=comp.support, table=comp.table, base_index=base
            )
        normalized.append((tuple(key), comp))
    return UniformFunction(
        states=states,
        graph=graph,
        base_index=base,
        radius=radius,
        kind=TRANSLATED,
        components=_canonical_components(normalized),
    )


def zero_uniform(
    states: StateSpace, graph: SiteGraph, base: int, radius: int = 0
) -> UniformFunction:
    return explicit_uniform(states, graph, base, radius, {})


def family_items(f: UniformFunction) -> list[tuple[ComponentKey, ExactSupportFunction]]:
    """The family as explicit (support, component) pairs.

    Translated families are materialized over the window: one copy of each
    template for every integer translate that fits inside [a, b].
    """
    if f.kind == EXPLICIT:
        return list(f.components)
    a, b = f.graph.window
    out = []
    for template, comp in f.components:
        span = max(template)
        for t in range(a, b - span + 1):
            shifted = tuple(s + t for s in template)
            out.append(
                (
                    shifted,
                    ExactSupportFunction(
                        states=comp.states,
                        support=shifted,
                        table=comp.table,
                        base_index=comp.base_index,
                    ),
                )
            )
    out.sort(key=lambda kv: (len(kv[0]), kv[0]))
    return out


def family_map(f: UniformFunction) -> dict[ComponentKey, ExactSupportFunction]:
    return dict(family_items(f))


def families_equal(f: UniformFunction, g: UniformFunction) -> bool:
    """Componentwise equality of the materialized families."""
    if f.states != g.states or f.base_index != g.base_index or f.graph != g.graph:
        return False
    left = {key: comp.table for key, comp in family_items(f)}
    right = {key: comp.table for key, comp in family_items(g)}
    return left == right


def _require_context(f: UniformFunction, eta: Configuration) -> None:
    if eta.states != f.states:
        raise MismatchError("configuration built over a different state space")
    if eta.graph != f.graph:
        raise MismatchError("configuration lives on a different graph")
    if eta.base_index != f.base_index:
        raise MismatchError("configuration normalized at a different base state")


def evaluate(f: UniformFunction, eta: Configuration) -> Fraction:
    """Value of the family at a finite-support configuration.

    Only components whose support lies inside the configuration's support can
    contribute (exact-support components vanish elsewhere), so the sum is
    finite even for translated families.
    """
    _require_context(f, eta)
    supp = set(eta.support())
    total = Fraction(0)
    if f.kind == EXPLICIT:
        for key, comp in f.components:
            if set(key) <= supp:
                total += comp.value_at(tuple(eta.state_at(s) for s in key))
        return total
    a, b = f.graph.window
    for template, comp in f.components:
        span = max(template)
        for t in sorted(supp):
            if t + span > b or t < a:
                continue
            shifted = [s + t for s in template]
            if all(s in supp for s in shifted):
                total += comp.value_at(tuple(eta.state_at(s) for s in shifted))
    return total


def difference(f: UniformFunction, eta: Configuration, eta2: Configuration) -> Fraction:
    """f(eta2) - f(eta), summed over components meeting the changed sites.

    The result ignores the constant term and never touches components away
    from the change, so it is well defined even when the window stands for an
    unbounded lattice.
    """
    _require_context(f, eta)
    _require_context(f, eta2)
    changed = sorted(
        x
        for x in set(eta.support()) | set(eta2.support())
        if eta.state_at(x) != eta2.state_at(x)
    )
    if not changed:
        return Fraction(0)
    changed_set = set(changed)
    total = Fraction(0)
    if f.kind == EXPLICIT:
        for key, comp in f.components:
            if key and changed_set & set(key):
                after = comp.value_at(tuple(eta2.state_at(s) for s in key))
                before = comp.value_at(tuple(eta.state_at(s) for s in key))
                total += after - before
        return total
    a, b = f.graph.window
    for template, comp in f.components:
        span = max(template)
        anchors = sorted({d - s for d in changed for s in template})
        for t in anchors:
            if t < a or t + span > b:
                # the translate pokes out of the window; both arguments hold
                # the base state there, so the component vanishes on both
                continue
            shifted = [s + t for s in template]
            after = comp.value_at(tuple(eta2.state_at(s) for s in shifted))
            before = comp.value_at(tuple(eta.state_at(s) for s in shifted))
            total += after - before
    return total


def xi_X(xi: ConservedQuantity, graph: SiteGraph, base: int) -> UniformFunction:
    """Site-wise sum of a conserved quantity, as a radius-0 uniform function.

    On lattice windows the result is a translated family with the single-site
    template; on finite graphs it is the explicit family with one component
    per site.  ``xi`` must vanish at the base state.
    """
    if not 0 <= base < xi.states.n:
        raise SchemaError(f"base index {base} out of range")
    if xi.values[base] != 0:
        raise NormalizationError("conserved quantity does not vanish at the base state")
    table = tuple(xi.values)
    if not any(table):
        return zero_uniform(xi.states, graph, base)
    if graph.kind == LATTICE_Z:
        template = ExactSupportFunction(
            states=xi.states, support=(0,), table=table, base_index=base
        )
        return translated_uniform(xi.states, graph, base, 0, {(0,): template})
    comps = {
        (x,): ExactSupportFunction(
            states=xi.states, support=(x,), table=table, base_index=base
        )
        for x in graph.vertices
    }
    return explicit_uniform(xi.states, graph, base, 0, comps)


def sum_of_uniformly_local(
    system: Mapping[Site, LocalFunction],
    radius: int,
    graph: SiteGraph,
    base: int,
) -> UniformFunction:
    """Sum of a uniformly local system {x -> f_x} as an explicit family.

    Every f_x must be supported inside the (strict) ball of ``radius`` around
    x and vanish on the all-base configuration.  The component of the result
    on a support is the sum of the matching expansion components of the f_x,
    so no support of diameter above ``2 * radius`` can appear.
    """
    if not isinstance(radius, int) or radius < 0:
        raise SchemaError("radius must be a nonnegative integer")
    states = None
    agg: dict[ComponentKey, list[Fraction]] = {}
    for x in sorted(system):
        fx = system[x]
        graph.require_vertex(x)
        if states is None:
            states = fx.states
        elif fx.states != states:
            raise MismatchError("system members disagree on the state space")
        allowed = ball(graph, x, radius)
        if not set(fx.support) <= allowed:
            raise LocalityError(
                f"f_{x!r} has support {fx.support} outside its radius-{radius} ball"
            )
        if fx.value_at((base,) * fx.arity) != 0:
            raise NormalizationError(f"f_{x!r} does not vanish on the all-base tuple")
        for key, comp in expand(fx, base).items():
            slot = agg.get(key)
            if slot is None:
                agg[key] = list(comp.table)
            else:
                for i, v in enumerate(comp.table):
                    slot[i] += v
    if states is None:
        raise SchemaError("empty system; pass at least one site function")
    comps = {
        key: ExactSupportFunction(
            states=states, support=key, table=tuple(tab), base_index=base
        )
        for key, tab in agg.items()
        if any(tab)
    }
    return explicit_uniform(states, graph, base, 2 * radius, comps)


def to_uniformly_local(f: UniformFunction) -> dict[Site, LocalFunction]:
    """Split a family into site functions f_x, weighting each component by
    1/|support| and crediting it to each of its sites.

    Summing the result back (radius ``f.radius + 1``) reproduces the nonempty
    components of f exactly; a constant term, living in the quotient by
    constants, is ignored.
    """
    pieces: dict[Site, dict[ComponentKey, LocalFunction]] = {}
    for key, comp in family_items(f):
        if not key:
            continue
        weight = Fraction(1, len(key))
        scaled = LocalFunction(
            states=comp.states,
            support=comp.support,
            table=tuple(v * weight for v in comp.table),
        )
        for x in key:
            pieces.setdefault(x, {})[key] = scaled
    out: dict[Site, LocalFunction] = {}
    for x in sorted(pieces):
        parts = pieces[x]
        union: set[Site] = set()
        for key in parts:
            union |= set(key)
        out[x] = assemble(parts, tuple(sorted(union)))
    return out


def rebase(f: UniformFunction, new_base: int) -> UniformFunction:
    """Re-express the family relative to a different base state.

    Each nonempty component is re-expanded at the new base and the pieces are
    aggregated by support (translated families aggregate by translation
    class).  The constant term is carried over verbatim, which makes the map
    an involution and, on finite local functions, shifts the function by
    (value at old all-base) - (value at new all-base).
    """
    if not 0 <= new_base < f.states.n:
        raise SchemaError(f"base index {new_base} out of range")
    if new_base == f.base_index:
        return f
    agg: dict[ComponentKey, list[Fraction]] = {}
    for key, comp in f.components:
        if not key:
            continue
        plain = LocalFunction(states=comp.states, support=key, table=comp.table)
        for sub, piece in expand(plain, new_base).items():
            if not sub:
                continue
            if f.kind == TRANSLATED:
                shift = min(sub)
                sub = tuple(s - shift for s in sub)
            slot = agg.get(sub)
            if slot is None:
                agg[sub] = list(piece.table)
            else:
                for i, v in enumerate(piece.table):
                    slot[i] += v
    comps = {
        key: ExactSupportFunction(
            states=f.states, support=key, table=tuple(tab), base_index=new_base
        )
        for key, tab in agg.items()
        if any(tab)
    }
    if f.kind == EXPLICIT:
        carried = f.constant_term()
        if carried:
            comps[()] = ExactSupportFunction(
                states=f.states, support=(), table=(carried,), base_index=new_base
            )
        return explicit_uniform(f.states, f.graph, new_base, f.radius, comps)
    return translated_uniform(f.states, f.graph, new_base, f.radius, comps)


# ---------------------------------------------------------------------------
# document forms


def _document_support(raw) -> tuple:
    """Validate a document's support listing (must be ascending, no repeats)."""
    support = tuple(raw)
    try:
        ordered = tuple(sorted(set(support)))
    except TypeError as exc:
        raise SchemaError(f"support sites are not mutually orderable: {exc}") from exc
    if support != ordered:
        raise SchemaError(
            f"support {list(support)} must be listed in ascending order without repeats"
        )
    return support


def _parse_table(doc_table: Mapping[str, str], states: StateSpace, support) -> dict:
    entries = {}
    for key, raw in doc_table.items():
        labels = key.split(",") if key else []
        if len(labels) != len(support):
            raise SchemaError(
                f"table key {key!r} has {len(labels)} states for {len(support)} sites"
            )
        entries[tuple(states.index(lbl) for lbl in labels)] = parse_rational(raw)
    return entries


def _format_table(comp: LocalFunction) -> dict[str, str]:
    labels = comp.states.labels
    out = {}
    for assignment in comp.assignments():
        v = comp.value_at(assignment)
        if v:
            out[",".join(labels[s] for s in assignment)] = format_rational(v)
    return out


def load_local_function(doc: dict, states: StateSpace) -> LocalFunction:
    """Parse {"support": [...], "table": {...}} into a local function."""
    if not isinstance(doc, dict):
        raise SchemaError("local-function document must be an object")
    try:
        support = _document_support(doc["support"])
        table_doc = doc["table"]
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"local-function document needs 'support' and 'table': {exc}") from exc
    entries = _parse_table(table_doc, states, support)
    return LocalFunction.from_entries(states, support, entries)


def local_function_to_document(f: LocalFunction) -> dict:
    return {"support": list(f.support), "table": _format_table(f)}


def load_component_list(items, states: StateSpace, base: int):
    """Parse a list of {"support": [...], "table": {...}} component documents."""
    comps: dict[ComponentKey, ExactSupportFunction] = {}
    for item in items:
        try:
            support = _document_support(item["support"])
            table_doc = item["table"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"bad component entry: {exc}") from exc
        entries = _parse_table(table_doc, states, support)
        fn = LocalFunction.from_entries(states, support, entries)
        if fn.support in comps:
            raise SchemaError(f"duplicate component support {fn.support}")
        comps[fn.support] = ExactSupportFunction(
            states=states, support=fn.support, table=fn.table, base_index=base
        )
    return comps


def component_list_to_document(comps) -> list:
    items = sorted(comps.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return [
        {"support": list(key), "table": _format_table(comp)}
        for key, comp in items
        if not comp.is_zero() or key == ()
    ]


def load_uniform(doc: dict, states: StateSpace, graph: SiteGraph) -> UniformFunction:
    """Build a uniform function from its JSON document form."""
    if not isinstance(doc, dict):
        raise SchemaError("uniform-function document must be an object")
    if "base" not in doc:
        raise SchemaError("uniform-function document needs a 'base'")
    base = states.index(doc["base"])
    kind = doc.get("kind", TRANSLATED if "template" in doc else EXPLICIT)
    radius = doc.get("radius", 0)
    if not isinstance(radius, int) or radius < 0:
        raise SchemaError("'radius' must be a nonnegative integer")
    if kind == EXPLICIT:
        comps = load_component_list(doc.get("components", []), states, base)
        return explicit_uniform(states, graph, base, radius, comps)
    if kind == TRANSLATED:
        comps = load_component_list(doc.get("template", []), states, base)
        return translated_uniform(states, graph, base, radius, comps)
    raise SchemaError(f"unknown uniform-function kind {kind!r}")


def uniform_to_document(f: UniformFunction) -> dict:
    doc = {
        "kind": f.kind,
        "base": f.states.labels[f.base_index],
        "radius": f.radius,
    }
    listed = component_list_to_document(f.component_map())
    if f.kind == EXPLICIT:
        doc["components"] = listed
    else:
        doc["template"] = listed
    return doc


def load_configuration(doc: dict, states: StateSpace, graph: SiteGraph) -> Configuration:
    """Build a configuration from {"base": ..., "assignments": {site: state}}."""
    if not isinstance(doc, dict) or "base" not in doc:
        raise SchemaError("configuration document needs a 'base'")
    base = states.index(doc["base"])
    raw = doc.get("assignments", {})
    if not isinstance(raw, Mapping):
        raise SchemaError("'assignments' must be an object")
    int_sites = all(isinstance(v, int) for v in graph.vertices)
    table = {}
    for key, label in raw.items():
        site: Site = key
        if int_sites:
            try:
                site = int(key)
            except ValueError as exc:
                raise SchemaError(f"bad site key {key!r}") from exc
        table[site] = states.index(label)
    return configuration(graph, states, base, table)


def configuration_to_document(eta: Configuration) -> dict:
    labels = eta.states.labels
    return {
        "base": labels[eta.base_index],
        "assignments": {str(site): labels[state] for site, state in eta.assignments},
    }
