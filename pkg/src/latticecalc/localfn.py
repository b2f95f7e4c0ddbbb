"""Functions of finitely many sites, stored as dense rational tables.

A local function assigns a rational to every tuple of states over its support.
Tables are indexed in mixed radix: the first support site (sorted order) is
the most significant digit, states in declared order, so entry order matches
``itertools.product(range(n), repeat=arity)``.

``expand`` decomposes a local function into exact-support components: pieces
that vanish whenever any coordinate equals the chosen base state.  The pieces
are computed by induction over subsets of the support, smallest first, and
``assemble`` sums them back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Mapping

from . import caps
from .errors import CapExceededError, SchemaError, SupportError
from .interaction import StateSpace
from .rationals import ensure_fraction
from .sitegraph import Site

Assignment = tuple[int, ...]


def _sorted_support(sites) -> tuple[Site, ...]:
    sites = list(sites)
    if len(set(sites)) != len(sites):
        raise SupportError("support has repeated sites")
    try:
        return tuple(sorted(sites))
    except TypeError as exc:
        raise SupportError(f"support sites are not mutually orderable: {exc}") from exc


@dataclass(frozen=True)
class LocalFunction:
    states: StateSpace
    support: tuple[Site, ...]
    table: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.support != _sorted_support(self.support):
            raise SupportError("support must be sorted and duplicate-free")
        limits = caps.current()
        if len(self.support) > limits.max_support:
            raise CapExceededError(
                f"support of {len(self.support)} sites exceeds cap {limits.max_support}"
            )
        size = self.states.n ** len(self.support)
        if size > limits.max_table:
            raise CapExceededError(f"table of {size} entries exceeds cap {limits.max_table}")
        if len(self.table) != size:
            raise SchemaError(
                f"table needs {size} entries for {len(self.support)} sites, got {len(self.table)}"
            )
        object.__setattr__(self, "table", tuple(ensure_fraction(v) for v in self.table))

    @property
    def arity(self) -> int:
        return len(self.support)

    @property
    def n_states(self) -> int:
        return self.states.n

    def index_of(self, assignment: Assignment) -> int:
        idx = 0
        for s in assignment:
            idx = idx * self.states.n + s
        return idx

    def value_at(self, assignment: Assignment) -> Fraction:
        if len(assignment) != self.arity:
            raise SupportError(
                f"assignment of length {len(assignment)} for arity {self.arity}"
            )
        return self.table[self.index_of(assignment)]

    def assignments(self):
        return product(range(self.states.n), repeat=self.arity)

    def is_zero(self) -> bool:
        return not any(self.table)

    @classmethod
    def from_function(
        cls, states: StateSpace, support, fn: Callable[[Assignment], object]
    ) -> "LocalFunction":
        supp = _sorted_support(support)
        table = tuple(
            ensure_fraction(fn(a)) for a in product(range(states.n), repeat=len(supp))
        )
        return cls(states=states, support=supp, table=table)

    @classmethod
    def from_entries(
        cls, states: StateSpace, support, entries: Mapping[Assignment, object]
    ) -> "LocalFunction":
        """Build from a sparse {assignment: value} map; omitted entries are zero."""
        supp = _sorted_support(support)
        table = [Fraction(0)] * states.n ** len(supp)
        probe = cls.zero(states, supp)
        for assignment, value in entries.items():
            table[probe.index_of(tuple(assignment))] = ensure_fraction(value)
        return cls(states=states, support=supp, table=tuple(table))

    @classmethod
    def zero(cls, states: StateSpace, support=()) -> "LocalFunction":
        supp = _sorted_support(support)
        return cls(
            states=states,
            support=supp,
            table=tuple([Fraction(0)] * states.n ** len(supp)),
        )

    @classmethod
    def constant(cls, states: StateSpace, value) -> "LocalFunction":
        return cls(states=states, support=(), table=(ensure_fraction(value),))


@dataclass(frozen=True)
class ExactSupportFunction(LocalFunction):
    """Local function that vanishes whenever any coordinate is the base state."""

    base_index: int = 0

    def __post_init__(self) -> None:
        super().__post_init__()
        if not 0 <= self.base_index < self.states.n:
            raise SchemaError(f"base index {self.base_index} out of range")
        for assignment in self.assignments():
            if self.base_index in assignment and self.value_at(assignment) != 0:
                raise SupportError(
                    f"entry {assignment} has a base coordinate but value "
                    f"{self.value_at(assignment)}"
                )


def is_exact_support(f: LocalFunction, base: int) -> bool:
    """True when f vanishes on every tuple with a coordinate equal to ``base``."""
    if not 0 <= base < f.states.n:
        raise SchemaError(f"base index {base} out of range")
    return all(
        f.value_at(a) == 0 for a in f.assignments() if base in a
    )


def restrict(f: LocalFunction, sites, base: int) -> LocalFunction:
    """Evaluate f with every site outside ``sites`` pinned to the base state."""
    keep = _sorted_support(set(sites) & set(f.support))
    positions = [f.support.index(s) for s in keep]
    n = f.states.n
    table = []
    for assignment in product(range(n), repeat=len(keep)):
        full = [base] * f.arity
        for pos, s in zip(positions, assignment):
            full[pos] = s
        table.append(f.value_at(tuple(full)))
    return LocalFunction(states=f.states, support=keep, table=tuple(table))


def expand(f: LocalFunction, base: int) -> dict[tuple[Site, ...], ExactSupportFunction]:
    """Exact-support components of f relative to the base state.

    Components are defined by subtracting, from each restriction of f, the
    components already found on proper subsets; only nonzero components are
    returned.  The empty-support component is the constant f(all-base).
    """
    comps: dict[tuple[Site, ...], ExactSupportFunction] = {}
    n = f.states.n
    for size in range(f.arity + 1):
        for lam in combinations(f.support, size):
            table = list(restrict(f, lam, base).table)
            lam_set = set(lam)
            assigns = list(product(range(n), repeat=size))
            for sub, comp in comps.items():
                if not set(sub) <= lam_set:
                    continue
                positions = [lam.index(s) for s in sub]
                for i, assignment in enumerate(assigns):
                    v = comp.value_at(tuple(assignment[p] for p in positions))
                    if v:
                        table[i] -= v
            if any(table):
                comps[lam] = ExactSupportFunction(
                    states=f.states, support=lam, table=tuple(table), base_index=base
                )
    return comps


def assemble(
    components: Mapping[tuple[Site, ...], LocalFunction],
    support,
    states: StateSpace | None = None,
) -> LocalFunction:
    """Pointwise sum of components over a common support.

    ``states`` is only needed when ``components`` is empty (the zero sum).
    """
    supp = _sorted_support(support)
    supp_set = set(supp)
    for lam, comp in components.items():
        if states is None:
            states = comp.states
        elif comp.states != states:
            raise SupportError("components disagree on the state space")
        if not set(lam) <= supp_set:
            raise SupportError(f"component support {lam} not contained in {supp}")
        if tuple(lam) != comp.support:
            raise SupportError(f"component keyed {lam} has support {comp.support}")
    if states is None:
        raise SupportError("assemble needs components or an explicit state space")
    if not components:
        return LocalFunction.zero(states, supp)
    n = states.n
    table = []
    items = sorted(components.items(), key=lambda kv: (len(kv[0]), kv[0]))
    positioned = [
        (comp, [supp.index(s) for s in lam]) for lam, comp in items
    ]
    for assignment in product(range(n), repeat=len(supp)):
        total = Fraction(0)
        for comp, positions in positioned:
            total += comp.value_at(tuple(assignment[p] for p in positions))
        table.append(total)
    return LocalFunction(states=states, support=supp, table=tuple(table))
