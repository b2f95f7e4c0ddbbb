#!/usr/bin/env python3
"""Print a quick structural survey of the builtin interactions.

For each interaction: the state set, the conserved-quantity basis over its
base state, whether every pair of states can be swapped through allowed
transitions, and the finite h0/h1 on a small path, which cross-checks the
conserved-quantity count against the number of reachability classes.
"""

import argparse

from latticecalc.cohomology import h0_h1_finite
from latticecalc.interaction import builtin_interaction, consv_basis, is_exchangeable
from latticecalc.sitegraph import path_graph

DEFAULT = ["exclusion", "multispecies:2", "multispecies:3", "two-species-ac", "quastel2"]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--interactions", nargs="+", default=DEFAULT)
    parser.add_argument("--sites", type=int, default=3,
                        help="path length for the finite computation")
    args = parser.parse_args()

    for name in args.interactions:
        phi = builtin_interaction(name)
        states = phi.states
        basis = consv_basis(phi, states.base_index)
        print(f"{name}:")
        print(f"  states: {list(states.labels)}  "
              f"base: {states.labels[states.base_index]}")
        print(f"  exchangeable: {is_exchangeable(phi)}")
        print(f"  conserved basis ({len(basis)}):")
        for xi in basis:
            row = ", ".join(
                f"{states.labels[i]}={v}" for i, v in enumerate(xi.values)
            )
            print(f"    {row}")
        summary = h0_h1_finite(phi, path_graph(args.sites))
        print(f"  path({args.sites}): configurations {summary.dim_c0}, "
              f"transitions {summary.dim_c1}, h0 {summary.h0}, h1 {summary.h1}")
        print()


if __name__ == "__main__":
    main()
