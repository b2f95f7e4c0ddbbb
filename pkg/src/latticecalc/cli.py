"""Command-line front-end.

Every subcommand reads JSON inputs, runs one operation, and writes a single
deterministic JSON line: a report embedding the tool version, a digest of
every input, the outputs payload and a list of verification checks that were
re-run on the results.  ``component`` and ``swap-path`` stream each
transition as its own JSON line ahead of the report.  ``--format table``
renders the same payload as indented text instead.

Failures print one JSON line with an ``error.code``; schema and I/O problems
exit with status 1, domain violations with status 2.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from . import __version__
from .cohomology import (
    CONSERVED,
    NOT_CONSERVED_PAIR,
    NONZERO_MULTI_SITE,
    UNEQUAL_SINGLE_SITE,
    extract_conserved,
    h0_h1_finite,
    invariance_kernel,
)
from .errors import LatticeCalcError, MismatchError, SchemaError
from .interaction import (
    Interaction,
    builtin_interaction,
    consv_basis,
    is_exchangeable,
    load_interaction,
    pair_exchange_path,
    state_space,
)
from .localfn import assemble, expand, is_exact_support
from .rationals import format_rational
from .sitegraph import (
    SiteGraph,
    cycle_graph,
    graph_to_document,
    lattice_window,
    load_graph,
    path_graph,
)
from .transitions import (
    component_bfs,
    is_invariant,
    neighbors,
    swap_path,
    transition_from_document,
)
from .uniform import (
    configuration,
    configuration_to_document,
    component_list_to_document,
    difference,
    evaluate,
    families_equal,
    load_configuration,
    load_local_function,
    load_uniform,
    rebase,
    uniform_to_document,
    xi_X,
)

_GRAPH_SHORTHANDS = ("path", "cycle", "lattice")


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _read_json(path: str):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc
    return doc, "sha256:" + hashlib.sha256(raw).hexdigest()


def _interaction_arg(token: str, inputs: dict) -> Interaction:
    if token.endswith(".json") or Path(token).exists():
        doc, digest = _read_json(token)
        inputs["interaction"] = digest
        return load_interaction(doc)
    inputs["interaction"] = "builtin:" + token
    return builtin_interaction(token)


def _graph_arg(token: str, inputs: dict) -> SiteGraph:
    head = token.split(":", 1)[0]
    if head in _GRAPH_SHORTHANDS:
        inputs["graph"] = "shorthand:" + token
        parts = token.split(":")
        try:
            if head == "path":
                return path_graph(int(parts[1]))
            if head == "cycle":
                return cycle_graph(int(parts[1]))
            k, a, b = (int(x) for x in parts[1:4])
            return lattice_window(k, a, b)
        except (IndexError, ValueError) as exc:
            raise SchemaError(f"bad graph shorthand {token!r}: {exc}") from exc
    doc, digest = _read_json(token)
    inputs["graph"] = digest
    return load_graph(doc)


def _function_file(path: str, inputs: dict, graph_arg: str | None = None):
    """Load a uniform-function file with embedded states (and usually graph)."""
    doc, digest = _read_json(path)
    inputs["function"] = digest
    if not isinstance(doc, dict) or "states" not in doc or "base" not in doc:
        raise SchemaError(f"{path} needs embedded 'states' and 'base'")
    states = state_space(doc["states"], doc["base"])
    if graph_arg is not None:
        graph = _graph_arg(graph_arg, inputs)
    elif "graph" in doc:
        graph = load_graph(doc["graph"])
    else:
        raise SchemaError(f"{path} embeds no 'graph' and no --graph was given")
    return load_uniform(doc, states, graph), states, graph


def _function_doc(fn) -> dict:
    doc = uniform_to_document(fn)
    doc["states"] = list(fn.states.labels)
    doc["graph"] = graph_to_document(fn.graph)
    return doc


def _config_file(path: str, states, graph, inputs: dict, role: str):
    doc, digest = _read_json(path)
    inputs[role] = digest
    return load_configuration(doc, states, graph)


def _site_token(graph: SiteGraph, token: str):
    if isinstance(graph.vertices[0], int):
        try:
            return int(token)
        except ValueError as exc:
            raise SchemaError(f"site {token!r} is not an integer") from exc
    return token


def _base_index(states, label: str | None) -> int:
    if label is not None:
        return states.index(label)
    if states.base_index is None:
        raise SchemaError("no base state declared; pass --base")
    return states.base_index


def _table_lines(prefix: str, value, out: list[str]) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            sub = f"{prefix}.{key}" if prefix else str(key)
            _table_lines(sub, value[key], out)
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            out.append(f"{prefix}: {' '.join(str(v) for v in value)}")
        else:
            for i, item in enumerate(value):
                _table_lines(f"{prefix}[{i}]", item, out)
    else:
        out.append(f"{prefix}: {value}")


def _emit(args, command: str, inputs, params, outputs, verification, lines=None) -> int:
    report = {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "params": params,
        "tool": "latticecalc",
        "verification": [list(item) for item in verification],
        "version": __version__,
    }
    if args.format == "table":
        rows: list[str] = []
        for doc in lines or []:
            x, y = doc["edge"]
            rows.append(
                f"{x}~{y}: {','.join(doc['from'])} -> {','.join(doc['to'])}"
            )
        _table_lines("", outputs, rows)
        for name, status in verification:
            rows.append(f"check {name}: {status}")
        text = "\n".join(rows) + "\n"
    else:
        text = "".join(_dumps(doc) + "\n" for doc in lines or [])
        text += _dumps(report) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# subcommands


def cmd_consv(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    base = _base_index(phi.states, args.base)
    basis = consv_basis(phi, base)
    verification = [
        (
            "pair-sum-constant",
            "pass" if all(xi.pair_sum_constant(phi) for xi in basis) else "fail",
        )
    ]
    outputs = {
        "base": phi.states.labels[base],
        "dimension": len(basis),
        "basis": [xi.to_document() for xi in basis],
    }
    params = {"interaction": args.interaction}
    return _emit(args, "consv", inputs, params, outputs, verification)


def cmd_exchangeable(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    answer = is_exchangeable(phi)
    verification = []
    if answer:
        realized = True
        for a in range(phi.states.n):
            for b in range(phi.states.n):
                path = pair_exchange_path(phi, a, b)
                cur = (a, b)
                for (p, q), (r, s) in path:
                    if cur != (p, q):
                        realized = False
                    cur = (r, s)
                if cur != (b, a):
                    realized = False
        verification.append(("pair-path-realized", "pass" if realized else "fail"))
    outputs = {"exchangeable": answer}
    params = {"interaction": args.interaction}
    return _emit(args, "exchangeable", inputs, params, outputs, verification)


def cmd_expand(args) -> int:
    inputs: dict = {}
    doc, digest = _read_json(args.function)
    inputs["function"] = digest
    if not isinstance(doc, dict) or "states" not in doc:
        raise SchemaError(f"{args.function} needs an embedded 'states' list")
    states = state_space(doc["states"], doc.get("base"))
    fn = load_local_function(doc, states)
    base = _base_index(states, args.base)
    comps = expand(fn, base)
    rebuilt = assemble(comps, fn.support, states)
    verification = [
        ("reassemble", "pass" if rebuilt == fn else "fail"),
        (
            "exact-support",
            "pass"
            if all(is_exact_support(c, base) for k, c in comps.items() if k)
            else "fail",
        ),
    ]
    outputs = {
        "base": states.labels[base],
        "components": component_list_to_document(comps),
    }
    params = {"function": args.function}
    return _emit(args, "expand", inputs, params, outputs, verification)


def cmd_rebase(args) -> int:
    inputs: dict = {}
    fn, states, _ = _function_file(args.function, inputs, args.graph)
    new_base = states.index(args.base)
    moved = rebase(fn, new_base)
    back = rebase(moved, fn.base_index)
    verification = [("involution", "pass" if families_equal(back, fn) else "fail")]
    outputs = {"function": _function_doc(moved)}
    params = {"function": args.function, "base": args.base}
    return _emit(args, "rebase", inputs, params, outputs, verification)


def cmd_diff(args) -> int:
    inputs: dict = {}
    fn, states, graph = _function_file(args.function, inputs, args.graph)
    before = _config_file(args.from_config, states, graph, inputs, "from")
    after = _config_file(args.to_config, states, graph, inputs, "to")
    value = difference(fn, before, after)
    direct = evaluate(fn, after) - evaluate(fn, before)
    verification = [("evaluation-consistent", "pass" if direct == value else "fail")]
    outputs = {"value": format_rational(value)}
    params = {"function": args.function, "from": args.from_config, "to": args.to_config}
    return _emit(args, "diff", inputs, params, outputs, verification)


def cmd_neighbors(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    graph = _graph_arg(args.graph, inputs)
    eta = _config_file(args.config, phi.states, graph, inputs, "config")
    found = neighbors(phi, eta)
    docs = [tr.to_document() for tr in found]
    ok = all(
        transition_from_document(doc, phi, tr.before).after == tr.after
        for doc, tr in zip(docs, found)
    )
    verification = [("round-trip", "pass" if ok else "fail")]
    outputs = {"count": len(found), "transitions": docs}
    params = {"interaction": args.interaction, "graph": args.graph, "config": args.config}
    return _emit(args, "neighbors", inputs, params, outputs, verification)


def cmd_component(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    graph = _graph_arg(args.graph, inputs)
    eta = _config_file(args.config, phi.states, graph, inputs, "config")
    result = component_bfs(phi, eta, max_states=args.max_states)
    docs = [tr.to_document() for tr in result.discovery]
    ok = all(
        transition_from_document(doc, phi, tr.before).after == tr.after
        for doc, tr in zip(docs, result.discovery)
    )
    verification = [("round-trip", "pass" if ok else "fail")]
    outputs = {
        "size": len(result.configurations),
        "transitions": len(docs),
        "truncated": result.truncated,
    }
    params = {"interaction": args.interaction, "graph": args.graph, "config": args.config}
    if args.max_states is not None:
        params["max_states"] = args.max_states
    return _emit(args, "component", inputs, params, outputs, verification, lines=docs)


def cmd_swap_path(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    graph = _graph_arg(args.graph, inputs)
    eta = _config_file(args.config, phi.states, graph, inputs, "config")
    x = _site_token(graph, args.sites[0])
    y = _site_token(graph, args.sites[1])
    path = swap_path(phi, eta, x, y)
    docs = [tr.to_document() for tr in path]
    cur = eta
    for doc in docs:
        cur = transition_from_document(doc, phi, cur).after
    swapped = eta.with_sites({x: eta.state_at(y), y: eta.state_at(x)})
    verification = [("endpoint-swap", "pass" if cur == swapped else "fail")]
    outputs = {
        "steps": len(docs),
        "endpoint": configuration_to_document(cur),
    }
    params = {
        "interaction": args.interaction,
        "graph": args.graph,
        "config": args.config,
        "sites": list(args.sites),
    }
    return _emit(args, "swap-path", inputs, params, outputs, verification, lines=docs)


def cmd_invariant(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    fn, states, graph = _function_file(args.function, inputs, args.graph)
    if states != phi.states:
        raise MismatchError("function and interaction disagree on the state space")
    probes = []
    for i, path in enumerate(args.probe or []):
        probes.append(_config_file(path, states, graph, inputs, f"probe{i}"))
    if not probes:
        probes = [configuration(graph, states, fn.base_index, {})]
    check = is_invariant(fn, phi, state_probe=probes)
    outputs = {
        "invariant": check.invariant,
        "witness": check.witness.to_document() if check.witness else None,
        "probes": check.probes_checked,
        "transitions": check.transitions_checked,
        "coverage": check.coverage,
    }
    params = {"function": args.function, "interaction": args.interaction}
    return _emit(args, "invariant", inputs, params, outputs, [])


def cmd_h0(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    graph = _graph_arg(args.graph, inputs)
    summary = h0_h1_finite(phi, graph)
    verification = [
        (
            "rank-nullity",
            "pass"
            if summary.h0 == summary.dim_c0 - summary.rank_d
            and summary.h1 == summary.dim_c1 - summary.rank_d
            else "fail",
        )
    ]
    outputs = {
        "dim_c0": summary.dim_c0,
        "dim_c1": summary.dim_c1,
        "rank": summary.rank_d,
        "h0": summary.h0,
        "h1": summary.h1,
    }
    params = {"interaction": args.interaction, "graph": args.graph}
    return _emit(args, "h0", inputs, params, outputs, verification)


def cmd_extract(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    fn, states, graph = _function_file(args.function, inputs, args.graph)
    if states != phi.states:
        raise MismatchError("function and interaction disagree on the state space")
    result = extract_conserved(fn, phi)
    labels = states.labels
    witness = None
    if result.outcome in (UNEQUAL_SINGLE_SITE, NONZERO_MULTI_SITE):
        witness = list(result.witness)
    elif result.outcome == NOT_CONSERVED_PAIR:
        (a, b), (c, d) = result.witness
        witness = [[labels[a], labels[b]], [labels[c], labels[d]]]
    verification = []
    if result.outcome == CONSERVED:
        rebuilt = xi_X(result.xi, graph, fn.base_index)
        verification.append(
            ("sitewise-sum-matches", "pass" if families_equal(fn, rebuilt) else "fail")
        )
    outputs = {
        "outcome": result.outcome,
        "xi": result.xi.to_document() if result.xi else None,
        "witness": witness,
    }
    params = {"function": args.function, "interaction": args.interaction}
    return _emit(args, "extract", inputs, params, outputs, verification)


def cmd_kernel(args) -> int:
    inputs: dict = {}
    phi = _interaction_arg(args.interaction, inputs)
    if args.window:
        try:
            lo, hi = (int(x) for x in args.window.split(":"))
        except ValueError as exc:
            raise SchemaError(f"bad window {args.window!r}; expected a:b") from exc
        graph = lattice_window(args.k, lo, hi)
        inputs["graph"] = f"shorthand:lattice:{args.k}:{lo}:{hi}"
    elif args.graph:
        graph = _graph_arg(args.graph, inputs)
    else:
        raise SchemaError("kernel needs --window a:b or --graph")
    base = _base_index(phi.states, args.base)
    report = invariance_kernel(
        phi, args.radius, graph, base, probe_bound=args.probe_bound
    )
    lo, hi = report.inner_window
    probes = [configuration(graph, phi.states, base, {})]
    for site in range(lo, hi + 1):
        for state in range(phi.states.n):
            if state != base:
                probes.append(configuration(graph, phi.states, base, {site: state}))
    inner_edges = [
        (x, y) for x, y in graph.unordered_edges() if lo <= x and y <= hi
    ]
    ok = all(
        is_invariant(fn, phi, edge_window=inner_edges, state_probe=probes).invariant
        for fn in report.basis
    )
    verification = [("basis-invariant-on-probes", "pass" if ok else "fail")]
    outputs = {
        "window": list(report.window),
        "k": report.k,
        "R": report.radius,
        "probe_bound": report.probe_bound,
        "inner_window": list(report.inner_window),
        "unknowns": report.unknown_count,
        "rank": report.constraint_rank,
        "dimension": report.dimension,
        "basis": [uniform_to_document(fn) for fn in report.basis],
    }
    params = {"interaction": args.interaction, "radius": args.radius}
    return _emit(args, "kernel", inputs, params, outputs, verification)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticecalc",
        description="Exact calculators for interacting-particle conservation laws.",
    )
    parser.add_argument(
        "--version", action="version", version="latticecalc " + __version__
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("json", "table"), default="json")
        p.add_argument("--out", help="write the report to this file instead of stdout")
        p.set_defaults(func=handler)
        return p

    p = add("consv", cmd_consv, "basis of conserved quantities")
    p.add_argument("--interaction", required=True)
    p.add_argument("--base", help="base state label (defaults to the declared one)")

    p = add("exchangeable", cmd_exchangeable, "decide exchangeability")
    p.add_argument("--interaction", required=True)

    p = add("expand", cmd_expand, "exact-support components of a local function")
    p.add_argument("--function", required=True)
    p.add_argument("--base")

    p = add("rebase", cmd_rebase, "rewrite a uniform function over a new base state")
    p.add_argument("--function", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--graph")

    p = add("diff", cmd_diff, "difference of a uniform function along two configurations")
    p.add_argument("--function", required=True)
    p.add_argument("--from", dest="from_config", required=True)
    p.add_argument("--to", dest="to_config", required=True)
    p.add_argument("--graph")

    p = add("neighbors", cmd_neighbors, "single transitions out of a configuration")
    p.add_argument("--interaction", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--config", required=True)

    p = add("component", cmd_component, "breadth-first reachable component")
    p.add_argument("--interaction", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--max-states", type=int)

    p = add("swap-path", cmd_swap_path, "transition sequence exchanging two sites")
    p.add_argument("--interaction", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--sites", nargs=2, required=True, metavar=("X", "Y"))

    p = add("invariant", cmd_invariant, "probe a uniform function for invariance")
    p.add_argument("--function", required=True)
    p.add_argument("--interaction", required=True)
    p.add_argument("--graph")
    p.add_argument("--probe", action="append", help="configuration file; repeatable")

    p = add("h0", cmd_h0, "exact cochain dimensions of a finite system")
    p.add_argument("--interaction", required=True)
    p.add_argument("--graph", required=True)

    p = add("extract", cmd_extract, "decide if a uniform function is a conserved sum")
    p.add_argument("--function", required=True)
    p.add_argument("--interaction", required=True)
    p.add_argument("--graph")

    p = add("kernel", cmd_kernel, "invariance kernel over a lattice window")
    p.add_argument("--interaction", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--window", help="a:b window bounds (use --window=-6:6 form)")
    p.add_argument("--k", type=int, default=1, help="interaction range for --window")
    p.add_argument("--graph")
    p.add_argument("--base")
    p.add_argument("--probe-bound", type=int)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LatticeCalcError as exc:
        line = _dumps({"error": {"code": exc.code, "message": str(exc)}})
        sys.stderr.write(line + "\n")
        return exc.exit_status
    except OSError as exc:
        line = _dumps({"error": {"code": "io", "message": str(exc)}})
        sys.stderr.write(line + "\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
