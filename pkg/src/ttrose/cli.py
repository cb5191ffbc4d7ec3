"""Command line surface: analyze maps, test target graphs, sweep catalogs,
export artifacts.

Exit codes: 0 when a verdict or report was produced, 2 for an invalid
target graph, 1 for other input errors.  Output is deterministic given
identical inputs.  Artifacts land in --out, falling back to the
TTROSE_CACHE_DIR environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from . import __version__
from .catalog import connected_simplicial_graphs
from .diagram import (
    INCONCLUSIVE,
    InvalidTargetGraph,
    diagram_to_dot,
    diagram_to_json,
    enumerate_structures,
    epp_classes,
    find_loops,
    id_diagram,
    star_target,
    target_from_json,
    target_verdict,
    validate_target,
    verify_loop,
)
from .ltt import (
    LttRegimeError,
    brute_force_birecurrent,
    is_birecurrent,
    ltt_of_map,
    ltt_to_dot,
    validate_ltt,
)
from .maps import (
    NotProperFullFolds,
    RoseMap,
    gates,
    is_train_track,
    local_whitehead_graph,
    periodic_and_fixed_directions,
    stable_whitehead_graph,
    stallings_fold_decomposition,
)
from .rose import format_direction
from .whitehead import WhiteheadGraph, index_list


def _out_dir(args) -> Path | None:
    if getattr(args, "out", None):
        return Path(args.out)
    env = os.environ.get("TTROSE_CACHE_DIR")
    return Path(env) if env else None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    print(f"wrote {path}")


def _load_json(source: str) -> dict:
    try:
        if source == "-":
            return json.load(sys.stdin)
        return json.loads(Path(source).read_text())
    except json.JSONDecodeError as exc:
        raise SystemExit(f"error: invalid JSON in {source}: line {exc.lineno}, "
                         f"column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise SystemExit(f"error: cannot read {source}: {exc}")


def _load_map(source: str) -> RoseMap:
    data = _load_json(source)
    try:
        return RoseMap.from_strings(int(data["rank"]), data["images"])
    except (KeyError, ValueError) as exc:
        raise SystemExit(f"error: bad rose map input: {exc}")


def _load_target(args) -> WhiteheadGraph:
    if getattr(args, "star", False):
        return star_target(args.rank)
    if not args.input:
        raise SystemExit("error: provide a target graph JSON file or --star")
    return target_from_json(_load_json(args.input))


def _fmt_turn(t) -> str:
    return "{" + format_direction(t[0]) + "," + format_direction(t[1]) + "}"


def _fmt_turns(turns) -> str:
    return " ".join(_fmt_turn(t) for t in sorted(turns)) or "(none)"


def cmd_analyze_map(args) -> int:
    m = _load_map(args.input)
    print(f"map: {m}")
    verdict = is_train_track(m)
    print(f"train track: {'yes' if verdict.ok else f'no (illegal taken turn {_fmt_turn(verdict.witness)})'}")
    gs = gates(m)
    print("gates: " + " ".join("{" + ",".join(format_direction(d) for d in sorted(g)) + "}"
                               for g in gs))
    periodic, fixed = periodic_and_fixed_directions(m)
    print("fixed directions: " + " ".join(format_direction(d) for d in sorted(fixed)))
    print("periodic directions: " + " ".join(format_direction(d) for d in sorted(periodic)))
    if verdict.ok:
        lw = local_whitehead_graph(m)
        sw = stable_whitehead_graph(m)
        print(f"LW edges: {_fmt_turns(lw.edges)}")
        print(f"SW edges: {_fmt_turns(sw.edges)}")
        print("index list (per SW component): "
              + (", ".join(str(x) for x in index_list(sw)) or "(empty)"))
        print("note: SW is reported as the ideal Whitehead graph assuming the map "
              "is pNp-free; pNp-freeness is not verified")
        try:
            G = ltt_of_map(m)
            print(f"ltt structure: {G}")
            ok = validate_ltt(G)
            if not ok:
                print("  validation: " + "; ".join(ok.violations))
            print(f"birecurrent: {'yes' if is_birecurrent(G) else 'no'}")
        except LttRegimeError as exc:
            print(f"ltt structure: not constructed ({exc})")
    try:
        dec = stallings_fold_decomposition(m)
        gens = ", ".join(str(g) for g in dec.generators) or "(none)"
        print(f"fold decomposition: {len(dec.generators)} proper full folds: {gens}")
        if not dec.has_trivial_permutation():
            perm = " ".join(
                f"{format_direction(2 * i - 1)}->{format_direction(dec.final_permutation[2 * i - 2])}"
                for i in range(1, m.rank + 1))
            print(f"final homeomorphism: {perm}")
        rt = dec.compose_all()
        print(f"decomposition round-trip: {'exact' if rt == m else 'MISMATCH'}")
    except NotProperFullFolds as exc:
        print(f"fold decomposition: failed at step {exc.step}: {exc.description}")
    return 0


def _artifact(args, diagram, stem: str) -> None:
    out = _out_dir(args)
    if out is None or diagram is None:
        return
    fmt = getattr(args, "format", None)
    if fmt in (None, "json"):
        _write(out / f"{stem}.json", json.dumps(diagram_to_json(diagram), indent=2,
                                                sort_keys=True) + "\n")
    if fmt in (None, "dot"):
        _write(out / f"{stem}.dot", diagram_to_dot(diagram, stem))


def cmd_check_graph(args) -> int:
    target = _load_target(args)
    try:
        validate_target(target, args.rank)
    except InvalidTargetGraph as exc:
        print(f"invalid target graph: {exc}", file=sys.stderr)
        return 2
    result = target_verdict(target, args.rank)
    print(f"target: {len(target.vertices)} vertices, {len(target.edges)} edges")
    print(f"structures: {result.num_structures} total, {result.num_admissible} birecurrent")
    if result.diagram is not None:
        print(f"ID diagram: {len(result.diagram.components)} component(s), "
              f"{len(result.diagram.preliminary.edges)} preliminary edge(s)")
        for i, comp in enumerate(result.diagram.components):
            census = " ".join(format_direction(d) for d in sorted(comp.red_label_census))
            passing = "pass" if result.ip.per_component[i] else "fail"
            print(f"  component {i}: {len(comp.nodes)} nodes, {len(comp.edges)} edges, "
                  f"red labels {{{census}}} -> {passing}")
        classes = epp_classes(result.diagram)
        print(f"EPP classes of components: {len(classes)}")
        if args.max_loop_len:
            _report_loops(result.diagram, args.max_loop_len)
    print(f"verdict: {result.verdict}")
    if args.oracle_samples:
        _oracle_check(target, args)
    _artifact(args, result.diagram, f"diagram_r{args.rank}")
    return 0


def _report_loops(diagram, max_len: int) -> None:
    for i, comp in enumerate(diagram.components):
        base = comp.nodes[0]
        loops = find_loops(diagram, base, max_len)
        ok = sum(1 for lp in loops if verify_loop(diagram, lp).ok)
        print(f"  component {i}: {len(loops)} loop(s) of length <= {max_len} "
              f"at its first node; {ok} fully ideal")


def _oracle_check(target, args) -> None:
    structures = enumerate_structures(target, args.rank)
    rng = random.Random(args.seed)
    samples = structures if len(structures) <= args.oracle_samples \
        else rng.sample(structures, args.oracle_samples)
    bad = [G for G in samples if is_birecurrent(G) != brute_force_birecurrent(G)]
    print(f"birecurrency oracle agreement: {len(samples) - len(bad)}/{len(samples)}")
    if bad:
        print("DISAGREEMENT on:", bad[0])


def cmd_sweep(args) -> int:
    n = 2 * args.rank - 1
    if args.rank >= 4 and not args.full:
        entries = None
        targets = [("star", star_target(args.rank))]
        print(f"rank {args.rank}: star-only mode (use --full for the whole catalog; "
              f"expect hours)")
    else:
        entries = connected_simplicial_graphs(n)
        targets = [(e.id, e.graph()) for e in entries]
        print(f"catalog: {len(entries)} connected simplicial {n}-vertex graphs")
    rows = []
    for name, graph in targets:
        result = target_verdict(graph, args.rank)
        rows.append({
            "id": name,
            "edges": len(graph.edges),
            "structures": result.num_structures,
            "admissible": result.num_admissible,
            "components": len(result.diagram.components) if result.diagram else 0,
            "verdict": result.verdict,
        })
    width = max(len(r["id"]) for r in rows)
    print(f"{'id':<{width}}  edges  structures  admissible  components  verdict")
    for r in rows:
        print(f"{r['id']:<{width}}  {r['edges']:>5}  {r['structures']:>10}  "
              f"{r['admissible']:>10}  {r['components']:>10}  {r['verdict']}")
    flagged = [r for r in rows if r["verdict"] != INCONCLUSIVE]
    print(f"unachieved: {len(flagged)} of {len(rows)}")
    out = _out_dir(args)
    if out is not None:
        payload = {"rank": args.rank, "results": rows}
        _write(out / f"sweep_r{args.rank}.json",
               json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def cmd_export(args) -> int:
    if args.format not in ("dot", "json"):
        raise SystemExit(f"error: unknown format {args.format!r}")
    out = _out_dir(args) or Path(".")
    if args.what == "catalog":
        entries = connected_simplicial_graphs(2 * args.rank - 1)
        if args.format != "json":
            raise SystemExit("error: the catalog exports as json only")
        payload = [e.to_json() for e in entries]
        _write(out / f"catalog_n{2 * args.rank - 1}.json",
               json.dumps(payload, indent=2, sort_keys=True) + "\n")
        return 0
    if args.what == "structures":
        target = _load_target(args)
        try:
            validate_target(target, args.rank)
        except InvalidTargetGraph as exc:
            print(f"invalid target graph: {exc}", file=sys.stderr)
            return 2
        structures = enumerate_structures(target, args.rank,
                                          admissible_only=args.admissible_only)
        stem = f"structures_r{args.rank}" + ("_admissible" if args.admissible_only else "")
        if args.format == "json":
            payload = [G.to_json() for G in structures]
            _write(out / f"{stem}.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")
        else:
            text = "\n".join(ltt_to_dot(G, f"ltt_{i}") for i, G in enumerate(structures))
            _write(out / f"{stem}.dot", text)
        return 0
    if args.what == "diagram":
        target = _load_target(args)
        try:
            validate_target(target, args.rank)
        except InvalidTargetGraph as exc:
            print(f"invalid target graph: {exc}", file=sys.stderr)
            return 2
        diagram = id_diagram(target, args.rank)
        stem = f"diagram_r{args.rank}"
        if args.format == "json":
            _write(out / f"{stem}.json",
                   json.dumps(diagram_to_json(diagram), indent=2, sort_keys=True) + "\n")
        else:
            _write(out / f"{stem}.dot", diagram_to_dot(diagram, stem))
        return 0
    if args.what == "map-ltt":
        m = _load_map(args.input)
        G = ltt_of_map(m)
        if args.format == "json":
            _write(out / "ltt.json", json.dumps(G.to_json(), indent=2, sort_keys=True) + "\n")
        else:
            _write(out / "ltt.dot", ltt_to_dot(G))
        return 0
    raise SystemExit(f"error: unknown export target {args.what!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ttrose",
        description="Decide desk-scale unachievability of candidate ideal Whitehead "
                    "graphs via train track maps on roses.")
    parser.add_argument("--version", action="version", version=f"ttrose {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze-map", help="report on a rose self-map given as JSON")
    p.add_argument("input", help="path to a rose map JSON file, or - for stdin")
    p.set_defaults(func=cmd_analyze_map)

    p = sub.add_parser("check-graph", help="run the unachievability tests on a target graph")
    p.add_argument("input", nargs="?", help="path to a target graph JSON file")
    p.add_argument("--star", action="store_true", help="use the 2r-2 edge star target")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--max-loop-len", type=int, default=0,
                   help="also enumerate and verify loops up to this length")
    p.add_argument("--oracle-samples", type=int, default=0,
                   help="cross-check birecurrency against the brute-force oracle "
                        "on this many sampled structures")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--out", help="directory for DOT/JSON artifacts")
    p.add_argument("--format", choices=("dot", "json"), help="restrict artifact format")
    p.set_defaults(func=cmd_check_graph)

    p = sub.add_parser("sweep", help="run the verdict over the whole graph catalog")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--full", action="store_true",
                   help="sweep the full catalog even at rank >= 4 (slow)")
    p.add_argument("--out", help="directory for the machine-readable results")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", help="emit DOT/JSON artifacts")
    p.add_argument("what", choices=("diagram", "structures", "catalog", "map-ltt"))
    p.add_argument("input", nargs="?", help="input file for graph/map based exports")
    p.add_argument("--star", action="store_true")
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--admissible-only", action="store_true",
                   help="restrict structure exports to birecurrent structures")
    p.add_argument("--format", choices=("dot", "json"), default="json")
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
