"""Ideal decomposition diagrams and the Irreducibility Potential Test.

For a candidate target graph on 2r-1 vertices we enumerate every
indexed pair-labeled structure realizing it, keep the birecurrent ones
as nodes, generate extension and switch edges backwards from each node,
and extract the maximal strongly connected subgraphs.  A component
passes the Irreducibility Potential Test when every edge pair labels
the red vertex of some node; if no component passes (in particular if
there are no components at all), no ideally decomposed representative
exists and the target is unachieved.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from .ltt import LttRegimeError, LttStructure, is_birecurrent, ltt_of_map
from .maps import (
    FoldDecomposition,
    IdealDecompositionReport,
    identity_permutation,
    is_train_track,
    validate_ideal_decomposition,
)
from .moves import GeneratingTriple, MoveRejected, determining_edges, extension, switch
from .rose import Turn, all_directions, bar, check_rank, edge_index, format_direction, turn
from .whitehead import WhiteheadGraph

UNACHIEVED_BIRECURRENCY = "UnachievedByBirecurrency"
UNACHIEVED_IRREDUCIBILITY = "UnachievedByIrreducibilityPotential"
INCONCLUSIVE = "Inconclusive"


class InvalidTargetGraph(ValueError):
    """The candidate graph is not connected, simplicial, on 2r-1 vertices."""


def validate_target(target: WhiteheadGraph, rank: int) -> None:
    check_rank(rank)
    expected = 2 * rank - 1
    if len(target.vertices) != expected:
        raise InvalidTargetGraph(
            f"target has {len(target.vertices)} vertices, rank {rank} needs {expected}")
    if not target.is_connected():
        raise InvalidTargetGraph("target graph is not connected")


def target_from_json(data: dict) -> WhiteheadGraph:
    edges = [tuple(e) for e in data["edges"]]
    vertices = set(data.get("vertices", ()))
    for e in edges:
        vertices.update(e)
    return WhiteheadGraph.build(vertices, edges)


def target_to_json(target: WhiteheadGraph) -> dict:
    return {
        "vertices": sorted(target.vertices, key=repr),
        "edges": [list(e) for e in target.sorted_edges()],
    }


def star_target(rank: int) -> WhiteheadGraph:
    """The graph of 2r-2 edges adjoined at a single vertex, on 2r-1 vertices."""
    n = 2 * rank - 1
    return WhiteheadGraph.build(range(n), [(0, i) for i in range(1, n)])


def _is_star(target: WhiteheadGraph) -> bool:
    n = len(target.vertices)
    if n < 3 or len(target.edges) != n - 1:
        return False
    degrees = sorted(target.degree(v) for v in target.vertices)
    return degrees == [1] * (n - 1) + [n - 1]


# --- structure enumeration ------------------------------------------------


def _iter_structures(target: WhiteheadGraph, rank: int) -> Iterator[LttStructure]:
    dirs = list(all_directions(rank))
    if _is_star(target):
        # a labeled star is determined by its center label
        for red in dirs:
            labels = [d for d in dirs if d != red]
            for center in labels:
                purple = [turn(center, leaf) for leaf in labels if leaf != center]
                for attach in labels:
                    if attach == bar(red):
                        continue
                    yield LttStructure.make(rank, red, turn(red, attach), purple)
        return
    tverts = sorted(target.vertices, key=repr)
    tedges = [(tverts.index(u), tverts.index(v)) for u, v in target.sorted_edges()]
    for red in dirs:
        labels = [d for d in dirs if d != red]
        seen_purple: set[tuple] = set()
        for perm in itertools.permutations(labels):
            purple = tuple(sorted(turn(perm[i], perm[j]) for i, j in tedges))
            if purple in seen_purple:
                continue
            seen_purple.add(purple)
            for attach in labels:
                if attach == bar(red):
                    continue
                yield LttStructure.make(rank, red, turn(red, attach), purple)


def enumerate_structures(target: WhiteheadGraph, rank: int,
                         admissible_only: bool = False) -> list[LttStructure]:
    """All distinct indexed pair-labeled structures whose purple part is a
    labeled copy of the target, over every label assignment respecting the
    bar pairing and every red edge attachment away from the red vertex's
    bar partner.  Filtered by birecurrency when requested."""
    validate_target(target, rank)
    structures = sorted(set(_iter_structures(target, rank)), key=LttStructure.sort_key)
    if admissible_only:
        structures = [G for G in structures if is_birecurrent(G)]
    return structures


# --- edge pair permutations (EPP) -----------------------------------------


def epp_elements(rank: int) -> list[tuple[int, ...]]:
    """All edge pair permutations as direction maps: permute the petal
    indices and optionally flip orientation within each pair."""
    out = []
    for perm in itertools.permutations(range(1, rank + 1)):
        for flips in itertools.product((False, True), repeat=rank):
            sigma = [0] * (2 * rank)
            for i in range(1, rank + 1):
                j = perm[i - 1]
                fwd, bwd = 2 * j - 1, 2 * j
                if flips[i - 1]:
                    fwd, bwd = bwd, fwd
                sigma[2 * i - 2] = fwd
                sigma[2 * i - 1] = bwd
            out.append(tuple(sigma))
    return out


def epp_structure(sigma: Sequence[int], G: LttStructure) -> LttStructure:
    colored = frozenset(
        (*sorted((sigma[u - 1], sigma[v - 1])), c) for u, v, c in G.colored)
    return LttStructure(G.rank, sigma[G.red_vertex - 1], colored)


def epp_turn(sigma: Sequence[int], t: Turn) -> Turn:
    return turn(sigma[t[0] - 1], sigma[t[1] - 1])


def epp_min_form(G: LttStructure) -> tuple:
    """Canonical key of the EPP orbit of a structure."""
    return min(epp_structure(s, G).sort_key() for s in epp_elements(G.rank))


def epp_classes_of_structures(structures: Sequence[LttStructure]) -> list[list[LttStructure]]:
    """Group structures into EPP orbits; classes and members canonically ordered."""
    classes: dict[tuple, list[LttStructure]] = {}
    for G in structures:
        classes.setdefault(epp_min_form(G), []).append(G)
    return [sorted(v, key=LttStructure.sort_key) for _, v in sorted(classes.items())]


# --- the preliminary diagram and its strongly connected components --------


@dataclass(frozen=True)
class DiagramEdge:
    triple: GeneratingTriple
    kind: str  # "extension" | "switch"
    det: Turn  # the determining purple edge in the destination

    @property
    def source(self) -> LttStructure:
        return self.triple.source

    @property
    def dest(self) -> LttStructure:
        return self.triple.dest

    def sort_key(self):
        return (self.source.sort_key(), self.dest.sort_key(), self.kind, self.det)


@dataclass(frozen=True)
class PreliminaryDiagram:
    rank: int
    target: WhiteheadGraph
    nodes: tuple[LttStructure, ...]
    edges: tuple[DiagramEdge, ...]


def build_preliminary(target: WhiteheadGraph, rank: int,
                      nodes: Sequence[LttStructure] | None = None) -> PreliminaryDiagram:
    """Nodes are the admissible structures; for each node and each
    determining edge, the extension and the switch contribute an edge
    whenever the constructed source is admissible."""
    if nodes is None:
        nodes = enumerate_structures(target, rank, admissible_only=True)
    node_set = set(nodes)
    edges: list[DiagramEdge] = []
    for dest in nodes:
        for det in determining_edges(dest):
            for kind, move in (("extension", extension), ("switch", switch)):
                try:
                    t = move(dest, det)
                except MoveRejected:
                    continue
                if t.source not in node_set:
                    # construction preserves the purple graph up to labels,
                    # so exclusion can only mean a non-birecurrent source
                    assert not is_birecurrent(t.source), \
                        "admissible source missing from the enumeration"
                    continue
                edges.append(DiagramEdge(t, kind, det))
    edges.sort(key=DiagramEdge.sort_key)
    return PreliminaryDiagram(rank, target, tuple(nodes), tuple(edges))


@dataclass(frozen=True)
class DiagramComponent:
    nodes: tuple[LttStructure, ...]
    edges: tuple[DiagramEdge, ...]

    @property
    def red_label_census(self) -> frozenset[int]:
        return frozenset(G.red_vertex for G in self.nodes)

    def pairs_covered(self) -> frozenset[int]:
        return frozenset(edge_index(d) for d in self.red_label_census)

    def sort_key(self):
        return tuple(G.sort_key() for G in self.nodes)


@dataclass(frozen=True)
class IdDiagram:
    rank: int
    target: WhiteheadGraph
    preliminary: PreliminaryDiagram
    components: tuple[DiagramComponent, ...]


def _scc_indices(num_nodes: int, arcs: Sequence[Sequence[int]]) -> list[list[int]]:
    from .ltt import _tarjan_scc
    return _tarjan_scc(num_nodes, arcs)


def id_diagram(target: WhiteheadGraph, rank: int,
               preliminary: PreliminaryDiagram | None = None) -> IdDiagram:
    """Disjoint union of the maximal strongly connected subgraphs of the
    preliminary diagram (keeping components that carry at least one edge)."""
    if preliminary is None:
        preliminary = build_preliminary(target, rank)
    index = {G: i for i, G in enumerate(preliminary.nodes)}
    arcs: list[list[int]] = [[] for _ in preliminary.nodes]
    for e in preliminary.edges:
        arcs[index[e.source]].append(index[e.dest])
    components = []
    for comp in _scc_indices(len(preliminary.nodes), arcs):
        comp_set = set(comp)
        comp_edges = tuple(e for e in preliminary.edges
                           if index[e.source] in comp_set and index[e.dest] in comp_set)
        if not comp_edges:
            continue
        comp_nodes = tuple(sorted((preliminary.nodes[i] for i in comp),
                                  key=LttStructure.sort_key))
        components.append(DiagramComponent(comp_nodes, comp_edges))
    components.sort(key=DiagramComponent.sort_key)
    return IdDiagram(rank, target, preliminary, tuple(components))


# --- irreducibility potential test and EPP reduction ----------------------


@dataclass(frozen=True)
class IpTestResult:
    per_component: tuple[bool, ...]
    overall_unachieved: bool  # no component covers every edge pair


def irreducibility_potential_test(diagram: IdDiagram) -> IpTestResult:
    all_pairs = frozenset(range(1, diagram.rank + 1))
    verdicts = tuple(comp.pairs_covered() == all_pairs for comp in diagram.components)
    return IpTestResult(verdicts, not any(verdicts))


def _epp_edge(sigma: Sequence[int], e: DiagramEdge) -> DiagramEdge:
    from .maps import Generator
    gen = Generator(e.triple.gen.rank, a=sigma[e.triple.gen.a - 1], u=sigma[e.triple.gen.u - 1])
    t = GeneratingTriple(gen, epp_structure(sigma, e.source), epp_structure(sigma, e.dest))
    return DiagramEdge(t, e.kind, epp_turn(sigma, e.det))


def _epp_component(sigma: Sequence[int], comp: DiagramComponent) -> DiagramComponent:
    nodes = tuple(sorted((epp_structure(sigma, G) for G in comp.nodes),
                         key=LttStructure.sort_key))
    edges = tuple(sorted((_epp_edge(sigma, e) for e in comp.edges), key=DiagramEdge.sort_key))
    return DiagramComponent(nodes, edges)


def epp_classes(diagram: IdDiagram) -> list[list[int]]:
    """Indices of EPP-isomorphic components, grouped; the same permutation
    must carry every node and edge of one component onto the other."""
    sigmas = epp_elements(diagram.rank)
    keys = []
    for comp in diagram.components:
        keys.append(min(_epp_component(s, comp).sort_key() for s in sigmas))
    classes: dict[tuple, list[int]] = {}
    for i, key in enumerate(keys):
        classes.setdefault(key, []).append(i)
    return [v for _, v in sorted(classes.items())]


# --- loops -----------------------------------------------------------------


def find_loops(diagram: IdDiagram, node: LttStructure, max_len: int) -> list[tuple[DiagramEdge, ...]]:
    """Closed edge paths based at a node, up to the given length."""
    comp = None
    for c in diagram.components:
        if node in c.nodes:
            comp = c
            break
    if comp is None:
        return []
    out_edges: dict[LttStructure, list[DiagramEdge]] = {}
    for e in comp.edges:
        out_edges.setdefault(e.source, []).append(e)
    loops: list[tuple[DiagramEdge, ...]] = []

    def walk(current: LttStructure, path: list[DiagramEdge]) -> None:
        if path and current == node:
            loops.append(tuple(path))
        if len(path) >= max_len:
            return
        for e in out_edges.get(current, ()):
            path.append(e)
            walk(e.dest, path)
            path.pop()

    walk(node, [])
    return loops


@dataclass(frozen=True)
class LoopReport:
    train_track: bool
    ideal: IdealDecompositionReport
    basepoint_matches: bool
    details: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.train_track and self.ideal.ok and self.basepoint_matches


def verify_loop(diagram: IdDiagram, edges: Sequence[DiagramEdge]) -> LoopReport:
    """Compose the loop's generators and check the composite: train track,
    ideal decomposition clauses (including the loop-level property VIII and
    the rotationless proxy), and that its structure is the basepoint."""
    if not edges:
        raise ValueError("empty loop")
    for e1, e2 in zip(edges, edges[1:]):
        if e1.dest != e2.source:
            raise ValueError("loop edges are not consecutive")
    if edges[-1].dest != edges[0].source:
        raise ValueError("edge sequence is not closed")
    rank = diagram.rank
    gens = tuple(e.triple.gen for e in edges)
    dec = FoldDecomposition(rank, gens, identity_permutation(rank))
    composite = dec.compose_all()
    details: list[str] = []
    tt = is_train_track(composite)
    if not tt.ok:
        details.append(f"composite is not a train track (illegal turn {tt.witness})")
    ideal = validate_ideal_decomposition(dec)
    details.extend(ideal.details)
    basepoint = edges[0].source
    matches = False
    try:
        matches = ltt_of_map(composite) == basepoint
        if not matches:
            details.append("structure of the composite differs from the basepoint")
    except LttRegimeError as exc:
        details.append(f"composite has no structure: {exc}")
    return LoopReport(tt.ok, ideal, matches, tuple(details))


# --- verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class VerdictResult:
    verdict: str
    num_structures: int
    num_admissible: int
    diagram: IdDiagram | None
    ip: IpTestResult | None


def target_verdict(target: WhiteheadGraph, rank: int) -> VerdictResult:
    """UnachievedByBirecurrency when no admissible structure exists, else
    UnachievedByIrreducibilityPotential when the test fails for every
    component, else Inconclusive (the tests are necessary, not sufficient)."""
    raw = enumerate_structures(target, rank, admissible_only=False)
    admissible = [G for G in raw if is_birecurrent(G)]
    if not admissible:
        return VerdictResult(UNACHIEVED_BIRECURRENCY, len(raw), 0, None, None)
    prelim = build_preliminary(target, rank, nodes=admissible)
    diagram = id_diagram(target, rank, preliminary=prelim)
    ip = irreducibility_potential_test(diagram)
    verdict = UNACHIEVED_IRREDUCIBILITY if ip.overall_unachieved else INCONCLUSIVE
    return VerdictResult(verdict, len(raw), len(admissible), diagram, ip)


# --- export -----------------------------------------------------------------


def _node_id(G: LttStructure) -> str:
    digest = hashlib.sha256(json.dumps(G.to_json(), sort_keys=True).encode()).hexdigest()
    return digest[:10]


def diagram_to_json(diagram: IdDiagram) -> dict:
    prelim = diagram.preliminary
    node_list = list(prelim.nodes)
    node_index = {G: i for i, G in enumerate(node_list)}
    return {
        "rank": diagram.rank,
        "target": target_to_json(diagram.target),
        "nodes": [G.to_json() for G in node_list],
        "edges": [
            {
                "source": node_index[e.source],
                "dest": node_index[e.dest],
                "kind": e.kind,
                "gen": {"a": format_direction(e.triple.gen.a),
                        "u": format_direction(e.triple.gen.u)},
                "det": [format_direction(e.det[0]), format_direction(e.det[1])],
            }
            for e in prelim.edges
        ],
        "components": [
            {
                "nodes": [node_index[G] for G in comp.nodes],
                "red_label_census": sorted(format_direction(d)
                                           for d in comp.red_label_census),
                "pairs_covered": sorted(comp.pairs_covered()),
            }
            for comp in diagram.components
        ],
    }


def diagram_from_json(data: dict) -> IdDiagram:
    from .maps import Generator
    from .rose import parse_direction

    rank = int(data["rank"])
    target = target_from_json(data["target"])
    nodes = tuple(LttStructure.from_json(d) for d in data["nodes"])
    edges = []
    for e in data["edges"]:
        a = parse_direction(e["gen"]["a"], rank)
        u = parse_direction(e["gen"]["u"], rank)
        det = turn(parse_direction(e["det"][0], rank), parse_direction(e["det"][1], rank))
        triple = GeneratingTriple(Generator(rank, a=a, u=u),
                                  nodes[e["source"]], nodes[e["dest"]])
        edges.append(DiagramEdge(triple, e["kind"], det))
    prelim = PreliminaryDiagram(rank, target, nodes, tuple(edges))
    components = []
    for c in data["components"]:
        comp_nodes = tuple(nodes[i] for i in c["nodes"])
        comp_set = set(comp_nodes)
        comp_edges = tuple(e for e in prelim.edges
                           if e.source in comp_set and e.dest in comp_set)
        components.append(DiagramComponent(comp_nodes, comp_edges))
    return IdDiagram(rank, target, prelim, tuple(components))


def diagram_to_dot(diagram: IdDiagram, name: str = "id_diagram",
                   preliminary: bool = False) -> str:
    """Components (or the whole preliminary diagram) with hashed node ids;
    a legend comment line spells out each node's structure."""
    prelim = diagram.preliminary
    lines = [f'digraph "{name}" {{']
    if preliminary:
        shown_nodes = list(prelim.nodes)
        shown_edges = list(prelim.edges)
        for G in shown_nodes:
            lines.append(f'  "{_node_id(G)}" [shape=box];')
    else:
        shown_nodes = []
        shown_edges = []
        for ci, comp in enumerate(diagram.components):
            lines.append(f'  subgraph cluster_{ci} {{ label="component {ci}";')
            for G in comp.nodes:
                lines.append(f'    "{_node_id(G)}" [shape=box];')
            lines.append("  }")
            shown_nodes.extend(comp.nodes)
            shown_edges.extend(comp.edges)
    for e in shown_edges:
        label = f"{e.kind[:3]} {e.triple.gen}"
        lines.append(f'  "{_node_id(e.source)}" -> "{_node_id(e.dest)}" [label="{label}"];')
    lines.append("}")
    legend = [f"// {_node_id(G)} = {G}" for G in shown_nodes]
    return "\n".join(lines + legend) + "\n"
