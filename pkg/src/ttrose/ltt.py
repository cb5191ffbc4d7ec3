"""Lamination train track structures and the Birecurrency Condition.

A structure merges the rose (black edges, one per petal) with a colored
local Whitehead graph on the 2r direction labels: 2r-1 purple vertices,
one red vertex, colored edges purple or red.  Smooth paths alternate
between black and colored edges; a structure is birecurrent when one
smooth biinfinite line can cross every edge infinitely often in both
directions, which we decide through the strongly connected components
of the transition digraph on directed edges (guarded by a brute-force
covering-cycle search).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .maps import RoseMap, is_train_track, periodic_and_fixed_directions, turns_taken_closure
from .rose import (
    Direction,
    Turn,
    all_directions,
    bar,
    check_rank,
    format_direction,
    parse_direction,
    turn,
)
from .whitehead import WhiteheadGraph, are_isomorphic

PURPLE = "purple"
RED = "red"
BLACK = "black"

ColoredEdge = tuple[int, int, str]  # (u, v, color) with u < v


@dataclass(frozen=True)
class LttStructure:
    """A pair-labeled colored train track graph on the directions 1..2r.

    Black edges are implicit (one per bar pair).  The colored edge set
    may describe an invalid structure; validate_ltt reports violations.
    """

    rank: int
    red_vertex: Direction
    colored: frozenset[ColoredEdge]

    @staticmethod
    def make(rank: int, red_vertex: Direction, red_edge: Sequence[int],
             purple_edges: Iterable[Sequence[int]]) -> "LttStructure":
        """Build a structure in the usual (r;3/2-r) shape: one red edge
        at the red vertex plus a purple graph on the other directions."""
        u, v = sorted(red_edge)
        colored = {(u, v, RED)}
        for e in purple_edges:
            a, b = sorted(e)
            colored.add((a, b, PURPLE))
        return LttStructure(rank, red_vertex, frozenset(colored))

    # --- derived pieces -------------------------------------------------

    @property
    def purple_edges(self) -> frozenset[Turn]:
        return frozenset((u, v) for u, v, c in self.colored if c == PURPLE)

    @property
    def red_edges(self) -> tuple[Turn, ...]:
        return tuple(sorted((u, v) for u, v, c in self.colored if c == RED))

    @property
    def red_edge(self) -> Turn:
        reds = self.red_edges
        if len(reds) != 1:
            raise ValueError(f"structure has {len(reds)} red edges, expected exactly 1")
        return reds[0]

    @property
    def purple_vertices(self) -> frozenset[int]:
        return frozenset(d for d in all_directions(self.rank) if d != self.red_vertex)

    def black_edges(self) -> list[Turn]:
        return [(2 * i - 1, 2 * i) for i in range(1, self.rank + 1)]

    def colored_pairs(self) -> frozenset[Turn]:
        return frozenset((u, v) for u, v, _ in self.colored)

    @property
    def attach_vertex(self) -> Direction:
        """The purple endpoint of the red edge (the label bar(d^a))."""
        u, v = self.red_edge
        return v if u == self.red_vertex else u

    @property
    def twice_achieved(self) -> Direction:
        """d^a: the bar partner of the red edge's purple endpoint."""
        return bar(self.attach_vertex)

    def all_edges(self) -> list[tuple[int, int, str]]:
        """Black plus colored edges in canonical order."""
        out = [(u, v, BLACK) for u, v in self.black_edges()]
        out.extend(sorted(self.colored))
        return sorted(out)

    def sort_key(self):
        return (self.rank, self.red_vertex, tuple(sorted(self.colored)))

    def __str__(self) -> str:
        red = ",".join(f"[{format_direction(u)},{format_direction(v)}]" for u, v in self.red_edges)
        purple = ",".join(f"[{format_direction(u)},{format_direction(v)}]"
                          for u, v in sorted(self.purple_edges))
        return (f"ltt(rank={self.rank}, red vertex {format_direction(self.red_vertex)}, "
                f"red {red}, purple {purple})")

    # --- serialization --------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "red_vertex": format_direction(self.red_vertex),
            "colored_edges": [
                {"u": format_direction(u), "v": format_direction(v), "color": c}
                for u, v, c in sorted(self.colored)
            ],
        }

    @staticmethod
    def from_json(data: dict) -> "LttStructure":
        rank = check_rank(int(data["rank"]))
        red_vertex = parse_direction(data["red_vertex"], rank)
        colored = set()
        for item in data["colored_edges"]:
            u = parse_direction(item["u"], rank)
            v = parse_direction(item["v"], rank)
            color = item["color"]
            if color not in (PURPLE, RED):
                raise ValueError(f"unknown edge color {color!r}")
            a, b = sorted((u, v))
            colored.add((a, b, color))
        return LttStructure(rank, red_vertex, frozenset(colored))


@dataclass(frozen=True)
class LttValidation:
    ok: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_ltt(G: LttStructure) -> LttValidation:
    """Check ltt1-ltt3, ltt(*)4 and tt1-tt3, plus the red-edge placement
    needed for the twice-achieved direction to be purple."""
    v: list[str] = []
    n = 2 * G.rank
    if not 1 <= G.red_vertex <= n:
        v.append(f"rank: red vertex {G.red_vertex} out of range 1..{n}")
        return LttValidation(False, tuple(v))
    for u, w, color in sorted(G.colored):
        if not (1 <= u <= n and 1 <= w <= n):
            v.append(f"rank: edge ({u},{w}) out of range")
        if u == w:
            v.append(f"ltt3/tt2: colored loop at {u}")
    pairs = [(u, w) for u, w, _ in G.colored]
    if len(pairs) != len(set(pairs)):
        dup = sorted({p for p in pairs if pairs.count(p) > 1})
        v.append(f"ltt3: duplicate colored edges on pairs {dup}")
    for u, w, color in sorted(G.colored):
        touches_red = G.red_vertex in (u, w)
        if color == RED and not touches_red:
            v.append(f"ltt2: red edge ({u},{w}) has no red endpoint")
        if color == PURPLE and touches_red:
            v.append(f"ltt2: purple edge ({u},{w}) touches the red vertex")
    reds = G.red_edges
    if len(reds) != 1:
        v.append(f"ltt4: expected a unique red edge, found {len(reds)}")
    elif G.red_vertex in reds[0] and bar(G.red_vertex) in reds[0]:
        v.append("red_pair: red edge joins the red vertex to its bar partner "
                 "(the twice-achieved direction would be red)")
    incident = {d: 0 for d in all_directions(G.rank)}
    for u, w, _ in G.colored:
        if 1 <= u <= n and 1 <= w <= n and u != w:
            incident[u] += 1
            incident[w] += 1
    bare = sorted(d for d, k in incident.items() if k == 0)
    if bare:
        v.append(f"tt1/tt3: directions {bare} meet no colored edge")
    return LttValidation(not v, tuple(v))


# --- construction from a train track map --------------------------------


class LttRegimeError(ValueError):
    """The map is outside the one-nonperiodic-direction regime."""


def ltt_of_map(m: RoseMap) -> LttStructure:
    """The structure G(g): colored edges are the taken turns, purple when
    both endpoints are periodic, black edges by bar pairing.

    Requires a train track map with exactly one nonperiodic direction.
    """
    verdict = is_train_track(m)
    if not verdict.ok:
        raise LttRegimeError(f"not a train track map (illegal turn {verdict.witness})")
    periodic, _ = periodic_and_fixed_directions(m)
    nonperiodic = sorted(set(all_directions(m.rank)) - set(periodic))
    if len(nonperiodic) != 1:
        raise LttRegimeError(
            f"expected exactly 1 nonperiodic direction, found {len(nonperiodic)}: {nonperiodic}")
    red_vertex = nonperiodic[0]
    closure = turns_taken_closure(m)
    colored = set()
    for t in closure.turns:
        color = PURPLE if (t[0] in periodic and t[1] in periodic) else RED
        colored.add((t[0], t[1], color))
    return LttStructure(m.rank, red_vertex, frozenset(colored))


# --- transition digraph and birecurrency --------------------------------
#
# Nodes are directed versions of every edge (black and colored); an arc
# e -> f exists when head(e) = tail(f), exactly one of e, f is black,
# and f is not the reverse of e.  A smooth non-backtracking path is
# exactly a walk in this digraph.


@dataclass(frozen=True)
class TransitionDigraph:
    edges: tuple[tuple[int, int, str], ...]      # undirected edges, canonical order
    nodes: tuple[tuple[int, int], ...]           # (edge_id, orientation)
    arcs: tuple[tuple[int, ...], ...]            # adjacency by node index

    def node_head(self, idx: int) -> int:
        edge_id, orient = self.nodes[idx]
        u, v, _ = self.edges[edge_id]
        return v if orient == 0 else u


def transition_digraph(G: LttStructure) -> TransitionDigraph:
    edges = tuple(G.all_edges())
    nodes = tuple((i, o) for i in range(len(edges)) for o in (0, 1))
    index = {node: k for k, node in enumerate(nodes)}

    def tail(node):
        edge_id, orient = node
        u, v, _ = edges[edge_id]
        return u if orient == 0 else v

    def head(node):
        edge_id, orient = node
        u, v, _ = edges[edge_id]
        return v if orient == 0 else u

    by_tail: dict[int, list[int]] = {}
    for k, node in enumerate(nodes):
        by_tail.setdefault(tail(node), []).append(k)

    arcs = []
    for k, node in enumerate(nodes):
        edge_id, orient = node
        out = []
        for k2 in by_tail.get(head(node), ()):
            edge_id2, orient2 = nodes[k2]
            if (edges[edge_id][2] == BLACK) == (edges[edge_id2][2] == BLACK):
                continue  # smooth paths alternate black/colored
            if edge_id2 == edge_id and orient2 != orient:
                continue  # no immediate backtracking
            out.append(k2)
        arcs.append(tuple(out))
    return TransitionDigraph(edges, nodes, tuple(arcs))


def _tarjan_scc(num_nodes: int, arcs: Sequence[Sequence[int]]) -> list[list[int]]:
    """Iterative Tarjan; components in reverse topological order."""
    index_of = [-1] * num_nodes
    lowlink = [0] * num_nodes
    on_stack = [False] * num_nodes
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(num_nodes):
        if index_of[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index_of[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for i in range(pi, len(arcs[v])):
                w = arcs[v][i]
                if index_of[w] == -1:
                    work[-1] = (v, i + 1)
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index_of[w])
            if recurse:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index_of[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)
    return sccs


@dataclass(frozen=True)
class BirecurrencyResult:
    ok: bool
    witness: tuple[tuple[int, int, str], ...] | None  # directed edges of a
    # covering strongly connected component: (u, v, kind) traversed u -> v

    def __bool__(self) -> bool:
        return self.ok


@functools.lru_cache(maxsize=None)
def birecurrency(G: LttStructure) -> BirecurrencyResult:
    """A structure is birecurrent iff some strongly connected component of
    the transition digraph (with at least one arc) covers every edge."""
    td = transition_digraph(G)
    num_edges = len(td.edges)
    for comp in _tarjan_scc(len(td.nodes), td.arcs):
        if len(comp) < 2:
            continue  # a lone directed edge supports no biinfinite line
        covered = {td.nodes[k][0] for k in comp}
        if len(covered) == num_edges:
            witness = []
            for k in sorted(comp):
                edge_id, orient = td.nodes[k]
                u, v, kind = td.edges[edge_id]
                witness.append((u, v, kind) if orient == 0 else (v, u, kind))
            return BirecurrencyResult(True, tuple(witness))
    return BirecurrencyResult(False, None)


def is_birecurrent(G: LttStructure) -> bool:
    return birecurrency(G).ok


def brute_force_birecurrent(G: LttStructure, bound: int | None = None) -> bool:
    """Oracle: search for a closed smooth non-backtracking edge path of
    length at most ``bound`` covering every edge of G.

    Such a cycle, repeated, is a biinfinite line crossing every edge
    infinitely often in both time directions, so its existence is
    equivalent to birecurrency.  The default bound is twice the number
    of directed edges.  Any covering cycle crosses the first edge, so
    the search may start there.
    """
    td = transition_digraph(G)
    num_edges = len(td.edges)
    num_nodes = len(td.nodes)
    if bound is None:
        bound = 2 * num_nodes
    if num_edges == 0:
        return False
    full = (1 << num_edges) - 1

    reverse_arcs: list[list[int]] = [[] for _ in range(num_nodes)]
    for k, out in enumerate(td.arcs):
        for k2 in out:
            reverse_arcs[k2].append(k)

    for start in (0, 1):  # both directions of edge 0
        # shortest arc-distance from each node back to start
        dist_back = {start: 0}
        frontier = [start]
        while frontier:
            nxt = []
            for k in frontier:
                for k2 in reverse_arcs[k]:
                    if k2 not in dist_back:
                        dist_back[k2] = dist_back[k] + 1
                        nxt.append(k2)
            frontier = nxt
        # a covering cycle through start needs every edge mutually reachable
        reach_fwd = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for k in frontier:
                for k2 in td.arcs[k]:
                    if k2 not in reach_fwd:
                        reach_fwd.add(k2)
                        nxt.append(k2)
            frontier = nxt
        usable = reach_fwd & set(dist_back)
        if len({td.nodes[k][0] for k in usable}) != num_edges:
            continue

        start_mask = 1 << td.nodes[start][0]
        seen = {(start, start_mask)}
        frontier = [(start, start_mask)]
        depth = 0
        found = False
        while frontier and depth < bound and not found:
            depth += 1
            nxt = []
            for node, mask in frontier:
                for k2 in td.arcs[node]:
                    if k2 not in dist_back or depth + dist_back[k2] > bound:
                        continue
                    mask2 = mask | (1 << td.nodes[k2][0])
                    if mask2 == full:
                        # close up along a shortest path back to start
                        found = True
                        break
                    state = (k2, mask2)
                    if state not in seen:
                        seen.add(state)
                        nxt.append(state)
                if found:
                    break
            frontier = nxt
        if found:
            return True
    return False


# --- the purple subgraph and smooth realization --------------------------


def pi_graph(G: LttStructure) -> WhiteheadGraph:
    """The potential ideal Whitehead graph: purple vertices and edges."""
    return WhiteheadGraph.build(G.purple_vertices, G.purple_edges)


def matches_target(G: LttStructure, target: WhiteheadGraph) -> bool:
    """Does the purple subgraph realize the target graph, forgetting labels?"""
    return are_isomorphic(pi_graph(G), target)


def realize_edge_path_smooth(G: LttStructure, word: Sequence[int]) -> list[tuple[int, int, str]]:
    """The smooth path in G corresponding to an edge path of the rose.

    An edge path e_1 .. e_k lifts to black [d_1, bar d_1], colored
    [bar d_1, d_2], black [d_2, bar d_2], ...; it exists iff every turn
    crossed is a colored edge of G.  Raises ValueError otherwise.
    """
    if not word:
        return []
    pairs = G.colored_pairs()
    path: list[tuple[int, int, str]] = []
    for i, d in enumerate(word):
        path.append((d, bar(d), BLACK))
        if i + 1 < len(word):
            t = turn(bar(d), word[i + 1])
            if t not in pairs:
                raise ValueError(f"turn {t} is not a colored edge of the structure")
            path.append((bar(d), word[i + 1], "colored"))
    return path


def map_realizes_images_smoothly(m: RoseMap, G: LttStructure) -> bool:
    """Every edge-image word of m lifts to a smooth path in G."""
    try:
        for word in m.images:
            realize_edge_path_smooth(G, word)
    except ValueError:
        return False
    return True


# --- DOT export ----------------------------------------------------------


def ltt_to_dot(G: LttStructure, name: str = "ltt") -> str:
    lines = [f'graph "{name}" {{']
    lines.append("  layout=circo;")
    for d in all_directions(G.rank):
        color = "red" if d == G.red_vertex else "purple"
        lines.append(f'  "{format_direction(d)}" [color={color}, fontcolor={color}];')
    for u, v, kind in G.all_edges():
        style = {"black": "color=black, penwidth=2",
                 PURPLE: "color=purple",
                 RED: "color=red"}[kind]
        lines.append(f'  "{format_direction(u)}" -- "{format_direction(v)}" [{style}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
