"""Generating triples: the extension and switch moves between structures.

Given a destination structure, its red vertex and red edge determine
the generator entering it; each purple edge at the twice-achieved
direction then determines one extension and one switch producing a
candidate source structure.  check_am records which of the admissible
map properties I-VII a triple satisfies; a triple is admissible exactly
when it is a birecurrent extension or switch.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ltt import LttStructure, is_birecurrent, validate_ltt
from .maps import Generator
from .rose import Turn, bar, format_direction, turn


class MoveRejected(ValueError):
    """The requested move would produce an invalid source structure."""


class InducedMapError(ValueError):
    """No induced map of colored subgraphs exists for the triple."""


class MissingImageEdge(InducedMapError):
    def __init__(self, edge: Turn):
        self.edge = edge
        super().__init__(f"image edge {edge} does not exist in the destination")


@dataclass(frozen=True)
class GeneratingTriple:
    """(generator fold, source structure, destination structure)."""

    gen: Generator
    source: LttStructure
    dest: LttStructure

    @property
    def kind(self) -> str | None:
        """'extension' when the source red vertex is the pre-unachieved
        direction, 'switch' when it is the pre-twice-achieved one."""
        if self.source.red_vertex == self.gen.u:
            return "extension"
        if self.source.red_vertex == self.gen.a:
            return "switch"
        return None

    def to_json(self) -> dict:
        return {
            "gen": {"a": format_direction(self.gen.a), "u": format_direction(self.gen.u)},
            "source": self.source.to_json(),
            "dest": self.dest.to_json(),
        }


def entering_generator(G: LttStructure) -> Generator:
    """The generator determined by the red vertex and red edge of G:
    u is the red vertex, a the bar partner of the red edge's purple end."""
    return Generator(G.rank, a=G.twice_achieved, u=G.red_vertex)


def determining_edges(G: LttStructure) -> list[Turn]:
    """Purple edges at the twice-achieved direction, in canonical order."""
    a = G.twice_achieved
    if a == G.red_vertex:
        raise ValueError("red edge joins a bar pair; run validate_ltt on this structure")
    out = sorted(e for e in G.purple_edges if a in e)
    return out


def _det_other_end(G: LttStructure, det: Turn) -> int:
    a = G.twice_achieved
    if det not in G.purple_edges:
        raise ValueError(f"determining edge {det} is not a purple edge of the structure")
    if a not in det:
        raise ValueError(f"determining edge {det} is not incident to the twice-achieved "
                         f"direction {a}")
    return det[1] if det[0] == a else det[0]


def _checked_source(gen: Generator, source: LttStructure, dest: LttStructure) -> GeneratingTriple:
    report = validate_ltt(source)
    if not report.ok:
        raise MoveRejected(f"move produces an invalid structure: {'; '.join(report.violations)}")
    return GeneratingTriple(gen, source, dest)


def extension(G: LttStructure, det: Turn) -> GeneratingTriple:
    """The extension determined by a purple edge at the twice-achieved
    direction: delete the red edge interior, then attach a new red edge
    from the red vertex to the determining edge's other endpoint.  The
    purple part is unchanged."""
    d_l = _det_other_end(G, det)
    u = G.red_vertex
    if d_l == bar(u):
        raise MoveRejected(f"extension red edge would join the bar pair of {u}")
    source = LttStructure.make(G.rank, u, turn(u, d_l), G.purple_edges)
    return _checked_source(entering_generator(G), source, G)


def switch(G: LttStructure, det: Turn) -> GeneratingTriple:
    """The switch determined by a purple edge at the twice-achieved
    direction: start from the purple part, attach the red edge at the
    determining edge's other endpoint, and exchange the labels of the
    red vertex and the twice-achieved direction.  The new red vertex is
    the old twice-achieved direction."""
    d_l = _det_other_end(G, det)
    u = G.red_vertex
    a = G.twice_achieved
    if d_l == bar(a):
        raise MoveRejected(f"switch red edge would join the bar pair of {a}")
    relabeled = []
    for x, y in G.purple_edges:
        x2 = u if x == a else x
        y2 = u if y == a else y
        relabeled.append((x2, y2))
    source = LttStructure.make(G.rank, a, turn(a, d_l), relabeled)
    return _checked_source(entering_generator(G), source, G)


@dataclass(frozen=True)
class InducedColoredMap:
    vertex_map: tuple[int, ...]  # image of direction d at index d-1
    edge_map: tuple[tuple[Turn, Turn], ...]

    def vertex_image(self, d: int) -> int:
        return self.vertex_map[d - 1]


def induced_colored_map(t: GeneratingTriple) -> InducedColoredMap:
    """The map of colored subgraphs induced by the triple's generator.

    Vertices map by the direction map (u to a, everything else fixed);
    every colored edge of the source must land on a colored edge of the
    destination, and the purple parts must correspond isomorphically.
    """
    n = 2 * t.gen.rank
    vm = list(range(1, n + 1))
    vm[t.gen.u - 1] = t.gen.a

    dest_pairs = t.dest.colored_pairs()
    dest_purple = t.dest.purple_edges
    edge_map: list[tuple[Turn, Turn]] = []
    purple_images: list[Turn] = []
    for x, y, color in sorted(t.source.colored):
        ix, iy = vm[x - 1], vm[y - 1]
        if ix == iy:
            raise InducedMapError(f"colored edge ({x},{y}) maps degenerately")
        image = turn(ix, iy)
        if image not in dest_pairs:
            raise MissingImageEdge(image)
        edge_map.append(((x, y), image))
        if color == "purple":
            purple_images.append(image)

    src_purple_vertices = t.source.purple_vertices
    image_vertices = {vm[d - 1] for d in src_purple_vertices}
    if image_vertices != t.dest.purple_vertices:
        raise InducedMapError("purple vertices do not map onto the destination's")
    if len(purple_images) != len(set(purple_images)):
        raise InducedMapError("purple edges do not map injectively")
    if set(purple_images) != set(dest_purple):
        raise InducedMapError("purple edges do not map onto the destination's")
    return InducedColoredMap(tuple(vm), tuple(edge_map))


def _purple_maps_isomorphically(t: GeneratingTriple) -> bool:
    try:
        induced_colored_map(t)
    except InducedMapError:
        return False
    return True


@dataclass(frozen=True)
class AmChecklist:
    """Admissible map properties I-VII for a single triple.

    Property VIII concerns a whole ideal decomposition loop and lives in
    validate_ideal_decomposition.
    """

    i_birecurrent: bool
    ii_unachieved_in_illegal_turn: bool
    iii_red_placement: bool
    iv_images_purple: bool
    v_red_edge_unique_at_red_vertex: bool
    vi_generator_shape: bool
    vii_purple_isomorphism: bool

    def all_pass(self) -> bool:
        return all((self.i_birecurrent, self.ii_unachieved_in_illegal_turn,
                    self.iii_red_placement, self.iv_images_purple,
                    self.v_red_edge_unique_at_red_vertex, self.vi_generator_shape,
                    self.vii_purple_isomorphism))


def _red_edge_unique_at_red_vertex(G: LttStructure) -> bool:
    reds = G.red_edges
    if len(reds) != 1:
        return False
    at_red = [(u, v) for u, v, _ in G.colored if G.red_vertex in (u, v)]
    return at_red == [reds[0]]


def check_am(t: GeneratingTriple) -> AmChecklist:
    gen, src, dst = t.gen, t.source, t.dest
    i = is_birecurrent(src) and is_birecurrent(dst)
    ii = src.red_vertex in (gen.u, gen.a)

    try:
        red_edge_dst = dst.red_edge
    except ValueError:
        red_edge_dst = None
    placement = red_edge_dst == turn(gen.u, bar(gen.a)) if gen.a != bar(gen.u) else False
    iii = dst.red_vertex == gen.u and placement

    n = 2 * gen.rank
    vm = list(range(1, n + 1))
    vm[gen.u - 1] = gen.a
    iv = True
    for x, y, _ in src.colored:
        ix, iy = vm[x - 1], vm[y - 1]
        if ix == iy or turn(ix, iy) not in dst.purple_edges:
            iv = False
            break

    v = _red_edge_unique_at_red_vertex(src) and _red_edge_unique_at_red_vertex(dst)
    vi = gen.a not in (gen.u, bar(gen.u)) and iii
    vii = _purple_maps_isomorphically(t)
    return AmChecklist(i, ii, iii, iv, v, vi, vii)


def is_admissible(t: GeneratingTriple) -> bool:
    """True iff both structures are birecurrent and the triple is the
    extension or switch determined by some purple edge of the destination."""
    if not (is_birecurrent(t.source) and is_birecurrent(t.dest)):
        return False
    try:
        dets = determining_edges(t.dest)
    except ValueError:
        return False
    for det in dets:
        for move in (extension, switch):
            try:
                candidate = move(t.dest, det)
            except MoveRejected:
                continue
            if candidate == t:
                return True
    return False


def _cluster_lines(G: LttStructure, prefix: str, label: str) -> list[str]:
    lines = [f'  subgraph cluster_{prefix} {{ label="{label}";']
    for d in sorted(G.purple_vertices | {G.red_vertex}):
        color = "red" if d == G.red_vertex else "purple"
        lines.append(f'    "{prefix}_{format_direction(d)}" '
                     f'[label="{format_direction(d)}", color={color}, fontcolor={color}];')
    for u, v, kind in G.all_edges():
        style = {"black": "color=black, penwidth=2", "purple": "color=purple",
                 "red": "color=red"}[kind]
        lines.append(f'    "{prefix}_{format_direction(u)}" -> "{prefix}_{format_direction(v)}" '
                     f'[dir=none, {style}];')
    lines.append("  }")
    return lines


def triple_to_dot(t: GeneratingTriple, name: str = "triple") -> str:
    """Source and destination structures side by side, with the generator
    as the connecting edge label."""
    lines = [f'digraph "{name}" {{']
    lines.extend(_cluster_lines(t.source, "s", "source"))
    lines.extend(_cluster_lines(t.dest, "d", "dest"))
    lines.append(f'  "s_{format_direction(t.gen.u)}" -> "d_{format_direction(t.gen.u)}" '
                 f'[label="{t.gen}", style=dashed, constraint=false];')
    lines.append("}")
    return "\n".join(lines) + "\n"
