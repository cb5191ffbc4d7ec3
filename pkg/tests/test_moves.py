"""Extensions, switches, induced maps, and the admissible map checklist."""

import pytest

from oracles import EXAMPLE_MAP
from ttrose.diagram import build_preliminary, enumerate_structures, star_target
from ttrose.ltt import LttStructure, ltt_of_map
from ttrose.maps import Generator
from ttrose.moves import (
    GeneratingTriple,
    MissingImageEdge,
    MoveRejected,
    check_am,
    determining_edges,
    entering_generator,
    extension,
    induced_colored_map,
    is_admissible,
    switch,
)
from ttrose.rose import turn
from ttrose.catalog import connected_simplicial_graphs

A, A_, B, B_, C, C_ = 1, 2, 3, 4, 5, 6


@pytest.fixture(scope="module")
def example_structure():
    return ltt_of_map(EXAMPLE_MAP)


def test_determining_edges_of_example(example_structure):
    # red edge [a,b'] so the twice-achieved direction is a'; its purple edges
    assert determining_edges(example_structure) == [turn(A_, B), turn(A_, C),
                                                    turn(A_, C_)]


def test_determining_edges_reject_bar_pair_red_edge():
    G = LttStructure.make(3, B_, (B, B_), [(1, 5), (2, 3), (2, 5), (2, 6), (3, 6)])
    with pytest.raises(ValueError):
        determining_edges(G)


def test_extension_moves_only_the_red_edge(example_structure):
    det = turn(A_, C)
    t = extension(example_structure, det)
    assert t.kind == "extension"
    assert t.gen == Generator(3, a=A_, u=B_)
    assert t.source.red_vertex == example_structure.red_vertex
    assert t.source.purple_edges == example_structure.purple_edges
    assert t.source.red_edge == turn(B_, C)
    # determinism: repeated calls give the identical triple
    assert extension(example_structure, det) == t


def test_extension_rejects_bar_partner_attachment(example_structure):
    # d_l = b would make the red edge {b',b}
    with pytest.raises(MoveRejected):
        extension(example_structure, turn(A_, B))


def test_switch_relabels_and_recolors(example_structure):
    det = turn(A_, C)
    t = switch(example_structure, det)
    assert t.kind == "switch"
    assert t.gen == Generator(3, a=A_, u=B_)
    assert t.source.red_vertex == A_   # the old twice-achieved direction
    assert t.source.red_edge == turn(A_, C)
    # purple edges: a' is renamed to b' throughout the purple part
    expected = {turn(A, C), turn(B_, B), turn(B_, C), turn(B_, C_), turn(B, C_)}
    assert t.source.purple_edges == expected
    assert switch(example_structure, det) == t


def test_switch_rejects_bar_partner_attachment():
    # structure whose twice-achieved direction has a purple edge to its bar
    G = LttStructure.make(3, B_, (A, B_),
                          [(A_, A), (A_, B), (A_, C), (A_, C_), (B, C)])
    with pytest.raises(MoveRejected):
        switch(G, turn(A_, A))
    # the extension for the same determining edge exists and is a self-loop
    t = extension(G, turn(A_, A))
    assert t.source == G


def test_fold_example_triple_reconstruction():
    # the x -> xz fold: with x=a, y=b, z=c the destination has red vertex a',
    # red edge [a',c], and purple edges [c',b],[c',b'],[c',c],[a,b]
    dest = LttStructure.make(3, A_, (A_, C),
                             [(C_, B), (C_, B_), (C_, C), (A, B)])
    assert dest.twice_achieved == C_
    det = turn(C_, B_)
    t = switch(dest, det)
    assert t.gen == Generator(3, a=C_, u=A_)
    # the source is the destination with c' renamed to a' in the purple part
    # and the determining edge left behind as the red edge
    assert t.source.red_vertex == C_
    assert t.source.red_edge == turn(C_, B_)
    assert t.source.purple_edges == {(A_, B), (A_, B_), (A_, C), (A, B)}

    induced = induced_colored_map(t)
    assert induced.vertex_image(A_) == C_
    image_of = dict(induced.edge_map)
    assert image_of[turn(A_, B)] == turn(C_, B)
    assert image_of[turn(A_, B_)] == turn(C_, B_)
    assert image_of[turn(A_, C)] == turn(C_, C)
    assert image_of[turn(C_, B_)] == turn(C_, B_)  # old red lands on purple


def test_induced_map_missing_edge():
    dest = LttStructure.make(3, A_, (A_, C),
                             [(C_, B), (C_, B_), (C_, C), (A, B)])
    t = switch(dest, turn(C_, B_))
    corrupted = LttStructure.make(3, A_, (A_, C), [(C_, B), (C_, C), (A, B)])
    bad = GeneratingTriple(t.gen, t.source, corrupted)
    with pytest.raises(MissingImageEdge):
        induced_colored_map(bad)


def test_checklist_on_star_based_extension():
    # extensions out of a star structure have everything but birecurrency
    t = None
    for G in enumerate_structures(star_target(3), 3):
        for det in determining_edges(G):
            try:
                t = extension(G, det)
                break
            except MoveRejected:
                continue
        if t is not None:
            break
    assert t is not None
    record = check_am(t)
    assert not record.i_birecurrent
    assert record.ii_unachieved_in_illegal_turn
    assert record.iii_red_placement
    assert record.iv_images_purple
    assert record.v_red_edge_unique_at_red_vertex
    assert record.vi_generator_shape
    assert record.vii_purple_isomorphism
    assert not is_admissible(t)


def test_checklist_flags_mismatched_generator(example_structure):
    det = turn(A_, C)
    t = extension(example_structure, det)
    wrong = GeneratingTriple(Generator(3, a=A_, u=C_), t.source, t.dest)
    record = check_am(wrong)
    assert not record.vi_generator_shape
    assert not is_admissible(wrong)


def test_equivalence_on_all_destination_determined_triples():
    # over every admissible (source, dest) pair with the generator the
    # destination determines, the checklist passes iff the triple is an
    # admissible extension or switch
    target = connected_simplicial_graphs(5)[1].graph()
    nodes = enumerate_structures(target, 3, admissible_only=True)
    prelim = build_preliminary(target, 3, nodes=nodes)
    edge_keys = {(e.source, e.dest) for e in prelim.edges}
    for dest in nodes:
        gen = entering_generator(dest)
        for source in nodes:
            t = GeneratingTriple(gen, source, dest)
            assert check_am(t).all_pass() == is_admissible(t)
            if check_am(t).all_pass():
                assert (source, dest) in edge_keys


def test_purple_edges_map_injectively_on_diagram_edges():
    target = connected_simplicial_graphs(5)[1].graph()
    prelim = build_preliminary(target, 3)
    assert prelim.edges
    for e in prelim.edges:
        induced = induced_colored_map(e.triple)  # raises if not injective/onto
        purple_images = [img for (src, img) in induced.edge_map
                         if src in e.triple.source.purple_edges]
        assert len(purple_images) == len(set(purple_images))


def test_triple_dot_export(example_structure):
    from ttrose.moves import triple_to_dot
    t = extension(example_structure, turn(A_, C))
    dot = triple_to_dot(t)
    assert dot.startswith("digraph")
    assert "cluster_s" in dot and "cluster_d" in dot
    assert str(t.gen) in dot
