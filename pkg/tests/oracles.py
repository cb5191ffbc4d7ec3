"""Independent oracles and random generators shared by the test suite.

Everything here re-derives answers straight from the definitions
(exhaustive assignment, direct iteration of maps, unpruned isomorphism
search) so that the library's faster code paths are checked against
implementations that share none of their shortcuts.
"""

from __future__ import annotations

import itertools
import random

from ttrose.ltt import LttStructure
from ttrose.maps import Generator, RoseMap, apply_map
from ttrose.rose import all_directions, bar, turn, turns_of
from ttrose.whitehead import WhiteheadGraph


def closure_by_iteration(m: RoseMap, max_power: int | None = None) -> frozenset:
    """Union of the turns of g^k(e) over oriented edges, by literally
    iterating the map until the union stabilizes."""
    if max_power is None:
        max_power = 4 * m.rank + 4
    words = {d: (d,) for d in all_directions(m.rank)}
    total: set = set()
    for _ in range(max_power):
        new_words = {}
        for d, w in words.items():
            image, cancelled = apply_map(m, w)
            assert not cancelled, "iterate cancelled: not a train track map"
            new_words[d] = image
        words = new_words
        round_turns: set = set()
        for w in words.values():
            round_turns |= turns_of(w)
        if round_turns <= total:
            return frozenset(total)
        total |= round_turns
    return frozenset(total)


def substitute_and_reduce(outer: RoseMap, word) -> tuple:
    """Word substitution with scan-and-restart free reduction (independent
    of the stack-based tighten)."""
    letters: list[int] = []
    for d in word:
        letters.extend(outer.word_of(d))
    changed = True
    while changed:
        changed = False
        for i in range(len(letters) - 1):
            if letters[i + 1] == bar(letters[i]):
                del letters[i:i + 2]
                changed = True
                break
    return tuple(letters)


def assignment_oracle_structures(target: WhiteheadGraph, rank: int) -> set[LttStructure]:
    """Every structure for the target, produced by brute force over all
    injections of direction labels onto the target's vertices."""
    dirs = list(all_directions(rank))
    verts = sorted(target.vertices, key=repr)
    out: set[LttStructure] = set()
    for labels in itertools.permutations(dirs, len(verts)):
        label_of = dict(zip(verts, labels))
        red = next(d for d in dirs if d not in labels)
        purple = [turn(label_of[u], label_of[v]) for u, v in target.edges]
        for attach in labels:
            if attach == bar(red):
                continue
            out.add(LttStructure.make(rank, red, turn(red, attach), purple))
    return out


def naive_isomorphic(g1: WhiteheadGraph, g2: WhiteheadGraph) -> bool:
    """Unpruned isomorphism search over all vertex bijections."""
    v1 = sorted(g1.vertices, key=repr)
    v2 = sorted(g2.vertices, key=repr)
    if len(v1) != len(v2) or len(g1.edges) != len(g2.edges):
        return False
    e1 = {frozenset(e) for e in g1.edges}
    for perm in itertools.permutations(v2):
        phi = dict(zip(v1, perm))
        if {frozenset((phi[a], phi[b])) for a, b in e1} == {frozenset(e) for e in g2.edges}:
            return True
    return False


def random_generator(rng: random.Random, rank: int) -> Generator:
    dirs = list(all_directions(rank))
    u = rng.choice(dirs)
    a = rng.choice([d for d in dirs if d not in (u, bar(u))])
    return Generator(rank, a=a, u=u)


def compose_generators(gens, rank: int) -> tuple[RoseMap, bool]:
    """Composite of a generator sequence plus a flag recording whether any
    cancellation happened along the way."""
    current = RoseMap.identity(rank)
    cancelled = False
    for g in gens:
        gm = g.as_rose_map()
        images = []
        for word in current.images:
            image, flag = apply_map(gm, word)
            cancelled = cancelled or flag
            images.append(image)
        current = RoseMap(rank, tuple(images))
    return current, cancelled


def random_clean_composite(rng: random.Random, rank: int, length: int,
                           max_tries: int = 200) -> tuple[RoseMap, tuple[Generator, ...]]:
    """A random composite of generators whose composition never cancels
    (the regime in which fold decompositions must succeed)."""
    for _ in range(max_tries):
        gens = tuple(random_generator(rng, rank) for _ in range(length))
        m, cancelled = compose_generators(gens, rank)
        if not cancelled:
            return m, gens
    raise AssertionError("could not sample a cancellation-free composite")


def random_connected_graph(rng: random.Random, n: int, extra: int) -> WhiteheadGraph:
    verts = list(range(n))
    rng.shuffle(verts)
    edges = set()
    for i in range(1, n):
        edges.add(tuple(sorted((verts[i], verts[rng.randrange(i)]))))
    pool = [p for p in itertools.combinations(range(n), 2) if p not in edges]
    rng.shuffle(pool)
    edges.update(pool[:extra])
    return WhiteheadGraph.build(range(n), edges)


def random_structure(rng: random.Random, target: WhiteheadGraph, rank: int) -> LttStructure:
    dirs = list(all_directions(rank))
    red = rng.choice(dirs)
    labels = [d for d in dirs if d != red]
    rng.shuffle(labels)
    label_of = dict(zip(sorted(target.vertices, key=repr), labels))
    purple = [turn(label_of[u], label_of[v]) for u, v in target.edges]
    attach = rng.choice([d for d in labels if d != bar(red)])
    return LttStructure.make(rank, red, turn(red, attach), purple)


EXAMPLE_MAP = RoseMap.from_strings(3, {
    "a": "abacbabac'abacbaba",
    "b": "bac'",
    "c": "ca'b'a'b'a'b'c'a'b'a'c",
})
