#!/usr/bin/env python3
"""Reproduce the headline computations.

Runs the star targets at ranks 3-5, sweeps the full rank-3 catalog of
connected simplicial 5-vertex graphs, and prints the red-label censuses
of the flagged graphs. Everything is deterministic; the whole run takes
well under a minute on a laptop.
"""

import time

from ttrose.catalog import connected_simplicial_graphs
from ttrose.diagram import (
    INCONCLUSIVE,
    epp_classes,
    star_target,
    target_verdict,
)
from ttrose.rose import format_direction


def star_runs() -> None:
    print("== star targets (2r-2 edges at one vertex) ==")
    for rank in (3, 4, 5):
        t0 = time.perf_counter()
        result = target_verdict(star_target(rank), rank)
        dt = time.perf_counter() - t0
        print(f"rank {rank}: {result.num_structures} structures, "
              f"{result.num_admissible} birecurrent -> {result.verdict}  ({dt:.2f}s)")


def rank3_sweep() -> None:
    print("\n== rank-3 sweep over the 21 connected simplicial 5-vertex graphs ==")
    t0 = time.perf_counter()
    catalog = connected_simplicial_graphs(5)
    rows = [(e, target_verdict(e.graph(), 3)) for e in catalog]
    dt = time.perf_counter() - t0
    print(f"{'id':6} {'edges':>5} {'structures':>10} {'admissible':>10} "
          f"{'components':>10}  verdict")
    for entry, result in rows:
        comps = len(result.diagram.components) if result.diagram else 0
        print(f"{entry.id:6} {len(entry.edges):>5} {result.num_structures:>10} "
              f"{result.num_admissible:>10} {comps:>10}  {result.verdict}")
    flagged = [(e, r) for e, r in rows if r.verdict != INCONCLUSIVE]
    print(f"unachieved: {len(flagged)} of {len(rows)}  ({dt:.1f}s)")

    print("\n== red-label censuses of the flagged graphs ==")
    for entry, result in flagged:
        if result.diagram is None:
            print(f"{entry.id}: no admissible structures (nothing to census)")
            continue
        census_counts: dict[tuple, int] = {}
        for comp in result.diagram.components:
            key = tuple(sorted(comp.red_label_census))
            census_counts[key] = census_counts.get(key, 0) + 1
        classes = epp_classes(result.diagram)
        print(f"{entry.id}: {len(result.diagram.components)} components, "
              f"{len(classes)} EPP class(es)")
        for key, count in sorted(census_counts.items()):
            labels = ",".join(format_direction(d) for d in key)
            print(f"   census {{{labels}}} x {count}")


if __name__ == "__main__":
    star_runs()
    rank3_sweep()
