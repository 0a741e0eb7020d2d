"""Graph corpora shared by the test modules."""

from itertools import combinations

from eulercount import families
from eulercount.multigraph import MultiGraph, eulerian_status


def fixed_corpus():
    return {
        "triangle": families.triangle(),
        "C4": families.cycle(4),
        "C6": families.cycle(6),
        "bowtie": families.bowtie(),
        "chain3": families.triangle_chain(3),
        "K5": families.complete(5),
        "octahedron": families.octahedron(),
        "P4x2": families.doubled_path(4),
    }


def exhaustive_eulerian(max_n=5, max_m=8, max_parallel=3):
    """Every labelled connected Eulerian multigraph in range, no isolated vertices."""
    for n in range(1, max_n + 1):
        pairs = list(combinations(range(n), 2))

        def assign(i, left, cur):
            if i == len(pairs):
                yield dict(cur)
                return
            for k in range(min(max_parallel, left) + 1):
                if k:
                    cur[pairs[i]] = k
                yield from assign(i + 1, left - k, cur)
                cur.pop(pairs[i], None)

        for mult in assign(0, max_m, {}):
            g = MultiGraph.from_multiplicities(n, mult)
            if eulerian_status(g).is_eulerian:
                yield g
