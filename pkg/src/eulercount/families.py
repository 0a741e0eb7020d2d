"""Small named graph families used in tests, benchmarks and the CLI."""

from __future__ import annotations

from itertools import combinations

from .multigraph import MultiGraph


def cycle(n: int) -> MultiGraph:
    if n < 2:
        raise ValueError("a cycle needs at least two vertices")
    return MultiGraph(n, tuple((i, (i + 1) % n) for i in range(n)))


def triangle() -> MultiGraph:
    return cycle(3)


def bowtie() -> MultiGraph:
    """Two triangles sharing vertex 2."""
    return MultiGraph(5, ((0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)))


def triangle_chain(t: int) -> MultiGraph:
    """``t`` triangles glued in a path; triangle ``j`` spans vertices 2j..2j+2."""
    edges = []
    for j in range(t):
        a, b, c = 2 * j, 2 * j + 1, 2 * j + 2
        edges += [(a, b), (b, c), (c, a)]
    return MultiGraph(2 * t + 1, tuple(edges))


def complete(n: int) -> MultiGraph:
    return MultiGraph(n, tuple(combinations(range(n), 2)))


def octahedron() -> MultiGraph:
    """K_{2,2,2}: all pairs except the three antipodal ones."""
    antipodal = {(0, 1), (2, 3), (4, 5)}
    return MultiGraph(6, tuple(p for p in combinations(range(6), 2) if p not in antipodal))


def doubled_path(n: int) -> MultiGraph:
    edges = []
    for i in range(n - 1):
        edges += [(i, i + 1), (i, i + 1)]
    return MultiGraph(n, tuple(edges))


def single_vertex() -> MultiGraph:
    return MultiGraph(1, ())


FAMILIES = {
    "triangle": triangle,
    "bowtie": bowtie,
    "octahedron": octahedron,
    "single": single_vertex,
}

PARAMETRIC = {
    "cycle": cycle,
    "chain": triangle_chain,
    "complete": complete,
    "doubled-path": doubled_path,
}


def by_name(spec: str) -> MultiGraph:
    """Build a graph from names like ``bowtie``, ``cycle:6`` or ``chain:200``."""
    name, _, arg = spec.partition(":")
    if name in FAMILIES and not arg:
        return FAMILIES[name]()
    if name in PARAMETRIC and arg:
        return PARAMETRIC[name](int(arg))
    raise KeyError(f"unknown graph family {spec!r}")
