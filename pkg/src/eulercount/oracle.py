"""Brute-force and determinant-based ground truth.

Everything here is exponential on purpose and shares no code with the
dynamic program beyond the graph and scope types.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .multigraph import MultiGraph, NotEulerianError, eulerian_status, factorial_factor
from .treedecomp import NodeScope

DEFAULT_CAP = 14


class CapExceededError(ValueError):
    pass


def _check_cap(count: int, cap: int, what: str = "edges") -> None:
    if count > cap:
        raise CapExceededError(f"{count} {what} exceeds the brute-force cap of {cap}")


@dataclass(frozen=True)
class Orientation:
    """``arcs[e]`` is ``(tail, head)`` for edge id ``e``."""

    n: int
    arcs: tuple[tuple[int, int], ...]

    def charges(self) -> list[int]:
        c = [0] * self.n
        for t, h in self.arcs:
            c[t] += 1
            c[h] -= 1
        return c

    def is_eulerian(self) -> bool:
        return not any(self.charges())


def all_orientations(g: MultiGraph, edge_ids: Sequence[int] | None = None):
    ids = range(g.m) if edge_ids is None else edge_ids
    base = [g.edges[e] for e in ids]
    for flips in product((False, True), repeat=len(base)):
        yield tuple((v, u) if f else (u, v) for (u, v), f in zip(base, flips))


def enumerate_eulerian_orientations(g: MultiGraph, cap: int = DEFAULT_CAP) -> list[Orientation]:
    _check_cap(g.m, cap)
    found = []
    for arcs in all_orientations(g):
        o = Orientation(g.n, arcs)
        if o.is_eulerian():
            found.append(o)
    return found


def enumerate_euler_tours(g: MultiGraph, cap: int = DEFAULT_CAP) -> int:
    """Count Euler tours up to rotation by backtracking.

    Edge 0 is forced to be the first arc of the tour, in either direction,
    which picks exactly one representative per rotation class. A tour and
    its reversal are counted separately.
    """
    _check_cap(g.m, cap)
    if not eulerian_status(g).is_eulerian:
        raise NotEulerianError("graph is not Eulerian")
    if g.m == 0:
        return 1
    incident: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e, (u, v) in enumerate(g.edges):
        incident[u].append((e, v))
        incident[v].append((e, u))
    used = [False] * g.m
    used[0] = True

    def extend(at: int, start: int, remaining: int) -> int:
        if remaining == 0:
            return 1 if at == start else 0
        total = 0
        for e, x in incident[at]:
            if not used[e]:
                used[e] = True
                total += extend(x, start, remaining - 1)
                used[e] = False
        return total

    u, v = g.edges[0]
    return extend(v, u, g.m - 1) + extend(u, v, g.m - 1)


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free elimination."""
    a = [list(map(int, row)) for row in matrix]
    size = len(a)
    if any(len(row) != size for row in a):
        raise ValueError("matrix must be square")
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, size):
            row_i, aik = a[i], a[i][k]
            row_k = a[k]
            for j in range(k + 1, size):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[-1][-1]


def out_laplacian(o: Orientation) -> list[list[int]]:
    lap = [[0] * o.n for _ in range(o.n)]
    for t, h in o.arcs:
        lap[t][t] += 1
        lap[t][h] -= 1
    return lap


def count_in_arborescences(o: Orientation, r: int) -> int:
    """Spanning arborescences with every arc directed toward ``r`` (Matrix-Tree)."""
    lap = out_laplacian(o)
    keep = [v for v in range(o.n) if v != r]
    minor = [[lap[i][j] for j in keep] for i in keep]
    return bareiss_determinant(minor)


def enumerate_in_arborescences(o: Orientation, r: int) -> int:
    """Same count as :func:`count_in_arborescences`, by choosing one out-arc per vertex."""
    choices = []
    for v in range(o.n):
        if v == r:
            continue
        outs = [h for t, h in o.arcs if t == v]
        if not outs:
            return 0
        choices.append((v, outs))
    total = 0
    for heads in product(*(outs for _, outs in choices)):
        succ = {v: h for (v, _), h in zip(choices, heads)}
        if all(_reaches(v, r, succ) for v in succ):
            total += 1
    return total


def _reaches(v: int, r: int, succ: dict[int, int]) -> bool:
    steps = 0
    while v != r:
        v = succ[v]
        steps += 1
        if steps > len(succ):
            return False
    return True


def count_orbs_bruteforce(g: MultiGraph, r: int, cap: int = DEFAULT_CAP) -> int:
    if g.m == 0:
        return 1
    return sum(count_in_arborescences(o, r) for o in enumerate_eulerian_orientations(g, cap))


def best_theorem_count(g: MultiGraph, r: int = 0, cap: int = DEFAULT_CAP) -> int:
    """Euler tours via Eulerian orientations, arborescence determinants and degree factorials."""
    return factorial_factor(g) * count_orbs_bruteforce(g, r, cap)


def enumerate_forest_orbs(g: MultiGraph, scope: NodeScope, cap: int = DEFAULT_CAP) -> dict[tuple, int]:
    """Tally (partial orientation, in-forest) pairs on the lower graph of a node.

    Keys are ``(charges, roots)`` tuples aligned with ``scope.bag``.
    """
    edge_ids = sorted(scope.lower_edges)
    _check_cap(len(edge_ids), cap, "lower edges")
    bag = scope.bag
    inner = scope.vertices - set(bag)
    if not edge_ids:
        return {(tuple(0 for _ in bag), tuple(bag)): 1}
    tally: Counter = Counter()
    for arcs in all_orientations(g, edge_ids):
        charge = Counter()
        outs: dict[int, list[int]] = {}
        for t, h in arcs:
            charge[t] += 1
            charge[h] -= 1
            outs.setdefault(t, []).append(h)
        if any(charge[v] for v in inner):
            continue
        c_key = tuple(charge[x] for x in bag)
        # inner vertices must pick an out-arc; lower bag vertices may stay roots
        options = []
        for v in sorted(inner):
            if v not in outs:
                break
            options.append((v, outs[v]))
        else:
            for x in sorted(scope.lower):
                options.append((x, [None] + outs.get(x, [])))
            for heads in product(*(o for _, o in options)):
                succ = {v: h for (v, _), h in zip(options, heads) if h is not None}
                roots = _forest_roots(bag, succ)
                if roots is not None:
                    tally[(c_key, roots)] += 1
    return dict(tally)


def _forest_roots(bag: Sequence[int], succ: dict[int, int]) -> tuple[int, ...] | None:
    root_of = []
    limit = len(succ) + 1
    for x in bag:
        v, steps = x, 0
        while v in succ:
            v = succ[v]
            steps += 1
            if steps > limit:
                return None
        root_of.append(v)
    # every vertex must drain to a root; a cycle anywhere disqualifies the arc set
    for v in succ:
        u, steps = v, 0
        while u in succ:
            u = succ[u]
            steps += 1
            if steps > limit:
                return None
    return tuple(root_of)
