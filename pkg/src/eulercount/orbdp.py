"""Orb counting by dynamic programming over a nice tree decomposition.

A table maps ``(charges, roots)`` to a count. Both tuples are aligned with
the node's sorted bag: ``charges[j]`` is out-degree minus in-degree of bag
vertex ``bag[j]`` in the partial orientation of the lower graph, and
``roots[j]`` is the bag vertex at the root of its in-forest tree.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from math import comb

from .multigraph import MultiGraph, factorial_factor, require_eulerian
from .treedecomp import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    DecompositionError,
    NiceTreeDecomposition,
    NodeScope,
    TreeDecomposition,
    compute_scopes,
    make_nice,
    min_fill_decompose,
    validate_decomposition,
)

Key = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class DpTable:
    bag: tuple[int, ...]
    entries: dict[Key, int]

    def __len__(self) -> int:
        return len(self.entries)


def leaf_table(scope: NodeScope) -> DpTable:
    if scope.kind != LEAF:
        raise ValueError(f"node {scope.node} is not a leaf")
    (w,) = scope.bag
    return DpTable(scope.bag, {((0,), (w,)): 1})


def introduce_table(scope: NodeScope, child: DpTable) -> DpTable:
    if scope.kind != INTRODUCE:
        raise ValueError(f"node {scope.node} is not an introduce node")
    w = scope.vertex
    pos = bisect_left(child.bag, w)
    if child.bag[:pos] + (w,) + child.bag[pos:] != scope.bag:
        raise ValueError("child table bag does not match the introduce node")
    entries = {
        (c[:pos] + (0,) + c[pos:], s[:pos] + (w,) + s[pos:]): v for (c, s), v in child.entries.items()
    }
    return DpTable(scope.bag, entries)


def _bounded_vectors(bounds: list[int], target: int):
    """All ``q`` with ``0 <= q[j] <= bounds[j]`` and ``sum(q) == target``."""
    if not bounds:
        if target == 0:
            yield ()
        return
    head, rest = bounds[0], bounds[1:]
    room = sum(rest)
    for q0 in range(max(0, target - room), min(head, target) + 1):
        for tail in _bounded_vectors(rest, target - q0):
            yield (q0,) + tail


def forget_table(scope: NodeScope, child_scope: NodeScope, child: DpTable) -> DpTable:
    """Attach the forgotten vertex ``w`` and its edges into the bag.

    For every child entry and every split ``q`` of the ``w``-edges (``q[x]``
    of the ``m[x]`` edges to ``x`` point away from ``w``) that balances
    ``w``, the in-forest is extended in every admissible way: ``w`` takes an
    out-arc if it was a root, and any current root that is a neighbour of
    ``w`` may hang itself below ``w`` through one of its in-arcs.
    """
    if scope.kind != FORGET:
        raise ValueError(f"node {scope.node} is not a forget node")
    w = scope.vertex
    if child.bag != child_scope.bag or tuple(x for x in child.bag if x != w) != scope.bag:
        raise ValueError("child table bag does not match the forget node")
    wpos = child.bag.index(w)
    bag = scope.bag
    index = {x: j for j, x in enumerate(bag)}
    nbrs = [x for x in bag if scope.forget_multiplicity.get(x)]
    mult = [scope.forget_multiplicity[x] for x in nbrs]
    total_m = sum(mult)
    out = defaultdict(int)

    for (c_child, s_child), value in child.entries.items():
        cw = c_child[wpos]
        # sum(m - 2q) == cw  <=>  sum(q) == (total_m - cw) / 2
        if (total_m - cw) % 2:
            continue
        c_rest = c_child[:wpos] + c_child[wpos + 1:]
        s_rest = s_child[:wpos] + s_child[wpos + 1:]
        w_root = s_child[wpos]
        for q in _bounded_vectors(mult, (total_m - cw) // 2):
            chi = 1
            charges = list(c_rest)
            for x, m_x, q_x in zip(nbrs, mult, q):
                chi *= comb(m_x, q_x)
                charges[index[x]] += m_x - 2 * q_x
            c_new = tuple(charges)
            into_w = {x: m_x - q_x for x, m_x, q_x in zip(nbrs, mult, q) if m_x > q_x}
            if w_root != w:
                # w already drains to a root outside its own subtree
                _hang_roots(out, c_new, s_rest, index, w, w_root, into_w, chi * value)
                continue
            for x, m_x, q_x in zip(nbrs, mult, q):
                if q_x == 0 or s_rest[index[x]] == w:
                    continue  # no arc w -> x, or x already sits below w
                target = s_rest[index[x]]
                _hang_roots(out, c_new, s_rest, index, w, target, into_w, chi * value * q_x)
    return DpTable(bag, dict(out))


def _hang_roots(out, c_new, s_rest, index, w, new_root, into_w, weight) -> None:
    """Enumerate which current roots adjacent to ``w`` point into ``w``.

    ``new_root`` is the root that ``w``'s tree ends up in; it may not point
    at ``w`` itself.
    """
    candidates = [x for x in sorted(into_w) if s_rest[index[x]] == x and x != new_root]
    for picks in product((False, True), repeat=len(candidates)):
        chosen = set()
        kappa = weight
        for x, take in zip(candidates, picks):
            if take:
                chosen.add(x)
                kappa *= into_w[x]
        roots = tuple(new_root if (t == w or t in chosen) else t for t in s_rest)
        out[(c_new, roots)] += kappa


def join_table(scope: NodeScope, left: DpTable, right: DpTable) -> DpTable:
    """Combine two subtrees over the same bag.

    Charges add. A bag vertex may have an out-arc on at most one side, and
    the merged root of each vertex is found by following left and right
    root pointers until a vertex that is a root on both sides; pairs whose
    pointers form a cycle are dropped.
    """
    if scope.kind != JOIN:
        raise ValueError(f"node {scope.node} is not a join node")
    if left.bag != scope.bag or right.bag != scope.bag:
        raise ValueError("join children must share the node's bag")
    bag = scope.bag
    size = len(bag)
    index = {x: j for j, x in enumerate(bag)}
    out = defaultdict(int)
    right_items = list(right.entries.items())
    for (c_left, s_left), v_left in left.entries.items():
        for (c_right, s_right), v_right in right_items:
            roots = _merge_roots(bag, index, s_left, s_right, size)
            if roots is None:
                continue
            charges = tuple(a + b for a, b in zip(c_left, c_right))
            out[(charges, roots)] += v_left * v_right
    return DpTable(bag, dict(out))


def _merge_roots(bag, index, s_left, s_right, size) -> tuple[int, ...] | None:
    succ = []
    for j, x in enumerate(bag):
        a, b = s_left[j], s_right[j]
        if a != x and b != x:
            return None  # two out-arcs at x
        succ.append(a if a != x else b)
    roots = []
    for j in range(size):
        x, steps = bag[j], 0
        while succ[index[x]] != x:
            x = succ[index[x]]
            steps += 1
            if steps > size:
                return None
        roots.append(x)
    return tuple(roots)


def run_tables(g: MultiGraph, ntd: NiceTreeDecomposition, keep: bool = False):
    """Evaluate every node bottom-up.

    Returns the list of tables when ``keep`` is set, else only the root table
    (child tables are released as soon as their parent is built).
    """
    scopes = compute_scopes(ntd, g, detail=False)
    tables: list[DpTable | None] = [None] * len(ntd.nodes)
    for i, nd in enumerate(ntd.nodes):
        scope = scopes[i]
        if nd.kind == LEAF:
            table = leaf_table(scope)
        elif nd.kind == INTRODUCE:
            table = introduce_table(scope, tables[nd.children[0]])
        elif nd.kind == FORGET:
            c = nd.children[0]
            table = forget_table(scope, scopes[c], tables[c])
        else:
            table = join_table(scope, tables[nd.children[0]], tables[nd.children[1]])
        tables[i] = table
        if not keep:
            for c in nd.children:
                tables[c] = None
    return tables if keep else tables[ntd.root]


def count_orbs(g: MultiGraph, ntd: NiceTreeDecomposition, r: int) -> int:
    """Number of (Eulerian orientation, in-arborescence rooted at ``r``) pairs."""
    require_eulerian(g)
    if ntd.root_vertex != r or ntd.nodes[ntd.root].bag != (r,):
        raise DecompositionError(f"nice decomposition is not rooted at bag {{{r + 1}}}")
    problems = ntd.shape_problems()
    if problems:
        raise DecompositionError(problems[0])
    report = validate_decomposition(g, ntd.to_tree_decomposition())
    if not report.valid:
        raise DecompositionError(report.describe())
    if g.m == 0:
        return 1
    root = run_tables(g, ntd)
    return root.entries.get(((0,), (r,)), 0)


def prepare(g: MultiGraph, td: TreeDecomposition | None = None, r: int | None = None) -> NiceTreeDecomposition:
    require_eulerian(g)
    if g.n == 0:
        raise ValueError("graph has no vertices")
    if r is None:
        r = 0
    if td is None:
        td = min_fill_decompose(g)
    else:
        report = validate_decomposition(g, td)
        if not report.valid:
            raise DecompositionError(report.describe())
    return make_nice(td, g, r)


def count_euler_tours(g: MultiGraph, td: TreeDecomposition | None = None, r: int | None = None) -> int:
    ntd = prepare(g, td, r)
    return factorial_factor(g) * count_orbs(g, ntd, ntd.root_vertex)
