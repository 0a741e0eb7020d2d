"""Tree decompositions: PACE .td I/O, validation, heuristics, nicification, node scopes."""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .multigraph import MultiGraph

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"

# node count of make_nice output stays below NODE_BOUND * max(width, 1) * (n + 1)
NODE_BOUND = 4


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags keyed by node id plus the undirected tree edges between node ids."""

    n: int
    bags: dict[int, frozenset[int]]
    tree_edges: tuple[tuple[int, int], ...] = ()

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in self.bags}
        for a, b in self.tree_edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        for nbrs in adj.values():
            nbrs.sort()
        return adj


# --------------------------------------------------------------------------
# PACE 2017 .td format


def parse_td(text: str) -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "s":
                if len(parts) != 5 or parts[1] != "td":
                    raise DecompositionError(f"line {lineno}: malformed header {line!r}")
                header = tuple(int(x) for x in parts[2:])
            elif parts[0] == "b":
                if len(parts) < 2:
                    raise DecompositionError(f"line {lineno}: bag line without id")
                bag_id = int(parts[1])
                if bag_id in bags:
                    raise DecompositionError(f"line {lineno}: duplicate bag {bag_id}")
                verts = [int(x) - 1 for x in parts[2:]]
                if any(v < 0 for v in verts):
                    raise DecompositionError(f"line {lineno}: vertex ids are 1-based")
                bags[bag_id] = frozenset(verts)
            elif len(parts) == 2:
                edges.append((int(parts[0]), int(parts[1])))
            else:
                raise DecompositionError(f"line {lineno}: unrecognised line {line!r}")
        except ValueError as exc:
            if isinstance(exc, DecompositionError):
                raise
            raise DecompositionError(f"line {lineno}: non-integer field in {line!r}") from None
    if header is None:
        raise DecompositionError("missing 's td' header")
    num_bags, _max_bag, n = header
    if num_bags != len(bags):
        raise DecompositionError(f"header declares {num_bags} bags, found {len(bags)}")
    for a, b in edges:
        if a not in bags or b not in bags:
            raise DecompositionError(f"tree edge ({a},{b}) references an unknown bag")
    return TreeDecomposition(n, bags, tuple(edges))


def format_td(td: TreeDecomposition) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {td.n}"]
    for bag_id, bag in td.bags.items():
        lines.append(" ".join(["b", str(bag_id), *(str(v + 1) for v in sorted(bag))]))
    lines.extend(f"{a} {b}" for a, b in td.tree_edges)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    prop: str  # "tree", "1", "2" or "3"
    message: str
    witness: tuple[int, ...] = ()


@dataclass(frozen=True)
class ValidationReport:
    width: int
    violations: tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        if self.valid:
            return f"valid width {self.width}"
        return "\n".join(f"property {v.prop}: {v.message}" for v in self.violations)


def _is_tree(nodes: Iterable[int], edges: Sequence[tuple[int, int]]) -> str | None:
    nodes = list(nodes)
    if not nodes:
        return "decomposition has no bags"
    if len(edges) != len(nodes) - 1:
        return f"{len(nodes)} bags but {len(edges)} tree edges"
    adj: dict[int, list[int]] = {i: [] for i in nodes}
    for a, b in edges:
        if a not in adj or b not in adj:
            return f"tree edge ({a},{b}) references an unknown bag"
        adj[a].append(b)
        adj[b].append(a)
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(nodes):
        return "tree edges do not connect all bags"
    return None


def _induces_subtree(nodes: set[int], adj: dict[int, list[int]]) -> bool:
    start = next(iter(nodes))
    seen = {start}
    stack = [start]
    while stack:
        for y in adj[stack.pop()]:
            if y in nodes and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(nodes)


def validate_decomposition(g: MultiGraph, td: TreeDecomposition) -> ValidationReport:
    """Check the three tree-decomposition properties; failures carry a 1-based witness."""
    violations = []
    problem = _is_tree(td.bags, td.tree_edges)
    if problem:
        violations.append(Violation("tree", problem))
    for bag_id, bag in td.bags.items():
        bad = sorted(v for v in bag if v >= g.n)
        if bad:
            violations.append(
                Violation("1", f"bag {bag_id} holds vertex {bad[0] + 1} outside 1..{g.n}", (bad[0] + 1,))
            )
    occurrences: dict[int, set[int]] = {v: set() for v in range(g.n)}
    for bag_id, bag in td.bags.items():
        for v in bag:
            if v < g.n:
                occurrences[v].add(bag_id)
    for v in range(g.n):
        if not occurrences[v]:
            violations.append(Violation("1", f"vertex {v + 1} is in no bag", (v + 1,)))
    reported = set()
    for u, v in g.edges:
        pair = (min(u, v), max(u, v))
        if pair in reported:
            continue
        reported.add(pair)
        if not occurrences[u] & occurrences[v]:
            violations.append(Violation("2", f"edge ({u + 1},{v + 1}) is not covered by any bag", (u + 1, v + 1)))
    if problem is None:
        adj = td.adjacency()
        for v in range(g.n):
            if occurrences[v] and not _induces_subtree(occurrences[v], adj):
                violations.append(
                    Violation("3", f"bags containing vertex {v + 1} are not connected in the tree", (v + 1,))
                )
    return ValidationReport(td.width, tuple(violations))


# --------------------------------------------------------------------------
# heuristic construction


def elimination_decompose(g: MultiGraph, order: Sequence[int], contract: bool = True) -> TreeDecomposition:
    """Tree decomposition from a vertex elimination ordering.

    One bag per vertex; with ``contract`` adjacent bags where one contains
    the other are merged.
    """
    if sorted(order) != list(range(g.n)):
        raise ValueError("order must be a permutation of the vertices")
    if g.n == 0:
        raise ValueError("graph has no vertices")
    position = {v: i for i, v in enumerate(order)}
    fill = [set(g.neighbors(v)) for v in range(g.n)]
    bag_of: dict[int, frozenset[int]] = {}
    parent: dict[int, int | None] = {}
    for v in order:
        later = fill[v]
        bag_of[v] = frozenset(later | {v})
        for a in later:
            fill[a] |= later - {a}
            fill[a].discard(v)
        parent[v] = min(later, key=position.__getitem__) if later else None
    last = order[-1]
    for v in order[:-1]:
        if parent[v] is None:
            parent[v] = last  # disconnected piece: hang it anywhere
    edges = [(v, parent[v]) for v in order if parent[v] is not None]
    if not contract:
        ids = {v: i + 1 for i, v in enumerate(order)}
        return TreeDecomposition(g.n, {ids[v]: bag_of[v] for v in order}, tuple((ids[a], ids[b]) for a, b in edges))
    return _contract_nested(g.n, {v: bag_of[v] for v in order}, edges, order)


def _contract_nested(n, bags, edges, order) -> TreeDecomposition:
    """Contract tree edges whose one bag contains the other, then renumber 1..k."""
    rep = {v: v for v in bags}

    def find(v):
        while rep[v] != v:
            rep[v] = rep[rep[v]]
            v = rep[v]
        return v

    bags = dict(bags)
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            ra, rb = find(a), find(b)
            if ra == rb:
                continue
            if bags[ra] <= bags[rb]:
                rep[ra] = rb
                changed = True
            elif bags[rb] <= bags[ra]:
                rep[rb] = ra
                changed = True
    kept = [v for v in order if find(v) == v]
    ids = {v: i + 1 for i, v in enumerate(kept)}
    tree = tuple((ids[find(a)], ids[find(b)]) for a, b in edges if find(a) != find(b))
    return TreeDecomposition(n, {ids[v]: bags[v] for v in kept}, tree)


def _greedy_order(g: MultiGraph, score) -> list[int]:
    """Greedy elimination with a lazy heap; only vertices near the eliminated one are rescored."""
    fill = [set(g.neighbors(v)) for v in range(g.n)]
    current = [score(fill, v) for v in range(g.n)]
    heap = [(current[v], v) for v in range(g.n)]
    heapq.heapify(heap)
    done = [False] * g.n
    order = []
    while heap:
        sc, v = heapq.heappop(heap)
        if done[v] or sc != current[v]:
            continue
        done[v] = True
        order.append(v)
        nbrs = fill[v]
        for a in nbrs:
            fill[a] |= nbrs - {a}
            fill[a].discard(v)
        touched = set(nbrs)
        for a in nbrs:
            touched |= fill[a]
        for a in touched:
            if not done[a]:
                new = score(fill, a)
                if new != current[a]:
                    current[a] = new
                    heapq.heappush(heap, (new, a))
    return order


def _fill_in(fill, v) -> int:
    nbrs = list(fill[v])
    missing = 0
    for i, a in enumerate(nbrs):
        fa = fill[a]
        for b in nbrs[i + 1:]:
            if b not in fa:
                missing += 1
    return missing


def min_fill_order(g: MultiGraph) -> list[int]:
    return _greedy_order(g, _fill_in)


def min_degree_order(g: MultiGraph) -> list[int]:
    return _greedy_order(g, lambda fill, v: len(fill[v]))


def min_fill_decompose(g: MultiGraph) -> TreeDecomposition:
    """Deterministic min-fill heuristic; ties go to the smallest vertex id."""
    return elimination_decompose(g, min_fill_order(g))


def min_degree_decompose(g: MultiGraph) -> TreeDecomposition:
    return elimination_decompose(g, min_degree_order(g))


def single_bag_decomposition(g: MultiGraph) -> TreeDecomposition:
    return TreeDecomposition(g.n, {1: frozenset(range(g.n))}, ())


# --------------------------------------------------------------------------
# nice decompositions


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: tuple[int, ...]  # sorted ascending
    children: tuple[int, ...] = ()
    vertex: int | None = None  # introduced, forgotten or leaf vertex


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Nodes are stored children-first, so list order is a post-order and the root is last."""

    n: int
    nodes: tuple[NiceNode, ...]
    root_vertex: int

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def parents(self) -> list[int | None]:
        parent: list[int | None] = [None] * len(self.nodes)
        for i, nd in enumerate(self.nodes):
            for c in nd.children:
                parent[c] = i
        return parent

    def shape_problems(self) -> list[str]:
        """Every way the node list departs from the four node shapes."""
        problems = []
        seen_as_child: set[int] = set()
        for i, nd in enumerate(self.nodes):
            if list(nd.bag) != sorted(set(nd.bag)):
                problems.append(f"node {i}: bag not sorted/unique")
            for c in nd.children:
                if not 0 <= c < i:
                    problems.append(f"node {i}: child {c} not before parent")
                elif c in seen_as_child:
                    problems.append(f"node {c}: more than one parent")
                seen_as_child.add(c)
            bag = set(nd.bag)
            kids = [set(self.nodes[c].bag) for c in nd.children if 0 <= c < i]
            if nd.kind == LEAF:
                ok = not nd.children and len(bag) == 1 and nd.vertex in bag
            elif nd.kind == INTRODUCE:
                ok = len(kids) == 1 and nd.vertex not in kids[0] and bag == kids[0] | {nd.vertex}
            elif nd.kind == FORGET:
                ok = len(kids) == 1 and nd.vertex in kids[0] and bag == kids[0] - {nd.vertex}
            elif nd.kind == JOIN:
                ok = len(kids) == 2 and kids[0] == bag and kids[1] == bag
            else:
                ok = False
            if not ok:
                problems.append(f"node {i}: does not match {nd.kind} shape")
        if len(seen_as_child) != len(self.nodes) - 1:
            problems.append("nodes do not form a single tree")
        if self.nodes and self.nodes[-1].bag != (self.root_vertex,):
            problems.append(f"root bag is {self.nodes[-1].bag}, expected ({self.root_vertex},)")
        return problems

    def to_tree_decomposition(self) -> TreeDecomposition:
        bags = {i + 1: frozenset(nd.bag) for i, nd in enumerate(self.nodes)}
        edges = tuple((c + 1, i + 1) for i, nd in enumerate(self.nodes) for c in nd.children)
        return TreeDecomposition(self.n, bags, edges)


def _drop_empty_bags(td: TreeDecomposition) -> tuple[dict[int, frozenset[int]], dict[int, list[int]]]:
    adj = {i: set(nbrs) for i, nbrs in td.adjacency().items()}
    bags = dict(td.bags)
    for i in [i for i, b in bags.items() if not b]:
        if len(bags) == 1:
            break
        nbrs = sorted(adj.pop(i))
        del bags[i]
        for y in nbrs:
            adj[y].discard(i)
        if nbrs:
            hub = nbrs[0]
            for y in nbrs[1:]:
                adj[hub].add(y)
                adj[y].add(hub)
    return bags, {i: sorted(nbrs) for i, nbrs in adj.items()}


def make_nice(td: TreeDecomposition, g: MultiGraph, r: int) -> NiceTreeDecomposition:
    """Convert ``td`` into a nice decomposition whose root bag is exactly ``{r}``.

    ``td`` must already be valid for ``g``; the width is preserved.
    """
    if not 0 <= r < g.n:
        raise DecompositionError(f"root vertex {r + 1} out of range 1..{g.n}")
    bags, adj = _drop_empty_bags(td)
    holders = sorted(i for i, b in bags.items() if r in b)
    if not holders:
        raise DecompositionError(f"root vertex {r + 1} is in no bag")
    top = holders[0]

    parent = {top: None}
    order = [top]
    queue = deque([top])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
                queue.append(y)
    if len(order) != len(bags):
        raise DecompositionError("tree edges do not connect all bags")

    nodes: list[NiceNode] = []

    def add(kind, bag, children=(), vertex=None) -> int:
        nodes.append(NiceNode(kind, tuple(sorted(bag)), tuple(children), vertex))
        return len(nodes) - 1

    def transition(idx: int, src: frozenset[int], dst: frozenset[int]) -> int:
        cur = set(src)
        for v in sorted(src - dst):
            cur.discard(v)
            if not cur:
                raise DecompositionError("adjacent bags share no vertex")
            idx = add(FORGET, cur, (idx,), v)
        for v in sorted(dst - src):
            cur.add(v)
            idx = add(INTRODUCE, cur, (idx,), v)
        return idx

    top_of: dict[int, int] = {}
    children_of: dict[int, list[int]] = {x: [] for x in order}
    for x in order[1:]:
        children_of[parent[x]].append(x)
    for x in reversed(order):
        bag = bags[x]
        subs = [transition(top_of.pop(c), bags[c], bag) for c in sorted(children_of[x])]
        if not subs:
            first = min(bag)
            subs = [transition(add(LEAF, {first}, (), first), frozenset({first}), bag)]
        idx = subs[0]
        for other in subs[1:]:
            idx = add(JOIN, bag, (idx, other))
        top_of[x] = idx
    transition(top_of[top], bags[top], frozenset({r}))
    return NiceTreeDecomposition(g.n, tuple(nodes), r)


# --------------------------------------------------------------------------
# node scopes


@dataclass(frozen=True)
class NodeScope:
    node: int
    kind: str
    bag: tuple[int, ...]
    vertices: frozenset[int] | None
    bag_edges: frozenset[int] | None
    lower_edges: frozenset[int] | None
    lower: frozenset[int]  # bag vertices touching a lower edge
    upper: frozenset[int]
    vertex: int | None = None
    # forget nodes: multiplicity of edges between the forgotten vertex and each bag vertex
    forget_multiplicity: dict[int, int] = field(default_factory=dict)
    children: tuple[int, ...] = ()


def _scope(g: MultiGraph, i: int, nd: NiceNode, vertices: frozenset[int], lower_edges: frozenset[int]) -> NodeScope:
    bag = frozenset(nd.bag)
    bag_edges = frozenset(e for e, (u, v) in enumerate(g.edges) if u in bag and v in bag)
    touched = {x for e in lower_edges for x in g.edges[e]}
    lower = frozenset(bag & touched)
    mult = {}
    if nd.kind == FORGET:
        w = nd.vertex
        mult = {x: g.multiplicity(w, x) for x in nd.bag if g.multiplicity(w, x)}
    return NodeScope(i, nd.kind, nd.bag, vertices, bag_edges, lower_edges, lower, bag - lower, nd.vertex, mult, nd.children)


def compute_scope(ntd: NiceTreeDecomposition, g: MultiGraph, i: int) -> NodeScope:
    """Scope of node ``i`` evaluated straight from the definitions."""
    vertices: set[int] = set()
    stack = [i]
    while stack:
        j = stack.pop()
        vertices.update(ntd.nodes[j].bag)
        stack.extend(ntd.nodes[j].children)
    bag = set(ntd.nodes[i].bag)
    lower_edges = frozenset(
        e for e, (u, v) in enumerate(g.edges) if u in vertices and v in vertices and not (u in bag and v in bag)
    )
    return _scope(g, i, ntd.nodes[i], frozenset(vertices), lower_edges)


def compute_scopes(ntd: NiceTreeDecomposition, g: MultiGraph, detail: bool = True) -> list[NodeScope]:
    """All node scopes, built bottom-up: only forget nodes add lower edges.

    With ``detail=False`` the vertex and edge sets are left as ``None`` and
    only the bag partition and forget multiplicities are tracked, which keeps
    the cost per node proportional to the bag size.
    """
    if detail:
        return _detailed_scopes(ntd, g)
    scopes: list[NodeScope] = []
    for i, nd in enumerate(ntd.nodes):
        mult = {}
        if nd.kind == LEAF:
            lower = frozenset()
        elif nd.kind == INTRODUCE:
            lower = scopes[nd.children[0]].lower
        elif nd.kind == FORGET:
            w = nd.vertex
            mult = {x: g.multiplicity(w, x) for x in nd.bag if g.multiplicity(w, x)}
            lower = (scopes[nd.children[0]].lower - {w}) | mult.keys()
        else:
            lower = scopes[nd.children[0]].lower | scopes[nd.children[1]].lower
        upper = frozenset(nd.bag) - lower
        scopes.append(NodeScope(i, nd.kind, nd.bag, None, None, None, lower, upper, nd.vertex, mult, nd.children))
    return scopes


def _detailed_scopes(ntd: NiceTreeDecomposition, g: MultiGraph) -> list[NodeScope]:
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for e, (u, v) in enumerate(g.edges):
        incident[u].append(e)
        incident[v].append(e)
    scopes: list[NodeScope] = []
    for i, nd in enumerate(ntd.nodes):
        kids = [scopes[c] for c in nd.children]
        if nd.kind == LEAF:
            vertices, lower_edges = frozenset(nd.bag), frozenset()
        elif nd.kind == INTRODUCE:
            vertices, lower_edges = kids[0].vertices | {nd.vertex}, kids[0].lower_edges
        elif nd.kind == FORGET:
            w, bag = nd.vertex, set(nd.bag)
            new = {e for e in incident[w] if (g.edges[e][0] if g.edges[e][1] == w else g.edges[e][1]) in bag}
            vertices, lower_edges = kids[0].vertices, kids[0].lower_edges | new
        else:
            vertices = kids[0].vertices | kids[1].vertices
            lower_edges = kids[0].lower_edges | kids[1].lower_edges
        scopes.append(_scope(g, i, nd, vertices, lower_edges))
    return scopes
