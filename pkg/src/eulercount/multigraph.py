"""Undirected multigraphs, Eulerian checks and the degree-factorial factor."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import factorial


class GraphFormatError(ValueError):
    """Raised when an edge-list document cannot be parsed."""


class NotEulerianError(ValueError):
    pass


@dataclass(frozen=True)
class MultiGraph:
    """Multigraph on vertices ``0..n-1``.

    ``edges[e]`` holds the endpoints of edge ``e``; the index is the edge id.
    Parallel edges are separate records.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    _mult: dict = field(init=False, repr=False, compare=False)
    _adj: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        mult: Counter = Counter()
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for e, (u, v) in enumerate(edges):
            if u == v:
                raise GraphFormatError(f"edge {e} is a self-loop at vertex {u + 1}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError(f"edge {e} ({u + 1},{v + 1}) out of range 1..{self.n}")
            mult[(min(u, v), max(u, v))] += 1
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "_mult", dict(mult))
        object.__setattr__(self, "_adj", tuple(frozenset(a) for a in adj))

    @property
    def m(self) -> int:
        return len(self.edges)

    def multiplicity(self, u: int, v: int) -> int:
        return self._mult.get((min(u, v), max(u, v)), 0)

    def multiplicities(self) -> dict[tuple[int, int], int]:
        """Map ``(u, v)`` with ``u < v`` to the number of parallel edges."""
        return dict(self._mult)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return sum(self._mult[(min(v, x), max(v, x))] for x in self._adj[v])

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_simple(self) -> bool:
        return all(k == 1 for k in self._mult.values())

    @classmethod
    def from_multiplicities(cls, n: int, mult: dict[tuple[int, int], int]) -> "MultiGraph":
        edges = []
        for (u, v), k in sorted(mult.items()):
            edges.extend([(u, v)] * k)
        return cls(n, tuple(edges))


def parse_edge_list(text: str) -> MultiGraph:
    """Parse the ``p et`` edge-list format (1-based vertex ids).

    Without a header line the vertex count is the largest id seen.
    """
    declared_n = None
    declared_m = None
    raw: list[tuple[int, int]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line[0] in "c#":
            continue
        parts = line.split()
        if parts[0] == "p":
            if declared_n is not None:
                raise GraphFormatError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] not in ("et", "tw", "edge"):
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}")
            try:
                declared_n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: malformed header {line!r}") from None
            if declared_n < 0 or declared_m < 0:
                raise GraphFormatError(f"line {lineno}: negative counts in header")
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two vertex ids, got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: non-integer vertex id in {line!r}") from None
        if u < 1 or v < 1:
            raise GraphFormatError(f"line {lineno}: vertex ids are 1-based")
        if declared_n is not None and (u > declared_n or v > declared_n):
            raise GraphFormatError(f"line {lineno}: vertex id exceeds declared n={declared_n}")
        if u == v:
            raise GraphFormatError(f"line {lineno}: self-loop at vertex {u}")
        raw.append((u - 1, v - 1))
    if declared_m is not None and declared_m != len(raw):
        raise GraphFormatError(f"header declares {declared_m} edges, found {len(raw)}")
    n = declared_n if declared_n is not None else max((max(e) + 1 for e in raw), default=0)
    return MultiGraph(n, tuple(raw))


def format_edge_list(g: MultiGraph) -> str:
    lines = [f"p et {g.n} {g.m}"]
    lines.extend(f"{u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class EulerianStatus:
    connected: bool
    odd_vertices: tuple[int, ...]

    @property
    def is_eulerian(self) -> bool:
        return self.connected and not self.odd_vertices


def is_connected(g: MultiGraph) -> bool:
    if g.n <= 1:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for x in g.neighbors(v):
            if x not in seen:
                seen.add(x)
                stack.append(x)
    return len(seen) == g.n


def eulerian_status(g: MultiGraph) -> EulerianStatus:
    odd = tuple(v for v, d in enumerate(g.degrees()) if d % 2)
    return EulerianStatus(is_connected(g), odd)


def require_eulerian(g: MultiGraph) -> None:
    status = eulerian_status(g)
    if not status.connected:
        raise NotEulerianError("graph is not connected")
    if status.odd_vertices:
        ids = ", ".join(str(v + 1) for v in status.odd_vertices)
        raise NotEulerianError(f"odd-degree vertices: {ids}")


def factorial_factor(g: MultiGraph) -> int:
    """Product of ``(deg(v)/2 - 1)!`` over non-isolated vertices."""
    result = 1
    for v, d in enumerate(g.degrees()):
        if d % 2:
            raise NotEulerianError(f"vertex {v + 1} has odd degree {d}")
        if d:
            result *= factorial(d // 2 - 1)
    return result
