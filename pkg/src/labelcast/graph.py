"""Undirected graphs with a broadcast source, BFS levels and the edge-list format."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Invalid graph: self-loop, bad endpoint or disconnected topology."""


class GraphFormatError(GraphError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class Graph:
    node_count: int
    edges: frozenset[tuple[int, int]]
    source: int
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    def neighbors(self, u: int) -> tuple[int, ...]:
        return neighbors(self, u)

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def build_graph(node_count: int, edges: Iterable[Sequence[int]], source: int) -> Graph:
    """Validate and freeze a graph.

    Edges are deduplicated and normalised so the smaller id comes first.
    Self-loops, out-of-range endpoints and disconnected graphs are rejected.
    """
    if node_count < 1:
        raise GraphError(f"node_count must be >= 1, got {node_count}")
    if not 0 <= source < node_count:
        raise GraphError(f"source {source} out of range for {node_count} nodes")
    norm: set[tuple[int, int]] = set()
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise GraphError(f"self-loop on node {u}")
        for x in (u, v):
            if not 0 <= x < node_count:
                raise GraphError(f"edge endpoint {x} out of range for {node_count} nodes")
        norm.add((u, v) if u < v else (v, u))
    adj: list[list[int]] = [[] for _ in range(node_count)]
    for u, v in norm:
        adj[u].append(v)
        adj[v].append(u)
    adjacency = tuple(tuple(sorted(a)) for a in adj)

    reached = _bfs_order(adjacency, source)
    if len(reached) != node_count:
        missing = sorted(set(range(node_count)) - set(reached))
        raise GraphError(f"graph is disconnected: nodes {missing} unreachable from source {source}")
    return Graph(node_count, frozenset(norm), source, adjacency)


def neighbors(g: Graph, u: int) -> tuple[int, ...]:
    if not 0 <= u < g.node_count:
        raise GraphError(f"node {u} out of range for {g.node_count} nodes")
    return g.adjacency[u]


def _bfs_order(adjacency: Sequence[Sequence[int]], source: int) -> list[int]:
    seen = {source}
    order = [source]
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if v not in seen:
                seen.add(v)
                order.append(v)
                queue.append(v)
    return order


@dataclass(frozen=True)
class LevelView:
    """BFS layering of a graph from its source.

    ``parents[v]`` holds the neighbours of ``v`` one level closer to the source,
    ``sons[u]`` the neighbours one level further away.
    """

    level: tuple[int, ...]
    eccentricity: int
    buckets: tuple[tuple[int, ...], ...]
    parents: tuple[frozenset[int], ...]
    sons: tuple[frozenset[int], ...]

    @property
    def depth(self) -> int:
        return self.eccentricity


def compute_levels(g: Graph) -> LevelView:
    level = [-1] * g.node_count
    level[g.source] = 0
    queue = deque([g.source])
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if level[v] < 0:
                level[v] = level[u] + 1
                queue.append(v)
    ecc = max(level)
    buckets: list[list[int]] = [[] for _ in range(ecc + 1)]
    for u in range(g.node_count):
        buckets[level[u]].append(u)
    parents: list[set[int]] = [set() for _ in range(g.node_count)]
    sons: list[set[int]] = [set() for _ in range(g.node_count)]
    for u, v in g.edges:
        if level[v] - level[u] == 1:
            parents[v].add(u)
            sons[u].add(v)
        elif level[u] - level[v] == 1:
            parents[u].add(v)
            sons[v].add(u)
    return LevelView(
        level=tuple(level),
        eccentricity=ecc,
        buckets=tuple(tuple(b) for b in buckets),
        parents=tuple(frozenset(p) for p in parents),
        sons=tuple(frozenset(s) for s in sons),
    )


# -- edge-list text format ---------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    """Parse ``n <count> source <id>`` followed by one ``u v`` edge per line."""
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[0] != "n" or parts[2] != "source":
                raise GraphFormatError(f"expected header 'n <node_count> source <id>', got {line!r}", lineno)
            try:
                header = (int(parts[1]), int(parts[3]))
            except ValueError:
                raise GraphFormatError(f"non-integer value in header {line!r}", lineno) from None
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"expected edge 'u v', got {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"non-integer node id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"negative node id in {line!r}", lineno)
        if header[0] >= 1 and (u >= header[0] or v >= header[0]):
            raise GraphFormatError(f"node id out of range in {line!r}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop in {line!r}", lineno)
        edges.append((u, v))
    if header is None:
        raise GraphFormatError("missing header line", last_line or None)
    try:
        return build_graph(header[0], edges, header[1])
    except GraphFormatError:
        raise
    except GraphError as exc:
        raise GraphFormatError(str(exc), last_line) from None


def format_edge_list(g: Graph) -> str:
    lines = [f"n {g.node_count} source {g.source}"]
    lines += [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(lines) + "\n"
