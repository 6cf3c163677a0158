"""Undirected multigraph with positive edge lengths and exact distances.

Nodes are the integers ``0..n-1``; their natural order is the total order
used for endpoint canonicalization.  Edges carry opaque integer ids so that
parallel edges (created by degree-two contraction) stay distinguishable.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from .errors import GraphError

TOL = 1e-9
INF = math.inf


@dataclass(frozen=True)
class Edge:
    id: int
    a: int
    b: int
    length: float

    def other(self, v: int) -> int:
        if v == self.a:
            return self.b
        if v == self.b:
            return self.a
        raise GraphError(f"node {v} is not an endpoint of edge {self.id}")


@dataclass(frozen=True)
class PointOnNetwork:
    """A point of the network continuum.

    Either ``node`` is set, or ``edge`` and ``offset`` (measured from the
    edge's ``a`` endpoint).  Use :func:`make_point` to get the canonical form.
    """

    node: int | None = None
    edge: int | None = None
    offset: float = 0.0

    @property
    def is_node(self) -> bool:
        return self.node is not None

    def to_json(self) -> dict:
        if self.node is not None:
            return {"node": self.node}
        return {"edge": self.edge, "offset": self.offset}


@dataclass(frozen=True, eq=False)
class Network:
    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, triples: Iterable[tuple[int, int, float]]) -> "Network":
        """Build and validate a network from ``(a, b, length)`` triples."""
        if n < 1:
            raise GraphError("network needs at least one node")
        edges = []
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, (a, b, length) in enumerate(triples):
            a, b, length = int(a), int(b), float(length)
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge {i}: node id out of range")
            if a == b:
                raise GraphError(f"edge {i}: self-loop at node {a}")
            if not math.isfinite(length) or length <= 0:
                raise GraphError(f"edge {i}: nonpositive length {length}")
            if b < a:
                a, b = b, a
            edges.append(Edge(i, a, b, length))
            adj[a].append(i)
            adj[b].append(i)
        net = cls(n, tuple(edges), tuple(tuple(x) for x in adj))
        net._check_connected()
        return net

    def _check_connected(self) -> None:
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for eid in self.adjacency[u]:
                w = self.edges[eid].other(u)
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != self.n:
            raise GraphError(f"network is disconnected ({len(seen)} of {self.n} nodes reachable)")

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def nodes(self) -> range:
        return range(self.n)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def total_length(self) -> float:
        return math.fsum(e.length for e in self.edges)

    def max_length(self) -> float:
        return max((e.length for e in self.edges), default=0.0)

    def mean_length(self) -> float:
        if not self.edges:
            raise GraphError("network has no edges")
        return self.total_length() / self.m

    def check_node(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise GraphError(f"unknown node {v!r}")

    def check_edge(self, e: int) -> None:
        if not (isinstance(e, int) and 0 <= e < self.m):
            raise GraphError(f"unknown edge {e!r}")

    def distances(self, s: int) -> list[float]:
        """Full single-source distance table (cached, read-only)."""
        self.check_node(s)
        key = ("sssp", s)
        d = self._cache.get(key)
        if d is None:
            d = dijkstra(self, {s: 0.0})
            self._cache[key] = d
        return d

    def triples(self) -> list[tuple[int, int, float]]:
        return [(e.a, e.b, e.length) for e in self.edges]


def make_point(net: Network, *, node: int | None = None, edge: int | None = None,
               offset: float | None = None) -> PointOnNetwork:
    """Validate and canonicalize a point; offsets 0 and l collapse to nodes."""
    if node is not None:
        if edge is not None:
            raise GraphError("point has both node and edge")
        net.check_node(node)
        return PointOnNetwork(node=node)
    if edge is None or offset is None:
        raise GraphError("point needs a node, or an edge and an offset")
    net.check_edge(edge)
    e = net.edges[edge]
    q = float(offset)
    if q < -TOL or q > e.length + TOL:
        raise GraphError(f"offset {q} outside [0, {e.length}] on edge {edge}")
    if q <= TOL:
        return PointOnNetwork(node=e.a)
    if q >= e.length - TOL:
        return PointOnNetwork(node=e.b)
    return PointOnNetwork(edge=edge, offset=q)


def dijkstra(net: Network, sources: Mapping[int, float], cutoff: float | None = None,
             counters: dict | None = None) -> list[float]:
    """Multi-source label-setting shortest paths with a binary heap.

    Nodes farther than ``cutoff`` (when given) are reported as ``inf``.
    """
    dist = [INF] * net.n
    heap = []
    for s, d0 in sources.items():
        if d0 < dist[s]:
            dist[s] = d0
            heap.append((d0, s))
    heapq.heapify(heap)
    done = [False] * net.n
    limit = INF if cutoff is None else cutoff + TOL
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        if counters is not None:
            counters["heap_pops"] = counters.get("heap_pops", 0) + 1
        if d > limit:
            break
        done[u] = True
        for eid in net.adjacency[u]:
            e = net.edges[eid]
            w = e.other(u)
            nd = d + e.length
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    if cutoff is not None:
        dist = [x if x <= limit else INF for x in dist]
    return dist


def node_distance(net: Network, s: int, t: int) -> float:
    net.check_node(t)
    return net.distances(s)[t]


def point_distance(net: Network, v: int, p: PointOnNetwork) -> float:
    """Distance from node ``v`` to point ``p``: the shorter endpoint route."""
    d = net.distances(v)
    if p.node is not None:
        net.check_node(p.node)
        return d[p.node]
    net.check_edge(p.edge)
    e = net.edges[p.edge]
    if p.offset < -TOL or p.offset > e.length + TOL:
        raise GraphError(f"offset {p.offset} outside edge {p.edge}")
    return min(d[e.a] + p.offset, d[e.b] + e.length - p.offset)


def breakpoint(d_a: float, d_b: float, length: float) -> float:
    """Offset on an edge where both endpoint routes from a node tie."""
    return (d_b + length - d_a) / 2.0


# ---- text format -----------------------------------------------------------

def parse_graph(text: str) -> Network:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise GraphError("first line must be 'n m'")
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError as exc:
        raise GraphError(f"bad header: {lines[0]!r}") from exc
    body = lines[1:]
    if len(body) != m:
        raise GraphError(f"header says {m} edges, found {len(body)}")
    triples = []
    for ln in body:
        parts = ln.split()
        if len(parts) != 3:
            raise GraphError(f"bad edge line: {ln!r}")
        try:
            triples.append((int(parts[0]), int(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise GraphError(f"bad edge line: {ln!r}") from exc
    return Network.from_edges(n, triples)


def format_graph(net: Network) -> str:
    out = [f"{net.n} {net.m}"]
    out += [f"{e.a} {e.b} {e.length!r}" for e in net.edges]
    return "\n".join(out) + "\n"


def load_graph(path: str | Path) -> Network:
    return parse_graph(Path(path).read_text())


def dump_graph(net: Network, path: str | Path) -> None:
    Path(path).write_text(format_graph(net))


def path_graph(k: int, length: float = 1.0) -> Network:
    """Path on ``k`` nodes with equal edge lengths (handy for tests and demos)."""
    return Network.from_edges(k, [(i, i + 1, length) for i in range(k - 1)])

