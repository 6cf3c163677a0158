"""Potential, complete and partial cover sets.

``node_cover`` is the radius-truncated label-setting search run from every
node; ``mutual`` decides whether one edge completely covers another from two
breakpoint evaluations; ``process_network`` assembles everything the MILP
builders consume.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field

from .errors import AssumptionError, ModelError
from .graph import INF, TOL, Network

SIDES = ("a", "b")


@dataclass(frozen=True)
class NodeCoverResult:
    source: int
    Ec: frozenset[int]
    E: frozenset[int]
    V: frozenset[int]
    dist: tuple[float, ...]
    undetermined: frozenset[int] = frozenset()


@dataclass(frozen=True)
class CoverData:
    delta: float
    node: tuple[NodeCoverResult, ...]
    Vc: tuple[frozenset[int], ...]
    Ec: tuple[frozenset[int], ...]
    Vp: tuple[frozenset[int], ...]
    Ep: tuple[frozenset[int], ...]
    EIp: tuple[frozenset[tuple[int, str]], ...]
    counters: dict = field(default_factory=dict, compare=False)

    def d(self, v: int, w: int) -> float:
        """Truncated distance: exact when at most delta, else ``inf``."""
        return self.node[v].dist[w]


def check_assumption(net: Network, delta: float) -> None:
    worst = net.max_length()
    if worst > delta + TOL:
        raise AssumptionError(
            f"edge length {worst} exceeds covering radius {delta}; subdivide first"
        )


def node_cover(net: Network, delta: float, s: int, *, allow_long: bool = False,
               counters: dict | None = None) -> NodeCoverResult:
    """Truncated search from ``s`` collecting V(s), E(s) and Ec(s).

    An edge relaxed with a path of length at most ``delta`` is completely
    covered from ``s``.  Every other scanned edge is undetermined and gets the
    two-sided test once distances are final.  This includes relaxations that
    fail to improve the tentative distance, which the bare label-setting loop
    would otherwise drop.
    """
    net.check_node(s)
    if not allow_long:
        check_assumption(net, delta)
    limit = delta + TOL
    dist = [INF] * net.n
    prev: list[int | None] = [None] * net.n  # kept for parity, never read
    dist[s] = 0.0
    V = {s}
    E: set[int] = set()
    Ec: set[int] = set()
    U: set[int] = set()
    done = [False] * net.n
    heap = [(0.0, s)]
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        if counters is not None:
            counters["heap_pops"] = counters.get("heap_pops", 0) + 1
        if du > limit:
            break
        done[u] = True
        for eid in net.adjacency[u]:
            e = net.edges[eid]
            v = e.other(u)
            if done[v]:
                continue
            E.add(eid)
            ell = du + e.length
            if ell < dist[v]:
                dist[v] = ell
                prev[v] = u
                if ell <= limit:
                    Ec.add(eid)
                    V.add(v)
                else:
                    U.add(eid)
                heapq.heappush(heap, (ell, v))
            else:
                U.add(eid)
    final = tuple(x if (x <= limit and done[i]) or i == s else INF
                  for i, x in enumerate(dist))
    for eid in U - Ec:
        e = net.edges[eid]
        da, db = final[e.a], final[e.b]
        if math.isinf(da) or math.isinf(db):
            continue
        if (delta - da) + (delta - db) >= e.length - TOL:
            Ec.add(eid)
    V = {v for v in V if not math.isinf(final[v])}
    return NodeCoverResult(s, frozenset(Ec), frozenset(E), frozenset(V), final,
                           frozenset(U - Ec))


def _r_at(q: float, d_a: float, d_b: float, length: float, delta: float) -> float:
    # residual for a node whose complete-cover set contains the edge
    return delta - min(d_a + q, d_b + length - q)


def mutual(e: int, e2: int, dist, net: Network, delta: float) -> bool:
    """True iff edge ``e2`` completely covers edge ``e``.

    ``dist[v]`` must give distances from node ``v``; ``e2`` must be completely
    covered from both endpoints of ``e``.
    """
    ed, fd = net.edges[e], net.edges[e2]
    ends = (ed.a, ed.b)
    rows = []
    for v in ends:
        da, db = dist[v][fd.a], dist[v][fd.b]
        if math.isinf(da) or math.isinf(db):
            raise ModelError(f"mutual({e}, {e2}) called outside its precondition")
        rows.append((da, db))
    for da, db in rows:
        q = (db + fd.length - da) / 2.0
        total = sum(_r_at(q, xa, xb, fd.length, delta) for xa, xb in rows)
        if total < ed.length - TOL:
            return False
    return True


def process_network(net: Network, delta: float, *, allow_long: bool = False,
                    counters: dict | None = None) -> CoverData:
    """Run the node searches and derive every complete and partial cover set."""
    if not allow_long:
        check_assumption(net, delta)
    if counters is None:
        counters = {}
    counters.setdefault("heap_pops", 0)
    counters.setdefault("mutual_calls", 0)
    counters.setdefault("node_cover_calls", 0)
    limit = delta + TOL

    res = []
    Vc: list[set[int]] = [set() for _ in range(net.m)]
    for v in net.nodes:
        r = node_cover(net, delta, v, allow_long=True, counters=counters)
        counters["node_cover_calls"] += 1
        res.append(r)
        for eid in r.Ec:
            Vc[eid].add(v)
    dist = [r.dist for r in res]

    Ec: list[set[int]] = [set() for _ in range(net.m)]
    for e in net.edges:
        if e.length <= limit:
            Ec[e.id].add(e.id)
    for e in net.edges:
        cand = res[e.a].Ec & res[e.b].Ec
        for e2 in sorted(cand):
            if e2 <= e.id:
                continue
            counters["mutual_calls"] += 1
            if mutual(e.id, e2, dist, net, delta):
                Ec[e.id].add(e2)
                Ec[e2].add(e.id)

    Vp: list[frozenset[int]] = []
    Ep: list[frozenset[int]] = []
    EIp: list[frozenset[tuple[int, str]]] = []
    for v in net.nodes:
        inc = net.adjacency[v]
        Vp.append(frozenset(
            w for w in res[v].V if any(e not in res[w].Ec for e in inc)
        ))
        ep, eip = set(), set()
        dv = dist[v]
        for e2 in sorted(res[v].E):
            if not any(e2 not in Ec[e] for e in inc):
                continue
            ep.add(e2)
            f = net.edges[e2]
            da, db = dv[f.a], dv[f.b]
            if da <= limit and (math.isinf(db) or da <= db + f.length + TOL):
                eip.add((e2, "a"))
            if db <= limit and (math.isinf(da) or db <= da + f.length + TOL):
                eip.add((e2, "b"))
        Ep.append(frozenset(ep))
        EIp.append(frozenset(eip))

    return CoverData(
        delta, tuple(res), tuple(frozenset(s) for s in Vc), tuple(frozenset(s) for s in Ec),
        tuple(Vp), tuple(Ep), tuple(EIp), counters,
    )


def complexity_probe(net: Network, delta: float, *, allow_long: bool = True) -> dict:
    """Operation counters of one full cover computation."""
    counters: dict = {}
    process_network(net, delta, allow_long=allow_long, counters=counters)
    counters["n"] = net.n
    counters["m"] = net.m
    counters["max_degree"] = max((net.degree(v) for v in net.nodes), default=0)
    return counters


def trivial_covers(net: Network, delta: float) -> CoverData:
    """Cover data with no delimitation: every element is a partial cover."""
    all_nodes = frozenset(net.nodes)
    all_edges = frozenset(range(net.m))
    all_ei = frozenset((e, s) for e in range(net.m) for s in SIDES)
    empty: frozenset = frozenset()
    nodes = tuple(
        NodeCoverResult(v, empty, all_edges, all_nodes, tuple(net.distances(v)))
        for v in net.nodes
    )
    return CoverData(
        delta, nodes, (empty,) * net.m, (empty,) * net.m,
        (all_nodes,) * net.n, (all_edges,) * net.n, (all_ei,) * net.n, {},
    )


def covers_to_json(cd: CoverData) -> dict:
    def fin(x: float):
        return None if math.isinf(x) else x

    return {
        "delta": cd.delta,
        "nodes": [
            {
                "id": r.source,
                "V": sorted(r.V),
                "E": sorted(r.E),
                "Ec": sorted(r.Ec),
                "Vp": sorted(cd.Vp[r.source]),
                "Ep": sorted(cd.Ep[r.source]),
                "EIp": sorted([e, s] for e, s in cd.EIp[r.source]),
                "dist": [fin(x) for x in r.dist],
            }
            for r in cd.node
        ],
        "edges": [
            {"id": i, "Vc": sorted(cd.Vc[i]), "Ec": sorted(cd.Ec[i])}
            for i in range(len(cd.Ec))
        ],
        "counters": cd.counters,
    }


def covers_from_json(data: dict) -> CoverData:
    nodes = []
    for row in data["nodes"]:
        dist = tuple(INF if x is None else float(x) for x in row["dist"])
        nodes.append(NodeCoverResult(
            row["id"], frozenset(row["Ec"]), frozenset(row["E"]), frozenset(row["V"]), dist,
        ))
    edges = data["edges"]
    return CoverData(
        float(data["delta"]), tuple(nodes),
        tuple(frozenset(x["Vc"]) for x in edges), tuple(frozenset(x["Ec"]) for x in edges),
        tuple(frozenset(r["Vp"]) for r in data["nodes"]),
        tuple(frozenset(r["Ep"]) for r in data["nodes"]),
        tuple(frozenset((e, s) for e, s in r["EIp"]) for r in data["nodes"]),
        dict(data.get("counters", {})),
    )


def dumps(cd: CoverData) -> str:
    return json.dumps(covers_to_json(cd), indent=1)
