"""Network transformations that keep the continuum (and so every cover) intact.

Every output edge remembers which stretch of the input network it spans
(a chain of :class:`Piece` records), so placements computed on a transformed
network can be reported in, and verified on, the original one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import GraphError
from .graph import TOL, Network, PointOnNetwork, make_point

MODES = ("none", "contract", "assumption", "reduced")


@dataclass(frozen=True)
class Piece:
    """Stretch ``[start, end]`` of a source edge (offsets from its ``a`` end).

    ``start > end`` means the output edge runs against the source direction.
    """

    edge: int
    start: float
    end: float

    @property
    def length(self) -> float:
        return abs(self.end - self.start)

    def reversed(self) -> "Piece":
        return Piece(self.edge, self.end, self.start)


Chain = tuple[Piece, ...]


@dataclass(frozen=True)
class PreprocessReport:
    original_counts: tuple[int, int]
    contracted_counts: tuple[int, int]
    subdivided_counts: tuple[int, int]
    node_map: tuple[PointOnNetwork, ...] = field(repr=False)
    edge_map: tuple[Chain, ...] = field(repr=False)

    def summary(self) -> dict:
        return {
            "original": list(self.original_counts),
            "contracted": list(self.contracted_counts),
            "subdivided": list(self.subdivided_counts),
        }

    def to_json(self) -> dict:
        out = self.summary()
        out["node_map"] = [p.to_json() for p in self.node_map]
        out["edge_map"] = [[[pc.edge, pc.start, pc.end] for pc in ch] for ch in self.edge_map]
        return out


def identity_report(net: Network) -> PreprocessReport:
    counts = (net.n, net.m)
    return PreprocessReport(
        counts, counts, counts,
        tuple(PointOnNetwork(node=v) for v in net.nodes),
        tuple((Piece(e.id, 0.0, e.length),) for e in net.edges),
    )


def _reverse(chain: Chain) -> Chain:
    return tuple(p.reversed() for p in reversed(chain))


def chain_length(chain: Chain) -> float:
    return math.fsum(p.length for p in chain)


def _slice(chain: Chain, s0: float, s1: float) -> Chain:
    """Sub-chain covering chain positions ``[s0, s1]`` (s0 < s1)."""
    out = []
    pos = 0.0
    for p in chain:
        lo, hi = pos, pos + p.length
        pos = hi
        a, b = max(lo, s0), min(hi, s1)
        if b - a <= TOL * max(1.0, p.length):
            continue
        sign = 1.0 if p.end >= p.start else -1.0
        out.append(Piece(p.edge, p.start + sign * (a - lo), p.start + sign * (b - lo)))
    return tuple(out)


def locate(chain: Chain, s: float) -> tuple[int, float]:
    """Source ``(edge, offset)`` at chain position ``s``."""
    pos = 0.0
    for i, p in enumerate(chain):
        if s <= pos + p.length + TOL or i == len(chain) - 1:
            sign = 1.0 if p.end >= p.start else -1.0
            t = p.start + sign * (s - pos)
            lo, hi = min(p.start, p.end), max(p.start, p.end)
            return p.edge, min(max(t, lo), hi)
        pos += p.length
    raise GraphError("empty chain")


def _compose(outer: Chain, inner_maps: Sequence[Chain]) -> Chain:
    out: list[Piece] = []
    for p in outer:
        inner = inner_maps[p.edge]
        lo, hi = min(p.start, p.end), max(p.start, p.end)
        sl = _slice(inner, lo, hi)
        if p.end < p.start:
            sl = _reverse(sl)
        out.extend(sl)
    return tuple(out)


def map_to_source(report: PreprocessReport, source: Network,
                  p: PointOnNetwork) -> PointOnNetwork:
    """Translate a point on a transformed network back to the source network."""
    if p.node is not None:
        q = report.node_map[p.node]
        if q.node is not None:
            return q
        return make_point(source, edge=q.edge, offset=q.offset)
    src_edge, off = locate(report.edge_map[p.edge], p.offset)
    return make_point(source, edge=src_edge, offset=off)


# ---- transformations ------------------------------------------------------

def contract_degree_two(net: Network) -> tuple[Network, PreprocessReport]:
    """Remove degree-two nodes by concatenating their two edges.

    Nodes are visited in ascending id, repeatedly until nothing changes; a
    contraction is skipped when both edges lead to the same neighbor, since
    the merged edge would be a self-loop.
    """
    # working edges: id -> [u, w, length, chain oriented u -> w]
    work: dict[int, list] = {}
    inc: dict[int, list[int]] = {v: [] for v in net.nodes}
    for e in net.edges:
        work[e.id] = [e.a, e.b, e.length, (Piece(e.id, 0.0, e.length),)]
        inc[e.a].append(e.id)
        inc[e.b].append(e.id)
    next_id = net.m
    alive = set(net.nodes)

    def oriented_from(eid: int, v: int) -> tuple[int, float, Chain]:
        u, w, length, chain = work[eid]
        return (w, length, chain) if u == v else (u, length, _reverse(chain))

    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            if len(inc[v]) != 2:
                continue
            e1, e2 = inc[v]
            x, l1, c1 = oriented_from(e1, v)
            y, l2, c2 = oriented_from(e2, v)
            if x == y:
                continue
            chain = _reverse(c1) + c2  # x -> v -> y
            for eid in (e1, e2):
                del work[eid]
            inc[x].remove(e1)
            inc[y].remove(e2)
            work[next_id] = [x, y, l1 + l2, chain]
            inc[x].append(next_id)
            inc[y].append(next_id)
            next_id += 1
            del inc[v]
            alive.discard(v)
            changed = True

    order = sorted(alive)
    renum = {old: i for i, old in enumerate(order)}
    rows = []
    for eid, (u, w, length, chain) in work.items():
        a, b = renum[u], renum[w]
        if b < a:
            a, b, chain = b, a, _reverse(chain)
        rows.append((a, b, eid, length, chain))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    out = Network.from_edges(len(order), [(a, b, length) for a, b, _, length, _ in rows])
    report = PreprocessReport(
        (net.n, net.m), (out.n, out.m), (out.n, out.m),
        tuple(PointOnNetwork(node=old) for old in order),
        tuple(r[4] for r in rows),
    )
    return out, report


def _subdivide(net: Network, pieces_for) -> tuple[Network, PreprocessReport]:
    triples = []
    node_map = [PointOnNetwork(node=v) for v in net.nodes]
    edge_map: list[Chain] = []
    nxt = net.n
    for e in net.edges:
        k = pieces_for(e.length)
        if k <= 1:
            triples.append((e.a, e.b, e.length))
            edge_map.append((Piece(e.id, 0.0, e.length),))
            continue
        step = e.length / k
        ids = [e.a] + list(range(nxt, nxt + k - 1)) + [e.b]
        for j in range(1, k):
            node_map.append(PointOnNetwork(edge=e.id, offset=j * step))
        nxt += k - 1
        for j in range(k):
            t0 = j * step
            t1 = e.length if j == k - 1 else (j + 1) * step
            triples.append((ids[j], ids[j + 1], t1 - t0))
            edge_map.append((Piece(e.id, t0, t1),))
    out = Network.from_edges(nxt, triples)
    # from_edges may swap endpoints so a <= b; keep chains aligned with that
    for i, (u, w, _) in enumerate(triples):
        if w < u:
            edge_map[i] = _reverse(edge_map[i])
    report = PreprocessReport(
        (net.n, net.m), (net.n, net.m), (out.n, out.m), tuple(node_map), tuple(edge_map)
    )
    return out, report


def assumption_pieces(length: float, delta: float) -> int:
    if length <= delta + TOL:
        return 1
    return max(1, math.ceil(length / delta - TOL))


def reduced_pieces(length: float, delta: float) -> int:
    if delta + TOL < length <= 2 * delta + TOL:
        return 2
    return 1


def is_long(length: float, delta: float) -> bool:
    return length > 2 * delta + TOL


def subdivide_for_assumption(net: Network, delta: float) -> tuple[Network, PreprocessReport]:
    """Split every edge longer than ``delta`` into ``ceil(l/delta)`` equal pieces."""
    _check_delta(delta)
    return _subdivide(net, lambda length: assumption_pieces(length, delta))


def subdivide_for_reduced(net: Network, delta: float) -> tuple[Network, PreprocessReport]:
    """Halve edges with ``delta < l <= 2*delta``; leave short and long edges alone."""
    _check_delta(delta)
    return _subdivide(net, lambda length: reduced_pieces(length, delta))


def _check_delta(delta: float) -> None:
    if not (delta > 0 and math.isfinite(delta)):
        raise GraphError(f"covering radius must be positive, got {delta}")


def compose(first: PreprocessReport, second: PreprocessReport) -> PreprocessReport:
    """Report for applying ``first`` and then ``second``."""
    node_map = []
    for p in second.node_map:
        if p.node is not None:
            node_map.append(first.node_map[p.node])
        else:
            src_edge, off = locate(first.edge_map[p.edge], p.offset)
            node_map.append(PointOnNetwork(edge=src_edge, offset=off))
    edge_map = tuple(_compose(ch, first.edge_map) for ch in second.edge_map)
    return PreprocessReport(
        first.original_counts, first.contracted_counts, second.subdivided_counts,
        tuple(node_map), edge_map,
    )


def preprocess(net: Network, delta: float, mode: str) -> tuple[Network, PreprocessReport]:
    """Run the pipeline for one model family.

    ``assumption``: contract, then split so every edge is at most ``delta``.
    ``reduced``: contract, then halve the edges between ``delta`` and ``2*delta``.
    """
    if mode not in MODES:
        raise GraphError(f"unknown preprocess mode {mode!r}")
    _check_delta(delta)
    if mode == "none":
        return net, identity_report(net)
    contracted, rep1 = contract_degree_two(net)
    if mode == "contract":
        return contracted, rep1
    if mode == "assumption":
        out, rep2 = subdivide_for_assumption(contracted, delta)
    else:
        out, rep2 = subdivide_for_reduced(contracted, delta)
    return out, compose(rep1, rep2)
