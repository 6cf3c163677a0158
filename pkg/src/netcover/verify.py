"""Placements, exact cover certification and a brute-force optimum oracle."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import GuardError, ModelError
from .formulations import periods, qn, un, ye, yv
from .graph import INF, TOL, Network, PointOnNetwork, dijkstra, make_point
from .model import ModelSpec
from .preprocess import PreprocessReport, map_to_source


@dataclass
class Placement:
    points: list[PointOnNetwork]
    source_variant: str = ""
    objective_claimed: int = 0

    def to_json(self) -> list[dict]:
        return [p.to_json() for p in self.points]


@dataclass
class CoverCheck:
    ok: bool
    edge: int | None = None
    interval: tuple[float, float] | None = None
    residuals: dict = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {"ok": self.ok, "edge": self.edge,
                "interval": list(self.interval) if self.interval else None}


def placement_from_json(net: Network, rows: list[dict]) -> Placement:
    pts = []
    for r in rows:
        if "node" in r and r["node"] is not None:
            pts.append(make_point(net, node=int(r["node"])))
        else:
            pts.append(make_point(net, edge=int(r["edge"]), offset=float(r["offset"])))
    return Placement(pts, objective_claimed=len(pts))


def decode(model: ModelSpec, values: dict[str, float], net: Network) -> Placement:
    """Facility points encoded by a (rounded) solution of ``model``."""
    long_edges = set(model.meta.get("long_edges", ()))
    delta = float(model.meta["delta"])
    pts: list[PointOnNetwork] = []
    for v in net.nodes:
        if values.get(yv(v), 0.0) >= 0.5:
            pts.append(PointOnNetwork(node=v))
    for e in net.edges:
        q = values.get(qn(e.id), 0.0)
        if e.id in long_edges:
            u = 1 if values.get(un(e.id), 0.0) >= 0.5 else 0
            count = periods(e.length, delta) + 1 - u
            for k in range(count):
                off = q + 2 * delta * k
                if off > e.length + 1e-6:
                    raise ModelError(f"long edge {e.id}: facility {off} beyond length {e.length}")
                pts.append(make_point(net, edge=e.id, offset=min(max(off, 0.0), e.length)))
            continue
        if values.get(ye(e.id), 0.0) >= 0.5:
            if q > e.length + 1e-6 or q < -1e-6:
                raise ModelError(f"edge {e.id}: coordinate {q} outside [0, {e.length}]")
            pts.append(make_point(net, edge=e.id, offset=min(max(q, 0.0), e.length)))
    claimed = round(model.objective_value(values))
    return Placement(pts, model.meta.get("variant", ""), claimed)


def lift(placement: Placement, report: PreprocessReport, source: Network) -> Placement:
    """Express a placement on a transformed network in source coordinates."""
    pts = [map_to_source(report, source, p) for p in placement.points]
    return Placement(pts, placement.source_variant, placement.objective_claimed)


def facility_distances(net: Network, points: list[PointOnNetwork]) -> list[float]:
    """Distance from every node to its nearest facility."""
    src: dict[int, float] = {}
    for p in points:
        if p.node is not None:
            src[p.node] = 0.0
        else:
            e = net.edges[p.edge]
            src[e.a] = min(src.get(e.a, INF), p.offset)
            src[e.b] = min(src.get(e.b, INF), e.length - p.offset)
    if not src:
        return [INF] * net.n
    return dijkstra(net, src)


def is_cover(net: Network, delta: float, placement: Placement | list[PointOnNetwork],
             tol: float = TOL) -> CoverCheck:
    """Exact check that every point lies within ``delta`` of some facility.

    Per edge, the covered set is the union of the stretch reachable through
    each endpoint and the ``delta``-window around each facility on the edge;
    the first gap found is returned as the witness.
    """
    points = placement.points if isinstance(placement, Placement) else list(placement)
    for p in points:
        if p.node is not None:
            net.check_node(p.node)
        else:
            net.check_edge(p.edge)
            if not (-TOL <= p.offset <= net.edges[p.edge].length + TOL):
                raise ModelError(f"facility offset {p.offset} off edge {p.edge}")
    d = facility_distances(net, points)
    on_edge: dict[int, list[float]] = {}
    for p in points:
        if p.edge is not None:
            on_edge.setdefault(p.edge, []).append(p.offset)
    for e in net.edges:
        L = e.length
        ivs = []
        ra, rb = delta - d[e.a], delta - d[e.b]
        if ra >= -tol:
            ivs.append((0.0, ra))
        if rb >= -tol:
            ivs.append((L - rb, L))
        for q in on_edge.get(e.id, ()):
            ivs.append((q - delta, q + delta))
        gap = _first_gap(sorted(ivs), L, tol)
        if gap is not None:
            return CoverCheck(False, e.id, gap, {"r_a": max(ra, 0.0), "r_b": max(rb, 0.0)})
    return CoverCheck(True)


def _first_gap(ivs: list[tuple[float, float]], L: float, tol: float):
    reach = 0.0
    started = False
    for lo, hi in ivs:
        if not started:
            if lo > tol:
                return (0.0, min(lo, L))
            started = True
            reach = hi
            continue
        if lo > reach + tol:
            return (max(reach, 0.0), min(lo, L))
        reach = max(reach, hi)
    if not started:
        return (0.0, L)
    if reach < L - tol:
        return (max(reach, 0.0), L)
    return None


# ---- brute force ------------------------------------------------------------

def grid_candidates(net: Network, grid_step: float) -> list[PointOnNetwork]:
    """Nodes, edge midpoints and uniform interior steps, without duplicates."""
    pts = [PointOnNetwork(node=v) for v in net.nodes]
    for e in net.edges:
        offs = {round(e.length / 2, 12)}
        if grid_step and grid_step > 0:
            k = 1
            while k * grid_step < e.length - TOL:
                offs.add(round(k * grid_step, 12))
                k += 1
        for q in sorted(offs):
            if TOL < q < e.length - TOL:
                pts.append(PointOnNetwork(edge=e.id, offset=q))
    return pts


def brute_force_optimum(net: Network, delta: float, grid_step: float = 0.0,
                        max_candidates: int = 60, candidates: list[PointOnNetwork] | None = None,
                        max_k: int | None = None) -> tuple[int, Placement]:
    """Fewest grid points forming a cover, by increasing-size exhaustive search.

    The grid restricts the continuous problem, so the result is an upper
    bound on the true optimum (exact whenever the grid holds an optimum).
    """
    cands = candidates if candidates is not None else grid_candidates(net, grid_step)
    if len(cands) > max_candidates:
        raise GuardError(f"{len(cands)} candidates exceed the guard of {max_candidates}")
    C = len(cands)
    ea = np.array([e.a for e in net.edges])
    eb = np.array([e.b for e in net.edges])
    lens = np.array([e.length for e in net.edges])
    DA = np.empty((C, net.m))
    DB = np.empty((C, net.m))
    host = np.full(C, -1)
    for i, p in enumerate(cands):
        dist = np.array(facility_distances(net, [p]))
        DA[i], DB[i] = dist[ea], dist[eb]
        if p.edge is not None:
            host[i] = p.edge
    top = C if max_k is None else min(C, max_k)
    for k in range(1, top + 1):
        for chunk in _combo_chunks(C, k, 200_000):
            da = DA[chunk].min(axis=1)
            db = DB[chunk].min(axis=1)
            ok = (np.maximum(delta - da, 0) + np.maximum(delta - db, 0)) >= lens - TOL
            hosted = np.zeros_like(ok)
            hs = host[chunk]
            for j in range(k):
                col = hs[:, j]
                rows = np.nonzero(col >= 0)[0]
                hosted[rows, col[rows]] = True
            maybe = np.all(ok | hosted, axis=1)
            for row in np.nonzero(maybe)[0]:
                pts = [cands[i] for i in chunk[row]]
                if is_cover(net, delta, pts).ok:
                    return k, Placement(pts, "brute", k)
    raise GuardError("no cover among the candidates")


def _combo_chunks(C: int, k: int, size: int):
    it = itertools.combinations(range(C), k)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield np.array(block, dtype=np.int64)
