"""Independent reference computations used by the tests.

Nothing here imports the cover search or the verifier: distances come from
Floyd-Warshall, coverage from dense sampling, cover sets from their
definitions evaluated on a point grid.
"""

from __future__ import annotations

import math

import numpy as np

from netcover.graph import Network

GOLD = (math.sqrt(5) - 1) / 2


def floyd_warshall(net: Network) -> np.ndarray:
    D = np.full((net.n, net.n), np.inf)
    np.fill_diagonal(D, 0.0)
    for e in net.edges:
        if e.length < D[e.a, e.b]:
            D[e.a, e.b] = D[e.b, e.a] = e.length
    for k in range(net.n):
        D = np.minimum(D, D[:, k:k + 1] + D[k:k + 1, :])
    return D


def simple_path_distance(net: Network, s: int, t: int) -> float:
    """Minimum over all simple paths, by depth-first enumeration."""
    best = math.inf
    stack = [(s, 0.0, frozenset([s]))]
    while stack:
        u, d, seen = stack.pop()
        if u == t:
            best = min(best, d)
            continue
        for eid in net.adjacency[u]:
            w = net.edges[eid].other(u)
            if w not in seen:
                stack.append((w, d + net.edges[eid].length, seen | {w}))
    return best


def point_to_node(D, net, edge: int, x, v: int):
    e = net.edges[edge]
    return np.minimum(x + D[e.a, v], e.length - x + D[e.b, v])


def point_to_point(D, net, e1: int, x, e2: int, y):
    """Distance between offset(s) x on e1 and offset(s) y on e2 (broadcasting)."""
    a, b = net.edges[e1], net.edges[e2]
    la, lb = a.length, b.length
    best = np.minimum.reduce([
        x + D[a.a, b.a] + y,
        x + D[a.a, b.b] + (lb - y),
        (la - x) + D[a.b, b.a] + y,
        (la - x) + D[a.b, b.b] + (lb - y),
    ])
    if e1 == e2:
        best = np.minimum(best, np.abs(x - y))
    return best


def sampled_max_distance(net: Network, points, per_edge: int = 2000):
    """Largest sampled distance to the nearest facility, and where it occurs."""
    D = floyd_warshall(net)
    worst, where = 0.0, None
    for e in net.edges:
        xs = np.linspace(0.0, e.length, per_edge)
        near = np.full(per_edge, np.inf)
        for p in points:
            if p.node is not None:
                near = np.minimum(near, point_to_node(D, net, e.id, xs, p.node))
            else:
                near = np.minimum(near, point_to_point(D, net, e.id, xs, p.edge, p.offset))
        i = int(np.argmax(near))
        if near[i] > worst:
            worst, where = float(near[i]), (e.id, float(xs[i]))
    return worst, where


def distance_to_points(net: Network, D, edge: int, x: float, points) -> float:
    best = math.inf
    for p in points:
        if p.node is not None:
            best = min(best, float(point_to_node(D, net, edge, x, p.node)))
        else:
            best = min(best, float(point_to_point(D, net, edge, x, p.edge, p.offset)))
    return best


def _golden_max(f, lo: float, hi: float, iters: int = 80) -> float:
    a, b = lo, hi
    c, d = b - GOLD * (b - a), a + GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + GOLD * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - GOLD * (b - a)
            fc = f(c)
    return max(fc, fd, f(lo), f(hi))


def _decided(best: float, near: float | None, spacing: float) -> bool:
    # the grid value is a lower bound within ``spacing`` of the sup
    return near is not None and (best > near + 1e-6 or best + 2 * spacing < near - 1e-6)


def sup_node_edge(D, net, edge: int, v: int, grid: int = 200, near: float | None = None) -> float:
    """sup over points p of ``edge`` of d(p, v): grid scan, then concave refinement.

    With ``near`` set, refinement is skipped when the grid already decides
    which side of ``near`` the sup lies on.
    """
    xs = np.linspace(0.0, net.edges[edge].length, grid)
    vals = point_to_node(D, net, edge, xs, v)
    i = int(np.argmax(vals))
    if _decided(float(vals[i]), near, xs[1] - xs[0]):
        return float(vals[i])
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    refined = _golden_max(lambda x: float(point_to_node(D, net, edge, x, v)), lo, hi)
    return max(float(vals[i]), refined)


def sup_edge_edge(D, net, e1: int, e2: int, grid: int = 200, near: float | None = None) -> float:
    """sup over p on e1, p' on e2 of d(p, p') (concave in both offsets when e1 != e2)."""
    xs = np.linspace(0.0, net.edges[e1].length, grid)
    ys = np.linspace(0.0, net.edges[e2].length, grid)
    vals = point_to_point(D, net, e1, xs[:, None], e2, ys[None, :])
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best = float(vals[i, j])
    if e1 == e2 or _decided(best, near, (xs[1] - xs[0]) + (ys[1] - ys[0])):
        return best
    xlo, xhi = xs[max(i - 1, 0)], xs[min(i + 1, grid - 1)]
    ylo, yhi = ys[max(j - 1, 0)], ys[min(j + 1, grid - 1)]

    def inner(x):
        return _golden_max(lambda y: float(point_to_point(D, net, e1, x, e2, y)), ylo, yhi, 60)

    return max(best, _golden_max(inner, xlo, xhi, 60))


def definition_covers(net: Network, delta: float, grid: int = 200, tol: float = 1e-6):
    """Cover sets straight from their definitions.

    Returns node-level sets (exact, from all-pairs distances) and, for the
    complete covers, the sup distance so callers can apply a tolerance.
    """
    D = floyd_warshall(net)
    lim = delta + 1e-9
    V = [frozenset(w for w in net.nodes if D[v, w] <= lim) for v in net.nodes]
    E = [frozenset(e.id for e in net.edges if min(D[v, e.a], D[v, e.b]) <= lim)
         for v in net.nodes]
    sup_ve = {(v, e.id): sup_node_edge(D, net, e.id, v, grid, delta)
              for v in net.nodes for e in net.edges}
    sup_ee = {}
    for e in net.edges:
        for f in net.edges:
            if f.id < e.id:
                sup_ee[e.id, f.id] = sup_ee[f.id, e.id]
            else:
                sup_ee[e.id, f.id] = sup_edge_edge(D, net, e.id, f.id, grid, delta)
    Vc = [frozenset(v for v in net.nodes if sup_ve[v, e.id] <= delta + tol) for e in net.edges]
    Ec = [frozenset(f.id for f in net.edges if sup_ee[e.id, f.id] <= delta + tol)
          for e in net.edges]
    Vp = [frozenset(w for w in V[v] if any(w not in Vc[e] for e in net.adjacency[v]))
          for v in net.nodes]
    Ep = [frozenset(f for f in E[v] if any(f not in Ec[e] for e in net.adjacency[v]))
          for v in net.nodes]
    return {"D": D, "V": V, "E": E, "Vc": Vc, "Ec": Ec, "Vp": Vp, "Ep": Ep,
            "sup_ve": sup_ve, "sup_ee": sup_ee}


def sampled_mutual_slack(D, net, delta: float, e: int, f: int, samples: int = 2001) -> float:
    """min over q on f of r_a(q) + r_b(q) - l_e, sampled."""
    ed, fd = net.edges[e], net.edges[f]
    qs = np.linspace(0.0, fd.length, samples)
    total = np.zeros_like(qs)
    for v in (ed.a, ed.b):
        total += delta - np.minimum(D[v, fd.a] + qs, D[v, fd.b] + fd.length - qs)
    return float(total.min() - ed.length)
