"""MILP builders for the five model variants.

Variable names are canonical (``y_n3``, ``y_e7``, ``z_n3_e7_b`` ...) so an LP
file is reproducible byte for byte from the same network and radius.

Variant summary:

* ``F0``  no delimitation: every node and edge end is a partial cover, big-Ms
  from the network diameter, complete-cover machinery switched off.
* ``F``   cover delimitation with plain constants.
* ``SF``  ``F`` plus tightened constants, leaf fixing and the neighborhood
  rows (which replace the node/edge exclusion rows).
* ``SFD`` ``SF`` with every edge facility switched off (nodes only).
* ``RF``  ``SF`` on the contracted network, with long edges modelled by a
  periodic placement instead of subdivision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .covers import CoverData, check_assumption, process_network, trivial_covers
from .errors import ModelError
from .graph import TOL, Network
from .model import BINARY, CONTINUOUS, ModelSpec
from .preprocess import is_long

VARIANTS = ("F0", "F", "SF", "RF", "SFD")


@dataclass(frozen=True)
class VariantConfig:
    variant: str
    use_cover_delimitation: bool
    use_strengthening: bool
    long_edge_mode: bool
    fix_edge_vars_to_zero: bool

    @classmethod
    def of(cls, variant: str) -> "VariantConfig":
        table = {
            "F0": (False, False, False, False),
            "F": (True, False, False, False),
            "SF": (True, True, False, False),
            "RF": (True, True, True, False),
            "SFD": (True, True, False, True),
        }
        if variant not in table:
            raise ModelError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
        return cls(variant, *table[variant])

    @property
    def preprocess_mode(self) -> str:
        return "reduced" if self.long_edge_mode else "assumption"


# ---- names ----------------------------------------------------------------

def yv(v: int) -> str:
    return f"y_n{v}"


def ye(e: int) -> str:
    return f"y_e{e}"


def wn(e: int) -> str:
    return f"w_e{e}"


def xn(v: int) -> str:
    return f"x_n{v}"


def qn(e: int) -> str:
    return f"q_e{e}"


def rn(v: int) -> str:
    return f"r_n{v}"


def un(e: int) -> str:
    return f"u_e{e}"


def zvv(v: int, w: int) -> str:
    return f"z_n{v}_n{w}"


def zve(v: int, e: int, side: str) -> str:
    return f"z_n{v}_e{e}_{side}"


# ---- constants ------------------------------------------------------------

@dataclass
class BigMTable:
    U: dict[int, float] = field(default_factory=dict)
    M_v: dict[int, float] = field(default_factory=dict)
    M_vv: dict[tuple[int, int], float] = field(default_factory=dict)
    M_vei: dict[tuple[int, int, str], float] = field(default_factory=dict)
    delta_vv: dict[tuple[int, int], float] = field(default_factory=dict)
    delta_vei: dict[tuple[int, int, str], float] = field(default_factory=dict)


def reach_span(net: Network, delta: float, e: int, long_edges: frozenset[int]) -> float:
    """Largest extra distance a facility on ``e`` adds past the entry end."""
    return 2 * delta if e in long_edges else net.edges[e].length


def tighten_bigM(net: Network, delta: float, covers: CoverData,
                 long_edges: frozenset[int] = frozenset()) -> BigMTable:
    """Smallest constants that keep every residual row valid.

    A residual never needs to exceed the longest incident edge (capped at the
    radius, which matters only next to long edges), so the indicator rows are
    built around that cap instead of the radius.
    """
    t = BigMTable()
    for v in net.nodes:
        U = max((min(net.edges[e].length, delta) for e in net.adjacency[v]), default=0.0)
        t.U[v] = U
        t.M_v[v] = U
        for w in covers.Vp[v]:
            d = covers.d(v, w)
            t.delta_vv[v, w] = min(U + d, delta)
            t.M_vv[v, w] = max(0.0, U + d - delta)
        for e, s in covers.EIp[v]:
            f = net.edges[e]
            d = covers.d(v, f.a if s == "a" else f.b)
            span = reach_span(net, delta, e, long_edges)
            t.delta_vei[v, e, s] = min(U + d + span, delta)
            t.M_vei[v, e, s] = max(0.0, U + d + span - delta)
    return t


def plain_bigM(net: Network, delta: float, covers: CoverData) -> BigMTable:
    """Constants of the delimited model without tightening."""
    t = BigMTable()
    for v in net.nodes:
        t.U[v] = net.max_length()
        t.M_v[v] = delta
        for w in covers.Vp[v]:
            t.delta_vv[v, w] = delta
            t.M_vv[v, w] = delta
        for e, s in covers.EIp[v]:
            t.delta_vei[v, e, s] = delta
            t.M_vei[v, e, s] = delta + net.edges[e].length
    return t


def diameter(net: Network) -> float:
    return max(max(net.distances(v)) for v in net.nodes)


def naive_bigM(net: Network, delta: float, covers: CoverData) -> BigMTable:
    """Constants valid without any delimitation, from the network diameter."""
    diam = diameter(net)
    t = BigMTable()
    for v in net.nodes:
        t.U[v] = net.max_length()
        t.M_v[v] = delta
        for w in covers.Vp[v]:
            t.delta_vv[v, w] = delta
            t.M_vv[v, w] = diam
        for e, s in covers.EIp[v]:
            t.delta_vei[v, e, s] = delta
            t.M_vei[v, e, s] = diam + net.edges[e].length
    return t


# ---- builders -------------------------------------------------------------

def long_edge_set(net: Network, delta: float) -> frozenset[int]:
    return frozenset(e.id for e in net.edges if is_long(e.length, delta))


def build_base(net: Network, delta: float, covers: CoverData | None, cfg: VariantConfig,
               bigM: BigMTable | None = None,
               long_edges: frozenset[int] = frozenset()) -> ModelSpec:
    """Core model: placement, complete-cover, indicator and residual rows."""
    if not cfg.long_edge_mode:
        check_assumption(net, delta)
        if long_edges:
            raise ModelError("long edges need the reduced variant")
    if cfg.use_cover_delimitation:
        if covers is None:
            raise ModelError(f"variant {cfg.variant} needs cover data")
    else:
        covers = trivial_covers(net, delta)
    if len(covers.Ec) != net.m or len(covers.Vp) != net.n:
        raise ModelError("cover data does not match the network")
    if bigM is None:
        if cfg.use_strengthening:
            bigM = tighten_bigM(net, delta, covers, long_edges)
        elif cfg.use_cover_delimitation:
            bigM = plain_bigM(net, delta, covers)
        else:
            bigM = naive_bigM(net, delta, covers)

    m = ModelSpec(name=f"netcover_{cfg.variant}")
    m.meta.update(variant=cfg.variant, delta=delta, n=net.n, m=net.m,
                  long_edges=sorted(long_edges))
    short = [e for e in net.edges if e.id not in long_edges]

    for v in net.nodes:
        m.add_var(yv(v), BINARY, entity=("y", "node", v))
    for e in net.edges:
        m.add_var(ye(e.id), BINARY, entity=("y", "edge", e.id))
    for e in net.edges:
        m.add_var(wn(e.id), BINARY, entity=("w", e.id))
    for v in net.nodes:
        m.add_var(xn(v), BINARY, entity=("x", v))
    for e in net.edges:
        ub = 2 * delta if e.id in long_edges else e.length
        m.add_var(qn(e.id), CONTINUOUS, 0.0, ub, entity=("q", e.id))
    for v in net.nodes:
        m.add_var(rn(v), CONTINUOUS, 0.0, math.inf, entity=("r", v))
    for e in sorted(long_edges):
        m.add_var(un(e), BINARY, entity=("u", e))
    for v in net.nodes:
        for w in sorted(covers.Vp[v]):
            m.add_var(zvv(v, w), BINARY, entity=("z", v, "node", w))
        for e, s in sorted(covers.EIp[v]):
            m.add_var(zve(v, e, s), BINARY, entity=("z", v, "edge", e, s))

    if not cfg.use_cover_delimitation:
        for e in net.edges:
            m.fix(wn(e.id), 0)
        for v in net.nodes:
            m.fix(xn(v), 0)
    else:
        for e in short:
            j = e.id
            fc = [yv(v) for v in sorted(covers.Vc[j])] + [ye(f) for f in sorted(covers.Ec[j])]
            for y in fc:
                m.add_constr(f"cc_lb_e{j}_{y}", [(1, wn(j)), (-1, y)], ">=", 0, "complete_lb")
            m.add_constr(f"cc_ub_e{j}", [(1, wn(j))] + [(-1, y) for y in fc], "<=", 0,
                         "complete_ub")
        for v in net.nodes:
            inc = net.adjacency[v]
            m.add_constr(f"all_lb_n{v}", [(1, xn(v))] + [(-1, wn(e)) for e in inc], ">=",
                         1 - len(inc), "allcov_lb")
            for e in inc:
                m.add_constr(f"all_ub_n{v}_e{e}", [(1, xn(v)), (-1, wn(e))], "<=", 0,
                             "allcov_ub")

    if not cfg.use_strengthening:
        for e in short:
            for s, v in (("a", e.a), ("b", e.b)):
                m.add_constr(f"excl_e{e.id}_{s}", [(1, yv(v)), (1, ye(e.id))], "<=", 1,
                             "node_edge_excl")
    for e in short:
        m.add_constr(f"coord_e{e.id}", [(1, qn(e.id)), (-e.length, ye(e.id))], "<=", 0,
                     "coord")
        m.add_constr(f"cover_e{e.id}",
                     [(e.length, wn(e.id)), (1, rn(e.a)), (1, rn(e.b))], ">=", e.length,
                     "edge_cover")

    for v in net.nodes:
        choose = [(1, xn(v))]
        choose += [(1, zvv(v, w)) for w in sorted(covers.Vp[v])]
        choose += [(1, zve(v, e, s)) for e, s in sorted(covers.EIp[v])]
        m.add_constr(f"choose_n{v}", choose, "=", 1, "choose")
        for w in sorted(covers.Vp[v]):
            m.add_constr(f"ind_n{v}_n{w}", [(1, zvv(v, w)), (-1, yv(w))], "<=", 0, "ind_node")
        for e, s in sorted(covers.EIp[v]):
            if e in long_edges:
                continue
            m.add_constr(f"ind_n{v}_e{e}_{s}", [(1, zve(v, e, s)), (-1, ye(e))], "<=", 0,
                         "ind_edge")

    for v in net.nodes:
        Mv = bigM.M_v[v]
        m.add_constr(f"res_n{v}", [(1, rn(v)), (Mv, xn(v))], "<=", Mv, "res_all")
        for w in sorted(covers.Vp[v]):
            M = bigM.M_vv[v, w]
            rhs = M + bigM.delta_vv[v, w] - covers.d(v, w)
            m.add_constr(f"res_n{v}_n{w}", [(1, rn(v)), (M, zvv(v, w))], "<=", rhs, "res_node")
        for e, s in sorted(covers.EIp[v]):
            f = net.edges[e]
            d = covers.d(v, f.a if s == "a" else f.b)
            M = bigM.M_vei[v, e, s]
            base = M + bigM.delta_vei[v, e, s] - d
            terms = [(1, rn(v)), (M, zve(v, e, s))]
            if s == "a":
                terms.append((1, qn(e)))
                rhs = base
            elif e in long_edges:
                tail = tail_length(f.length, delta)
                terms += [(2 * delta, un(e)), (-1, qn(e))]
                rhs = base - tail
            else:
                terms.append((-1, qn(e)))
                rhs = base - f.length
            m.add_constr(f"res_n{v}_e{e}_{s}", terms, "<=", rhs, "res_edge")

    obj = {yv(v): 1.0 for v in net.nodes}
    obj.update({ye(e.id): 1.0 for e in short})
    m.set_objective(obj)
    m.meta["bigM"] = bigM
    m.meta["covers"] = covers
    return m


def add_valid_inequalities(model: ModelSpec, net: Network, covers: CoverData | None = None,
                           long_edges: frozenset[int] = frozenset()) -> ModelSpec:
    """Leaf fixing and the neighborhood rows (they depend on topology only)."""
    for v in net.nodes:
        inc = [e for e in net.adjacency[v] if e not in long_edges]
        model.add_constr(f"nbhd_n{v}", [(1, yv(v))] + [(1, ye(e)) for e in inc], "<=", 1,
                         "neighborhood")
    for v in net.nodes:
        if net.degree(v) != 1:
            continue
        (e,) = net.adjacency[v]
        if e in long_edges:
            continue
        if net.degree(net.edges[e].other(v)) == 1:
            continue  # two-node network: the neighbor is a leaf as well
        model.fix(yv(v), 0)
        model.fix(ye(e), 0)
    return model


def tail_length(length: float, delta: float) -> float:
    k = math.floor(length / (2 * delta) + TOL)
    return max(0.0, length - 2 * delta * k)


def periods(length: float, delta: float) -> int:
    return math.floor(length / (2 * delta) + TOL)


def build_reduced(net: Network, delta: float, covers: CoverData, cfg: VariantConfig,
                  bigM: BigMTable | None = None) -> ModelSpec:
    """Strengthened model on a network whose edges are short or long (> 2δ)."""
    for e in net.edges:
        if delta + TOL < e.length <= 2 * delta + TOL:
            raise ModelError(f"edge {e.id} of length {e.length} must be halved first")
    L = long_edge_set(net, delta)
    m = build_base(net, delta, covers, cfg, bigM, L)
    add_valid_inequalities(m, net, covers, L)
    const = 0.0
    obj = dict(m.objective)
    for j in sorted(L):
        e = net.edges[j]
        lt = tail_length(e.length, delta)
        m.fix(ye(j), 1)
        m.fix(wn(j), 0)
        m.add_constr(f"lr_hi_e{j}", [(1, qn(j)), (-(2 * delta - lt), un(j))], "<=", lt,
                     "long_range_hi")
        m.add_constr(f"lr_lo_e{j}", [(1, qn(j)), (-lt, un(j))], ">=", 0, "long_range_lo")
        m.add_constr(f"head_e{j}", [(1, rn(e.a)), (-1, qn(j))], ">=", -delta, "long_head")
        m.add_constr(f"tail_e{j}", [(1, rn(e.b)), (1, qn(j)), (-2 * delta, un(j))], ">=",
                     lt - delta, "long_tail")
        const += periods(e.length, delta) + 1
        obj[un(j)] = -1.0
    m.set_objective(obj, const)
    m.meta["tails"] = {j: tail_length(net.edges[j].length, delta) for j in L}
    return m


def build(variant: str, net: Network, delta: float, covers: CoverData | None = None) -> ModelSpec:
    """Build the model for ``variant`` on an already preprocessed network."""
    cfg = VariantConfig.of(variant)
    if cfg.use_cover_delimitation and covers is None:
        covers = process_network(net, delta, allow_long=cfg.long_edge_mode)
    if cfg.long_edge_mode:
        return build_reduced(net, delta, covers, cfg)
    m = build_base(net, delta, covers, cfg)
    if cfg.use_strengthening:
        add_valid_inequalities(m, net, covers)
    if cfg.fix_edge_vars_to_zero:
        for e in net.edges:
            m.fix(ye(e.id), 0)
    return m


def residual_rows(model: ModelSpec) -> list:
    """Indicator-guarded residual rows, for validity checks."""
    return [c for c in model.constraints if c.family in ("res_all", "res_node", "res_edge")]

