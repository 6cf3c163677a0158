import random

import pytest

from conftest import random_net, single
from netcover import pipeline
from netcover.covers import process_network, trivial_covers
from netcover.errors import AssumptionError, ModelError
from netcover.formulations import (
    VariantConfig, build, build_base, long_edge_set, periods, residual_rows, tail_length,
    tighten_bigM,
)
from netcover.graph import Network, path_graph
from netcover.preprocess import preprocess, subdivide_for_reduced
from netcover.verify import brute_force_optimum


def fixed(model, name, value=0.0):
    v = model.var(name)
    return v.lb == v.ub == value


def test_variant_flags():
    assert not VariantConfig.of("F0").use_cover_delimitation
    for v in ("SF", "SFD", "RF"):
        assert VariantConfig.of(v).use_strengthening
    assert VariantConfig.of("RF").long_edge_mode
    assert VariantConfig.of("RF").preprocess_mode == "reduced"
    assert VariantConfig.of("SFD").fix_edge_vars_to_zero
    with pytest.raises(ModelError):
        VariantConfig.of("G")


def test_reach_bound_and_constants():
    net = Network.from_edges(3, [(0, 1, 1.0), (1, 2, 0.5)])
    cd = process_network(net, 1.2)
    t = tighten_bigM(net, 1.2, cd)
    assert t.U[1] == 1.0
    assert 2 in cd.Vp[1]
    assert t.delta_vv[1, 2] == pytest.approx(1.2)
    assert t.M_vv[1, 2] == pytest.approx(0.3)


def test_zero_constant_when_reach_is_short():
    net = Network.from_edges(3, [(0, 1, 1.0), (1, 2, 0.5)])
    t = tighten_bigM(net, 2.0, trivial_covers(net, 2.0))
    assert t.M_vv[1, 1] == 0.0
    assert t.delta_vv[1, 1] == pytest.approx(1.0)


def test_leaf_fixing_on_path():
    m = build("SF", path_graph(3), 1.0)
    for name in ("y_n0", "y_n2", "y_e0", "y_e1"):
        assert fixed(m, name)
    assert not fixed(m, "y_n1")


def test_two_node_network_keeps_its_edge():
    m = build("SF", single(1.0), 1.0)
    assert not fixed(m, "y_e0")


def test_neighborhood_rows(star3, k3):
    m = build("SF", star3, 1.0)
    row = {c.name: c for c in m.constraints}["nbhd_n0"]
    assert sorted(v for _, v in row.terms) == ["y_e0", "y_e1", "y_e2", "y_n0"]
    assert row.rhs == 1
    m3 = build("SF", k3, 1.0)
    nb = [c for c in m3.constraints if c.family == "neighborhood"]
    assert len(nb) == 3 and all(len(c.terms) == 3 for c in nb)


def test_exclusion_rows_replaced(k3):
    f = build("F", k3, 1.0).counts()["families"]
    sf = build("SF", k3, 1.0).counts()["families"]
    assert f["node_edge_excl"] == 2 * k3.m
    assert "node_edge_excl" not in sf and sf["neighborhood"] == k3.n


def test_f0_switches_off_delimitation(k3):
    m = build("F0", k3, 1.0)
    assert all(fixed(m, f"w_e{e}") for e in range(3))
    assert all(fixed(m, f"x_n{v}") for v in range(3))
    fams = m.counts()["families"]
    assert "complete_lb" not in fams and "complete_ub" not in fams


def test_sfd_has_no_edge_facilities(k3):
    m = build("SFD", k3, 1.0)
    assert all(fixed(m, f"y_e{e}") for e in range(3))


def test_missing_covers_and_assumption():
    with pytest.raises(ModelError):
        build_base(single(1.0), 1.0, None, VariantConfig.of("F"))
    with pytest.raises(AssumptionError):
        build("SF", single(2.0), 1.0)


def test_residual_rows_families(path8):
    net, _ = preprocess(path8, 1.2, "assumption")
    rows = residual_rows(build("SF", net, 1.2))
    assert {c.family for c in rows} <= {"res_all", "res_node", "res_edge"}
    assert sum(c.family == "res_all" for c in rows) == net.n


@pytest.mark.parametrize("length,tail,k", [(4.2, 0.2, 2), (3.5, 1.5, 1), (4.0, 0.0, 2),
                                           (7.3, 1.3, 3)])
def test_tail_and_periods(length, tail, k):
    assert tail_length(length, 1.0) == pytest.approx(tail)
    assert periods(length, 1.0) == k


def test_long_edge_model():
    m = build("RF", single(4.2), 1.0)
    assert m.meta["long_edges"] == [0]
    assert m.meta["tails"][0] == pytest.approx(0.2)
    assert m.objective_constant == 3
    assert fixed(m, "y_e0", 1.0) and fixed(m, "w_e0", 0.0)
    fams = m.counts()["families"]
    for fam in ("long_range_hi", "long_range_lo", "long_head", "long_tail"):
        assert fams[fam] == 1


def test_reduced_requires_halving():
    with pytest.raises(ModelError):
        build("RF", single(1.5), 1.0)
    net, _ = subdivide_for_reduced(single(1.5), 1.0)
    assert long_edge_set(net, 1.0) == frozenset()
    build("RF", net, 1.0)


@pytest.mark.parametrize("seed", range(6))
def test_strengthened_never_larger_than_naive(seed):
    rng = random.Random(seed)
    src = random_net(rng, rng.randint(3, 8), extra=rng.randint(0, 4))
    delta = rng.uniform(0.6, 1.4)
    net, _ = preprocess(src, delta, "assumption")
    a = build("SF", net, delta).counts()
    b = build("F0", net, delta).counts()
    assert a["variables"] <= b["variables"]
    assert a["constraints"] <= b["constraints"]


# ---- solved examples ------------------------------------------------------

@pytest.mark.parametrize("variant", ["F0", "F", "SF", "RF", "SFD"])
def test_path8(path8, variant):
    out = pipeline.run(path8, 1.2, variant, time_limit=60, backend="highs")
    assert out.result.status == "optimal"
    assert out.result.incumbent == 3 if variant != "SFD" else out.result.incumbent >= 3
    assert out.verified


@pytest.mark.parametrize("variant", ["F", "SF"])
def test_single_unit_edge(variant):
    out = pipeline.run(single(1.0), 1.0, variant, backend="highs")
    assert out.result.incumbent == 1 and out.verified


def test_k3_wide_radius(k3):
    out = pipeline.run(k3, 2.0, "F", backend="highs")
    assert out.result.incumbent == 1 and out.verified
    assert brute_force_optimum(k3, 2.0, 0.25)[0] == 1


@pytest.mark.parametrize("length,opt", [(3.5, 2), (2.0, 1), (4.2, 3), (4.0, 2), (7.3, 4),
                                        (0.5, 1), (6.0, 3)])
def test_single_edge_reduced(length, opt):
    """Analytic optimum ceil(l / 2δ) on a lone edge."""
    out = pipeline.run(single(length), 1.0, "RF", backend="highs")
    assert out.result.status == "optimal"
    assert out.result.incumbent == opt
    assert out.verified


@pytest.mark.parametrize("seed", range(5))
def test_variants_agree_on_small_random(seed):
    rng = random.Random(40 + seed)
    net = random_net(rng, rng.randint(3, 6), extra=rng.randint(0, 2), lo=0.5, hi=2.5)
    delta = rng.uniform(0.7, 1.3)
    objs = {}
    for variant in ("F0", "F", "SF", "RF", "SFD"):
        out = pipeline.run(net, delta, variant, time_limit=60, backend="highs")
        assert out.result.status == "optimal"
        assert out.verified
        objs[variant] = out.result.incumbent
    assert objs["F0"] == objs["F"] == objs["SF"] == objs["RF"] <= objs["SFD"]
