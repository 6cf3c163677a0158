import csv
import io
import json
import math

import pytest

from netcover import bench
from netcover.graph import path_graph
from netcover.instances import gen_random
from netcover.solver import SolveResult


def test_sgm_examples():
    assert bench.sgm([1, 9], 1) == pytest.approx(math.sqrt(20) - 1, abs=1e-9)
    assert bench.sgm([5.0], 1) == pytest.approx(5.0)
    assert bench.sgm([2, 8], 0) == pytest.approx(4.0)
    assert bench.sgm([0, 8], 0) == 0.0
    assert bench.sgm([1e-300, 1e300], 1) < 1e151
    for bad in ([], [-1.0]):
        with pytest.raises(ValueError):
            bench.sgm(bad, 1)


def test_sgm_between_min_and_max():
    vals = [0.2, 3.0, 40.0, 7.5]
    for shift in (0.01, 1, 10):
        assert min(vals) <= bench.sgm(vals, shift) <= max(vals)


def test_record_defaults():
    none = bench.make_record("i", "SF", "large", 1.0, 7, SolveResult("timeout"), False, 300)
    assert (none.t, none.sigma, none.v_r, none.affected, none.solved) == (300, 1, 1, False, False)
    res = SolveResult("feasible", 4.0, 3.0, {}, 12.5)
    r = bench.make_record("i", "SF", "large", 1.0, 8, res, True, 300)
    assert r.t == 12.5 and r.sigma == pytest.approx(0.25) and r.v_r == pytest.approx(0.5)
    assert r.affected and not r.solved
    bad = bench.make_record("i", "SF", "large", 1.0, 8, SolveResult("optimal", 1.0, 1.0), False, 9)
    assert not bad.affected and "verification" in bad.message


def test_discrete_reference():
    mk = lambda v, inc: bench.make_record(  # noqa: E731
        "i", v, "large", 1.0, 10, SolveResult("optimal", inc, inc), True, 60)
    recs = [mk("SFD", 4.0), mk("RF", 3.0),
            bench.make_record("i", "SF", "large", 1.0, 10, SolveResult("timeout"), False, 60)]
    bench.attach_discrete_reference(recs)
    assert [r.v_r_prime for r in recs] == [1.0, 0.75, 1.0]


def test_grid_and_outputs(tmp_path):
    instances = [("path8", path_graph(8)), ("g6", gen_random(6, 0.5, 1))]
    recs = bench.run_grid(instances, ["SFD", "RF", "SF"], time_limit=60,
                          policies=["large", "small"], workers=2, backend="highs")
    assert len(recs) == 12
    assert all(r.solved and r.affected for r in recs)
    rows = bench.write_results(tmp_path, "demo", recs, {"time_limit": 60})
    for row in rows:
        assert row.solved <= row.affected <= row.total
        assert row.sat == "2/2/2"
    data = list(csv.DictReader(io.StringIO((tmp_path / "results.csv").read_text())))
    assert len(data) == 12 and "v_r_prime" in data[0]
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["records"] == 12 and man["config"] == {"time_limit": 60}
    table = (tmp_path / "summary.txt").read_text()
    assert "S/A/T" in table and "2/2/2" in table
    p8 = {r.variant: r for r in recs if r.instance == "path8" and r.policy == "large"}
    assert p8["RF"].incumbent <= p8["SFD"].incumbent
    assert p8["SF"].n_sd == p8["RF"].n_sd


def test_failed_build_is_recorded():
    rec = bench._run_one(("bad", path_graph(3), "XX", "large", 5, 0.5, "highs"))
    assert rec.status == "unread" and not rec.affected and rec.t == 5
