"""Benchmark grids: per-run records, shifted geometric means and S/A/T tables."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import platform
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from . import __version__, pipeline
from .errors import NetcoverError
from .graph import Network
from .instances import InstanceSet, radius_for
from .preprocess import preprocess
from .solver import DEFAULT_GAP, SolveResult, solve

log = logging.getLogger(__name__)

SHIFT_T = 1.0
SHIFT_RATIO = 0.01


def sgm(values, shift: float) -> float:
    """Shifted geometric mean, computed through a log-sum."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("sgm of an empty list")
    if shift < 0 or any(v < 0 for v in vals):
        raise ValueError("sgm needs nonnegative values and shift")
    if shift == 0 and 0.0 in vals:
        return 0.0
    return math.exp(math.fsum(math.log(v + shift) for v in vals) / len(vals)) - shift


@dataclass
class BenchRecord:
    instance: str
    variant: str
    policy: str
    delta: float
    t: float
    status: str
    incumbent: float | None
    bound: float | None
    n_sd: int
    sigma: float
    v_r: float
    v_r_prime: float | None = None
    affected: bool = False
    solved: bool = False
    prep_time: float = 0.0
    message: str = ""


def make_record(instance: str, variant: str, policy: str, delta: float, n_sd: int,
                result: SolveResult, verified: bool, time_limit: float,
                prep_time: float = 0.0) -> BenchRecord:
    affected = result.has_incumbent and verified
    msg = result.message
    if result.has_incumbent and not verified:
        msg = ("incumbent failed verification; " + msg).strip()
    if not affected:
        return BenchRecord(instance, variant, policy, delta, float(time_limit), result.status,
                           None, result.bound, n_sd, 1.0, 1.0, None, False, False,
                           prep_time, msg)
    ub = float(result.incumbent)
    lb = result.bound if result.bound is not None else 0.0
    sigma = max(0.0, (ub - lb) / ub) if ub > 0 else 0.0
    return BenchRecord(instance, variant, policy, delta, result.wall_time, result.status,
                       ub, result.bound, n_sd, sigma, ub / n_sd, None, True,
                       result.status == "optimal", prep_time, msg)


def subdivided_nodes(net, delta: float) -> int:
    return preprocess(net, delta, "assumption")[0].n


def _run_one(job) -> BenchRecord:
    name, net, variant, policy, time_limit, abs_gap, backend = job
    delta = radius_for(net, policy)
    n_sd = subdivided_nodes(net, delta)
    try:
        prep = pipeline.prepare(net, delta, variant)
    except NetcoverError as exc:
        res = SolveResult("unread", message=f"build failed: {exc}")
        return make_record(name, variant, policy, delta, n_sd, res, False, time_limit)
    res = solve(prep.model, time_limit=time_limit, abs_gap=abs_gap, backend=backend)
    try:
        out = pipeline.finish(prep, res)
        verified = out.verified
    except NetcoverError as exc:
        res.message = f"decode failed: {exc}; {res.message}"
        verified = False
    rec = make_record(name, variant, policy, delta, n_sd, res, verified, time_limit,
                      prep.prep_time)
    log.info("%s %s %s: %s %s in %.2fs", name, policy, variant, rec.status,
             rec.incumbent, rec.t)
    return rec


def attach_discrete_reference(records: list[BenchRecord]) -> None:
    """Fill v'_r from the SFD run of the same instance and radius."""
    ref = {(r.instance, r.policy): r.incumbent
           for r in records if r.variant == "SFD" and r.affected}
    for r in records:
        vd = ref.get((r.instance, r.policy))
        if vd is None:
            continue
        r.v_r_prime = r.incumbent / vd if r.affected else 1.0


def run_grid(instances: InstanceSet | list[tuple[str, Network]], variants,
             time_limit: float = 1800.0, policies=None, workers: int = 3,
             abs_gap: float = DEFAULT_GAP, backend: str | None = None) -> list[BenchRecord]:
    """Solve every (radius, instance, variant) combination on a worker pool."""
    if isinstance(instances, InstanceSet):
        policies = policies or [instances.radius_policy]
        instances = [(e.id, instances.load(e)) for e in instances.instances]
    policies = list(policies or ["large"])
    jobs = [(name, net, v, pol, time_limit, abs_gap, backend)
            for pol in policies for name, net in instances for v in variants]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        records = list(pool.map(_run_one, jobs))
    attach_discrete_reference(records)
    return records


@dataclass
class SummaryRow:
    benchmark: str
    policy: str
    variant: str
    time: float
    sigma: float
    v_r: float
    v_r_prime: float | None
    solved: int
    affected: int
    total: int

    @property
    def sat(self) -> str:
        return f"{self.solved}/{self.affected}/{self.total}"


def summarize(benchmark: str, records: list[BenchRecord]) -> list[SummaryRow]:
    groups: dict[tuple[str, str], list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.policy, r.variant), []).append(r)
    rows = []
    for (pol, var), rs in groups.items():
        primes = [r.v_r_prime for r in rs if r.v_r_prime is not None]
        rows.append(SummaryRow(
            benchmark, pol, var,
            sgm([r.t for r in rs], SHIFT_T),
            sgm([r.sigma for r in rs], SHIFT_RATIO),
            sgm([r.v_r for r in rs], SHIFT_RATIO),
            sgm(primes, SHIFT_RATIO) if primes else None,
            sum(r.solved for r in rs), sum(r.affected for r in rs), len(rs),
        ))
    return rows


def render_table(rows: list[SummaryRow]) -> str:
    head = ["benchmark", "radius", "model", "time", "sigma(%)", "v_r(%)", "v'_r(%)", "S/A/T"]
    body = []
    for r in rows:
        body.append([
            r.benchmark, r.policy, r.variant, f"{r.time:.1f}", f"{100 * r.sigma:.1f}",
            f"{100 * r.v_r:.1f}", "-" if r.v_r_prime is None else f"{100 * r.v_r_prime:.1f}",
            r.sat,
        ])
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*head), "  ".join("-" * w for w in widths)]
    lines += [fmt.format(*b) for b in body]
    return "\n".join(lines) + "\n"


def records_csv(records: list[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=[f.name for f in fields(BenchRecord)], lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(asdict(r))
    return buf.getvalue()


def manifest(benchmark: str, records: list[BenchRecord], rows: list[SummaryRow],
             config: dict) -> dict:
    return {
        "benchmark": benchmark,
        "version": __version__,
        "python": platform.python_version(),
        "created": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "config": config,
        "records": len(records),
        "summary": [dict(asdict(r), sat=r.sat) for r in rows],
    }


def write_results(out_dir: str | Path, benchmark: str, records: list[BenchRecord],
                  config: dict) -> list[SummaryRow]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = summarize(benchmark, records)
    (out / "results.csv").write_text(records_csv(records))
    (out / "summary.txt").write_text(render_table(rows))
    (out / "manifest.json").write_text(json.dumps(manifest(benchmark, records, rows, config),
                                                  indent=1) + "\n")
    return rows
