"""End-to-end solve: preprocess, covers, build, solve, decode, verify."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

from .covers import CoverData, process_network
from .formulations import VariantConfig, build
from .graph import Network
from .model import ModelSpec
from .preprocess import PreprocessReport, preprocess
from .solver import DEFAULT_GAP, SolveResult, solve
from .verify import CoverCheck, Placement, decode, is_cover, lift

log = logging.getLogger(__name__)


@dataclass
class Prepared:
    variant: str
    delta: float
    source: Network
    net: Network
    report: PreprocessReport
    covers: CoverData | None
    model: ModelSpec
    prep_time: float


@dataclass
class Outcome:
    prepared: Prepared
    result: SolveResult
    placement: Placement | None
    check: CoverCheck | None

    @property
    def verified(self) -> bool:
        return self.check is not None and self.check.ok

    def to_json(self) -> dict:
        p = self.prepared
        r = self.result
        return {
            "variant": p.variant,
            "delta": p.delta,
            "status": r.status,
            "objective": r.incumbent,
            "bound": r.bound,
            "gap": r.gap,
            "wall_time": r.wall_time,
            "prep_time": p.prep_time,
            "counts": p.report.summary(),
            "model": p.model.counts(),
            "placement": self.placement.to_json() if self.placement else None,
            "verified": self.verified,
            "witness": self.check.to_json() if self.check and not self.check.ok else None,
            "message": r.message,
        }


def prepare(net: Network, delta: float, variant: str) -> Prepared:
    cfg = VariantConfig.of(variant)
    t0 = time.perf_counter()
    work, report = preprocess(net, delta, cfg.preprocess_mode)
    covers = None
    if cfg.use_cover_delimitation:
        covers = process_network(work, delta, allow_long=cfg.long_edge_mode)
    model = build(variant, work, delta, covers)
    t = time.perf_counter() - t0
    log.debug("%s: %s -> %s, %d vars, %d rows, %.3fs", variant, report.original_counts,
              report.subdivided_counts, len(model.variables), len(model.constraints), t)
    return Prepared(variant, delta, net, work, report, covers, model, t)


def finish(prep: Prepared, result: SolveResult) -> Outcome:
    if not result.has_incumbent:
        return Outcome(prep, result, None, None)
    local = decode(prep.model, result.values, prep.net)
    placement = lift(local, prep.report, prep.source)
    return Outcome(prep, result, placement, is_cover(prep.source, prep.delta, placement))


def run(net: Network, delta: float, variant: str, time_limit: float = 1800.0,
        abs_gap: float = DEFAULT_GAP, backend: str | None = None, seed: int = 0) -> Outcome:
    prep = prepare(net, delta, variant)
    res = solve(prep.model, time_limit=time_limit, abs_gap=abs_gap, backend=backend, seed=seed)
    return finish(prep, res)
