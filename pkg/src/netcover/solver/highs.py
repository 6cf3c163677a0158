"""In-process HiGHS adapter."""

from __future__ import annotations

import math
import time

import numpy as np

from ..model import BINARY, ModelSpec

try:
    import highspy
except ImportError:  # pragma: no cover
    highspy = None


def available() -> bool:
    return highspy is not None


def configure(h, time_limit: float, abs_gap: float, threads: int, seed: int) -> None:
    h.setOptionValue("output_flag", False)
    h.setOptionValue("time_limit", float(time_limit))
    h.setOptionValue("mip_abs_gap", float(abs_gap))
    h.setOptionValue("mip_rel_gap", 0.0)
    h.setOptionValue("threads", int(threads))
    h.setOptionValue("random_seed", int(seed))


def harvest(h, names: list[str], t0: float) -> dict:
    """Status, objective, bound and values of a finished HiGHS run."""
    S = highspy.HighsModelStatus
    status = h.getModelStatus()
    info = h.getInfo()
    has_sol = info.primal_solution_status == 2
    if status == S.kOptimal:
        out = "optimal"
    elif status in (S.kInfeasible,):
        out = "infeasible"
    elif status in (S.kUnbounded, S.kUnboundedOrInfeasible):
        out = "unbounded"
    elif status in (S.kTimeLimit, S.kIterationLimit, S.kSolutionLimit, S.kInterrupt):
        out = "timeout"
    else:
        out = "feasible" if has_sol else "unread"
    res = {"status": out, "objective": None, "bound": None, "values": {},
           "wall_time": time.perf_counter() - t0, "message": h.modelStatusToString(status)}
    if has_sol and out not in ("infeasible", "unbounded"):
        res["objective"] = float(info.objective_function_value)
        bound = float(info.mip_dual_bound)
        res["bound"] = bound if math.isfinite(bound) else None
        vals = h.getSolution().col_value
        res["values"] = {n: float(x) for n, x in zip(names, vals)}
    return res


def solve(model: ModelSpec, *, time_limit: float, abs_gap: float, threads: int = 1,
          seed: int = 0):
    from . import SolveResult

    t0 = time.perf_counter()
    h = highspy.Highs()
    configure(h, time_limit, abs_gap, threads, seed)
    inf = highspy.kHighsInf
    n = len(model.variables)
    lb = np.array([v.lb if math.isfinite(v.lb) else -inf for v in model.variables], dtype=float)
    ub = np.array([v.ub if math.isfinite(v.ub) else inf for v in model.variables], dtype=float)
    h.addVars(n, lb, ub)
    index = {v.name: i for i, v in enumerate(model.variables)}
    cost = np.array([model.objective.get(v.name, 0.0) for v in model.variables], dtype=float)
    idx = np.arange(n, dtype=np.int32)
    if n:
        h.changeColsCost(n, idx, cost)
        integ = np.array([1 if v.kind == BINARY else 0 for v in model.variables], dtype=np.uint8)
        h.changeColsIntegrality(n, idx, integ)
    h.changeObjectiveOffset(model.objective_constant)
    rows = model.constraints
    if rows:
        lo = np.array([c.rhs if c.sense in (">=", "=") else -inf for c in rows], dtype=float)
        hi = np.array([c.rhs if c.sense in ("<=", "=") else inf for c in rows], dtype=float)
        starts, cols, vals = [], [], []
        for c in rows:
            starts.append(len(cols))
            for coef, name in c.terms:
                cols.append(index[name])
                vals.append(coef)
        h.addRows(len(rows), lo, hi, len(cols), np.array(starts, dtype=np.int32),
                  np.array(cols, dtype=np.int32), np.array(vals, dtype=float))
    h.run()
    r = harvest(h, [v.name for v in model.variables], t0)
    return SolveResult(r["status"], r["objective"], r["bound"], r["values"], r["wall_time"],
                       message=r["message"])
