"""MILP backends behind one ``solve`` call.

``external`` (the default) writes the model as an LP file and runs a solver
process that answers with a JSON solution file.  ``highs`` drives the HiGHS
library in-process.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import BackendError
from ..model import BINARY, ModelSpec

STATUSES = ("optimal", "feasible", "infeasible", "unbounded", "timeout", "unread")
DEFAULT_GAP = 1 - 1e-6
DEFAULT_BACKEND = "external"


@dataclass
class SolveResult:
    status: str
    incumbent: float | None = None
    bound: float | None = None
    values: dict[str, float] = field(default_factory=dict)
    wall_time: float = 0.0
    backend: str = ""
    message: str = ""

    @property
    def has_incumbent(self) -> bool:
        return self.incumbent is not None

    @property
    def gap(self) -> float | None:
        if self.incumbent is None or self.bound is None:
            return None
        return self.incumbent - self.bound

    def to_json(self) -> dict:
        return {
            "status": self.status, "incumbent": self.incumbent, "bound": self.bound,
            "gap": self.gap, "wall_time": self.wall_time, "backend": self.backend,
            "message": self.message, "values": self.values,
        }


@dataclass(frozen=True)
class BackendInfo:
    name: str
    kind: str
    description: str
    available: bool


def backend_list() -> list[BackendInfo]:
    from . import external, highs

    return [
        BackendInfo("external", "process", external.describe(), external.available()),
        BackendInfo("highs", "in-process", "HiGHS via highspy", highs.available()),
    ]


def get_backend(name: str | None = None):
    from . import external, highs

    name = name or DEFAULT_BACKEND
    table = {"external": external, "highs": highs}
    if name not in table:
        raise BackendError(f"unknown backend {name!r}; known: {sorted(table)}")
    mod = table[name]
    if not mod.available():
        raise BackendError(f"backend {name!r} is not available")
    return mod


def round_solution(model: ModelSpec, values: dict[str, float]) -> dict[str, float]:
    """Snap binaries at 0.5 and clip everything into its bounds."""
    out = {}
    for v in model.variables:
        x = values.get(v.name)
        if x is None:
            continue
        if v.kind == BINARY:
            x = 1.0 if x >= 0.5 else 0.0
        x = min(max(x, v.lb), v.ub) if math.isfinite(x) else x
        out[v.name] = x
    return out


def solve(model: ModelSpec, time_limit: float = 1800.0, abs_gap: float = DEFAULT_GAP,
          backend: str | None = None, threads: int = 1, seed: int = 0) -> SolveResult:
    """Solve ``model``; binaries are rounded and the rounded point re-checked."""
    mod = get_backend(backend)
    res: SolveResult = mod.solve(model, time_limit=time_limit, abs_gap=abs_gap,
                                 threads=threads, seed=seed)
    res.backend = backend or DEFAULT_BACKEND
    if res.incumbent is not None:
        missing = [v.name for v in model.variables if v.name not in res.values]
        if missing:
            raise BackendError(f"solution lacks {len(missing)} variables, e.g. {missing[:3]}")
        res.values = round_solution(model, res.values)
        bad = model.violations(res.values, 1e-6)
        if bad:
            res.message = (res.message + f"; rounded point violates {len(bad)} rows").strip("; ")
    else:
        res.values = {}
    return res
