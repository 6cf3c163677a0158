"""Process-boundary backend: LP file in, JSON solution file out.

The solver command comes from ``$NETCOVER_SOLVER`` (split like a shell
command); it defaults to this package's HiGHS worker.  The command is called
as ``CMD model.lp sol.json --time-limit T --abs-gap G --threads N --seed S``.
"""

from __future__ import annotations

import json
import os
import shlex
import shutil
import subprocess
import sys
import tempfile
import time
from pathlib import Path

from ..model import ModelSpec, emit

ENV = "NETCOVER_SOLVER"


def command() -> list[str]:
    raw = os.environ.get(ENV)
    if raw:
        return shlex.split(raw)
    return [sys.executable, "-m", "netcover.solver.worker"]


def available() -> bool:
    cmd = command()
    return bool(cmd) and (shutil.which(cmd[0]) is not None or Path(cmd[0]).exists())


def describe() -> str:
    return "LP file to solver process: " + " ".join(command())


def solve(model: ModelSpec, *, time_limit: float, abs_gap: float, threads: int = 1,
          seed: int = 0):
    from . import SolveResult

    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory(prefix="netcover-") as tmp:
        lp = Path(tmp) / "model.lp"
        sol = Path(tmp) / "sol.json"
        lp.write_text(emit(model))
        cmd = command() + [str(lp), str(sol), "--time-limit", repr(float(time_limit)),
                           "--abs-gap", repr(float(abs_gap)), "--threads", str(threads),
                           "--seed", str(seed)]
        try:
            proc = subprocess.run(cmd, capture_output=True, text=True,
                                  timeout=time_limit * 1.05 + 30)
        except subprocess.TimeoutExpired:
            return SolveResult("timeout", wall_time=time.perf_counter() - t0,
                               message="solver process killed after the time limit")
        except OSError as exc:
            return SolveResult("unread", wall_time=time.perf_counter() - t0, message=str(exc))
        if not sol.exists():
            msg = (proc.stderr or proc.stdout or "no solution file").strip()[-500:]
            return SolveResult("unread", wall_time=time.perf_counter() - t0, message=msg)
        try:
            data = json.loads(sol.read_text())
        except json.JSONDecodeError as exc:
            return SolveResult("unread", wall_time=time.perf_counter() - t0,
                               message=f"bad solution file: {exc}")
    status = data.get("status", "unread")
    values = {k: float(v) for k, v in (data.get("values") or {}).items()}
    inc = data.get("objective")
    return SolveResult(status, inc, data.get("bound"), values if inc is not None else {},
                       float(data.get("wall_time", time.perf_counter() - t0)),
                       message=data.get("message", ""))
