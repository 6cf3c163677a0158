"""Stand-alone solver process: ``python -m netcover.solver.worker IN.lp OUT.json``.

Reads an LP file with HiGHS, solves it and writes
``{status, objective, bound, values, wall_time, message}`` as JSON.
A file HiGHS cannot read yields status ``unread``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="netcover-worker")
    ap.add_argument("model")
    ap.add_argument("solution")
    ap.add_argument("--time-limit", type=float, default=1800.0)
    ap.add_argument("--abs-gap", type=float, default=1 - 1e-6)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    import highspy

    from .highs import configure, harvest

    t0 = time.perf_counter()
    h = highspy.Highs()
    configure(h, args.time_limit, args.abs_gap, args.threads, args.seed)
    st = h.readModel(args.model)
    if st == highspy.HighsStatus.kError:
        out = {"status": "unread", "objective": None, "bound": None, "values": {},
               "wall_time": time.perf_counter() - t0, "message": "model file rejected"}
    else:
        h.run()
        names = list(h.getLp().col_names_)
        out = harvest(h, names, t0)
        out["values"].pop("obj_const", None)
    with open(args.solution, "w") as fh:
        json.dump(out, fh)
    return 0


if __name__ == "__main__":
    sys.exit(main())
