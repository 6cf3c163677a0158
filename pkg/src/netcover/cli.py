"""Command-line client.

Every subcommand is a request to the HTTP service.  By default the service
runs in-process; ``--server URL`` sends the same requests to a running
instance instead (start one with ``netcover serve``).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from pathlib import Path

from pydantic import ValidationError

from .service.schemas import RunConfig

log = logging.getLogger("netcover")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BACKEND = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class Client:
    def __init__(self, server: str | None = None):
        if server:
            import httpx

            self._http = httpx.Client(base_url=server.rstrip("/"), timeout=None)
        else:
            with warnings.catch_warnings():
                warnings.filterwarnings("ignore", message=".*httpx.*")
                from fastapi.testclient import TestClient

            from .service.app import app

            self._http = TestClient(app, raise_server_exceptions=False)

    def get(self, path: str):
        return self._call("GET", path)

    def post(self, path: str, body: dict):
        return self._call("POST", path, json=body)

    def _call(self, method: str, path: str, **kw):
        import httpx

        try:
            resp = self._http.request(method, path, **kw)
        except httpx.HTTPError as exc:
            raise CliError(EXIT_BACKEND, f"service unreachable: {exc}") from None
        return self._unwrap(resp)

    @staticmethod
    def _unwrap(resp):
        try:
            body = resp.json()
        except ValueError:
            body = {"detail": resp.text}
        if resp.status_code == 200:
            return body
        detail = body.get("detail", body) if isinstance(body, dict) else body
        err = body.get("error", "") if isinstance(body, dict) else ""
        msg = json.dumps({"error": err or f"HTTP {resp.status_code}", "detail": detail})
        if resp.status_code == 422:
            raise CliError(EXIT_USAGE, msg)
        raise CliError(EXIT_BACKEND, msg)


def _read(path: str | None, what: str) -> str:
    if not path:
        raise CliError(EXIT_USAGE, f"missing --{what}")
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {what} {path}: {exc.strerror}") from None


def _emit(obj, out: str | None = None) -> None:
    text = obj if isinstance(obj, str) else json.dumps(obj, indent=1) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        base = json.loads(_read(args.config, "config"))
    for key in ("graph", "delta", "variant", "backend", "time_limit", "abs_gap", "seed", "out"):
        val = getattr(args, key, None)
        if val is not None:
            base[key] = val
    policy = getattr(args, "radius", None)
    if policy is not None:
        base["policy"] = policy
        if getattr(args, "delta", None) is None:
            base.pop("delta", None)
    elif getattr(args, "delta", None) is not None:
        base.pop("policy", None)
    try:
        return RunConfig(**base)
    except ValidationError as exc:
        raise CliError(EXIT_USAGE, f"bad configuration: {exc.errors()[0]['msg']}") from None


# ---- subcommands ------------------------------------------------------------

def cmd_preprocess(c: Client, args) -> int:
    cfg = _config(args)
    res = c.post("/preprocess", {"graph": _read(cfg.graph, "graph"), "delta": cfg.delta,
                                 "mode": args.mode})
    _emit(res["graph"], args.out_graph)
    _emit(res["report"] if args.full else {k: res["report"][k] for k in
                                           ("original", "contracted", "subdivided")}, args.report)
    return EXIT_OK


def cmd_covers(c: Client, args) -> int:
    cfg = _config(args)
    res = c.post("/covers", {"graph": _read(cfg.graph, "graph"), "delta": cfg.delta,
                             "allow_long": args.allow_long})
    _emit(res, cfg.out)
    return EXIT_OK


def cmd_build(c: Client, args) -> int:
    cfg = _config(args)
    body = {"graph": _read(cfg.graph, "graph"), "delta": cfg.delta, "variant": cfg.variant,
            "preprocess": not args.no_preprocess}
    if args.covers:
        body["covers"] = json.loads(_read(args.covers, "covers"))
    res = c.post("/build", body)
    _emit(res["lp"], cfg.out)
    print(json.dumps({"network": res["network"], **res["counts"]}), file=sys.stderr)
    return EXIT_OK


def cmd_solve(c: Client, args) -> int:
    cfg = _config(args)
    body = cfg.model_dump(exclude={"graph", "out"})
    body["graph"] = _read(cfg.graph, "graph")
    res = c.post("/solve", body)
    if cfg.out:
        _emit(res, cfg.out)
    verdict = "VERIFIED" if res["verified"] else "NOT VERIFIED"
    obj = res["objective"]
    print(f"status     {res['status']}")
    print(f"objective  {'-' if obj is None else round(obj)}")
    print(f"bound      {res['bound']}")
    print(f"gap        {res['gap']}")
    print(f"time       {res['wall_time']:.3f}s (+{res['prep_time']:.3f}s preprocessing)")
    for p in res["placement"] or []:
        print("  facility", json.dumps(p))
    if res["witness"]:
        print("  witness", json.dumps(res["witness"]))
    print(verdict)
    if res["status"] == "unread":
        return EXIT_BACKEND
    return EXIT_OK if res["verified"] else EXIT_FAIL


def cmd_verify(c: Client, args) -> int:
    cfg = _config(args)
    if cfg.delta is None:
        raise CliError(EXIT_USAGE, "verify needs --delta")
    pl = json.loads(_read(args.placement, "placement"))
    if isinstance(pl, dict):
        pl = pl.get("placement") or []
    res = c.post("/verify", {"graph": _read(cfg.graph, "graph"), "delta": cfg.delta,
                             "placement": pl})
    _emit(res)
    return EXIT_OK if res["ok"] else EXIT_FAIL


def cmd_gen(c: Client, args) -> int:
    res = c.post("/gen", {"n": args.n, "p": args.p, "seed": args.seed})
    _emit(res["graph"], args.out)
    return EXIT_OK


def cmd_gen_set(c: Client, args) -> int:
    body = {"family": args.family, "seed": args.seed, "policy": args.radius}
    if args.sizes:
        body["sizes"] = [int(x) for x in args.sizes.split(",")]
    res = c.post("/gen-set", body)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in res["graphs"].items():
        (out / name).write_text(text)
    path = out / f"{args.family}.json"
    path.write_text(json.dumps(res["set"], indent=1) + "\n")
    print(path)
    return EXIT_OK


def cmd_bench(c: Client, args) -> int:
    set_path = Path(args.set)
    data = json.loads(_read(args.set, "set"))
    instances = [{"id": e["id"], "graph": _read(str(set_path.parent / e["file"]), "graph"),
                  "n": e.get("n"), "p": e.get("p"), "seed": e.get("seed")}
                 for e in data["instances"]]
    policies = args.radius.split(",") if args.radius else [data.get("radius_policy", "large")]
    body = {"name": data["name"], "instances": instances,
            "variants": args.variants.split(","), "policies": policies,
            "time_limit": args.time_limit, "workers": args.workers}
    if args.backend:
        body["backend"] = args.backend
    res = c.post("/bench", body)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.csv").write_text(res["csv"])
    (out / "summary.txt").write_text(res["table"])
    (out / "manifest.json").write_text(json.dumps(res["manifest"], indent=1) + "\n")
    sys.stdout.write(res["table"])
    return EXIT_OK


def cmd_backends(c: Client, args) -> int:
    _emit(c.get("/backends"))
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("netcover.service.app:app", host=args.host, port=args.port,
                log_level=args.log_level.lower())
    return EXIT_OK


# ---- parser -----------------------------------------------------------------

def _graph_args(p, variant=False, radius=False):
    p.add_argument("--graph")
    p.add_argument("--delta", type=float)
    if radius:
        p.add_argument("--radius", choices=["small", "large"],
                       help="radius policy instead of --delta")
    if variant:
        p.add_argument("--variant", choices=["F0", "F", "SF", "RF", "SFD"])


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="netcover", description=__doc__.splitlines()[0])
    ap.add_argument("--server", help="URL of a running service (default: in-process)")
    ap.add_argument("--config", help="RunConfig JSON with defaults for graph/delta/variant/...")
    ap.add_argument("--log-level", default=os.environ.get("NETCOVER_LOG", "WARNING"))
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("preprocess", help="contract and subdivide a graph")
    _graph_args(p)
    p.add_argument("--mode", default="assumption",
                   choices=["none", "contract", "assumption", "reduced"])
    p.add_argument("--out", dest="out_graph", help="transformed graph file (default stdout)")
    p.add_argument("--report", help="JSON report file (default stdout)")
    p.add_argument("--full", action="store_true", help="include node and edge maps in the report")

    p = sub.add_parser("covers", help="dump cover sets as JSON")
    _graph_args(p)
    p.add_argument("--allow-long", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("build", help="write the LP model of a variant")
    _graph_args(p, variant=True)
    p.add_argument("--covers", help="cover JSON for the (already preprocessed) graph")
    p.add_argument("--no-preprocess", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("solve", help="preprocess, build, solve and verify")
    _graph_args(p, variant=True, radius=True)
    p.add_argument("--backend")
    p.add_argument("--time-limit", type=float)
    p.add_argument("--abs-gap", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write the full result JSON here")

    p = sub.add_parser("verify", help="check a placement exactly")
    _graph_args(p)
    p.add_argument("--placement", required=True)

    p = sub.add_parser("gen", help="random connected instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("gen-set", help="write a random_A / random_B style instance set")
    p.add_argument("--family", default="random_A")
    p.add_argument("--sizes", help="comma-separated node counts (required for new families)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", default="large", choices=["small", "large"])
    p.add_argument("--out", required=True)

    p = sub.add_parser("bench", help="run a variant grid over an instance set")
    p.add_argument("--set", required=True)
    p.add_argument("--variants", default="SF,RF,SFD")
    p.add_argument("--radius", help="comma-separated policies (default: the set's)")
    p.add_argument("--time-limit", type=float, default=1800.0)
    p.add_argument("--workers", type=int, default=3)
    p.add_argument("--backend")
    p.add_argument("--out", required=True)

    sub.add_parser("backends", help="list solver backends")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return ap


COMMANDS = {
    "preprocess": cmd_preprocess, "covers": cmd_covers, "build": cmd_build,
    "solve": cmd_solve, "verify": cmd_verify, "gen": cmd_gen, "gen-set": cmd_gen_set,
    "bench": cmd_bench, "backends": cmd_backends,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    level = logging.getLevelName(args.log_level.upper())
    if not isinstance(level, int):
        print(f"unknown log level {args.log_level!r}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    if args.cmd == "serve":
        return cmd_serve(args)
    try:
        return COMMANDS[args.cmd](Client(args.server), args)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
