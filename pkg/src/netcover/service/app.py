"""HTTP front end over the library; the command-line client talks to this."""

from __future__ import annotations

import logging
import tempfile
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, bench, pipeline
from ..covers import covers_from_json, covers_to_json, process_network
from ..errors import BackendError, NetcoverError
from ..formulations import VariantConfig, build
from ..graph import format_graph, parse_graph
from ..instances import gen_random, gen_set, radius_for
from ..model import emit
from ..preprocess import preprocess
from ..solver import backend_list
from ..verify import is_cover, placement_from_json
from .schemas import (
    BenchRequest, BenchResponse, BuildRequest, BuildResponse, CoversRequest, GenRequest,
    GenSetRequest, GenSetResponse, PreprocessRequest, PreprocessResponse, SolveRequest,
    VerifyRequest, VerifyResponse,
)

log = logging.getLogger(__name__)

app = FastAPI(title="netcover", version=__version__)


@app.exception_handler(BackendError)
async def _backend_error(request: Request, exc: BackendError):
    return JSONResponse(status_code=503, content={"error": type(exc).__name__, "detail": str(exc)})


@app.exception_handler(NetcoverError)
async def _netcover_error(request: Request, exc: NetcoverError):
    return JSONResponse(status_code=422, content={"error": type(exc).__name__, "detail": str(exc)})


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.get("/backends")
def backends():
    return [vars(b) for b in backend_list()]


@app.post("/preprocess", response_model=PreprocessResponse)
def do_preprocess(req: PreprocessRequest):
    net, report = preprocess(parse_graph(req.graph), req.delta, req.mode)
    return PreprocessResponse(graph=format_graph(net), report=report.to_json())


@app.post("/covers")
def do_covers(req: CoversRequest):
    cd = process_network(parse_graph(req.graph), req.delta, allow_long=req.allow_long)
    return covers_to_json(cd)


@app.post("/build", response_model=BuildResponse)
def do_build(req: BuildRequest):
    net = parse_graph(req.graph)
    if req.preprocess:
        net, _ = preprocess(net, req.delta, VariantConfig.of(req.variant).preprocess_mode)
    covers = None
    if req.covers is not None:
        covers = covers_from_json(req.covers)
        if len(covers.node) != net.n or len(covers.Ec) != net.m:
            raise NetcoverError(
                f"covers describe {len(covers.node)} nodes/{len(covers.Ec)} edges, "
                f"model network has {net.n}/{net.m}; pass the preprocessed graph"
            )
    model = build(req.variant, net, req.delta, covers)
    return BuildResponse(lp=emit(model), counts=model.counts(), network=[net.n, net.m])


@app.post("/solve")
def do_solve(req: SolveRequest):
    net = parse_graph(req.graph)
    delta = req.delta if req.delta is not None else radius_for(net, req.policy)
    out = pipeline.run(net, delta, req.variant, time_limit=req.time_limit,
                       abs_gap=req.abs_gap, backend=req.backend, seed=req.seed)
    return out.to_json()


@app.post("/verify", response_model=VerifyResponse)
def do_verify(req: VerifyRequest):
    net = parse_graph(req.graph)
    placement = placement_from_json(net, [p.model_dump() for p in req.placement])
    chk = is_cover(net, req.delta, placement)
    return VerifyResponse(ok=chk.ok, edge=chk.edge,
                          interval=list(chk.interval) if chk.interval else None,
                          facilities=len(placement.points))


@app.post("/gen")
def do_gen(req: GenRequest):
    return {"graph": format_graph(gen_random(req.n, req.p, req.seed))}


@app.post("/gen-set", response_model=GenSetResponse)
def do_gen_set(req: GenSetRequest):
    with tempfile.TemporaryDirectory() as tmp:
        iset = gen_set(req.family, tmp, req.seed, req.policy,
                       tuple(req.sizes) if req.sizes else None, tuple(req.probabilities))
        graphs = {e.file: (Path(tmp) / e.file).read_text() for e in iset.instances}
    return GenSetResponse(set=iset.to_json(), graphs=graphs)


@app.post("/bench", response_model=BenchResponse)
def do_bench(req: BenchRequest):
    instances = [(i.id, parse_graph(i.graph)) for i in req.instances]
    records = bench.run_grid(instances, req.variants, req.time_limit, req.policies,
                             req.workers, req.abs_gap, req.backend)
    rows = bench.summarize(req.name, records)
    config = req.model_dump(exclude={"instances"})
    config["instances"] = [i.id for i in req.instances]
    return BenchResponse(
        records=[vars(r) for r in records],
        summary=[dict(vars(r), sat=r.sat) for r in rows],
        table=bench.render_table(rows),
        csv=bench.records_csv(records),
        manifest=bench.manifest(req.name, records, rows, config),
    )
