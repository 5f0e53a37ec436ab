"""HTTP service exposing evaluation, law checking, bisimulation and plays.

Error contract: structural problems in the request (parse errors, shape
errors, bad workspaces, unknown names) come back as 400 with
``{"error": {"kind": ..., "message": ...}}``; failures of the computation
itself (diverging feedback, singular systems) come back as 409.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..axioms import AXIOM_IDS, check_all_axioms, check_axiom
from ..errors import (DivergenceError, ParseError, ShapeError, SingularityError,
                      TracekitError, ValidationError)
from ..intcat import IntObject
from ..objects import UNIT
from ..plays import format_playset, morphism_plays
from ..terms import parse_term
from ..transducer import bisim_equiv
from ..workspace import (Workspace, eval_term, make_instance, morphism_from_json,
                         morphism_to_json, render_morphism, run_morphism,
                         shape_check, token_log)
from . import models

app = FastAPI(title="tracekit", version="0.1.0")

_BAD_REQUEST = (ParseError, ShapeError, ValidationError)
_CONFLICT = (DivergenceError, SingularityError)


def _kind(exc: TracekitError) -> str:
    if isinstance(exc, ParseError):
        return "parse"
    if isinstance(exc, ShapeError):
        return "shape"
    if isinstance(exc, _CONFLICT):
        return "runtime"
    return "validation"


@app.exception_handler(TracekitError)
async def tracekit_error_handler(request: Request, exc: TracekitError):
    status = 409 if isinstance(exc, _CONFLICT) else 400
    return JSONResponse(
        status_code=status,
        content={"error": {"kind": _kind(exc), "message": str(exc)}},
    )


@app.get("/health")
def health():
    return {"status": "ok"}


@app.get("/instances", response_model=models.InstancesResponse)
def instances():
    from ..workspace import INSTANCES

    return {"instances": sorted(INSTANCES)}


@app.post("/eval", response_model=models.EvalResponse)
def eval_endpoint(req: models.EvalRequest):
    ws = Workspace.from_json(req.workspace, req.instance)
    term = parse_term(req.term)
    dom, cod = shape_check(term, ws)
    m = eval_term(term, ws)
    payload = morphism_to_json(ws.instance, m)
    out = models.MorphismOut(
        instance=ws.instance.name,
        dom=payload["dom"],
        cod=payload["cod"],
        payload=payload,
        text=render_morphism(ws.instance, m),
    )
    outputs = None
    if req.run is not None:
        outputs = run_morphism(ws.instance, m, req.run)
    return models.EvalResponse(dom=payload["dom"], cod=payload["cod"],
                               morphism=out, outputs=outputs)


@app.post("/check", response_model=models.CheckResponse)
def check_endpoint(req: models.CheckRequest):
    inst = make_instance(req.instance)
    if req.axiom == "all":
        reports = check_all_axioms(inst, req.samples, req.seed)
    else:
        if req.axiom not in AXIOM_IDS:
            raise ValidationError(
                f"unknown axiom {req.axiom!r}; known: {', '.join(AXIOM_IDS)} or 'all'"
            )
        reports = [check_axiom(inst, req.axiom, req.samples, req.seed)]
    outs = [
        models.AxiomReportOut(
            axiom=r.axiom,
            samples=r.samples,
            passed=r.passed,
            failures=[models.FailureOut(sample=f.sample, description=f.description,
                                        lhs=f.lhs, rhs=f.rhs) for f in r.failures],
            skipped=r.skipped,
        )
        for r in reports
    ]
    return models.CheckResponse(instance=req.instance, seed=req.seed, reports=outs,
                                passed=all(r.passed for r in outs))


@app.post("/bisim", response_model=models.BisimResponse)
def bisim_endpoint(req: models.BisimRequest):
    inst = make_instance("transducer")
    left = morphism_from_json(inst, req.left)
    right = morphism_from_json(inst, req.right)
    res = bisim_equiv(left, right)
    witness = None
    if not res.equivalent:
        witness = [[e[0], e[1]] for e in res.witness]
    return models.BisimResponse(equivalent=res.equivalent, witness=witness)


@app.post("/plays", response_model=models.PlaysResponse)
def plays_endpoint(req: models.PlaysRequest):
    ws = Workspace.from_json(req.workspace, req.instance)
    if ws.instance.name != "transducer":
        raise ValidationError("plays are enumerated over the transducer instance")
    term = parse_term(req.term)
    shape_check(term, ws)
    m = eval_term(term, ws)
    ps = morphism_plays(m, IntObject(m.dom, UNIT), IntObject(m.cod, UNIT), req.depth)
    text = format_playset(ps)
    return models.PlaysResponse(plays=text.split("\n") if text or ps.plays else [])


@app.post("/trace-log", response_model=models.TraceLogResponse)
def trace_log_endpoint(req: models.TraceLogRequest):
    ws = Workspace.from_json(req.workspace, req.instance)
    term = parse_term(req.term)
    shape_check(term, ws)
    return models.TraceLogResponse(lines=token_log(term, ws))
