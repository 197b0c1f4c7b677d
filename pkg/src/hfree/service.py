"""HTTP front end: one POST endpoint per command, all delegating to the
runners in schemas.py.  Run with `uvicorn hfree.service:app`."""

from fastapi import FastAPI, HTTPException

from .schemas import (
    BuildRequest,
    CertifyRequest,
    CompareRequest,
    DegreesRequest,
    run_build,
    run_certify,
    run_compare,
    run_degrees,
)

app = FastAPI(title="hfree", version="0.1.0")


def _run(runner, req):
    try:
        return runner(req)
    except ValueError as err:
        raise HTTPException(status_code=422, detail=str(err)) from None


@app.post("/build")
def build(req: BuildRequest):
    return _run(run_build, req)


@app.post("/certify")
def certify(req: CertifyRequest):
    return _run(run_certify, req)


@app.post("/compare")
def compare(req: CompareRequest):
    return _run(run_compare, req)


@app.post("/degrees")
def degrees(req: DegreesRequest):
    return _run(run_degrees, req)
