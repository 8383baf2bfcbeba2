"""HTTP surface: one POST endpoint per command, plus suite discovery and health.

Run with `uvicorn spinboson.service.app:app`.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..suites import SUITES
from . import handlers, schemas

app = FastAPI(
    title="spinboson",
    description=(
        "Spectra of two-level systems coupled to boson modes: direct "
        "diagonalization, ladder-algebra verification, closed forms, and "
        "recurrence reductions."
    ),
)


def _run(handler, request):
    try:
        return handler(request)
    except ValueError as err:
        raise HTTPException(status_code=400, detail=str(err)) from err


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/suites")
def suites() -> dict:
    return {"suites": sorted(SUITES)}


@app.post("/spectrum", response_model=schemas.SpectrumResponse)
def spectrum(request: schemas.SpectrumRequest):
    return _run(handlers.run_spectrum, request)


@app.post("/closed-form", response_model=schemas.ClosedFormResponse)
def closed_form(request: schemas.ClosedFormRequest):
    return _run(handlers.run_closed_form, request)


@app.post("/recurrence", response_model=schemas.RecurrenceResponse)
def recurrence(request: schemas.RecurrenceRequest):
    return _run(handlers.run_recurrence, request)


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify(request: schemas.VerifyRequest):
    return _run(handlers.run_verify, request)


@app.post("/converge", response_model=schemas.ConvergeResponse)
def converge(request: schemas.ConvergeRequest):
    return _run(handlers.run_converge, request)


@app.post("/reconstruct", response_model=schemas.ReconstructResponse)
def reconstruct(request: schemas.ReconstructRequest):
    return _run(handlers.run_reconstruct, request)
