"""FastAPI application; every route is a thin shell over handlers."""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse

from . import handlers
from .models import (
    FamilyResponse,
    FieldRequest,
    MubsRequest,
    RingRequest,
    RingResponse,
    TomoRequest,
    TomoResponse,
    VerifyRequest,
    VerifyResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="mubkit", version="0.1.0")

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/field")
    def field(req: FieldRequest):
        try:
            if req.format == "json":
                return handlers.handle_field(req)
            return PlainTextResponse(handlers.handle_field_text(req))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/mubs", response_model=FamilyResponse)
    def mubs(req: MubsRequest):
        try:
            return handlers.handle_mubs(req)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest):
        try:
            return handlers.handle_verify(req)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/tomo", response_model=TomoResponse)
    def tomo(req: TomoRequest):
        try:
            return handlers.handle_tomo(req)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/ring", response_model=RingResponse)
    def ring(req: RingRequest):
        try:
            return handlers.handle_ring(req)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    return app
