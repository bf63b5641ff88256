"""FastAPI entrypoint exposing the circuit toolkit over HTTP."""

from __future__ import annotations

import logging

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from app.api.v1.api import api_router
from app.core.config import settings
from app.core.errors import QftToolkitError

logger = logging.getLogger(__name__)

app = FastAPI(title=settings.app_name)
app.include_router(api_router, prefix="/api/v1")


@app.on_event("startup")
def startup() -> None:
    logging.getLogger("app").setLevel(settings.log_level)
    logger.info("Starting %s (env=%s, max_qubits=%d)", settings.app_name, settings.app_env, settings.max_qubits)


@app.exception_handler(QftToolkitError)
def toolkit_error_handler(request: Request, exc: QftToolkitError) -> JSONResponse:
    logger.info("%s %s rejected: %s", request.method, request.url.path, exc)
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/health")
def health() -> dict[str, str]:
    return {"status": "ok"}
