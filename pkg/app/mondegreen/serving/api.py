"""HTTP surface of the correction service."""
from typing import Optional

from fastapi import APIRouter, FastAPI, HTTPException, Query, Request
from pydantic import BaseModel

from ..errors import EmptyQueryError, InputFileError, SnapshotError
from ..utils import setup_logger
from .service import CorrectionResponse, CorrectionService

logger = setup_logger(__name__)

router = APIRouter()


class ReloadRequest(BaseModel):
    path: str


class StatsResponse(BaseModel):
    total: int
    triggered: int
    trigger_rate_pct: Optional[float]


def _service(request: Request) -> CorrectionService:
    return request.app.state.service


@router.get("/v1/correct", response_model=CorrectionResponse)
def correct_query(request: Request, q: str = Query(default="")) -> CorrectionResponse:
    try:
        return _service(request).correct(q)
    except EmptyQueryError:
        raise HTTPException(status_code=400, detail="query parameter q must be non-empty") from None


@router.post("/v1/reload")
def reload_snapshot(request: Request, body: ReloadRequest) -> dict:
    service = _service(request)
    try:
        table = service.reload(body.path)
    except (SnapshotError, InputFileError) as exc:
        logger.error(f"Reload from {body.path} rejected: {exc}")
        raise HTTPException(status_code=409, detail=str(exc)) from None
    return {"status": "ok", "table_version": table.version, "entries": len(table)}


@router.get("/healthz")
def healthz(request: Request) -> dict:
    service = _service(request)
    if not service.ready:
        raise HTTPException(status_code=503, detail="no rewrite table loaded")
    return {"status": "ok", "table_version": service.table.version}


@router.get("/v1/stats", response_model=StatsResponse)
def stats(request: Request) -> StatsResponse:
    service = _service(request)
    total, triggered = service.stats.snapshot()
    return StatsResponse(total=total, triggered=triggered, trigger_rate_pct=service.trigger_rate())


def create_app(service: CorrectionService) -> FastAPI:
    app = FastAPI(
        title="mondegreen",
        description="Voice query correction lookups against a precomputed rewrite table",
        version="1.0.0",
    )
    app.state.service = service
    app.include_router(router)
    return app
