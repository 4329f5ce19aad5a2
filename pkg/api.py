import logging
from datetime import datetime
from typing import List, Optional

from fastapi import BackgroundTasks, FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from analysis import AnalysisReport, DeformReport, RandomCheckSummary, analyze, deform_report, random_check, resolve_family, resolve_input
from catalog_io import CATALOG, CatalogDocument, catalog_document
from common_utils import log_error, recent_errors, setup_logging
from deform import dkahler_at
from dkahler import DKahlerVerdict, dkahler_decide
from errors import InputError, InternalInvariantError, ParaCohError, UnknownEntry

setup_logging()
logger = logging.getLogger(__name__)

app = FastAPI(title="Para-complex Cohomology API", version="1.0.0")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Global state of the background random check
random_check_status = {
    'is_running': False,
    'processed': 0,
    'start_time': None,
    'errors': [],
    'last_summary': None,
}


class Source(BaseModel):
    algebra: Optional[str] = None
    catalog: Optional[str] = None


class AnalyzeRequest(Source):
    k: Optional[str] = None
    structure: Optional[str] = None
    stages: List[int] = [2]
    homology: bool = False
    dkahler: bool = False


class DeformRequest(Source):
    family: Optional[str] = None
    structure: Optional[str] = None
    t: List[str] = ["0", "1"]
    stage: int = 2


class DKahlerRequest(Source):
    k: Optional[str] = None
    structure: Optional[str] = None
    t: Optional[str] = None


class RandomCheckRequest(Source):
    trials: int = 100
    seed: int = 0
    stage: int = 2
    max_attempts: Optional[int] = None


class RandomCheckStatus(BaseModel):
    is_running: bool
    processed: int
    start_time: Optional[datetime] = None
    errors: List[str]
    last_summary: Optional[RandomCheckSummary] = None


class CatalogItem(BaseModel):
    name: str
    aliases: List[str]
    algebra: str
    structures: List[str]
    notes: str


def _http_error(e):
    """HTTPException for an engine error: 404 unknown entry, 400 input, 500 internal."""
    if isinstance(e, UnknownEntry):
        return HTTPException(status_code=404, detail=str(e))
    if isinstance(e, InputError):
        return HTTPException(status_code=400, detail=str(e))
    if isinstance(e, InternalInvariantError):
        log_error(f"Internal invariant breach: {e}")
    else:
        log_error(f"Unexpected engine error: {e}")
    return HTTPException(status_code=500, detail=str(e))


def run_random_check_background(request: RandomCheckRequest):
    global random_check_status
    random_check_status.update(is_running=True, processed=0, start_time=datetime.now(), errors=[])
    try:
        g, _ = resolve_input(request.algebra, request.catalog)
        summary = random_check(g, request.trials, request.seed, request.stage, request.max_attempts)
        random_check_status['processed'] = summary.sampled + summary.not_found
        random_check_status['errors'] = [f"seed {c.seed}: {c.reason}" for c in summary.counterexamples]
        random_check_status['last_summary'] = summary
    except ParaCohError as e:
        log_error(f"Random check failed: {e}")
        random_check_status['errors'].append(str(e))
    finally:
        random_check_status['is_running'] = False


# ==================== API ENDPOINTS ====================

@app.get("/", summary="API Health Check")
async def root():
    """Health check endpoint"""
    return {"message": "Para-complex Cohomology API is running", "version": "1.0.0"}


@app.post("/analyze", response_model=List[AnalysisReport], summary="Subgroup dimensions and verdicts")
def post_analyze(request: AnalyzeRequest):
    try:
        g, ps = resolve_input(request.algebra, request.catalog, request.k, request.structure)
        reports = []
        for stage in request.stages:
            reports.extend(analyze(g, ps, stage, homology=request.homology, dkahler=request.dkahler))
        return reports
    except ParaCohError as e:
        raise _http_error(e)


@app.post("/deform", response_model=DeformReport, summary="Scan a one-parameter family")
def post_deform(request: DeformRequest):
    try:
        f = resolve_family(request.algebra, request.catalog, request.family, request.structure)
        return deform_report(f, request.t, request.stage)
    except ParaCohError as e:
        raise _http_error(e)


@app.post("/dkahler", response_model=DKahlerVerdict, summary="Decide D-Kähler existence")
def post_dkahler(request: DKahlerRequest):
    try:
        if request.t is not None:
            f = resolve_family(request.algebra, request.catalog, None, request.structure)
            return dkahler_at(f, request.t)
        g, ps = resolve_input(request.algebra, request.catalog, request.k, request.structure)
        if ps is None:
            raise InputError("a D-complex structure is required")
        return dkahler_decide(g, ps)
    except ParaCohError as e:
        raise _http_error(e)


@app.get("/catalog", response_model=List[CatalogItem], summary="List catalog entries")
async def get_catalog():
    return [
        CatalogItem(
            name=doc.name,
            aliases=doc.aliases,
            algebra=doc.algebra,
            structures=list(doc.structures),
            notes=doc.notes,
        )
        for doc in CATALOG
    ]


@app.get("/catalog/{name}", response_model=CatalogDocument, summary="Get a catalog entry")
async def get_catalog_entry(name: str):
    try:
        return catalog_document(name)
    except ParaCohError as e:
        raise _http_error(e)


@app.post("/random-check", summary="Start a random structure check")
async def start_random_check(request: RandomCheckRequest, background_tasks: BackgroundTasks):
    """Sample integrable structures in the background; poll /random-check-status."""
    if random_check_status['is_running']:
        raise HTTPException(status_code=400, detail="A random check is already running")
    if request.trials < 1:
        raise HTTPException(status_code=400, detail="trials must be at least 1")

    background_tasks.add_task(run_random_check_background, request)

    return {"message": "Random check started in background"}


@app.get("/random-check-status", response_model=RandomCheckStatus, summary="Get Random Check Status")
async def get_random_check_status():
    return RandomCheckStatus(**random_check_status)


@app.get("/logs", summary="Get Error Logs")
async def get_logs(limit: int = Query(10, ge=1, le=10, description="Number of logs to retrieve")):
    """Most recent error log entries, newest last"""
    return {"logs": recent_errors[-limit:]}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
