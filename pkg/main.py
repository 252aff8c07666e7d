"""
GRNF API - graph embeddings, distances and kernels over HTTP
"""

import logging
from contextlib import asynccontextmanager
from typing import List, Optional

import uvicorn
from fastapi import Depends, FastAPI, HTTPException, Query, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field
from sqlalchemy.orm import Session

from src.database.database import ExperimentRun, create_tables, get_db, test_connection, tracking_enabled
from src.features.distribution import K_MAX_LIMIT, DistributionConfig
from src.features.grnf import GrnfMap, build_grnf, build_weighted_grnf, embed, embed_centered
from src.features.serialization import GrnfMapDocument, map_from_document, map_to_document
from src.graphio.json_io import GraphDocument, graph_from_document
from src.metrics.bounds import embedding_dim_for
from src.metrics.estimators import distance_estimate, gram_matrix
from src.tensors.partitions import BELL_LIMIT
from src.utils.errors import GrnfError
from src.utils.logging_config import configure_logging
from src.utils.settings import get_settings

configure_logging(get_settings().log_level)
logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    # Startup
    if not tracking_enabled():
        logger.warning("⚠️ GRNF_DATABASE_URL not set - run tracking disabled")
    elif test_connection():
        create_tables()
        logger.info("✅ Run tracking database connected")
    else:
        logger.warning("⚠️ Run tracking database unreachable - /runs will be unavailable")
    logger.info("🚀 GRNF API ready")

    yield

    # Shutdown
    logger.info("🛑 Shutting down GRNF API...")


app = FastAPI(
    title="GRNF Service",
    description="Graph Random Neural Features: permutation-invariant graph embeddings, distances and kernels",
    version="1.0.0",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(RequestValidationError)
async def validation_error_handler(request: Request, exc: RequestValidationError):
    return JSONResponse(status_code=400, content={"detail": jsonable_encoder(exc.errors())})


class MapRequest(BaseModel):
    M: int = Field(..., ge=1, description="Embedding dimension", examples=[512])
    seed: int = Field(default=0, description="Sampling seed")
    config: DistributionConfig = Field(default_factory=DistributionConfig)
    proposal_sigma: Optional[float] = Field(default=None, gt=0, description="Sample from a wider proposal and reweight")


class MapSource(BaseModel):
    map: Optional[GrnfMapDocument] = Field(default=None, description="Serialized map")
    build: Optional[MapRequest] = Field(default=None, description="Map to sample when no document is given")


class EmbedRequest(MapSource):
    graph: GraphDocument
    centered: bool = Field(default=False, description="Subtract the null-graph embedding")


class DistanceRequest(MapSource):
    g1: GraphDocument
    g2: GraphDocument


class GramRequest(MapSource):
    graphs: List[GraphDocument] = Field(..., min_length=1)
    ids: Optional[List[str]] = None


def _build(request: MapRequest) -> GrnfMap:
    if request.proposal_sigma is None:
        return build_grnf(request.M, request.config, request.seed)
    proposal = request.config.model_copy(update={"sigma": request.proposal_sigma})
    return build_weighted_grnf(request.M, request.config, proposal, request.seed)


def _resolve(source: MapSource) -> GrnfMap:
    if source.map is not None:
        return map_from_document(source.map)
    if source.build is not None:
        return _build(source.build)
    raise HTTPException(status_code=400, detail="Provide either 'map' or 'build'")


@app.get("/")
async def root():
    """Health check endpoint"""
    return {"status": "online", "service": "GRNF Service"}


@app.get("/status")
async def status():
    settings = get_settings()
    return {
        "attribute_bound": settings.attribute_bound,
        "workers": settings.workers,
        "tracking_enabled": tracking_enabled(),
        "k_max_limit": K_MAX_LIMIT,
        "bell_limit": BELL_LIMIT,
        "normalizations": ["mean", "sum"],
        "activations": ["sigmoid", "tanh", "relu"],
    }


@app.get("/dim")
async def dim(
    epsilon: float = Query(..., description="Accuracy"),
    delta: float = Query(..., description="Failure probability"),
    kind: str = Query(default="distance", description="distance or kernel"),
):
    try:
        return {"M": embedding_dim_for(epsilon, delta, kind), "kind": kind}
    except GrnfError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/maps")
def create_map(request: MapRequest):
    """Sample a map and return its versioned document"""
    try:
        grnf = _build(request)
        logger.info(f"✅ Built map M={grnf.M} seed={grnf.seed}")
        return map_to_document(grnf).model_dump(mode="json", by_alias=True)
    except GrnfError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/embed")
def embed_graph(request: EmbedRequest):
    try:
        grnf = _resolve(request)
        graph = graph_from_document(request.graph)
        z = embed_centered(grnf, graph) if request.centered else embed(grnf, graph)
        return {"M": grnf.M, "centered": request.centered, "embedding": [float(v) for v in z]}
    except GrnfError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/distance")
def distance(request: DistanceRequest):
    try:
        grnf = _resolve(request)
        g1, g2 = graph_from_document(request.g1), graph_from_document(request.g2)
        return distance_estimate(embed(grnf, g1), embed(grnf, g2)).to_dict()
    except GrnfError as e:
        raise HTTPException(status_code=400, detail=str(e))


@app.post("/gram")
def gram(request: GramRequest):
    try:
        grnf = _resolve(request)
        graphs = [graph_from_document(doc) for doc in request.graphs]
        if request.ids is not None and len(request.ids) != len(graphs):
            raise HTTPException(status_code=400, detail="ids must match the number of graphs")
        result = gram_matrix(grnf, graphs, request.ids, workers=get_settings().workers)
        return {"ids": result.ids, "matrix": result.values.tolist(), "min_eigenvalue": result.min_eigenvalue}
    except GrnfError as e:
        raise HTTPException(status_code=400, detail=str(e))


def _tracking_db():
    if not tracking_enabled():
        raise HTTPException(status_code=503, detail="Run tracking is disabled")
    yield from get_db()


@app.get("/runs")
async def list_runs(db: Session = Depends(_tracking_db)):
    """Get all experiment runs"""
    try:
        runs = db.query(ExperimentRun).order_by(ExperimentRun.created_at.desc()).all()
        logger.info(f"✅ Found {len(runs)} experiment runs")
        return {"runs": [run.to_dict() for run in runs], "total": len(runs)}
    except Exception as e:
        logger.error(f"❌ Error fetching runs: {e}")
        raise HTTPException(status_code=503, detail=f"Run tracking unavailable: {e}")


@app.get("/runs/{run_id}")
async def get_run(run_id: str, db: Session = Depends(_tracking_db)):
    run = db.query(ExperimentRun).filter(ExperimentRun.run_id == run_id).first()
    if run is None:
        raise HTTPException(status_code=404, detail="Run not found")
    return run.to_dict()


def main():
    settings = get_settings()
    uvicorn.run(app, host=settings.api_host, port=settings.api_port)


if __name__ == "__main__":
    main()
