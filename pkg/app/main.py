"""
Track-Layout Engine FastAPI Application.
Entrypoint for the API server.
"""

import logging
from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from app import config
from app.api.routes import router
from app.core.database import close_connection, init_db

logging.basicConfig(level=config.LOG_LEVEL, format=config.LOG_FORMAT, datefmt=config.LOG_DATEFMT)
log = logging.getLogger("layout.main")


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Open the run store on startup, close it on shutdown."""
    init_db()
    log.info("Track-Layout API starting (db=%s, auth=%s)", config.DB_PATH, "on" if config.API_KEY else "off")
    yield
    close_connection()
    log.info("Track-Layout API stopped")


app = FastAPI(
    title="Track-Layout API",
    version="1.0.0",
    description="Track layouts, queue layouts and 3D grid drawings of bounded tree-width graphs",
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(router)


@app.get("/")
def root():
    """Service card: the size gates and budgets clients run into."""
    return {
        "service": "tracklayout",
        "docs": "/docs",
        "oracle_limits": {
            "queue-number": config.ORACLE_QUEUE_LIMIT,
            "track-number": config.ORACLE_TRACK_LIMIT,
            "pathwidth": config.ORACLE_PATHWIDTH_LIMIT,
            "treewidth": config.ORACLE_TREEWIDTH_LIMIT,
        },
        "vertex_budget": config.VERTEX_BUDGET,
        "gk_vertex_budget": config.GK_VERTEX_BUDGET,
    }
