import logging

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from tagger_app.api.routes import health, resources, tagging
from tagger_app.resources.store import ResourcesUnavailable
from tagger_app.utils.config import load_config
from tagger_app.utils.errors import TaggerError

settings = load_config()

logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.INFO),
    format='%(asctime)s - %(levelname)s - %(message)s'
)

app = FastAPI(title="Genotype Tagger API", version="0.1.0")

# CORS origins come from TAGGER_ALLOWED_ORIGINS
allowed_origins = settings.allowed_origins.split(',')

app.add_middleware(
    CORSMiddleware,
    allow_origins=allowed_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(ResourcesUnavailable)
async def resources_unavailable(request: Request, exc: ResourcesUnavailable):
    return JSONResponse(status_code=503, content={"detail": str(exc)})


@app.exception_handler(TaggerError)
async def tagger_error(request: Request, exc: TaggerError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


# Routers
app.include_router(health.router, prefix="/api", tags=["health"])
app.include_router(tagging.router, prefix="/api", tags=["tagging"])
app.include_router(resources.router, prefix="/api/resources", tags=["resources"])


@app.get("/", tags=["health"])
async def root():
    return {"message": "Genotype Tagger API is running"}
