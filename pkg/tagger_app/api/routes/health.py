from fastapi import APIRouter

from tagger_app.resources.store import ResourcesUnavailable, get_resources

router = APIRouter()


@router.get("/health")
def health():
    """Service liveness; resources are reported, never required"""
    try:
        resources = get_resources()
    except ResourcesUnavailable as e:
        return {"status": "ok", "resources": "unavailable", "detail": str(e)}
    return {
        "status": "ok",
        "resources": "loaded",
        "model": resources.model is not None,
        "constraints": resources.constraints is not None,
    }
