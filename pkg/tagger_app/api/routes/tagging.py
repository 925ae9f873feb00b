"""
Tagging API Routes
Runs the tagging cascade over submitted text
"""

from fastapi import APIRouter, Depends
from typing import List

from tagger_app.api.schemas.tagging import TaggedSentence, TagRequest
from tagger_app.api.services.pipeline_service import PipelineService
from tagger_app.resources.store import Resources, get_resources

router = APIRouter()


@router.post("/tag", response_model=List[TaggedSentence])
def tag_text(
    request: TagRequest,
    resources: Resources = Depends(get_resources)
):
    """
    Tokenize the text and tag every sentence

    Tags are the short (collapsed) tags unless full_tags is set.
    """
    tagged = PipelineService.tag_text(request.text, resources, request.mode)
    if not request.full_tags:
        for sentence in tagged:
            for token in sentence.tokens:
                token.tag = token.short_tag
    return tagged
