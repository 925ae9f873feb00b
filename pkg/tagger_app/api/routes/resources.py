"""
Resource API Routes
Machine sizes, genotype context reports and ambiguity profiles
"""

from fastapi import APIRouter, Depends, HTTPException, Query

from tagger_app.api.schemas.reports import AmbiguityProfile, ContextReport, SizeReport
from tagger_app.api.schemas.tagging import TextRequest
from tagger_app.api.services.genotype_service import GenotypeService
from tagger_app.api.services.lexicon_service import LexiconService
from tagger_app.api.services.pipeline_service import PipelineService
from tagger_app.api.services.tokenizer_service import TokenizerService
from tagger_app.resources.models import Genotype
from tagger_app.resources.store import Resources, get_resources

router = APIRouter()


@router.get("/sizes", response_model=SizeReport)
def machine_sizes(resources: Resources = Depends(get_resources)):
    """States and arcs of the lexicon, constraint and n-gram machines"""
    return PipelineService.inspect(resources)


@router.get("/context", response_model=ContextReport)
def genotype_context(
    genotype: str = Query(..., description="Genotype rendering, e.g. [JMP NMP]"),
    resources: Resources = Depends(get_resources)
):
    """Per-context decisions of one genotype at every n-gram order"""
    try:
        parsed = Genotype.parse(genotype)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return GenotypeService.context_report(resources.require_model(), parsed)


@router.post("/profile", response_model=AmbiguityProfile)
def ambiguity_profile(
    request: TextRequest,
    resources: Resources = Depends(get_resources)
):
    """How many analyses the lexicon offers per token of the text"""
    sentences = TokenizerService.tokenize(request.text, compounds=resources.compounds)
    return LexiconService.ambiguity_profile(sentences, resources.lexicon, resources.cfg)
