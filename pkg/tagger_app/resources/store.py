"""
Loaded tagging resources, shared read-only by the CLI, the pipeline and the
HTTP routes.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import FrozenSet, Optional

from tagger_app.api.services.constraint_service import ConstraintService
from tagger_app.api.services.genotype_service import GenotypeService
from tagger_app.api.services.lexicon_service import LexiconService
from tagger_app.api.services.tokenizer_service import TokenizerService
from tagger_app.resources.models import CompiledConstraints, GenotypeModel, Lexicon, TagSet
from tagger_app.utils.config import AppSettings, WeightConfig, load_config, load_weight_config
from tagger_app.utils.errors import TaggerError

logger = logging.getLogger(__name__)


class ResourcesUnavailable(TaggerError):
    """Raised when the settings do not name every resource a request needs"""
    pass


@dataclass
class Resources:
    tagset: TagSet
    lexicon: Lexicon
    cfg: WeightConfig = field(default_factory=WeightConfig)
    model: Optional[GenotypeModel] = None
    constraints: Optional[CompiledConstraints] = None
    compounds: FrozenSet[str] = frozenset()
    workers: int = 1

    def require_model(self) -> GenotypeModel:
        if self.model is None:
            raise ResourcesUnavailable("no genotype model loaded")
        return self.model


def load_resources(settings: AppSettings) -> Resources:
    """Read every resource file the settings name; tag set and lexicon are mandatory"""
    if settings.tagset_path is None or settings.lexicon_path is None:
        raise ResourcesUnavailable("TAGGER_TAGSET_PATH and TAGGER_LEXICON_PATH must be set")

    cfg = load_weight_config(settings.config_path)
    tagset = LexiconService.load_tagset(settings.tagset_path)
    lexicon = LexiconService.load_lexicon(settings.lexicon_path, tagset)
    LexiconService.check_cost_ordering(lexicon, cfg)

    constraints = None
    if settings.rules_path is not None:
        rules = ConstraintService.parse_rules(settings.rules_path)
        constraints = ConstraintService.compile(rules, tagset, cfg.w_neg)

    model = GenotypeService.load_model(settings.model_path) if settings.model_path is not None else None
    compounds = TokenizerService.load_compounds(settings.compounds_path) if settings.compounds_path else frozenset()

    return Resources(
        tagset=tagset,
        lexicon=lexicon,
        cfg=cfg,
        model=model,
        constraints=constraints,
        compounds=compounds,
        workers=settings.workers,
    )


@lru_cache(maxsize=1)
def _cached_resources() -> Resources:
    try:
        resources = load_resources(load_config())
    except OSError as e:
        raise ResourcesUnavailable(str(e)) from e
    logger.info("Resources loaded: %d lexicon entries, model %s",
                len(resources.lexicon), "present" if resources.model else "absent")
    return resources


# Dependency
def get_resources() -> Resources:
    return _cached_resources()
