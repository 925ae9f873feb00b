"""
Shared fixtures: small tag sets, lexicons and rule files written to tmp_path,
and ready-made resource bundles for pipeline and API tests.
"""

import pytest

from tagger_app.api.services.constraint_service import ConstraintService
from tagger_app.api.services.genotype_service import GenotypeService
from tagger_app.api.services.lexicon_service import LexiconService
from tagger_app.data import synthetic
from tagger_app.resources.models import ConstraintRule, TagSet
from tagger_app.resources.store import Resources
from tagger_app.utils.config import WeightConfig

# A slice of a French morphological tag set, full tag -> short tag
FRENCH_TAGS = [
    ("RDM", "RDM"), ("RDF", "RDF"), ("BD3S", "B"), ("NMS", "NMS"), ("NFS", "NFS"),
    ("NMP", "NMX"), ("JMS", "J"), ("JXS", "JXS"), ("JS", "JXS"), ("JMP", "J"),
    ("V1S", "V"), ("V2S", "V"), ("V3S", "V"), ("VINF", "VINF"), ("P", "P"), ("PP", "PP"),
]

FRENCH_LEXICON = [
    ("le", "RDM", 0.0), ("le", "BD3S", 0.0),
    ("manger", "NMS", 0.0), ("manger", "VINF", 0.0),
    ("produit", "NMS", 0.0), ("produit", "V3S", 0.0),
    ("liquide", "JS", 0.0), ("liquide", "NMS", 0.0), ("liquide", "V1S", 0.0),
    ("liquide", "V2S", 0.0), ("liquide", "V3S", 0.0),
    ("marché", "NMS", 0.0), ("marché", "PP", 0.0),
]


@pytest.fixture
def weights() -> WeightConfig:
    return WeightConfig()


@pytest.fixture
def french_tagset() -> TagSet:
    return TagSet.from_pairs(FRENCH_TAGS)


@pytest.fixture
def french_lexicon(tmp_path, french_tagset):
    path = synthetic.write_lexicon(tmp_path / "lexicon.tsv", FRENCH_LEXICON)
    return LexiconService.load_lexicon(path, french_tagset)


@pytest.fixture
def pair_resources(tmp_path):
    """Tag set and lexicon of the "des bons" example"""
    tagset = LexiconService.load_tagset(synthetic.write_tagset(tmp_path / "pair_tags.tsv", synthetic.PAIR_TAGSET))
    lexicon = LexiconService.load_lexicon(synthetic.write_lexicon(tmp_path / "pair_lex.tsv", synthetic.PAIR_LEXICON), tagset)
    return tagset, lexicon


@pytest.fixture
def neighbour_tagset() -> TagSet:
    return TagSet.from_pairs(synthetic.NEIGHBOUR_TAGSET)


@pytest.fixture
def neighbour_lexicon(tmp_path, neighbour_tagset):
    path = synthetic.write_lexicon(tmp_path / "neighbour_lex.tsv", synthetic.neighbour_lexicon())
    return LexiconService.load_lexicon(path, neighbour_tagset)


@pytest.fixture
def neighbour_resources(neighbour_tagset, neighbour_lexicon, weights) -> Resources:
    """Left-neighbour language trained on 2,000 tokens, with its never-violated rules"""
    corpus = synthetic.neighbour_corpus(2000, seed=7)
    model = GenotypeService.train(corpus, neighbour_lexicon, neighbour_tagset, weights)
    rules = [ConstraintRule(pattern=tuple(pattern)) for pattern in synthetic.NEIGHBOUR_RULES]
    constraints = ConstraintService.compile(rules, neighbour_tagset, weights.w_neg)
    return Resources(
        tagset=neighbour_tagset,
        lexicon=neighbour_lexicon,
        cfg=weights,
        model=model,
        constraints=constraints,
    )
