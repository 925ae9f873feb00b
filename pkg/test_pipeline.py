"""
Tests for the tagging cascade: best paths against an exhaustive oracle,
evaluation across modes, parallel tagging, size inspection and output rendering
"""

import dataclasses
import itertools
import math

import numpy as np
import pytest

from tagger_app.api.schemas.tagging import TaggedSentence, TaggedToken
from tagger_app.api.services.constraint_service import ConstraintService
from tagger_app.api.services.genotype_service import GenotypeService
from tagger_app.api.services.lexicon_service import LexiconService
from tagger_app.api.services.pipeline_service import PipelineService
from tagger_app.api.services.tokenizer_service import TokenizerService
from tagger_app.api.services.wfst_service import WfstService
from tagger_app.data import synthetic
from tagger_app.resources.models import ConstraintRule, TagSet
from tagger_app.resources.store import Resources, ResourcesUnavailable
from tagger_app.utils.config import MODES, mode_orders
from tagger_app.utils.errors import UnknownTagError

WORDS = sorted(synthetic.NEIGHBOUR_WORDS) + ["zzz"]


def oracle(sentence, resources, mode):
    """Every assignment of lattice tags with its cascade cost, by enumeration"""
    max_order, use_constraints = mode_orders(mode)
    cfg, model = resources.cfg, resources.model
    options = [LexiconService.analyses(token, resources.lexicon, cfg) for token in sentence.tokens]
    genotypes = [
        GenotypeService.genotype_of(token, resources.lexicon, cfg, resources.tagset, model.tag_space)
        for token in sentence.tokens
    ]
    scored = {}
    for tags in itertools.product(*(sorted(o) for o in options)):
        cost = sum(o[tag] for o, tag in zip(options, tags))
        if use_constraints:
            cost += cfg.w_neg * ConstraintService.violations(tags, resources.constraints.expanded)
        model_tags = [GenotypeService.model_tag(tag, resources.tagset, model.tag_space) for tag in tags]
        cost += GenotypeService.path_cost(model, genotypes, model_tags, max_order)
        scored[tags] = cost
    return scored


def random_sentences(count, max_length, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        length = int(rng.integers(1, max_length + 1))
        yield TokenizerService.sentence_of(WORDS[int(i)] for i in rng.integers(0, len(WORDS), size=length))


class TestTagSentence:
    def test_unambiguous_token_costs_nothing(self, neighbour_resources):
        tagged = PipelineService.tag_text("chat", neighbour_resources, mode="unigram")
        assert len(tagged) == 1
        assert tagged[0].tags() == ["NOUN"]
        assert tagged[0].total_cost == pytest.approx(0.0)

    @pytest.mark.parametrize("mode", MODES)
    def test_matches_exhaustive_oracle(self, neighbour_resources, mode):
        for sentence in random_sentences(100, 4, seed=11):
            scored = oracle(sentence, neighbour_resources, mode)
            best = min(scored.values())
            result = PipelineService.tag_sentence(sentence, neighbour_resources, mode)
            assert result.total_cost == pytest.approx(best, abs=1e-9)
            winners = {tags for tags, cost in scored.items() if abs(cost - best) <= 1e-9}
            assert tuple(result.tags(full=True)) in winners

    def test_token_costs_add_up(self, neighbour_resources):
        for sentence in random_sentences(20, 6, seed=2):
            result = PipelineService.tag_sentence(sentence, neighbour_resources)
            assert len(result.tokens) == len(sentence.tokens)
            assert sum(token.cost for token in result.tokens) == pytest.approx(result.total_cost, abs=1e-9)

    def test_unknown_word_gets_unknown(self, neighbour_resources):
        tagged = PipelineService.tag_text("le zzz", neighbour_resources)
        assert tagged[0].tags()[1] == "UNKNOWN"

    def test_violation_free_path_preferred(self, neighbour_resources):
        rules = [ConstraintRule(pattern=tuple(p)) for p in synthetic.NEIGHBOUR_RULES + [("DET", "VERB")]]
        constraints = ConstraintService.compile(rules, neighbour_resources.tagset, neighbour_resources.cfg.w_neg)
        strict = dataclasses.replace(neighbour_resources, constraints=constraints)
        for sentence in random_sentences(60, 5, seed=4):
            result = PipelineService.tag_sentence(sentence, strict)
            assert len(result.tokens) == len(sentence.tokens)
            assert math.isfinite(result.total_cost)
            options = [sorted(LexiconService.analyses(t, strict.lexicon, strict.cfg)) for t in sentence.tokens]
            if any(ConstraintService.violations(tags, constraints.expanded) == 0 for tags in itertools.product(*options)):
                assert ConstraintService.violations(result.tags(full=True), constraints.expanded) == 0

    def test_modes_accept_the_same_tag_strings(self, neighbour_resources):
        for sentence in random_sentences(20, 4, seed=6):
            accepted = {}
            for mode in ("unigram", "full"):
                machine = PipelineService.cascade(sentence, neighbour_resources, mode)
                accepted[mode] = {tuple(WfstService.render(p.ostring, machine.osymbols)) for p in WfstService.paths(machine)}
            assert accepted["unigram"] == accepted["full"]

    def test_unknown_mode(self, neighbour_resources):
        with pytest.raises(ValueError, match="unknown mode"):
            PipelineService.tag_text("le chat", neighbour_resources, mode="fourgram")

    def test_model_required(self, neighbour_resources):
        bare = dataclasses.replace(neighbour_resources, model=None)
        with pytest.raises(ResourcesUnavailable):
            PipelineService.tag_text("le chat", bare)


# Full tag -> short tag for the "le produit liquide" sentence and its competing readings
PRODUIT_TAGS = [
    ("RDM", "RDM"), ("BD3S", "B"), ("NMS", "NMS"), ("PPMS", "PP"), ("V1S", "V"), ("V2S", "V"),
    ("V3S", "V"), ("V3SPI", "3SPI"), ("JS", "JXS"), ("BR", "BR"), ("BI", "BI"), ("P", "P"),
    ("NMP", "NMX"), ("NMX", "NMX"), ("RIP", "RP"), ("RPP", "RP"), ("NFP", "NFP"),
]

PRODUIT_LEXICON = [
    ("le", "RDM"), ("le", "BD3S"),
    ("produit", "NMS"), ("produit", "PPMS"), ("produit", "V3S"),
    ("liquide", "JS"), ("liquide", "NMS"), ("liquide", "V1S"), ("liquide", "V2S"), ("liquide", "V3S"),
    ("qui", "BR"), ("qui", "BI"),
    ("entre", "P"), ("entre", "V1S"), ("entre", "V2S"), ("entre", "V3SPI"),
    ("dans", "NMP"), ("dans", "P"),
    ("processus", "NMX"),
    ("des", "P"), ("des", "RIP"), ("des", "RPP"),
    ("photocopies", "NFP"), ("photocopies", "V2S"),
]

PRODUIT_SENTENCE = [
    ("le", "RDM"), ("produit", "NMS"), ("liquide", "JS"), ("qui", "BR"), ("entre", "V3SPI"),
    ("dans", "P"), ("le", "RDM"), ("processus", "NMX"), ("des", "P"), ("photocopies", "NFP"),
]

# "liquide" is a noun after an article
LIQUIDE_SENTENCE = [
    ("le", "RDM"), ("liquide", "NMS"), ("entre", "V3SPI"), ("dans", "P"), ("le", "RDM"), ("produit", "NMS"),
]


@pytest.fixture
def produit_resources(tmp_path, weights):
    tagset = TagSet.from_pairs(PRODUIT_TAGS)
    path = synthetic.write_lexicon(tmp_path / "produit_lex.tsv", [(surface, tag, 0.0) for surface, tag in PRODUIT_LEXICON])
    lexicon = LexiconService.load_lexicon(path, tagset)
    model = GenotypeService.train([PRODUIT_SENTENCE] * 3 + [LIQUIDE_SENTENCE], lexicon, tagset, weights)
    rules = [ConstraintRule(pattern=("R", "V")), ConstraintRule(pattern=("B", "N"))]
    constraints = ConstraintService.compile(rules, tagset, weights.w_neg)
    return Resources(tagset=tagset, lexicon=lexicon, cfg=weights, model=model, constraints=constraints)


class TestAmbiguousSentence:
    @pytest.mark.parametrize("mode", ["bigram", "full"])
    def test_trained_readings_are_chosen(self, produit_resources, mode):
        sentence = TokenizerService.sentence_of(surface for surface, _ in PRODUIT_SENTENCE)
        for token in sentence.tokens:
            if token.surface != "processus":
                assert len(LexiconService.analyses(token, produit_resources.lexicon, produit_resources.cfg)) > 2
        result = PipelineService.tag_sentence(sentence, produit_resources, mode)
        assert " ".join(result.tags()) == "RDM NMS JXS BR 3SPI P RDM NMX P NFP"
        assert result.tags(full=True) == [tag for _, tag in PRODUIT_SENTENCE]

    def test_context_separates_readings_of_one_word(self, produit_resources):
        sentence = TokenizerService.sentence_of(surface for surface, _ in LIQUIDE_SENTENCE)
        result = PipelineService.tag_sentence(sentence, produit_resources, "full")
        assert result.tags()[1] == "NMS"


class TestTagSentences:
    def test_deterministic(self, neighbour_resources):
        text = "le chat mange la porte. la garde ferme le chat."
        first = PipelineService.tag_text(text, neighbour_resources)
        second = PipelineService.tag_text(text, neighbour_resources)
        assert first == second

    def test_workers_preserve_order(self, neighbour_resources):
        sentences = list(random_sentences(40, 6, seed=9))
        serial = PipelineService.tag_sentences(sentences, neighbour_resources)
        parallel = PipelineService.tag_sentences(sentences, dataclasses.replace(neighbour_resources, workers=4))
        assert parallel == serial

    @pytest.mark.parametrize("mode", MODES)
    def test_every_mode_tags_from_the_lattice(self, neighbour_resources, mode):
        sentence = TokenizerService.sentence_of(["la", "porte", "ferme", "le", "chat"])
        result = PipelineService.tag_sentence(sentence, neighbour_resources, mode)
        for token, tagged in zip(sentence.tokens, result.tokens):
            assert tagged.tag in LexiconService.analyses(token, neighbour_resources.lexicon, neighbour_resources.cfg)


class TestEvaluate:
    def test_training_corpus(self, neighbour_resources):
        gold = synthetic.neighbour_corpus(2000, seed=7)
        report = PipelineService.evaluate(gold, neighbour_resources)
        assert [m.mode for m in report.modes] == list(MODES)
        assert report.accuracy("full") == 1.0
        assert report.accuracy("bigram") == 1.0
        assert report.accuracy("unigram") < report.accuracy("bigram")
        assert report.errors["full"] == []
        assert report.tokens == sum(len(s) for s in gold)
        assert all(m.correct_with_punct is None for m in report.modes)

    def test_left_neighbour_process_is_learned(self, neighbour_resources):
        corpus = synthetic.neighbour_corpus(5000, seed=13)
        resources = dataclasses.replace(
            neighbour_resources,
            model=GenotypeService.train(corpus, neighbour_resources.lexicon, neighbour_resources.tagset, neighbour_resources.cfg),
        )
        report = PipelineService.evaluate(corpus, resources)
        assert report.accuracy("full") >= report.accuracy("bigram") >= report.accuracy("unigram")
        assert report.accuracy("full") >= 0.99

    def test_held_out_corpus(self, neighbour_resources):
        report = PipelineService.evaluate(synthetic.neighbour_corpus(1000, seed=21), neighbour_resources)
        assert report.accuracy("full") > report.accuracy("unigram")
        assert report.accuracy("full") >= 0.9

    def test_errors_are_ranked(self, neighbour_resources):
        report = PipelineService.evaluate(synthetic.neighbour_corpus(1000, seed=5), neighbour_resources)
        counts = [error.count for error in report.errors["unigram"]]
        assert counts
        assert counts == sorted(counts, reverse=True)
        assert len(counts) <= 20

    def test_punctuation(self, neighbour_resources):
        gold = [[("le", "DET"), ("chat", "NOUN"), ("mange", "VERB"), (".", "PUNCT")]]
        report = PipelineService.evaluate(gold, neighbour_resources, count_punct=True)
        assert report.punctuation_tokens == 1
        for row in report.modes:
            assert (row.total, row.total_with_punct) == (3, 4)
            assert row.correct_with_punct == row.correct + 1
        assert "corpus (with punctuation)" in report.to_frame().index

    def test_unknown_gold_tag(self, neighbour_resources):
        with pytest.raises(UnknownTagError, match="ADJ"):
            PipelineService.evaluate([[("le", "ADJ")]], neighbour_resources)


class TestInspect:
    def test_sizes(self, neighbour_resources):
        report = PipelineService.inspect(neighbour_resources)
        lexicon = neighbour_resources.lexicon
        assert (report.morphology.states, report.morphology.arcs) == (2, len(lexicon) + len(lexicon.surfaces))
        assert report.constraints.states > 1
        assert report.ngrams.states >= 2

    def test_no_rules_is_one_state(self, neighbour_resources):
        report = PipelineService.inspect(dataclasses.replace(neighbour_resources, constraints=None))
        assert (report.constraints.states, report.constraints.arcs) == (1, len(neighbour_resources.tagset.full_tags))

    def test_frame(self, neighbour_resources):
        frame = PipelineService.inspect(neighbour_resources).to_frame()
        assert list(frame.index) == ["Number of states", "Number of arcs"]
        assert frame.loc["Number of states", "Morphology"] == 2


class TestRender:
    @pytest.fixture
    def tagged(self):
        return [
            TaggedSentence(tokens=[
                TaggedToken(surface="liquide", tag="JS", short_tag="JXS", cost=0.25),
                TaggedToken(surface="marché", tag="NMS", short_tag="NMS", cost=0.0),
            ], total_cost=0.25),
            TaggedSentence(tokens=[TaggedToken(surface="le", tag="RDM", short_tag="RDM", cost=1.5)], total_cost=1.5),
        ]

    def test_short_tags(self, tagged):
        assert PipelineService.render_tagged(tagged) == "liquide\tJXS\nmarché\tNMS\n\nle\tRDM\n"

    def test_full_tags_with_cost(self, tagged):
        text = PipelineService.render_tagged(tagged, full_tags=True, show_cost=True)
        assert text.splitlines()[0] == "liquide\tJS\t0.250"
        assert text.splitlines()[-1] == "le\tRDM\t1.500"

    def test_nothing_tagged(self):
        assert PipelineService.render_tagged([]) == ""

    def test_output_reads_back_as_corpus(self, tagged, tmp_path):
        path = tmp_path / "out.tsv"
        path.write_text(PipelineService.render_tagged(tagged, full_tags=True), encoding="utf-8")
        assert GenotypeService.load_tagged_corpus(path) == [[("liquide", "JS"), ("marché", "NMS")], [("le", "RDM")]]


def test_resources_fixture_is_self_consistent(neighbour_resources):
    assert isinstance(neighbour_resources, Resources)
    assert neighbour_resources.model.tag_space == "collapsed"
