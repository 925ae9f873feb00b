"""
Pipeline Service - the tagging cascade end to end: lattice, negative
constraints, genotype scoring and best-path selection, plus evaluation
against a gold corpus and machine size inspection
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence, Tuple

from tagger_app.api.schemas.reports import EvalReport, MachineSize, ModeAccuracy, SizeReport, TagError
from tagger_app.api.schemas.tagging import Sentence, TaggedSentence, TaggedToken
from tagger_app.api.services.constraint_service import ConstraintService
from tagger_app.api.services.genotype_service import GenotypeService, TaggedCorpus
from tagger_app.api.services.lexicon_service import LexiconService
from tagger_app.api.services.tokenizer_service import TokenizerService
from tagger_app.api.services.wfst_service import WfstService
from tagger_app.resources.models import Wfst
from tagger_app.resources.store import Resources
from tagger_app.utils.config import MODES, mode_orders
from tagger_app.utils.errors import TaggerError, UnknownTagError

logger = logging.getLogger(__name__)

MAX_REPORTED_ERRORS = 20


class PipelineService:
    @staticmethod
    def cascade(sentence: Sentence, resources: Resources, mode: str = "full") -> Wfst:
        """Fully composed token -> tag machine for one sentence"""
        model = resources.require_model()
        max_order, use_constraints = mode_orders(mode)

        lattice = LexiconService.build_lattice(sentence, resources.lexicon, resources.tagset, resources.cfg)
        candidates = LexiconService.lattice_candidates(lattice, resources.tagset)
        genotypes = [
            GenotypeService.genotype_of(token, resources.lexicon, resources.cfg, resources.tagset, model.tag_space)
            for token in sentence.tokens
        ]
        scorer = GenotypeService.score_transducer(model, genotypes, resources.tagset, candidates, max_order=max_order)

        machine = lattice
        if use_constraints and resources.constraints is not None:
            machine = ConstraintService.apply(resources.constraints, machine)
        machine = WfstService.compose(machine, scorer)
        logger.debug("Cascade for %d tokens (%s): %s", len(sentence.tokens), mode, machine)
        return machine

    @staticmethod
    def tag_sentence(sentence: Sentence, resources: Resources, mode: str = "full") -> TaggedSentence:
        machine = PipelineService.cascade(sentence, resources, mode)
        best = WfstService.shortest_path(machine, 1)
        if not best:
            raise TaggerError(f"no accepting path for sentence {' '.join(sentence.surfaces)!r}")

        path = best[0]
        tags = WfstService.render(path.ostring, machine.osymbols)
        # lattice, constraints and scorer are epsilon-free: one arc per token
        tokens = [
            TaggedToken(surface=token.surface, tag=tag, short_tag=resources.tagset.collapse(tag), cost=arc.weight)
            for token, tag, arc in zip(sentence.tokens, tags, path.arcs)
        ]
        return TaggedSentence(tokens=tokens, total_cost=path.weight)

    @staticmethod
    def tag_sentences(sentences: Sequence[Sentence], resources: Resources, mode: str = "full") -> List[TaggedSentence]:
        """Tag independent sentences, in parallel when resources.workers > 1; order is preserved"""
        if resources.workers > 1 and len(sentences) > 1:
            with ThreadPoolExecutor(max_workers=resources.workers) as pool:
                return list(pool.map(lambda s: PipelineService.tag_sentence(s, resources, mode), sentences))
        return [PipelineService.tag_sentence(sentence, resources, mode) for sentence in sentences]

    @staticmethod
    def tag_text(text: str, resources: Resources, mode: str = "full") -> List[TaggedSentence]:
        sentences = TokenizerService.tokenize(text, compounds=resources.compounds)
        return PipelineService.tag_sentences(sentences, resources, mode)

    @staticmethod
    def evaluate(gold: TaggedCorpus, resources: Resources, count_punct: bool = False) -> EvalReport:
        """
        Accuracy of the three tagging modes against a gold corpus.

        Tags are compared in the model's tag space. Punctuation tokens are
        left out of the main figure; with count_punct the figure including
        them is reported as well.
        """
        model = resources.require_model()
        tagset = resources.tagset
        gold = [sentence for sentence in gold if sentence]
        sentences = [TokenizerService.sentence_of(surface for surface, _ in sentence) for sentence in gold]
        gold_tags = []
        for sentence in gold:
            for _, tag in sentence:
                if tag not in tagset:
                    raise UnknownTagError(tag)
            gold_tags.append([GenotypeService.model_tag(tag, tagset, model.tag_space) for _, tag in sentence])

        tokens = sum(len(sentence) for sentence in gold)
        punctuation = sum(1 for s in sentences for token in s.tokens if token.shape == "punctuation")

        modes: List[ModeAccuracy] = []
        errors: Dict[str, List[TagError]] = {}
        for mode in MODES:
            tagged = PipelineService.tag_sentences(sentences, resources, mode)
            correct = total = correct_all = 0
            confusion: Counter = Counter()
            for sentence, expected, result in zip(sentences, gold_tags, tagged):
                for token, want, got in zip(sentence.tokens, expected, result.tokens):
                    predicted = GenotypeService.model_tag(got.tag, tagset, model.tag_space)
                    hit = predicted == want
                    correct_all += hit
                    if token.shape != "punctuation":
                        total += 1
                        correct += hit
                    if not hit:
                        confusion[(want, predicted)] += 1

            modes.append(ModeAccuracy(
                mode=mode,
                correct=correct,
                total=total,
                accuracy=correct / total if total else 0.0,
                correct_with_punct=correct_all if count_punct else None,
                total_with_punct=tokens if count_punct else None,
            ))
            errors[mode] = [
                TagError(gold=want, predicted=got, count=count)
                for (want, got), count in sorted(confusion.items(), key=lambda item: (-item[1], item[0]))
            ][:MAX_REPORTED_ERRORS]
            logger.info("Evaluated mode %s: %d/%d correct", mode, correct, total)

        return EvalReport(
            sentences=len(gold),
            tokens=tokens,
            punctuation_tokens=punctuation,
            modes=modes,
            errors=errors,
        )

    @staticmethod
    def inspect(resources: Resources) -> SizeReport:
        """States and arcs of the lexicon, constraint and n-gram machines"""
        morphology = LexiconService.lexicon_machine(resources.lexicon, resources.tagset, resources.cfg)
        if resources.constraints is not None:
            constraints = resources.constraints.transducer
        else:
            constraints = ConstraintService.compile([], resources.tagset, resources.cfg.w_neg).transducer
        ngrams = GenotypeService.ngram_machine(resources.require_model(), resources.tagset)

        def size(machine: Wfst) -> MachineSize:
            states, arcs = WfstService.stats(machine)
            return MachineSize(states=states, arcs=arcs)

        return SizeReport(morphology=size(morphology), constraints=size(constraints), ngrams=size(ngrams))

    @staticmethod
    def render_tagged(tagged: Sequence[TaggedSentence], full_tags: bool = False, show_cost: bool = False) -> str:
        """Tagged-corpus text: token<TAB>tag per line, blank line between sentences"""
        blocks: List[str] = []
        for sentence in tagged:
            lines: List[Tuple[str, ...]] = []
            for token in sentence.tokens:
                fields = (token.surface, token.tag if full_tags else token.short_tag)
                if show_cost:
                    fields += (f"{token.cost:.3f}",)
                lines.append(fields)
            blocks.append("\n".join("\t".join(fields) for fields in lines))
        return "\n\n".join(blocks) + ("\n" if blocks else "")
