"""
Genotype Service - n-gram statistics over genotypes (ambiguity classes):
training, tropical weights, backoff scoring transducers, coverage and
context diagnostics, and the sectioned text model format
"""

import logging
import math
import re
from collections import Counter
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from tagger_app.api.schemas.reports import ContextReport, ContextRow, ContextSummary, CorpusProfile, CoverageReport, CoverageRow
from tagger_app.api.schemas.tagging import Token
from tagger_app.api.services.lexicon_service import LexiconService
from tagger_app.api.services.tokenizer_service import TokenizerService
from tagger_app.resources.models import (
    ONE,
    SB,
    UNKNOWN,
    ZERO,
    Context,
    Genotype,
    GenotypeModel,
    Lexicon,
    TagSet,
    Wfst,
)
from tagger_app.utils.config import WeightConfig
from tagger_app.utils.errors import EmptyInputError, GoldTagError, ResourceFormatError, UnknownTagError

logger = logging.getLogger(__name__)

TaggedCorpus = List[List[Tuple[str, str]]]

SB_GENOTYPE = Genotype((SB,))
ORDERS = (1, 2, 3)
SECTIONS = {"unigram": 1, "bigram": 2, "trigram": 3}
POSITION_NAMES = {1: ("",), 2: ("Left", "Right"), 3: ("Left", "Middle", "Right")}
MAX_COERCION_WARNINGS = 10

_GENOTYPE_PATTERN = re.compile(r"\[[^\[\]]*\]")


def render_context(context: Iterable[Genotype]) -> str:
    return "".join(genotype.render() for genotype in context)


def parse_context(text: str) -> Context:
    parts = _GENOTYPE_PATTERN.findall(text)
    if not parts or "".join(parts) != text.strip():
        raise ValueError(f"not a genotype context: {text!r}")
    return tuple(Genotype.parse(part) for part in parts)


class GenotypeService:
    @staticmethod
    def load_tagged_corpus(path: Path) -> TaggedCorpus:
        """`token<TAB>gold_tag` per line, blank line between sentences"""
        corpus: TaggedCorpus = []
        current: List[Tuple[str, str]] = []
        with open(path, encoding="utf-8") as handle:
            for number, raw in enumerate(handle, start=1):
                line = raw.rstrip("\n")
                if not line.strip():
                    if current:
                        corpus.append(current)
                        current = []
                    continue
                fields = line.split("\t") if "\t" in line else line.split()
                if len(fields) != 2 or not fields[0].strip() or not fields[1].strip():
                    raise ResourceFormatError("expected token<TAB>tag", path=str(path), line=number)
                current.append((fields[0].strip(), fields[1].strip()))
        if current:
            corpus.append(current)
        logger.info("Loaded %d tagged sentences from %s", len(corpus), path)
        return corpus

    @staticmethod
    def model_tag(tag: str, tagset: TagSet, tag_space: str) -> str:
        return tagset.collapse(tag) if tag_space == "collapsed" else tag

    @staticmethod
    def genotype_of(
        token: Token,
        lexicon: Lexicon,
        cfg: WeightConfig,
        tagset: Optional[TagSet] = None,
        tag_space: str = "full",
    ) -> Genotype:
        """Canonical set of the token's non-UNKNOWN analyses, or [UNKNOWN]"""
        tags = [tag for tag in LexiconService.analyses(token, lexicon, cfg) if tag != UNKNOWN]
        if not tags:
            return Genotype((UNKNOWN,))
        if tag_space == "collapsed":
            if tagset is None:
                raise ValueError("collapsed genotypes need a tag set")
            tags = [tagset.collapse(tag) for tag in tags]
        return Genotype.of(tags)

    @staticmethod
    def _aligned(
        sentence: Sequence[Tuple[str, str]],
        lexicon: Lexicon,
        tagset: TagSet,
        cfg: WeightConfig,
        tag_space: str,
        strict: bool,
        on_coerce: Optional[Callable[[str], None]] = None,
        coerce: bool = True,
    ) -> Tuple[List[Genotype], List[str]]:
        """
        SB-padded genotype and gold-tag sequences of a tagged sentence.

        With coerce, a gold tag outside its genotype is added to it; without,
        genotypes are exactly what the lexicon offers at tagging time.
        """
        genotypes, tags = [SB_GENOTYPE], [SB]
        tokens = TokenizerService.sentence_of(surface for surface, _ in sentence).tokens
        for token, (surface, gold) in zip(tokens, sentence):
            if gold not in tagset:
                raise UnknownTagError(gold)
            genotype = GenotypeService.genotype_of(token, lexicon, cfg, tagset, tag_space)
            tag = GenotypeService.model_tag(gold, tagset, tag_space)
            if coerce and tag not in genotype:
                message = f"gold tag {gold} of {surface!r} is not in its genotype {genotype}"
                if strict:
                    raise GoldTagError(message)
                if on_coerce is not None:
                    on_coerce(message)
                genotype = Genotype.of(genotype.tags + (tag,))
            genotypes.append(genotype)
            tags.append(tag)
        return genotypes, tags

    @staticmethod
    def _ngrams(genotypes: Sequence[Genotype], tags: Sequence[str]):
        for p in range(1, len(genotypes)):
            for n in ORDERS:
                lo = p - n + 1
                if lo >= 0:
                    yield n, tuple(genotypes[lo:p + 1]), tuple(tags[lo:p + 1])

    @staticmethod
    def train(
        corpus: TaggedCorpus,
        lexicon: Lexicon,
        tagset: TagSet,
        cfg: WeightConfig,
        tag_space: str = "collapsed",
        strict: bool = False,
    ) -> GenotypeModel:
        """
        Count unigram, bigram and trigram taggings per genotype context.

        Every sentence is padded on the left with the boundary genotype [SB],
        so each token contributes one n-gram per order that fits.
        """
        if tag_space not in ("collapsed", "full"):
            raise ValueError(f"unknown tag space {tag_space!r}")

        model = GenotypeModel(tag_space=tag_space)
        coerced = 0

        def on_coerce(message: str) -> None:
            nonlocal coerced
            coerced += 1
            if coerced <= MAX_COERCION_WARNINGS:
                logger.warning("%s; adding it", message)

        types, genotypes_seen = set(), set()
        tokens = sentences = 0
        for sentence in corpus:
            if not sentence:
                continue
            genotypes, tags = GenotypeService._aligned(sentence, lexicon, tagset, cfg, tag_space, strict, on_coerce)
            for n, context, tagging in GenotypeService._ngrams(genotypes, tags):
                model.tables[n].add(context, tagging)
            sentences += 1
            tokens += len(sentence)
            types.update(surface for surface, _ in sentence)
            genotypes_seen.update(genotypes[1:])

        if coerced > MAX_COERCION_WARNINGS:
            logger.warning("%d gold tags were outside their genotype in total", coerced)

        model.metadata = {
            "sentences": sentences,
            "tokens": tokens,
            "types": len(types),
            "genotypes": len(genotypes_seen),
            "coerced": coerced,
        }
        logger.info(
            "Trained genotype model: %d tokens, %d types, %d genotypes, contexts %s",
            tokens, len(types), len(genotypes_seen), [len(model.tables[n]) for n in ORDERS],
        )
        return model

    @staticmethod
    def corpus_profile(model: GenotypeModel) -> CorpusProfile:
        meta = model.metadata
        return CorpusProfile(
            sentences=meta.get("sentences", 0),
            tokens=meta.get("tokens", 0),
            types=meta.get("types", 0),
            genotypes=meta.get("genotypes", 0),
        )

    @staticmethod
    def weight(model: GenotypeModel, context: Context, tagging: Sequence[str]) -> Optional[float]:
        """-ln(f_t / f) for a tagging of a seen context; None when the context was never seen"""
        table = model.table(len(context))
        if context not in table:
            return None
        count = table.count(context, tuple(tagging))
        if count == 0:
            return ZERO
        return -math.log(count / table.total(context))

    @staticmethod
    def backoff_order(model: GenotypeModel, padded: Sequence[Genotype], p: int, max_order: int = 3) -> int:
        """Highest order whose context ending at padded position p was seen; 0 means uniform"""
        for n in range(min(max_order, p + 1), 0, -1):
            if tuple(padded[p - n + 1:p + 1]) in model.table(n):
                return n
        return 0

    @staticmethod
    def position_weight(
        model: GenotypeModel,
        padded: Sequence[Genotype],
        p: int,
        order: int,
        history: Sequence[str],
        tag: str,
    ) -> float:
        """
        Cost of `tag` at padded position p given the preceding tags.

        Conditional on the path's own history inside the chosen context, so
        the costs of consecutive positions add up to the joint n-gram cost.
        A tagging never seen in a seen context costs ln(f + 1).
        """
        if order == 0:
            genotype = padded[p]
            return math.log(len(genotype)) if tag in genotype else math.log(len(genotype) + 1)

        table = model.table(order)
        context = tuple(padded[p - order + 1:p + 1])
        prefix = tuple(history[len(history) - (order - 1):]) if order > 1 else ()
        count = table.count(context, prefix + (tag,))
        if count == 0:
            return math.log(table.total(context) + 1)
        return -math.log(count / table.prefix_total(context, prefix))

    @staticmethod
    def path_cost(model: GenotypeModel, genotypes: Sequence[Genotype], tags: Sequence[str], max_order: int = 3) -> float:
        """Backoff cost of one model-space tag assignment, position by position"""
        padded = [SB_GENOTYPE] + list(genotypes)
        history = [SB]
        cost = ONE
        for i, tag in enumerate(tags):
            p = i + 1
            order = GenotypeService.backoff_order(model, padded, p, max_order)
            cost += GenotypeService.position_weight(model, padded, p, order, history, tag)
            history.append(tag)
        return cost

    @staticmethod
    def score_transducer(
        model: GenotypeModel,
        genotypes: Sequence[Genotype],
        tagset: TagSet,
        candidates: Optional[Sequence[Sequence[str]]] = None,
        max_order: int = 3,
    ) -> Wfst:
        """
        Acyclic tag -> tag transducer scoring every assignment by strict backoff.

        States remember the last max_order-1 model-space tags. `candidates`
        are the labels offered per position (lattice tags, mapped into the
        model's tag space for scoring); by default the genotype members.
        """
        if not genotypes:
            raise EmptyInputError()
        if candidates is None:
            candidates = [genotype.tags for genotype in genotypes]

            def to_model(tag: str) -> str:
                return tag
        else:
            def to_model(tag: str) -> str:
                return GenotypeService.model_tag(tag, tagset, model.tag_space)

        padded = [SB_GENOTYPE] + list(genotypes)
        keep = max(max_order - 1, 0)
        machine = Wfst(tagset.symbols, tagset.symbols)
        start = machine.add_state()
        machine.set_start(start)
        frontier: Dict[Tuple[str, ...], int] = {(SB,)[:keep]: start}

        for i, offered in enumerate(candidates):
            p = i + 1
            order = GenotypeService.backoff_order(model, padded, p, max_order)
            following: Dict[Tuple[str, ...], int] = {}
            for history, state in sorted(frontier.items()):
                for tag in sorted(set(offered)):
                    scored = to_model(tag)
                    weight = GenotypeService.position_weight(model, padded, p, order, history, scored)
                    key = (history + (scored,))[len(history) + 1 - keep:] if keep else ()
                    if key not in following:
                        following[key] = machine.add_state()
                    label = tagset.label(tag)
                    machine.add_arc(state, label, label, weight, following[key])
            frontier = following

        for state in frontier.values():
            machine.set_final(state, ONE)
        return machine

    @staticmethod
    def coverage(
        model: GenotypeModel,
        test: TaggedCorpus,
        lexicon: Lexicon,
        tagset: TagSet,
        cfg: WeightConfig,
    ) -> CoverageReport:
        """Share of the test corpus n-gram genotype occurrences whose context the model has seen"""
        seen, total = Counter(), Counter()
        for sentence in test:
            if not sentence:
                continue
            genotypes, tags = GenotypeService._aligned(
                sentence, lexicon, tagset, cfg, model.tag_space, strict=False, coerce=False
            )
            for n, context, _ in GenotypeService._ngrams(genotypes, tags):
                total[n] += 1
                if context in model.table(n):
                    seen[n] += 1
        rows = [
            CoverageRow(order=n, seen=seen[n], total=total[n], fraction=seen[n] / total[n] if total[n] else 0.0)
            for n in ORDERS
        ]
        return CoverageReport(rows=rows)

    @staticmethod
    def context_report(model: GenotypeModel, genotype: Genotype) -> ContextReport:
        """
        Per-context decisions for one genotype at every order and position.

        The decision is the focus tag with the largest marginal count in the
        context; that count is the context's correct mass.
        """
        report = ContextReport(genotype=genotype.render())
        if (genotype,) not in model.table(1):
            return report

        for n in ORDERS:
            table = model.table(n)
            correct_sum = total_sum = 0
            for focus, position in enumerate(POSITION_NAMES[n]):
                for context in table.contexts():
                    if context[focus] != genotype:
                        continue
                    taggings = table.counts[context]
                    marginal: Counter = Counter()
                    for tagging, count in taggings.items():
                        marginal[tagging[focus]] += count
                    decision = min(marginal, key=lambda tag: (-marginal[tag], tag))
                    row = ContextRow(
                        order=n,
                        position=position,
                        context=render_context(context),
                        decision=decision,
                        taggings={" ".join(t): c for t, c in sorted(taggings.items())},
                        correct=marginal[decision],
                        total=table.total(context),
                    )
                    report.rows.append(row)
                    correct_sum += row.correct
                    total_sum += row.total
            if total_sum:
                report.summary.append(ContextSummary(order=n, correct=correct_sum, total=total_sum))
        return report

    @staticmethod
    def ngram_machine(model: GenotypeModel, tagset: TagSet) -> Wfst:
        """Union over every (context, tagging) entry of an n-arc path carrying its weight"""
        machine = Wfst(tagset.symbols, tagset.symbols)
        start, end = machine.add_state(), machine.add_state()
        machine.set_start(start)
        machine.set_final(end, ONE)
        for n in ORDERS:
            for context, tagging, _ in model.table(n).entries():
                weight = GenotypeService.weight(model, context, tagging)
                state = start
                for k, tag in enumerate(tagging):
                    nextstate = end if k == n - 1 else machine.add_state()
                    label = tagset.label(tag)
                    machine.add_arc(state, label, label, weight if k == 0 else ONE, nextstate)
                    state = nextstate
        return machine

    @staticmethod
    def save_model(model: GenotypeModel, path: Path) -> None:
        lines = ["section meta", f"tag_space\t{model.tag_space}"]
        lines += [f"{key}\t{value}" for key, value in sorted(model.metadata.items())]
        for name, n in SECTIONS.items():
            lines.append(f"section {name}")
            for context, tagging, count in model.table(n).entries():
                lines.append(f"{render_context(context)}\t{' '.join(tagging)}\t{count}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
        logger.info("Saved genotype model to %s", path)

    @staticmethod
    def load_model(path: Path) -> GenotypeModel:
        model = GenotypeModel()
        section: Optional[str] = None
        with open(path, encoding="utf-8") as handle:
            for number, raw in enumerate(handle, start=1):
                line = raw.rstrip("\n")
                if not line.strip():
                    continue
                if line.startswith("section "):
                    section = line.split(None, 1)[1].strip()
                    if section != "meta" and section not in SECTIONS:
                        raise ResourceFormatError(f"unknown section {section!r}", path=str(path), line=number)
                    continue
                fields = line.split("\t")
                try:
                    if section == "meta" and len(fields) == 2:
                        if fields[0] == "tag_space":
                            model.tag_space = fields[1]
                        else:
                            model.metadata[fields[0]] = int(fields[1])
                    elif section in SECTIONS and len(fields) == 3:
                        context = parse_context(fields[0])
                        model.table(SECTIONS[section]).add(context, tuple(fields[1].split()), int(fields[2]))
                    else:
                        raise ValueError("malformed record")
                except ValueError as e:
                    raise ResourceFormatError(str(e), path=str(path), line=number) from None

        logger.info("Loaded genotype model %s: contexts %s", path, [len(model.table(n)) for n in ORDERS])
        return model
