"""
Lexicon Service - tag sets, full-form lexicon loading, weighted analyses and
per-sentence morphological lattices
"""

import logging
from pathlib import Path
from typing import Dict, Iterable, List, Optional

from tagger_app.api.schemas.reports import AMBIGUITY_BUCKETS, AmbiguityProfile
from tagger_app.api.schemas.tagging import Sentence, Token
from tagger_app.resources.models import (
    ACR,
    NPR,
    ONE,
    PUNCT,
    UNKNOWN,
    ZERO,
    Lexicon,
    SymbolTable,
    TagSet,
    Wfst,
    parse_weight,
)
from tagger_app.utils.config import WeightConfig
from tagger_app.utils.errors import ResourceFormatError, UnknownTagError

logger = logging.getLogger(__name__)


def _fields(line: str) -> List[str]:
    return line.split("\t") if "\t" in line else line.split()


class LexiconService:
    @staticmethod
    def load_tagset(path: Path) -> TagSet:
        """Read `full_tag<TAB>short_tag` lines"""
        pairs: Dict[str, str] = {}
        with open(path, encoding="utf-8") as handle:
            for number, raw in enumerate(handle, start=1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                fields = [f.strip() for f in _fields(line)]
                if len(fields) != 2 or not all(fields):
                    raise ResourceFormatError("expected full_tag<TAB>short_tag", path=str(path), line=number)
                full_tag, short_tag = fields
                if pairs.get(full_tag, short_tag) != short_tag:
                    raise ResourceFormatError(f"tag {full_tag!r} collapses to two short tags", path=str(path), line=number)
                pairs[full_tag] = short_tag

        tagset = TagSet.from_pairs(pairs.items())
        logger.info("Loaded tag set %s: %d full tags, %d short tags", path, len(tagset.declared), len(set(pairs.values())))
        return tagset

    @staticmethod
    def load_lexicon(path: Path, tagset: Optional[TagSet] = None) -> Lexicon:
        """
        Read `surface<TAB>full_tag<TAB>weight` lines (weight optional, default 0).

        Duplicate (surface, tag) lines keep the minimum weight.
        """
        lexicon = Lexicon()
        with open(path, encoding="utf-8") as handle:
            for number, raw in enumerate(handle, start=1):
                line = raw.rstrip("\n").strip()
                if not line:
                    continue
                fields = [f.strip() for f in _fields(line)]
                if len(fields) not in (2, 3) or not fields[0] or not fields[1]:
                    raise ResourceFormatError("expected surface<TAB>tag[<TAB>weight]", path=str(path), line=number)

                surface, tag = fields[0], fields[1]
                try:
                    weight = parse_weight(fields[2]) if len(fields) == 3 else ONE
                except ValueError as e:
                    raise ResourceFormatError(str(e), path=str(path), line=number) from None
                if tagset is not None and tag not in tagset:
                    raise UnknownTagError(tag, path=str(path), line=number)
                lexicon.add(surface, tag, weight)

        logger.info("Loaded lexicon %s: %d surfaces, %d entries", path, len(lexicon.surfaces), len(lexicon))
        return lexicon

    @staticmethod
    def check_cost_ordering(lexicon: Lexicon, cfg: WeightConfig) -> int:
        """Warn about lexical weights that reach the proper-noun cost; returns how many"""
        offending = [entry for entry in lexicon.entries() if entry.weight >= cfg.w_proper]
        for entry in offending[:5]:
            logger.warning("Lexical weight %s for %s/%s is not below w_proper=%s",
                           entry.weight, entry.surface, entry.tag, cfg.w_proper)
        return len(offending)

    @staticmethod
    def analyses(token: Token, lexicon: Lexicon, cfg: WeightConfig) -> Dict[str, float]:
        """
        Weighted candidate tags for a token, cheapest first.

        Exact lexicon hits keep their lexical weight; capitalized tokens add
        lowercase hits and a proper-noun reading; all-caps tokens add an
        acronym reading; UNKNOWN is always present.
        """
        found: Dict[str, float] = {}

        def offer(tag: str, weight: float) -> None:
            found[tag] = min(weight, found.get(tag, ZERO))

        if token.shape == "punctuation":
            offer(PUNCT, cfg.w_punct)
        else:
            for tag, weight in lexicon.lookup(token.surface).items():
                offer(tag, weight)
            if token.shape == "capitalized":
                for tag, weight in lexicon.lookup_lowercase(token.surface).items():
                    offer(tag, weight)
                offer(NPR, cfg.w_proper)
            elif token.shape == "all-caps":
                offer(ACR, cfg.w_acronym)
        offer(UNKNOWN, cfg.w_unk)

        return dict(sorted(found.items(), key=lambda item: (item[1], item[0])))

    @staticmethod
    def build_lattice(sentence: Sentence, lexicon: Lexicon, tagset: TagSet, cfg: WeightConfig) -> Wfst:
        """Acyclic token -> tag lattice, one anchor state per token boundary"""
        tokens = SymbolTable()
        lattice = Wfst(tokens, tagset.symbols)
        anchors = [lattice.add_state() for _ in range(len(sentence.tokens) + 1)]
        lattice.set_start(anchors[0])
        lattice.set_final(anchors[-1], ONE)

        for i, token in enumerate(sentence.tokens):
            ilabel = tokens.add(token.surface)
            for tag, weight in LexiconService.analyses(token, lexicon, cfg).items():
                lattice.add_arc(anchors[i], ilabel, tagset.label(tag), weight, anchors[i + 1])
        return lattice

    @staticmethod
    def lattice_candidates(lattice: Wfst, tagset: TagSet) -> List[List[str]]:
        """Tags offered at each position of a lattice built by build_lattice"""
        candidates = []
        for state in lattice.states():
            arcs = lattice.arcs(state)
            if arcs:
                candidates.append(sorted({tagset.symbols.symbol(arc.olabel) for arc in arcs}))
        return candidates

    @staticmethod
    def lexicon_machine(lexicon: Lexicon, tagset: TagSet, cfg: WeightConfig) -> Wfst:
        """Union of the per-token sub-machines over every surface in the lexicon"""
        surfaces = SymbolTable(lexicon.surfaces)
        machine = Wfst(surfaces, tagset.symbols)
        start, end = machine.add_state(), machine.add_state()
        machine.set_start(start)
        machine.set_final(end, ONE)
        unknown = tagset.label(UNKNOWN)
        for surface in lexicon.surfaces:
            ilabel = surfaces.find(surface)
            for tag, weight in sorted(lexicon.lookup(surface).items()):
                machine.add_arc(start, ilabel, tagset.label(tag), weight, end)
            machine.add_arc(start, ilabel, unknown, cfg.w_unk, end)
        return machine

    @staticmethod
    def ambiguity_profile(corpus: Iterable[Sentence], lexicon: Lexicon, cfg: Optional[WeightConfig] = None) -> AmbiguityProfile:
        """Histogram of the number of non-UNKNOWN analyses per token"""
        cfg = cfg or WeightConfig()
        counts = {bucket: 0 for bucket in AMBIGUITY_BUCKETS}
        tokens = 0
        for sentence in corpus:
            for token in sentence.tokens:
                tags = [tag for tag in LexiconService.analyses(token, lexicon, cfg) if tag != UNKNOWN]
                counts[LexiconService._bucket(len(tags))] += 1
                tokens += 1
        return AmbiguityProfile(tokens=tokens, counts=counts)

    @staticmethod
    def _bucket(count: int) -> str:
        if count <= 3:
            return str(count)
        return "4-8" if count <= 8 else ">8"
