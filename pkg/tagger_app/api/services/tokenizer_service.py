"""
Sentence splitting, token normalisation and surface-shape classification.
"""

import re
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Tuple

from tagger_app.api.schemas.tagging import Sentence, Token
from tagger_app.utils.errors import EmptyInputError

SENTENCE_FINAL = frozenset(".!?")
NUMERIC_PUNCT = frozenset(".,-+%/")
COMPOUND_JOINER = "_"

_NUMBER = r"\d+(?:[.,]\d+)*"
TOKEN_PATTERN = re.compile(rf"{_NUMBER}|\w+(?:[-'’]\w+)*|[^\w\s]")
CLITIC_TOKEN_PATTERN = re.compile(rf"{_NUMBER}|\w+(?:-\w+)*['’](?=\w)|\w+(?:-\w+)*|[^\w\s]")


class TokenizerService:
    @staticmethod
    def shape_of(surface: str) -> str:
        if not surface:
            raise ValueError("cannot classify the shape of an empty surface")

        letters = [c for c in surface if c.isalpha()]
        has_digit = any(c.isdigit() for c in surface)

        if not letters:
            if not has_digit:
                return "punctuation"
            if all(c.isdigit() or c in NUMERIC_PUNCT for c in surface):
                return "numeric"
            return "mixed"
        if has_digit:
            return "mixed"
        if len(letters) >= 2 and all(c.isupper() for c in letters):
            return "all-caps"
        if letters[0].isupper() and surface[0] == letters[0]:
            return "capitalized"
        if all(c.islower() for c in letters):
            return "lowercase"
        return "mixed"

    @staticmethod
    def make_token(surface: str, compound: bool = False) -> Token:
        return Token(surface=surface, shape=TokenizerService.shape_of(surface), compound=compound)

    @staticmethod
    def sentence_of(surfaces: Iterable[str]) -> Sentence:
        """Sentence from pre-tokenized surfaces; `_` inside a surface marks a compound"""
        tokens = [
            TokenizerService.make_token(surface, compound=COMPOUND_JOINER in surface.strip(COMPOUND_JOINER))
            for surface in surfaces
        ]
        if not tokens:
            raise EmptyInputError()
        return Sentence(tokens=tokens)

    @staticmethod
    def tokenize(text: str, compounds: Iterable[str] = (), split_clitics: bool = True) -> List[Sentence]:
        """
        Split text into sentences of tokens.

        A sentence ends at . ! or ? followed by whitespace and a capital, or
        at the end of the text. Listed multiword expressions are folded into
        one token (longest match first, never across a sentence boundary).
        """
        pattern = CLITIC_TOKEN_PATTERN if split_clitics else TOKEN_PATTERN
        matches = list(pattern.finditer(text))
        if not matches:
            return []

        lexicon = TokenizerService._compound_index(compounds, pattern)

        sentences: List[Sentence] = []
        current: List[str] = []
        for i, match in enumerate(matches):
            current.append(match.group())
            if match.group() not in SENTENCE_FINAL:
                continue
            following = matches[i + 1] if i + 1 < len(matches) else None
            if following is None:
                continue
            gap = text[match.end():following.start()]
            if gap and gap.isspace() and following.group()[0].isupper():
                sentences.append(TokenizerService._fold(current, lexicon))
                current = []
        if current:
            sentences.append(TokenizerService._fold(current, lexicon))
        return sentences

    @staticmethod
    def _compound_index(compounds: Iterable[str], pattern: re.Pattern) -> Dict[str, List[Tuple[str, ...]]]:
        index: Dict[str, List[Tuple[str, ...]]] = {}
        for entry in compounds:
            words = tuple(m.group().casefold() for m in pattern.finditer(entry))
            if len(words) < 2:
                continue
            index.setdefault(words[0], []).append(words)
        for candidates in index.values():
            candidates.sort(key=len, reverse=True)
        return index

    @staticmethod
    def _fold(surfaces: List[str], index: Dict[str, List[Tuple[str, ...]]]) -> Sentence:
        tokens: List[Token] = []
        folded = [s.casefold() for s in surfaces]
        i = 0
        while i < len(surfaces):
            for words in index.get(folded[i], ()):
                if tuple(folded[i:i + len(words)]) == words:
                    joined = COMPOUND_JOINER.join(surfaces[i:i + len(words)])
                    tokens.append(TokenizerService.make_token(joined, compound=True))
                    i += len(words)
                    break
            else:
                tokens.append(TokenizerService.make_token(surfaces[i]))
                i += 1
        return Sentence(tokens=tokens)

    @staticmethod
    def load_compounds(path: Path) -> FrozenSet[str]:
        """One multiword expression per line, UTF-8"""
        with open(path, encoding="utf-8") as handle:
            return frozenset(line.strip() for line in handle if line.strip())
