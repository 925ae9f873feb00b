"""
Synthetic tagging resources and corpora: the [P R][JMP NMP] counts of the
classic genotype example, a language whose tags follow from the left
neighbour, and writers for every resource file format.

Run as a module to write a demo resource directory:

    python -m tagger_app.data.synthetic --out data/demo
"""

import argparse
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

TaggedCorpus = List[List[Tuple[str, str]]]

# Tag set of the "des bons" example; every tag is its own short tag
PAIR_TAGSET = [("P", "P"), ("R", "R"), ("JMP", "JMP"), ("NMP", "NMP")]
PAIR_LEXICON = [("des", "P", 0.0), ("des", "R", 0.0), ("bons", "JMP", 0.0), ("bons", "NMP", 0.0)]

# Taggings of "des bons" and how often each occurs
PAIR_SPLITS = {("P", "JMP"): 27, ("P", "NMP"): 104, ("R", "JMP"): 2, ("R", "NMP"): 8}

# Standalone "bons" sentences bringing the [JMP NMP] unigram to 316 JMP / 291 NMP
LONE_SPLITS = {"JMP": 287, "NMP": 179}

# Left-neighbour language: a word's tag is the first tag of PREFERENCE[previous tag] it can bear
NEIGHBOUR_TAGSET = [("DET", "DET"), ("NOUN", "NOUN"), ("VERB", "VERB"), ("PRON", "PRON")]
NEIGHBOUR_WORDS: Dict[str, Tuple[str, ...]] = {
    "le": ("DET", "PRON"),
    "la": ("DET", "PRON"),
    "porte": ("NOUN", "VERB"),
    "ferme": ("NOUN", "VERB"),
    "garde": ("NOUN", "VERB"),
    "chat": ("NOUN",),
    "mange": ("VERB",),
}
PREFERENCE: Dict[str, Tuple[str, ...]] = {
    "SB": ("DET", "PRON", "NOUN", "VERB"),
    "DET": ("NOUN", "VERB", "DET", "PRON"),
    "NOUN": ("VERB", "PRON", "DET", "NOUN"),
    "VERB": ("DET", "NOUN", "PRON", "VERB"),
    "PRON": ("VERB", "NOUN", "DET", "PRON"),
}

# Sequences the left-neighbour rule never produces
NEIGHBOUR_RULES = [("SB", "PRON"), ("PRON", "PRON"), ("VERB", "PRON")]


def pair_corpus() -> TaggedCorpus:
    """141 two-token sentences realising PAIR_SPLITS"""
    corpus: TaggedCorpus = []
    for (first, second), count in PAIR_SPLITS.items():
        corpus.extend([[("des", first), ("bons", second)] for _ in range(count)])
    return corpus


def context_corpus() -> TaggedCorpus:
    """pair_corpus plus standalone "bons" sentences"""
    corpus = pair_corpus()
    for tag, count in LONE_SPLITS.items():
        corpus.extend([[("bons", tag)] for _ in range(count)])
    return corpus


def neighbour_lexicon() -> List[Tuple[str, str, float]]:
    return [(word, tag, 0.0) for word, tags in NEIGHBOUR_WORDS.items() for tag in tags]


def neighbour_tag(previous: str, word: str) -> str:
    tags = NEIGHBOUR_WORDS[word]
    return next(tag for tag in PREFERENCE[previous] if tag in tags)


def neighbour_corpus(tokens: int, seed: int = 0, min_length: int = 3, max_length: int = 8) -> TaggedCorpus:
    """Random sentences of at least `tokens` tokens in total, tagged by the left-neighbour rule"""
    rng = np.random.default_rng(seed)
    words = sorted(NEIGHBOUR_WORDS)
    corpus: TaggedCorpus = []
    produced = 0
    while produced < tokens:
        length = int(rng.integers(min_length, max_length + 1))
        previous = "SB"
        sentence = []
        for index in rng.integers(0, len(words), size=length):
            word = words[int(index)]
            previous = neighbour_tag(previous, word)
            sentence.append((word, previous))
        corpus.append(sentence)
        produced += length
    return corpus


def write_tagset(path: Path, pairs: Iterable[Tuple[str, str]]) -> Path:
    Path(path).write_text("".join(f"{full}\t{short}\n" for full, short in pairs), encoding="utf-8")
    return Path(path)


def write_lexicon(path: Path, entries: Iterable[Tuple[str, str, float]]) -> Path:
    Path(path).write_text("".join(f"{surface}\t{tag}\t{weight}\n" for surface, tag, weight in entries), encoding="utf-8")
    return Path(path)


def write_rules(path: Path, rules: Iterable[Sequence[str]]) -> Path:
    Path(path).write_text("".join(" ".join(rule) + "\n" for rule in rules), encoding="utf-8")
    return Path(path)


def write_corpus(path: Path, corpus: TaggedCorpus) -> Path:
    blocks = ["\n".join(f"{surface}\t{tag}" for surface, tag in sentence) for sentence in corpus]
    Path(path).write_text("\n\n".join(blocks) + "\n", encoding="utf-8")
    return Path(path)


def write_demo(out: Path, tokens: int = 5000, seed: int = 0) -> None:
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    write_tagset(out / "tagset.tsv", NEIGHBOUR_TAGSET)
    write_lexicon(out / "lexicon.tsv", neighbour_lexicon())
    write_rules(out / "rules.txt", NEIGHBOUR_RULES)
    write_corpus(out / "train.tsv", neighbour_corpus(tokens, seed=seed))
    write_corpus(out / "test.tsv", neighbour_corpus(tokens // 5, seed=seed + 1))
    print(f"Wrote demo resources to {out}")


def main():
    parser = argparse.ArgumentParser(description="Write synthetic tagging resources")
    parser.add_argument("--out", type=Path, required=True)
    parser.add_argument("--tokens", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    write_demo(args.out, tokens=args.tokens, seed=args.seed)


if __name__ == "__main__":
    main()
