"""
Report schemas for evaluation, coverage, context analysis, machine sizes and
ambiguity profiles. Each report renders to a pandas DataFrame laid out the way
the tables of the tagging literature are.
"""

from pydantic import BaseModel, Field
from typing import Dict, List, Optional

import pandas as pd

MODE_COLUMNS = {
    "unigram": "1-grams",
    "bigram": "1, 2 -grams",
    "full": "neg. cons and 1, 2, 3 -grams",
}


class ModeAccuracy(BaseModel):
    mode: str
    correct: int
    total: int
    accuracy: float
    correct_with_punct: Optional[int] = None
    total_with_punct: Optional[int] = None


class TagError(BaseModel):
    gold: str
    predicted: str
    count: int


class EvalReport(BaseModel):
    sentences: int
    tokens: int
    punctuation_tokens: int
    modes: List[ModeAccuracy]
    errors: Dict[str, List[TagError]] = Field(default_factory=dict)

    def accuracy(self, mode: str) -> float:
        return next(row.accuracy for row in self.modes if row.mode == mode)

    def to_frame(self, label: str = "corpus") -> pd.DataFrame:
        row = {MODE_COLUMNS.get(m.mode, m.mode): f"{100 * m.accuracy:.1f}%" for m in self.modes}
        frame = pd.DataFrame([row], index=[label])
        if any(m.total_with_punct is not None for m in self.modes):
            with_punct = {
                MODE_COLUMNS.get(m.mode, m.mode): f"{100 * m.correct_with_punct / max(m.total_with_punct, 1):.1f}%"
                for m in self.modes
            }
            frame = pd.concat([frame, pd.DataFrame([with_punct], index=[f"{label} (with punctuation)"])])
        return frame

    def errors_frame(self, mode: str) -> pd.DataFrame:
        rows = [error.model_dump() for error in self.errors.get(mode, [])]
        return pd.DataFrame(rows, columns=["gold", "predicted", "count"])


class CoverageRow(BaseModel):
    order: int
    seen: int
    total: int
    fraction: float


class CoverageReport(BaseModel):
    rows: List[CoverageRow]

    def fraction(self, order: int) -> float:
        return next(row.fraction for row in self.rows if row.order == order)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "test corpus # of genotypes": [row.total for row in self.rows],
                "training corpus # of genotypes": [row.seen for row in self.rows],
                "coverage": [f"({100 * row.fraction:.1f} %)" for row in self.rows],
            },
            index=[f"{row.order}-grams" for row in self.rows],
        )


class ContextRow(BaseModel):
    order: int
    position: str
    context: str
    decision: str
    taggings: Dict[str, int]
    correct: int
    total: int


class ContextSummary(BaseModel):
    order: int
    correct: int
    total: int

    @property
    def accuracy(self) -> float:
        return self.correct / self.total if self.total else 0.0


class ContextReport(BaseModel):
    genotype: str
    rows: List[ContextRow] = Field(default_factory=list)
    summary: List[ContextSummary] = Field(default_factory=list)

    def block(self, order: int, position: str, context: str) -> Optional[ContextRow]:
        return next(
            (row for row in self.rows if row.order == order and row.position == position and row.context == context),
            None,
        )

    def summary_for(self, order: int) -> Optional[ContextSummary]:
        return next((s for s in self.summary if s.order == order), None)

    def to_frame(self) -> pd.DataFrame:
        names = {1: "Unigram", 2: "Bigram", 3: "Trigram"}
        rows = []
        for row in self.rows:
            for tagging, count in row.taggings.items():
                rows.append({
                    "n-gram": names[row.order],
                    "pos.": row.position,
                    "genotype": row.context,
                    "decision": tagging,
                    "distr.": count,
                    "correct": row.correct,
                    "total": row.total,
                })
        return pd.DataFrame(rows, columns=["n-gram", "pos.", "genotype", "decision", "distr.", "correct", "total"])

    def summary_frame(self) -> pd.DataFrame:
        names = {1: "Unigram", 2: "Bigram", 3: "Trigram"}
        return pd.DataFrame(
            {
                "cor.": [s.correct for s in self.summary],
                "total": [s.total for s in self.summary],
                "accuracy": [f"{100 * s.accuracy:.2f}%" for s in self.summary],
            },
            index=[names[s.order] for s in self.summary],
        )


class MachineSize(BaseModel):
    states: int
    arcs: int


class SizeReport(BaseModel):
    morphology: MachineSize
    constraints: MachineSize
    ngrams: MachineSize

    def to_frame(self) -> pd.DataFrame:
        columns = {
            "Morphology": self.morphology,
            "Negative constraints": self.constraints,
            "Ngram genotypes": self.ngrams,
        }
        return pd.DataFrame(
            {name: [size.states, size.arcs] for name, size in columns.items()},
            index=["Number of states", "Number of arcs"],
        )


AMBIGUITY_BUCKETS = ("0", "1", "2", "3", "4-8", ">8")


class AmbiguityProfile(BaseModel):
    tokens: int
    counts: Dict[str, int]

    @property
    def fractions(self) -> Dict[str, float]:
        return {bucket: (count / self.tokens if self.tokens else 0.0) for bucket, count in self.counts.items()}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "tokens": [self.counts[b] for b in AMBIGUITY_BUCKETS],
                "fraction": [f"{100 * self.fractions[b]:.1f}%" for b in AMBIGUITY_BUCKETS],
            },
            index=[f"{b} tags" for b in AMBIGUITY_BUCKETS],
        )


class CorpusProfile(BaseModel):
    sentences: int
    tokens: int
    types: int
    genotypes: int

    def to_frame(self, label: str = "corpus") -> pd.DataFrame:
        return pd.DataFrame(
            [{"# of tokens": self.tokens, "# of types": self.types, "# of genotypes": self.genotypes}],
            index=[label],
        )
