from pydantic import BaseModel, ConfigDict, Field
from typing import List, Literal

SHAPES = ("lowercase", "capitalized", "all-caps", "mixed", "numeric", "punctuation")

Shape = Literal["lowercase", "capitalized", "all-caps", "mixed", "numeric", "punctuation"]
Mode = Literal["unigram", "bigram", "full"]


class Token(BaseModel):
    model_config = ConfigDict(frozen=True)

    surface: str = Field(..., min_length=1)
    shape: Shape
    compound: bool = False


class Sentence(BaseModel):
    model_config = ConfigDict(frozen=True)

    tokens: List[Token] = Field(..., min_length=1)

    @property
    def surfaces(self) -> List[str]:
        return [token.surface for token in self.tokens]


class TaggedToken(BaseModel):
    surface: str
    tag: str
    short_tag: str
    cost: float


class TaggedSentence(BaseModel):
    tokens: List[TaggedToken]
    total_cost: float

    def tags(self, full: bool = False) -> List[str]:
        return [token.tag if full else token.short_tag for token in self.tokens]


class TagRequest(BaseModel):
    text: str
    mode: Mode = "full"
    full_tags: bool = False


class TextRequest(BaseModel):
    text: str
