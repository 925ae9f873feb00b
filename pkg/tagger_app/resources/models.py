"""
Domain entities of the tagging cascade: symbol tables, weighted transducers,
tag sets, lexicons, genotypes, n-gram tables and compiled constraints.
"""

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Tuple

from tagger_app.utils.errors import UnknownTagError

# Tropical semiring: costs combine by min along alternatives, by + along a path
ZERO = math.inf
ONE = 0.0

EPSILON = "<eps>"
EPSILON_ID = 0

UNKNOWN = "UNKNOWN"
NPR = "NPR"
ACR = "ACR"
SB = "SB"
PUNCT = "PUNCT"
RESERVED_TAGS = (UNKNOWN, NPR, ACR, SB, PUNCT)


def plus(a: float, b: float) -> float:
    return min(a, b)


def times(a: float, b: float) -> float:
    return a + b


def format_weight(weight: float) -> str:
    if weight == ZERO:
        return "inf"
    return repr(float(weight))


def parse_weight(text: str) -> float:
    if text.strip().lower() in ("inf", "+inf", "infinity"):
        return ZERO
    value = float(text)
    if math.isnan(value) or value < 0:
        raise ValueError(f"weight must be a non-negative cost, got {text!r}")
    return value


class SymbolTable:
    """Bidirectional symbol <-> id map; id 0 is always epsilon"""

    def __init__(self, symbols: Iterable[str] = ()):
        self._symbols: List[str] = [EPSILON]
        self._ids: Dict[str, int] = {EPSILON: EPSILON_ID}
        for symbol in symbols:
            self.add(symbol)

    def add(self, symbol: str) -> int:
        existing = self._ids.get(symbol)
        if existing is not None:
            return existing
        self._ids[symbol] = len(self._symbols)
        self._symbols.append(symbol)
        return self._ids[symbol]

    def add_with_id(self, symbol: str, symbol_id: int) -> None:
        """Insert a symbol at an explicit id (text deserialization)"""
        if symbol_id == EPSILON_ID:
            if symbol != EPSILON:
                raise ValueError("symbol id 0 is reserved for epsilon")
            return
        while len(self._symbols) < symbol_id:
            self._symbols.append(f"<gap{len(self._symbols)}>")
        if len(self._symbols) == symbol_id:
            self._symbols.append(symbol)
        else:
            self._symbols[symbol_id] = symbol
        self._ids[symbol] = symbol_id

    def find(self, symbol: str) -> Optional[int]:
        return self._ids.get(symbol)

    def symbol(self, symbol_id: int) -> str:
        return self._symbols[symbol_id]

    def items(self) -> Iterator[Tuple[str, int]]:
        return ((symbol, i) for i, symbol in enumerate(self._symbols))

    def labels(self) -> range:
        """Non-epsilon symbol ids"""
        return range(1, len(self._symbols))

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._ids

    def __len__(self) -> int:
        return len(self._symbols)

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, SymbolTable):
            return NotImplemented
        return self._symbols == other._symbols

    __hash__ = object.__hash__

    def __repr__(self) -> str:
        return f"SymbolTable({len(self._symbols) - 1} symbols)"


class Arc(NamedTuple):
    ilabel: int
    olabel: int
    weight: float
    nextstate: int


class Wfst:
    """
    Weighted finite-state transducer over the tropical semiring, stored as
    one arc list per state. Machines are built with add_state/add_arc and
    treated as immutable once handed to an operation.
    """

    def __init__(self, isymbols: Optional[SymbolTable] = None, osymbols: Optional[SymbolTable] = None):
        self.isymbols = isymbols if isymbols is not None else SymbolTable()
        self.osymbols = osymbols if osymbols is not None else self.isymbols
        self.start: Optional[int] = None
        self.finals: Dict[int, float] = {}
        self._arcs: List[List[Arc]] = []
        # per-state arcs keyed by input label, kept in step with _arcs
        self._by_ilabel: List[Dict[int, List[Arc]]] = []

    def add_state(self) -> int:
        self._arcs.append([])
        self._by_ilabel.append({})
        return len(self._arcs) - 1

    def add_arc(self, src: int, ilabel: int, olabel: int, weight: float, nextstate: int) -> None:
        if not (0 <= nextstate < len(self._arcs)):
            raise ValueError(f"arc destination {nextstate} is not a state")
        arc = Arc(ilabel, olabel, float(weight), nextstate)
        self._arcs[src].append(arc)
        self._by_ilabel[src].setdefault(ilabel, []).append(arc)

    def set_start(self, state: int) -> None:
        if not (0 <= state < len(self._arcs)):
            raise ValueError(f"start {state} is not a state")
        self.start = state

    def set_final(self, state: int, weight: float = ONE) -> None:
        if not (0 <= state < len(self._arcs)):
            raise ValueError(f"final {state} is not a state")
        if weight == ZERO:
            self.finals.pop(state, None)
        else:
            self.finals[state] = float(weight)

    def final(self, state: int) -> float:
        return self.finals.get(state, ZERO)

    def arcs(self, state: int) -> List[Arc]:
        return self._arcs[state]

    def arcs_with_ilabel(self, state: int, ilabel: int) -> List[Arc]:
        return self._by_ilabel[state].get(ilabel, [])

    def states(self) -> range:
        return range(len(self._arcs))

    @property
    def num_states(self) -> int:
        return len(self._arcs)

    @property
    def num_arcs(self) -> int:
        return sum(len(arcs) for arcs in self._arcs)

    def __repr__(self) -> str:
        return f"Wfst(states={self.num_states}, arcs={self.num_arcs}, start={self.start})"


@dataclass(frozen=True)
class Path:
    arcs: Tuple[Arc, ...]
    weight: float
    istring: Tuple[int, ...]
    ostring: Tuple[int, ...]


@dataclass
class TagSet:
    """
    Full tag inventory with its collapse onto the short inventory. Reserved
    tags (UNKNOWN, NPR, ACR, PUNCT, SB) collapse onto themselves.
    """

    collapsed: Dict[str, str]
    declared: FrozenSet[str] = frozenset()
    symbols: SymbolTable = field(default_factory=SymbolTable)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]]) -> "TagSet":
        collapsed: Dict[str, str] = {}
        for full_tag, short_tag in pairs:
            collapsed[full_tag] = short_tag
        declared = frozenset(collapsed)
        for tag in RESERVED_TAGS:
            collapsed.setdefault(tag, tag)

        symbols = SymbolTable()
        for tag in sorted(collapsed):
            symbols.add(tag)
        for tag in sorted(set(collapsed.values())):
            symbols.add(tag)
        return cls(collapsed=collapsed, declared=declared, symbols=symbols)

    @property
    def full_tags(self) -> FrozenSet[str]:
        """Every tag a lattice can carry (declared inventory plus NPR/ACR/UNKNOWN/PUNCT)"""
        return frozenset(tag for tag in self.collapsed if tag != SB)

    @property
    def short_tags(self) -> FrozenSet[str]:
        return frozenset(short for full, short in self.collapsed.items() if full != SB)

    @property
    def expandable(self) -> List[str]:
        """Tags reachable by generic-prefix expansion"""
        return sorted(self.declared | {NPR, ACR})

    def __contains__(self, tag: str) -> bool:
        return tag in self.collapsed

    def collapse(self, tag: str) -> str:
        try:
            return self.collapsed[tag]
        except KeyError:
            raise UnknownTagError(tag) from None

    def expand(self, generic: str) -> List[str]:
        if generic == SB:
            return [SB]
        return [tag for tag in self.expandable if tag.startswith(generic)]

    def label(self, tag: str) -> int:
        label = self.symbols.find(tag)
        if label is None:
            raise UnknownTagError(tag)
        return label


class LexiconEntry(NamedTuple):
    surface: str
    tag: str
    weight: float


class Lexicon:
    """Full-form surface -> {tag: weight} multimap with a lowercase fallback index"""

    def __init__(self):
        self._entries: Dict[str, Dict[str, float]] = {}
        self._lowercase: Dict[str, Dict[str, float]] = {}

    def add(self, surface: str, tag: str, weight: float = ONE) -> None:
        for index, key in ((self._entries, surface), (self._lowercase, surface.lower())):
            tags = index.setdefault(key, {})
            tags[tag] = min(weight, tags.get(tag, ZERO))

    def lookup(self, surface: str) -> Dict[str, float]:
        return dict(self._entries.get(surface, {}))

    def lookup_lowercase(self, surface: str) -> Dict[str, float]:
        return dict(self._lowercase.get(surface.lower(), {}))

    def entries(self) -> Iterator[LexiconEntry]:
        for surface in sorted(self._entries):
            for tag, weight in sorted(self._entries[surface].items()):
                yield LexiconEntry(surface, tag, weight)

    @property
    def surfaces(self) -> List[str]:
        return sorted(self._entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self._entries

    def __len__(self) -> int:
        return sum(len(tags) for tags in self._entries.values())


@dataclass(frozen=True, order=True)
class Genotype:
    """Canonically ordered set of tags a token can bear"""

    tags: Tuple[str, ...]

    @classmethod
    def of(cls, tags: Iterable[str]) -> "Genotype":
        ordered = tuple(sorted(set(tags)))
        if not ordered:
            raise ValueError("a genotype has at least one tag")
        return cls(ordered)

    @classmethod
    def parse(cls, text: str) -> "Genotype":
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise ValueError(f"not a genotype rendering: {text!r}")
        return cls.of(text[1:-1].split())

    def render(self) -> str:
        return "[" + " ".join(self.tags) + "]"

    def __contains__(self, tag: str) -> bool:
        return tag in self.tags

    def __len__(self) -> int:
        return len(self.tags)

    def __str__(self) -> str:
        return self.render()


Context = Tuple[Genotype, ...]
Tagging = Tuple[str, ...]


@dataclass
class NgramTable:
    """Counts of taggings per genotype context for one n-gram order"""

    order: int
    counts: Dict[Context, Counter] = field(default_factory=dict)
    _totals: Counter = field(default_factory=Counter, repr=False)
    _prefix_totals: Counter = field(default_factory=Counter, repr=False)

    def add(self, context: Context, tagging: Tagging, count: int = 1) -> None:
        if len(context) != self.order or len(tagging) != self.order:
            raise ValueError(f"order-{self.order} table given a context of length {len(context)}")
        for tag, genotype in zip(tagging, context):
            if tag not in genotype:
                raise ValueError(f"tag {tag} is not a member of {genotype}")
        self.counts.setdefault(context, Counter())[tagging] += count
        self._totals[context] += count
        self._prefix_totals[(context, tagging[:-1])] += count

    def total(self, context: Context) -> int:
        return self._totals.get(context, 0)

    def count(self, context: Context, tagging: Tagging) -> int:
        taggings = self.counts.get(context)
        return taggings.get(tagging, 0) if taggings else 0

    def prefix_total(self, context: Context, prefix: Tagging) -> int:
        return self._prefix_totals.get((context, prefix), 0)

    def contexts(self) -> List[Context]:
        return sorted(self.counts)

    def entries(self) -> Iterator[Tuple[Context, Tagging, int]]:
        for context in self.contexts():
            for tagging, count in sorted(self.counts[context].items()):
                yield context, tagging, count

    def __contains__(self, context: Context) -> bool:
        return context in self.counts

    def __len__(self) -> int:
        return len(self.counts)


@dataclass
class GenotypeModel:
    """Unigram/bigram/trigram genotype tables plus training metadata"""

    tables: Dict[int, NgramTable] = field(default_factory=lambda: {n: NgramTable(n) for n in (1, 2, 3)})
    tag_space: str = "collapsed"
    metadata: Dict[str, int] = field(default_factory=dict)

    def table(self, order: int) -> NgramTable:
        return self.tables[order]


@dataclass(frozen=True)
class ConstraintRule:
    """Forbidden adjacency over generic tags, optionally anchored at SB"""

    pattern: Tuple[str, ...]
    line: Optional[int] = None

    def render(self) -> str:
        return " ".join(self.pattern)


@dataclass(frozen=True)
class CompiledConstraints:
    rules: Tuple[ConstraintRule, ...]
    expanded: FrozenSet[Tuple[str, ...]]
    transducer: Wfst
    w_neg: float

    @property
    def expansion_factor(self) -> float:
        if not self.rules:
            return 0.0
        return len(self.expanded) / len(self.rules)
