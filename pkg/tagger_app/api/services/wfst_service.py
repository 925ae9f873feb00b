"""
Weighted transducer operations over the tropical semiring: construction,
composition, trimming, n-best shortest paths and text serialization.
"""

import heapq
import itertools
import logging
from collections import Counter, deque
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from tagger_app.resources.models import (
    EPSILON,
    EPSILON_ID,
    ONE,
    ZERO,
    Arc,
    Path,
    SymbolTable,
    Wfst,
    format_weight,
    parse_weight,
    times,
)
from tagger_app.utils.errors import AlphabetMismatchError, EmptyInputError, ResourceFormatError, TaggerError

logger = logging.getLogger(__name__)


class WfstService:
    @staticmethod
    def linear_acceptor(symbols: Sequence[Union[str, int]], table: Optional[SymbolTable] = None) -> Wfst:
        """
        Chain machine accepting exactly `symbols` at weight 0.

        Strings are added to `table` (a fresh table when omitted); ints are
        taken as ids already present in it.
        """
        if not symbols:
            raise EmptyInputError()
        table = table if table is not None else SymbolTable()

        labels = []
        for symbol in symbols:
            if isinstance(symbol, int):
                if not (0 <= symbol < len(table)):
                    raise TaggerError(f"symbol id {symbol} not in table")
                label = symbol
            else:
                label = table.find(symbol) if symbol == EPSILON else table.add(symbol)
            if label == EPSILON_ID:
                raise TaggerError("epsilon in input sequence")
            labels.append(label)

        machine = Wfst(table, table)
        state = machine.add_state()
        machine.set_start(state)
        for label in labels:
            nextstate = machine.add_state()
            machine.add_arc(state, label, label, ONE, nextstate)
            state = nextstate
        machine.set_final(state, ONE)
        return machine

    @staticmethod
    def identity(table: SymbolTable, labels: Optional[Iterable[int]] = None) -> Wfst:
        """One-state identity transducer over `labels` (all non-epsilon symbols by default)"""
        machine = Wfst(table, table)
        state = machine.add_state()
        machine.set_start(state)
        machine.set_final(state, ONE)
        for label in labels if labels is not None else table.labels():
            machine.add_arc(state, label, label, ONE, state)
        return machine

    @staticmethod
    def compose(a: Wfst, b: Wfst) -> Wfst:
        """
        Relational composition a ∘ b, trimmed.

        Epsilon moves are coordinated with a three-state filter: 0 after a
        matching move, 1 after `a` moved alone on an epsilon output, 2 after
        `b` moved alone on an epsilon input. A lone move of one side is never
        followed by a lone move of the other, so each pair of paths is
        realised exactly once.
        """
        if a.osymbols != b.isymbols:
            raise AlphabetMismatchError()

        result = Wfst(a.isymbols, b.osymbols)
        if a.start is None or b.start is None:
            return result

        state_ids: Dict[Tuple[int, int, int], int] = {}
        queue: deque = deque()

        def state_for(q1: int, q2: int, flag: int) -> int:
            key = (q1, q2, flag)
            state = state_ids.get(key)
            if state is None:
                state = result.add_state()
                state_ids[key] = state
                queue.append(key)
                final = times(a.final(q1), b.final(q2))
                if final != ZERO:
                    result.set_final(state, final)
            return state

        result.set_start(state_for(a.start, b.start, 0))

        while queue:
            key = queue.popleft()
            q1, q2, flag = key
            src = state_ids[key]

            for arc1 in a.arcs(q1):
                if arc1.olabel == EPSILON_ID:
                    if flag != 2:
                        dest = state_for(arc1.nextstate, q2, 1)
                        result.add_arc(src, arc1.ilabel, EPSILON_ID, arc1.weight, dest)
                    if flag == 0:
                        for arc2 in b.arcs_with_ilabel(q2, EPSILON_ID):
                            dest = state_for(arc1.nextstate, arc2.nextstate, 0)
                            result.add_arc(src, arc1.ilabel, arc2.olabel, times(arc1.weight, arc2.weight), dest)
                    continue
                for arc2 in b.arcs_with_ilabel(q2, arc1.olabel):
                    dest = state_for(arc1.nextstate, arc2.nextstate, 0)
                    result.add_arc(src, arc1.ilabel, arc2.olabel, times(arc1.weight, arc2.weight), dest)

            if flag != 1:
                for arc2 in b.arcs_with_ilabel(q2, EPSILON_ID):
                    dest = state_for(q1, arc2.nextstate, 2)
                    result.add_arc(src, EPSILON_ID, arc2.olabel, arc2.weight, dest)

        logger.debug("compose: %d x %d states -> %d before trim", a.num_states, b.num_states, result.num_states)
        return WfstService.trim(result)

    @staticmethod
    def trim(m: Wfst) -> Wfst:
        """Keep only states lying on some start -> final path; state order is preserved"""
        trimmed = Wfst(m.isymbols, m.osymbols)
        if m.start is None:
            return trimmed

        reachable = {m.start}
        queue = deque([m.start])
        reverse: Dict[int, List[int]] = {}
        while queue:
            state = queue.popleft()
            for arc in m.arcs(state):
                reverse.setdefault(arc.nextstate, []).append(state)
                if arc.nextstate not in reachable:
                    reachable.add(arc.nextstate)
                    queue.append(arc.nextstate)

        coreachable = {state for state in m.finals if state in reachable}
        queue = deque(coreachable)
        while queue:
            state = queue.popleft()
            for previous in reverse.get(state, ()):
                if previous not in coreachable:
                    coreachable.add(previous)
                    queue.append(previous)

        if m.start not in coreachable:
            return trimmed

        keep = sorted(coreachable)
        renumber = {old: trimmed.add_state() for old in keep}
        for old in keep:
            for arc in m.arcs(old):
                if arc.nextstate in renumber:
                    trimmed.add_arc(renumber[old], arc.ilabel, arc.olabel, arc.weight, renumber[arc.nextstate])
            if old in m.finals:
                trimmed.set_final(renumber[old], m.finals[old])
        trimmed.set_start(renumber[m.start])
        return trimmed

    @staticmethod
    def shortest_path(m: Wfst, n: int = 1) -> List[Path]:
        """
        Up to `n` distinct accepting paths in nondecreasing weight order.

        Ties are broken by the output label sequence (smallest first). Each
        state is expanded at most `n` times, which is exact whenever every
        cycle has positive weight. The tie-break is exact when all paths
        reaching a state carry output strings of equal length, as in every
        machine the cascade builds.
        """
        if n < 1:
            raise ValueError("n must be at least 1")
        if m.start is None:
            return []

        sequence = itertools.count()
        heap: list = [(ONE, (), next(sequence), m.start, None, False)]
        expanded: Counter = Counter()
        found: List[Path] = []

        while heap and len(found) < n:
            cost, ostring, _, state, node, complete = heapq.heappop(heap)
            if complete:
                found.append(WfstService._unwind(node, cost, ostring))
                continue
            if expanded[state] >= n:
                continue
            expanded[state] += 1

            final = m.final(state)
            if final != ZERO:
                heapq.heappush(heap, (cost + final, ostring, next(sequence), state, node, True))
            for arc in m.arcs(state):
                if arc.weight == ZERO:
                    continue
                out = ostring + (arc.olabel,) if arc.olabel != EPSILON_ID else ostring
                heapq.heappush(heap, (cost + arc.weight, out, next(sequence), arc.nextstate, (arc, node), False))

        return found

    @staticmethod
    def _unwind(node, weight: float, ostring: Tuple[int, ...]) -> Path:
        arcs: List[Arc] = []
        while node is not None:
            arc, node = node
            arcs.append(arc)
        arcs.reverse()
        istring = tuple(arc.ilabel for arc in arcs if arc.ilabel != EPSILON_ID)
        return Path(arcs=tuple(arcs), weight=weight, istring=istring, ostring=ostring)

    @staticmethod
    def paths(m: Wfst, limit: Optional[int] = None) -> List[Path]:
        """Enumerate every accepting path of an acyclic machine (depth-first)"""
        found: List[Path] = []
        if m.start is None:
            return found

        on_stack = set()

        def visit(state: int, arcs: List[Arc], cost: float) -> None:
            if limit is not None and len(found) >= limit:
                return
            if state in on_stack:
                raise TaggerError("path enumeration requires an acyclic machine")
            on_stack.add(state)
            final = m.final(state)
            if final != ZERO:
                istring = tuple(arc.ilabel for arc in arcs if arc.ilabel != EPSILON_ID)
                ostring = tuple(arc.olabel for arc in arcs if arc.olabel != EPSILON_ID)
                found.append(Path(tuple(arcs), cost + final, istring, ostring))
            for arc in m.arcs(state):
                arcs.append(arc)
                visit(arc.nextstate, arcs, cost + arc.weight)
                arcs.pop()
            on_stack.discard(state)

        visit(m.start, [], ONE)
        return found

    @staticmethod
    def stats(m: Wfst) -> Tuple[int, int]:
        return m.num_states, m.num_arcs

    @staticmethod
    def render(labels: Iterable[int], table: SymbolTable) -> List[str]:
        return [table.symbol(label) for label in labels]

    @staticmethod
    def render_path(path: Path, m: Wfst) -> Tuple[List[str], List[str]]:
        """Input and output symbol strings of a path through `m`"""
        return WfstService.render(path.istring, m.isymbols), WfstService.render(path.ostring, m.osymbols)

    @staticmethod
    def write_text(m: Wfst) -> str:
        lines = []
        if m.start is not None:
            lines.append(f"start {m.start}")
        for symbol, symbol_id in m.isymbols.items():
            lines.append(f"isym {symbol} {symbol_id}")
        for symbol, symbol_id in m.osymbols.items():
            lines.append(f"osym {symbol} {symbol_id}")
        for state in m.states():
            for arc in m.arcs(state):
                lines.append(f"{state} {arc.ilabel} {arc.olabel} {format_weight(arc.weight)} {arc.nextstate}")
        for state in sorted(m.finals):
            lines.append(f"{state} {format_weight(m.finals[state])}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def read_text(text: str, path: Optional[str] = None) -> Wfst:
        isymbols, osymbols = SymbolTable(), SymbolTable()
        start: Optional[int] = None
        arcs: List[Tuple[int, Arc]] = []
        finals: List[Tuple[int, float]] = []
        max_state = -1

        for number, raw in enumerate(text.splitlines(), start=1):
            fields = raw.split()
            if not fields:
                continue
            try:
                if fields[0] == "start" and len(fields) == 2:
                    start = int(fields[1])
                    max_state = max(max_state, start)
                elif fields[0] in ("isym", "osym") and len(fields) == 3:
                    table = isymbols if fields[0] == "isym" else osymbols
                    table.add_with_id(fields[1], int(fields[2]))
                elif len(fields) == 5:
                    src, ilabel, olabel, dst = int(fields[0]), int(fields[1]), int(fields[2]), int(fields[4])
                    arcs.append((src, Arc(ilabel, olabel, parse_weight(fields[3]), dst)))
                    max_state = max(max_state, src, dst)
                elif len(fields) == 2:
                    state = int(fields[0])
                    finals.append((state, parse_weight(fields[1])))
                    max_state = max(max_state, state)
                else:
                    raise ValueError(f"unrecognised record {raw.strip()!r}")
            except ValueError as e:
                raise ResourceFormatError(str(e), path=path, line=number) from None

        if isymbols == osymbols:
            osymbols = isymbols
        machine = Wfst(isymbols, osymbols)
        for _ in range(max_state + 1):
            machine.add_state()
        for src, arc in arcs:
            machine.add_arc(src, arc.ilabel, arc.olabel, arc.weight, arc.nextstate)
        for state, weight in finals:
            machine.set_final(state, weight)
        if start is not None:
            machine.set_start(start)
        return machine
