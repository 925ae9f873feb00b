"""
Constraint Service - negative-constraint rules over generic tags, their
expansion against the tag set, and the penalty transducer they compile to
"""

import itertools
import logging
from collections import deque
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

from tagger_app.api.services.wfst_service import WfstService
from tagger_app.resources.models import ONE, SB, CompiledConstraints, ConstraintRule, TagSet, Wfst
from tagger_app.utils.errors import ExpansionError, RuleFormatError

logger = logging.getLogger(__name__)


class ConstraintService:
    @staticmethod
    def parse_rules(path: Path) -> List[ConstraintRule]:
        """
        One rule per line: 2 or 3 whitespace-separated generic tags, `#` starts
        a comment. Tags are case-sensitive; only the SB marker is not.
        """
        rules: List[ConstraintRule] = []
        with open(path, encoding="utf-8") as handle:
            for number, raw in enumerate(handle, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                pattern = tuple(SB if token.upper() == SB else token for token in line.split())
                if len(pattern) not in (2, 3):
                    raise RuleFormatError(f"rule has {len(pattern)} elements, expected 2 or 3", path=str(path), line=number)
                if SB in pattern[1:]:
                    raise RuleFormatError("SB may only open a rule", path=str(path), line=number)
                rules.append(ConstraintRule(pattern=pattern, line=number))

        logger.info("Parsed %d negative constraints from %s", len(rules), path)
        return rules

    @staticmethod
    def expand_rule(rule: ConstraintRule, tagset: TagSet) -> Set[Tuple[str, ...]]:
        """Cartesian product of the prefix expansions of each element"""
        expansions = []
        for generic in rule.pattern:
            tags = tagset.expand(generic)
            if not tags:
                raise ExpansionError(generic)
            expansions.append(tags)
        return set(itertools.product(*expansions))

    @staticmethod
    def compile(rules: Sequence[ConstraintRule], tagset: TagSet, w_neg: float) -> CompiledConstraints:
        """
        Compile rules into an identity transducer over the full-tag alphabet
        that adds `w_neg` for every occurrence of a forbidden sequence.

        The machine is an Aho-Corasick automaton with every "other tag"
        transition spelled out; it starts in the state reached by reading SB.
        """
        expanded: Set[Tuple[str, ...]] = set()
        for rule in rules:
            expanded |= ConstraintService.expand_rule(rule, tagset)

        alphabet = sorted(tagset.full_tags)
        transducer = ConstraintService._automaton(expanded, alphabet, tagset, w_neg)

        compiled = CompiledConstraints(
            rules=tuple(rules), expanded=frozenset(expanded), transducer=transducer, w_neg=w_neg
        )
        logger.info(
            "Compiled %d rules into %d constraints (factor %.2f), machine %s",
            len(rules), len(expanded), compiled.expansion_factor, WfstService.stats(transducer),
        )
        return compiled

    @staticmethod
    def _automaton(patterns: Iterable[Tuple[str, ...]], alphabet: List[str], tagset: TagSet, w_neg: float) -> Wfst:
        children: List[Dict[str, int]] = [{}]
        matches: List[int] = [0]
        for pattern in sorted(patterns):
            node = 0
            for tag in pattern:
                if tag not in children[node]:
                    children.append({})
                    matches.append(0)
                    children[node][tag] = len(children) - 1
                node = children[node][tag]
            matches[node] += 1

        # Breadth-first order guarantees fail[node] is resolved before node
        symbols = alphabet + [SB]
        fail = [0] * len(children)
        delta: List[Dict[str, int]] = [dict() for _ in children]
        for tag in symbols:
            delta[0][tag] = children[0].get(tag, 0)
        queue = deque(children[0].values())
        while queue:
            node = queue.popleft()
            matches[node] += matches[fail[node]]
            for tag in symbols:
                child = children[node].get(tag)
                if child is None:
                    delta[node][tag] = delta[fail[node]][tag]
                else:
                    fail[child] = delta[fail[node]][tag] if node != 0 else 0
                    delta[node][tag] = child
                    queue.append(child)

        machine = Wfst(tagset.symbols, tagset.symbols)
        for _ in children:
            machine.add_state()
        for node in range(len(children)):
            machine.set_final(node, ONE)
            for tag in alphabet:
                target = delta[node][tag]
                label = tagset.label(tag)
                machine.add_arc(node, label, label, w_neg * matches[target], target)
        machine.set_start(delta[0][SB])
        return WfstService.trim(machine)

    @staticmethod
    def apply(constraints: CompiledConstraints, lattice: Wfst) -> Wfst:
        """Add the violation penalties to every path of a tag-output lattice"""
        return WfstService.compose(lattice, constraints.transducer)

    @staticmethod
    def violations(tags: Sequence[str], expanded: FrozenSet[Tuple[str, ...]]) -> int:
        """Occurrences of forbidden sequences in an SB-prefixed tag string"""
        padded = (SB,) + tuple(tags)
        count = 0
        for pattern in expanded:
            width = len(pattern)
            count += sum(1 for i in range(len(padded) - width + 1) if padded[i:i + width] == pattern)
        return count
