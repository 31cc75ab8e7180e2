"""Simulated teachers, query accounting and counterexample scripts.

A teacher wraps a ground-truth formula and answers membership and
equivalence queries for one example kind: truth assignments, Horn-clause
entailments, two-literal-clause entailments, full-cover-implication
entailments, or data relations.  Three counterexample strategies are
supported:

* ``exhaustive``   - the first element of the symmetric difference in the
  canonical enumeration order, so runs are reproducible bit for bit;
* ``random``       - a uniform sample from the symmetric difference, driven
  by a caller-supplied seed;
* ``scripted``     - entries replayed from a list, each validated against
  the symmetric difference before release.

Teachers carry a ``stats`` dict counting the queries asked of them.  The
learner-side counters live in :func:`stats_snapshot`, which freezes a
learning session's bookkeeping into a :class:`QueryStats` value.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import (
    DEFAULT_ENUM_CAP,
    HornClause,
    Interpretation,
    MvdClause,
    MvdFormula,
    QuasiHorn2Clause,
    VariableUniverse,
    bit_indices,
    enum_masks,
    entails,
    format_clause,
    model_bitset,
    parse_clause,
    popcount,
)
from .errors import OracleContractError, ParseError, UniverseMismatchError
from .reductions import interp_to_pair
from .relations import AttributeSchema, Relation, mvd_holds, read_csv

STRATEGIES = ("exhaustive", "random", "scripted")


@dataclass(frozen=True)
class QueryStats:
    """Frozen snapshot of a learning session's counters."""

    membership_queries: int
    equivalence_queries: int
    iterations: int
    positive_events: int
    append_events: int
    replace_events: int
    removals: int
    max_negatives: int
    replacements_per_slot: tuple
    potential: Optional[int]


def stats_snapshot(session) -> QueryStats:
    """Immutable copy of a :class:`~mvdlearn.learner.LearnerSession`'s counters."""
    return QueryStats(
        membership_queries=session.membership_queries,
        equivalence_queries=session.equivalence_queries,
        iterations=session.iteration,
        positive_events=session.event_counts["positive"],
        append_events=session.event_counts["append"],
        replace_events=session.event_counts["replace"],
        removals=session.removal_count,
        max_negatives=session.max_negatives,
        replacements_per_slot=tuple(session.replacements),
        potential=session.potential(),
    )


# ---------------------------------------------------------------------------
# Example-space enumerations (fixed orders, documented here once)
#
# Antecedents run in the canonical mask order (ascending size, then
# lexicographic on index tuples).  Within one antecedent, Horn clauses list
# consequents ascending and the purely negative clause appears for X = V;
# two-literal clauses list the negative clause first, then single
# consequents ascending, then pairs in lexicographic order; full-cover
# implications list the empty-right-side clause first and then the proper
# splits by ascending left side.


def enumerate_horn_clauses(universe: VariableUniverse) -> Iterator[HornClause]:
    for x in enum_masks(universe.n):
        if x == universe.full_mask:
            yield HornClause(universe, x, None)
            continue
        for v in range(universe.n):
            if not x >> v & 1:
                yield HornClause(universe, x, v)


def enumerate_quasi2_clauses(universe: VariableUniverse) -> Iterator[QuasiHorn2Clause]:
    for x in enum_masks(universe.n):
        yield QuasiHorn2Clause(universe, x, frozenset())
        outside = [v for v in range(universe.n) if not x >> v & 1]
        for v in outside:
            yield QuasiHorn2Clause(universe, x, frozenset((v,)))
        for v, w in itertools.combinations(outside, 2):
            yield QuasiHorn2Clause(universe, x, frozenset((v, w)))


def enumerate_mvd_clauses(universe: VariableUniverse) -> Iterator[MvdClause]:
    for x in enum_masks(universe.n):
        rest = universe.full_mask ^ x
        if rest == 0:
            yield MvdClause(universe, x, 0, 0)
            continue
        yield MvdClause(universe, x, rest, 0)
        rest_bits = list(bit_indices(rest))
        for size in range(1, len(rest_bits)):
            for combo in itertools.combinations(rest_bits, size):
                y = 0
                for v in combo:
                    y |= 1 << v
                yield MvdClause(universe, x, y, rest ^ y)


# ---------------------------------------------------------------------------
# Teachers


class _TeacherBase:
    def __init__(self, strategy: str, seed: int, script):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        if strategy == "scripted":
            if script is None:
                raise ValueError("scripted strategy needs a script")
            self._script = list(script)
        elif script is not None:
            raise ValueError("a script only makes sense with the scripted strategy")
        else:
            self._script = None
        self.strategy = strategy
        self._rng = random.Random(seed)
        self._cursor = 0
        self.stats = {"membership_queries": 0, "equivalence_queries": 0}

    def _next_scripted(self):
        if self._cursor >= len(self._script):
            return None
        entry = self._script[self._cursor]
        self._cursor += 1
        return entry


class MvdfInterpretationTeacher(_TeacherBase):
    """Teacher for learning from truth assignments.

    The target may be any formula with enumerable models (full-cover
    implications or Horn).  Counterexamples are assignments from the
    symmetric difference of the model sets.
    """

    def __init__(self, target, strategy="exhaustive", seed=0, script=None,
                 cap=DEFAULT_ENUM_CAP):
        super().__init__(strategy, seed, script)
        self.target = target
        self.universe = target.universe
        self.cap = cap
        self._target_models = model_bitset(target, cap)

    def membership_answer(self, example: Interpretation) -> bool:
        if example.universe != self.universe:
            raise UniverseMismatchError("membership query over the wrong universe")
        self.stats["membership_queries"] += 1
        return bool(self._target_models >> example.mask & 1)

    def equivalence_answer(self, hypothesis) -> Optional[Interpretation]:
        self.stats["equivalence_queries"] += 1
        diff = self._target_models ^ model_bitset(hypothesis, self.cap)
        if self.strategy == "scripted":
            entry = self._next_scripted()
            if entry is None:
                if diff == 0:
                    return None
                raise OracleContractError(
                    "script exhausted while the hypothesis still differs from the target"
                )
            if not diff >> entry.mask & 1:
                raise OracleContractError(
                    f"scripted entry {self._cursor} ({entry.to_bits()}) is not a "
                    "counterexample for the current hypothesis"
                )
            return entry
        if diff == 0:
            return None
        if self.strategy == "exhaustive":
            for mask in enum_masks(self.universe.n):
                if diff >> mask & 1:
                    return Interpretation(self.universe, mask)
            raise AssertionError("unreachable")
        pick = self._rng.randrange(popcount(diff))
        for mask in enum_masks(self.universe.n):
            if diff >> mask & 1:
                if pick == 0:
                    return Interpretation(self.universe, mask)
                pick -= 1
        raise AssertionError("unreachable")


class EntailmentTeacher(_TeacherBase):
    """Teacher whose examples are clauses entailed (or not) by the target.

    ``kind`` picks the clause space: ``'horn'``, ``'quasi2'`` or ``'mvd'``.
    Equivalence compares the sets of entailed clauses; a counterexample is
    a clause entailed by exactly one of target and hypothesis.
    """

    _SPACES = {
        "horn": enumerate_horn_clauses,
        "quasi2": enumerate_quasi2_clauses,
        "mvd": enumerate_mvd_clauses,
    }

    def __init__(self, target, kind, strategy="exhaustive", seed=0, script=None,
                 cap=DEFAULT_ENUM_CAP):
        super().__init__(strategy, seed, script)
        if kind not in self._SPACES:
            raise ValueError(f"unknown entailment kind {kind!r}")
        self.target = target
        self.kind = kind
        self.universe = target.universe
        self.cap = cap

    def _space(self):
        return self._SPACES[self.kind](self.universe)

    def membership_answer(self, example) -> bool:
        if example.universe != self.universe:
            raise UniverseMismatchError("membership query over the wrong universe")
        self.stats["membership_queries"] += 1
        return entails(self.target, example, self.cap)

    def equivalence_answer(self, hypothesis):
        self.stats["equivalence_queries"] += 1
        if self.strategy == "scripted":
            entry = self._next_scripted()
            if entry is None:
                if self._first_difference(hypothesis) is None:
                    return None
                raise OracleContractError(
                    "script exhausted while the hypothesis still differs from the target"
                )
            if entails(self.target, entry, self.cap) == entails(hypothesis, entry, self.cap):
                raise OracleContractError(
                    f"scripted entry {self._cursor} ({format_clause(entry)}) is not a "
                    "counterexample for the current hypothesis"
                )
            return entry
        if self.strategy == "exhaustive":
            return self._first_difference(hypothesis)
        differing = [
            clause
            for clause in self._space()
            if entails(self.target, clause, self.cap) != entails(hypothesis, clause, self.cap)
        ]
        if not differing:
            return None
        return self._rng.choice(differing)

    def _first_difference(self, hypothesis):
        for clause in self._space():
            if entails(self.target, clause, self.cap) != entails(hypothesis, clause, self.cap):
                return clause
        return None


class RelationTeacher(_TeacherBase):
    """Teacher for learning dependencies from data relations.

    The target is a set of proper dependencies (both sides non-empty) over
    the schema.  Equivalence of dependency sets coincides with model-set
    equality of the corresponding formulas, so the decision runs at the
    assignment level; counterexample relations are validated directly with
    the holds-in-relation check.
    """

    def __init__(self, target: MvdFormula, schema: AttributeSchema,
                 strategy="exhaustive", seed=0, script=None, cap=DEFAULT_ENUM_CAP,
                 random_tries=20):
        super().__init__(strategy, seed, script)
        if schema.attributes != target.universe.names:
            raise UniverseMismatchError("schema does not match the target universe")
        for clause in target.clauses:
            if not clause.is_proper:
                raise ValueError("relation teachers require proper dependencies")
        self.target = target
        self.schema = schema
        self.universe = target.universe
        self.cap = cap
        self.random_tries = random_tries
        self._target_models = model_bitset(target, cap)

    def holds(self, relation: Relation, formula) -> bool:
        return all(mvd_holds(relation, clause) for clause in formula.clauses)

    def membership_answer(self, example: Relation) -> bool:
        if example.schema != self.schema:
            raise UniverseMismatchError("membership query over the wrong schema")
        self.stats["membership_queries"] += 1
        return self.holds(example, self.target)

    def equivalence_answer(self, hypothesis) -> Optional[Relation]:
        self.stats["equivalence_queries"] += 1
        diff = self._target_models ^ model_bitset(hypothesis, self.cap)
        if self.strategy == "scripted":
            entry = self._next_scripted()
            if entry is None:
                if diff == 0:
                    return None
                raise OracleContractError(
                    "script exhausted while the hypothesis still differs from the target"
                )
            if self.holds(entry, self.target) == self.holds(entry, hypothesis):
                raise OracleContractError(
                    f"scripted relation {self._cursor} is not a counterexample "
                    "for the current hypothesis"
                )
            return entry
        if diff == 0:
            return None
        if self.strategy == "random":
            found = self._random_relation(hypothesis)
            if found is not None:
                return found
            witness = self._pick_random_interp(diff)
        else:
            witness = None
            for mask in enum_masks(self.universe.n):
                if diff >> mask & 1:
                    witness = Interpretation(self.universe, mask)
                    break
        return interp_to_pair(witness, self.schema)

    def _pick_random_interp(self, diff: int) -> Interpretation:
        pick = self._rng.randrange(popcount(diff))
        for mask in enum_masks(self.universe.n):
            if diff >> mask & 1:
                if pick == 0:
                    return Interpretation(self.universe, mask)
                pick -= 1
        raise AssertionError("unreachable")

    def _random_relation(self, hypothesis) -> Optional[Relation]:
        # look for a multi-row counterexample so the pair search gets exercised
        for _ in range(self.random_tries):
            rows = [
                tuple(str(self._rng.randrange(2)) for _ in range(self.schema.arity))
                for _ in range(self._rng.randrange(2, 5))
            ]
            candidate = Relation(self.schema, rows)
            if len(candidate) < 2:
                continue
            if self.holds(candidate, self.target) != self.holds(candidate, hypothesis):
                return candidate
        return None


# ---------------------------------------------------------------------------
# Script files
#
# Interpretation scripts hold one bitstring per line; clause scripts hold
# one clause per line in the formula grammar; relation scripts hold CSV
# blocks separated by lines containing only `---`.  `#` comments and blank
# lines are ignored everywhere except inside CSV blocks.


def parse_interpretation_script(text: str, universe: VariableUniverse) -> list:
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            entries.append(Interpretation.from_bits(universe, body))
        except ParseError as exc:
            raise ParseError(str(exc), line_no) from None
    return entries


def parse_clause_script(text: str, universe: VariableUniverse, kind: str) -> list:
    entries = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            entries.append(parse_clause(body, universe, kind))
        except ParseError as exc:
            raise ParseError(str(exc), line_no) from None
    return entries


def parse_relation_script(text: str) -> list:
    blocks: list[list[str]] = [[]]
    for raw in text.splitlines():
        if raw.strip() == "---":
            blocks.append([])
            continue
        blocks[-1].append(raw)
    relations = []
    for block in blocks:
        body = "\n".join(block).strip()
        if body:
            relations.append(read_csv(body))
    return relations


def make_teacher(framework_kind: str, target, *, schema=None, strategy="exhaustive",
                 seed=0, script=None, cap=DEFAULT_ENUM_CAP):
    """Construct the teacher matching a framework kind tag."""
    if framework_kind == "interpretation":
        return MvdfInterpretationTeacher(target, strategy, seed, script, cap)
    if framework_kind in ("horn-clause", "quasi2-clause", "mvd-clause"):
        kind = {"horn-clause": "horn", "quasi2-clause": "quasi2", "mvd-clause": "mvd"}[
            framework_kind
        ]
        return EntailmentTeacher(target, kind, strategy, seed, script, cap)
    if framework_kind == "relation":
        if schema is None:
            schema = AttributeSchema(target.universe.names)
        return RelationTeacher(target, schema, strategy, seed, script, cap)
    raise ValueError(f"unknown framework kind {framework_kind!r}")
