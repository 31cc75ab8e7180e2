"""Translations between learning frameworks sharing a representation class.

A reduction pair carries two functions.  ``f_mem`` answers a membership
query of the destination framework by asking source-framework membership
queries; ``f_eq`` turns a source-framework counterexample into a
destination-framework counterexample, again consulting only the source
membership oracle and the hypothesis.  :func:`compose` wires a pair in
front of an inner learner so the inner learner runs unchanged while the
oracles live in the source framework.

Three concrete pairs are provided:

* data relations    -> truth assignments (dependency discovery from data);
* Horn entailments  -> truth assignments (with a Horn extraction at the end);
* two-literal-clause entailments -> truth assignments.

For the last pair the counterexample translation enumerates assignments
instead of building the polynomial-size structure the general construction
would use; this is exact but may spend exponentially many queries, which
is acceptable at the universe sizes this package targets.  The enumerative
route is flagged in the pair's ``notes`` so downstream reporting can say
so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import (
    HornClause,
    HornFormula,
    Interpretation,
    MvdClause,
    MvdFormula,
    QuasiHorn2Clause,
    SplitClause,
    VariableUniverse,
    bit_indices,
    enum_interpretations,
    entails,
    model_bitset,
    satisfies,
)
from .errors import ConversionError, OracleContractError, UniverseMismatchError
from .learner import learn
from .relations import AttributeSchema, Relation, agreement_interp, mvd_holds

FRAMEWORK_KINDS = (
    "interpretation",
    "horn-clause",
    "mvd-clause",
    "quasi2-clause",
    "relation",
)


@dataclass(frozen=True)
class FrameworkDescriptor:
    """Example kind plus universe; fixes which satisfaction routine defines
    concept membership for the framework."""

    kind: str
    universe: VariableUniverse

    def __post_init__(self):
        if self.kind not in FRAMEWORK_KINDS:
            raise ValueError(f"unknown framework kind {self.kind!r}")

    def concept_contains(self, representation, example) -> bool:
        """Whether ``example`` lies in the concept named by ``representation``."""
        if self.kind == "interpretation":
            return satisfies(example, representation)
        if self.kind == "relation":
            return all(mvd_holds(example, c) for c in representation.clauses)
        return entails(representation, example)


@dataclass(frozen=True)
class ReductionPair:
    """The two translation functions plus the frameworks they connect.

    ``f_mem(example, mem_source) -> bool`` and
    ``f_eq(counterexample, hypothesis, mem_source) -> example`` may consult
    the target only through ``mem_source``; neither receives a target value.
    """

    source: FrameworkDescriptor
    destination: FrameworkDescriptor
    f_mem: Callable
    f_eq: Callable
    notes: tuple = field(default=())


def compose(reduction: ReductionPair, inner_learner):
    """Run ``inner_learner`` against source-framework oracles.

    Returns a learner with the same calling convention: destination
    membership queries are answered through ``f_mem``, and every source
    counterexample is translated through ``f_eq`` before the inner learner
    sees it.  A ``yes`` from the source equivalence oracle ends the run
    with the inner hypothesis.
    """

    def composed(universe, mem_source, eq_source, **kwargs):
        def inner_mem(example):
            return reduction.f_mem(example, mem_source)

        def inner_eq(hypothesis):
            counterexample = eq_source(hypothesis)
            if counterexample is None:
                return None
            return reduction.f_eq(counterexample, hypothesis, mem_source)

        return inner_learner(universe, inner_mem, inner_eq, **kwargs)

    return composed


# ---------------------------------------------------------------------------
# Data relations -> truth assignments


def interp_to_pair(interp: Interpretation, schema: AttributeSchema) -> Relation:
    """Two rows agreeing exactly on the true variables of ``interp``.

    Disagreeing columns take the fresh values "0"/"1"; any injective choice
    works.  For a proper dependency the pair fails the dependency exactly
    when the assignment violates the matching clause, and the all-true
    assignment collapses to a single-row relation.
    """
    if schema.attributes != interp.universe.names:
        raise UniverseMismatchError("schema does not match the assignment universe")
    top = tuple("0" for _ in range(schema.arity))
    bottom = tuple(
        "0" if interp.mask >> i & 1 else "1" for i in range(schema.arity)
    )
    return Relation(schema, (top, bottom))


def relation_ce_to_interp(
    relation: Relation,
    hypothesis: MvdFormula,
    mem_relation,
) -> Interpretation:
    """Extract an assignment counterexample from a relation counterexample.

    Scans row pairs in row order.  When the hypothesis fails in the
    relation (so the target must hold in it) the first pair on which the
    hypothesis fails but the target holds is taken; in the opposite case
    the first pair on which the hypothesis holds but the target fails.
    The agreement assignment of that pair disagrees with exactly one of
    target and hypothesis.  At most ``|r|**2`` membership queries are spent.
    """
    universe = hypothesis.universe
    if relation.schema.attributes != universe.names:
        raise UniverseMismatchError("relation schema does not match the hypothesis")
    if len(relation) < 2:
        raise OracleContractError(
            "a relation with fewer than two rows cannot be a counterexample"
        )
    hypothesis_holds = all(mvd_holds(relation, c) for c in hypothesis.clauses)
    rows = relation.rows
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            pair = Relation(relation.schema, (rows[i], rows[j]))
            pair_hypo = all(mvd_holds(pair, c) for c in hypothesis.clauses)
            if hypothesis_holds:
                # negative counterexample: target fails in the relation
                if pair_hypo and not mem_relation(pair):
                    return agreement_interp(rows[i], rows[j], universe)
            else:
                # positive counterexample: target holds in the relation
                if not pair_hypo and mem_relation(pair):
                    return agreement_interp(rows[i], rows[j], universe)
    raise OracleContractError(
        "no row pair separates target and hypothesis; the relation is not a "
        "genuine counterexample"
    )


def relation_reduction(schema: AttributeSchema) -> ReductionPair:
    universe = schema.to_universe()
    return ReductionPair(
        source=FrameworkDescriptor("relation", universe),
        destination=FrameworkDescriptor("interpretation", universe),
        f_mem=lambda interp, mem: mem(interp_to_pair(interp, schema)),
        f_eq=relation_ce_to_interp,
    )


def learn_mvd_from_relations(schema: AttributeSchema, mem_relation, eq_relation,
                             **session_kwargs) -> MvdFormula:
    """Learn a set of proper dependencies from relation oracles."""
    universe = schema.to_universe()
    composed = compose(relation_reduction(schema), learn)
    return composed(universe, mem_relation, eq_relation, **session_kwargs)


# ---------------------------------------------------------------------------
# Horn entailments -> truth assignments


def horn_f_mem(interp: Interpretation, mem_entail) -> bool:
    """Decide modelhood of an assignment with Horn-entailment queries.

    Asks ``true(I) -> z`` for every false variable z; the assignment is a
    model exactly when no such clause is entailed.  Costs at most n queries.
    """
    universe = interp.universe
    for z in bit_indices(interp.false_mask):
        if mem_entail(HornClause(universe, interp.mask, z)):
            return False
    return True


def _unit_closure(start: int, universe: VariableUniverse, derivable) -> int:
    """Grow ``start`` by single-variable consequences until a fixpoint.

    ``derivable(mask, v)`` answers whether the implication from the current
    set to v holds; variables are scanned ascending and the scan restarts
    after each addition, so at most n**2 probes run.
    """
    current = start
    changed = True
    while changed:
        changed = False
        for v in range(universe.n):
            if current >> v & 1:
                continue
            if derivable(current, v):
                current |= 1 << v
                changed = True
                break
    return current


def horn_f_eq(clause: HornClause, hypothesis, mem_entail) -> Interpretation:
    """Turn a Horn-clause counterexample into an assignment counterexample.

    When the hypothesis entails the clause (so the target does not), the
    antecedent is closed under target-entailed unit consequences, spending
    membership queries; the closure is a target model that breaks the
    clause and hence the hypothesis.  Otherwise the closure runs against
    the hypothesis locally and no queries are spent.  Unit propagation is
    complete only for Horn-shaped hypotheses, so if the local closure fails
    to be a hypothesis model the first hypothesis model realizing the
    broken clause is taken instead (still without queries; one exists
    exactly because the hypothesis does not entail the clause).
    """
    universe = clause.universe
    if entails(hypothesis, clause):
        closure = _unit_closure(
            clause.antecedent,
            universe,
            lambda mask, v: mem_entail(HornClause(universe, mask, v)),
        )
        return Interpretation(universe, closure)
    closure = _unit_closure(
        clause.antecedent,
        universe,
        lambda mask, v: entails(hypothesis, HornClause(universe, mask, v)),
    )
    candidate = Interpretation(universe, closure)
    if satisfies(candidate, hypothesis):
        return candidate
    need = clause.antecedent
    avoid = 0 if clause.consequent is None else 1 << clause.consequent
    for interp in enum_interpretations(universe):
        if interp.mask & need != need or interp.mask & avoid:
            continue
        if satisfies(interp, hypothesis):
            return interp
    raise OracleContractError(
        "no hypothesis model realizes the clause counterexample; the clause "
        "does not separate target and hypothesis"
    )


def horn_entailment_reduction(universe: VariableUniverse) -> ReductionPair:
    return ReductionPair(
        source=FrameworkDescriptor("horn-clause", universe),
        destination=FrameworkDescriptor("interpretation", universe),
        f_mem=horn_f_mem,
        f_eq=horn_f_eq,
    )


def mvdf_to_horn(formula: MvdFormula) -> HornFormula:
    """Extract a Horn formula equivalent to ``formula``.

    Candidate clauses take any antecedent occurring in the formula with any
    entailed single consequent, plus the purely negative clause when the
    all-true assignment is excluded.  The result is verified equivalent by
    enumeration; a formula outside the Horn-expressible range raises
    :class:`ConversionError` carrying the residual formula.
    """
    universe = formula.universe
    clauses = []
    for x in dict.fromkeys(c.x_mask for c in formula.clauses):
        for v in range(universe.n):
            if x >> v & 1:
                continue
            candidate = HornClause(universe, x, v)
            if entails(formula, candidate):
                clauses.append(candidate)
    if not model_bitset(formula) >> universe.full_mask & 1:
        clauses.append(HornClause(universe, universe.full_mask, None))
    horn = HornFormula(universe, clauses)
    if model_bitset(horn) != model_bitset(formula):
        raise ConversionError(
            "formula is not Horn-expressible under antecedent extraction",
            residual=formula,
        )
    return horn


def horn_envelope(formula) -> HornFormula:
    """Strongest Horn consequence of ``formula``.

    The result entails exactly the Horn clauses ``formula`` entails; its
    models are the closure of the formula's models under pairwise
    intersection.  Unlike :func:`mvdf_to_horn` this never fails, but the
    result is only equivalent to the input when the input was
    Horn-expressible to begin with.
    """
    universe = formula.universe
    models = model_bitset(formula)
    closed = {m for m in range(1 << universe.n) if models >> m & 1}
    frontier = sorted(closed)
    while frontier:
        fresh = set()
        base = sorted(closed)
        for a in frontier:
            for b in base:
                inter = a & b
                if inter not in closed and inter not in fresh:
                    fresh.add(inter)
        closed |= fresh
        frontier = sorted(fresh)
    clauses = []
    for m in range(1 << universe.n):
        if m in closed:
            continue
        if m == universe.full_mask:
            clauses.append(HornClause(universe, m, None))
            continue
        supersets = [s for s in closed if s & m == m]
        if supersets:
            hull = universe.full_mask
            for s in supersets:
                hull &= s
            extra = hull & ~m
        else:
            extra = universe.full_mask & ~m
        v = next(bit_indices(extra))
        clauses.append(HornClause(universe, m, v))
    result = HornFormula(universe, clauses)
    got = model_bitset(result)
    want = 0
    for m in closed:
        want |= 1 << m
    if got != want:
        raise AssertionError("Horn envelope construction produced the wrong model set")
    return result


def horn_i_via_mvdf(universe: VariableUniverse, mem_interp, eq_interp,
                    **session_kwargs) -> HornFormula:
    """Learn a Horn target from assignment oracles.

    The Horn target is handled by the implication learner unchanged, since
    assignment satisfaction is preserved by the two-clause encoding of each
    Horn clause; the learned formula is extracted back to Horn at the end.
    """
    learned = learn(universe, mem_interp, eq_interp, **session_kwargs)
    return mvdf_to_horn(learned)


def _horn_inner_for_entailments(universe, mem_interp, eq_interp, **session_kwargs):
    # Against entailment oracles the run ends as soon as target and
    # hypothesis entail the same Horn clauses, which does not force the
    # (possibly non-Horn) working formula to match the target's models.
    # Its Horn envelope is still exact there: two Horn formulas entailing
    # the same Horn clauses are equivalent.
    learned = learn(universe, mem_interp, eq_interp, **session_kwargs)
    try:
        return mvdf_to_horn(learned)
    except ConversionError:
        return horn_envelope(learned)


def learn_horn_from_entailments(universe: VariableUniverse, mem_entail, eq_entail,
                                **session_kwargs) -> HornFormula:
    """Learn a definite Horn formula from entailment oracles."""
    composed = compose(horn_entailment_reduction(universe), _horn_inner_for_entailments)
    return composed(universe, mem_entail, eq_entail, **session_kwargs)


# ---------------------------------------------------------------------------
# Two-literal-clause entailments -> truth assignments


def qh_f_mem(interp: Interpretation, mem_quasi) -> bool:
    """Decide modelhood of an assignment with two-literal-clause queries.

    For at least two false variables, asks ``true(I) -> w z`` for every
    unordered pair of distinct false variables; a single false variable
    needs one single-consequent query, and the all-true assignment needs
    the purely negative clause.  At most n**2 queries.
    """
    universe = interp.universe
    false_bits = list(bit_indices(interp.false_mask))
    if not false_bits:
        return not mem_quasi(QuasiHorn2Clause(universe, universe.full_mask, frozenset()))
    if len(false_bits) == 1:
        probe = QuasiHorn2Clause(universe, interp.mask, frozenset(false_bits))
        return not mem_quasi(probe)
    for a in range(len(false_bits)):
        for b in range(a + 1, len(false_bits)):
            probe = QuasiHorn2Clause(
                universe, interp.mask, frozenset((false_bits[a], false_bits[b]))
            )
            if mem_quasi(probe):
                return False
    return True


def qh_ce_to_mvd(clause: QuasiHorn2Clause, hypothesis, mem_quasi) -> MvdClause:
    """Grow a two-literal counterexample into a full-cover counterexample.

    Starting from left side {v} and right side {w}, every remaining
    variable joins the left side when the grown implication stays entailed
    (by the hypothesis, tested locally, when the hypothesis entails the
    clause; otherwise by the target, tested with two-literal queries via
    distribution) and the right side otherwise.  One of the two extensions
    is always entailed, so the result is a full-cover implication entailed
    by exactly one of target and hypothesis.
    """
    if len(clause.consequents) != 2:
        raise OracleContractError(
            "counterexample growing needs a clause with two distinct consequents"
        )
    universe = clause.universe
    v, w = sorted(clause.consequents)
    x = clause.antecedent
    grow_against_hypothesis = entails(hypothesis, clause)
    y, z = 1 << v, 1 << w
    for cand in bit_indices(universe.full_mask & ~(x | y | z)):
        if grow_against_hypothesis:
            extend_left = entails(
                hypothesis, SplitClause(universe, x, y | (1 << cand), z)
            )
        else:
            # target side: the pairs within the current sides are already
            # entailed, so only the new variable's pairs need queries
            extend_left = all(
                mem_quasi(QuasiHorn2Clause(universe, x, frozenset((cand, zb))))
                for zb in bit_indices(z)
            )
        if extend_left:
            y |= 1 << cand
        else:
            z |= 1 << cand
    return MvdClause(universe, x, y, z)


def qh_interp_ce_substitute(clause: QuasiHorn2Clause, hypothesis, mem_quasi) -> Interpretation:
    """Assignment counterexample matching a two-literal counterexample.

    Enumerates assignments that make the clause's antecedent true and all
    its consequents false (every such assignment breaks the clause).  When
    the hypothesis entails the clause the first one that is a target model
    is returned, spending queries through :func:`qh_f_mem`; otherwise the
    first hypothesis model, with no queries.  Existence is guaranteed while
    the clause really separates target and hypothesis.
    """
    universe = clause.universe
    need = clause.antecedent
    avoid = clause.consequent_mask
    target_must_satisfy = entails(hypothesis, clause)
    for interp in enum_interpretations(universe):
        if interp.mask & need != need or interp.mask & avoid:
            continue
        if target_must_satisfy:
            if qh_f_mem(interp, mem_quasi):
                return interp
        else:
            if satisfies(interp, hypothesis):
                return interp
    raise OracleContractError(
        "no assignment realizes the clause counterexample; the clause does "
        "not separate target and hypothesis"
    )


def quasi2_reduction(universe: VariableUniverse) -> ReductionPair:
    return ReductionPair(
        source=FrameworkDescriptor("quasi2-clause", universe),
        destination=FrameworkDescriptor("interpretation", universe),
        f_mem=qh_f_mem,
        f_eq=qh_interp_ce_substitute,
        notes=("counterexample translation enumerates assignments and may "
               "exceed the polynomial query budget",),
    )


def learn_mvdf_from_quasi2(universe: VariableUniverse, mem_quasi, eq_quasi,
                           **session_kwargs) -> MvdFormula:
    """Learn a full-cover implication formula from two-literal-clause oracles."""
    composed = compose(quasi2_reduction(universe), learn)
    return composed(universe, mem_quasi, eq_quasi, **session_kwargs)
