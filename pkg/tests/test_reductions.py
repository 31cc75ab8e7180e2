"""Framework translations: membership transforms, counterexample transforms,
the Horn extraction, and the composed learners."""

import random

import pytest

from mvdlearn import (
    AttributeSchema,
    ConversionError,
    HornClause,
    HornFormula,
    Interpretation,
    MvdFormula,
    OracleContractError,
    QuasiHorn2Clause,
    Relation,
    SplitClause,
    entails,
    equivalent,
    find_counterexample,
    horn_formula_to_mvd,
    interp_to_pair,
    learn,
    learn_horn_from_entailments,
    learn_mvd_from_relations,
    learn_mvdf_from_quasi2,
    mvd_holds,
    mvdf_to_horn,
    parse_clause,
    parse_formula,
    relation_ce_to_interp,
    satisfies,
)
from mvdlearn.oracles import (
    EntailmentTeacher,
    MvdfInterpretationTeacher,
    RelationTeacher,
    enumerate_quasi2_clauses,
)
from mvdlearn.reductions import (
    FrameworkDescriptor,
    ReductionPair,
    compose,
    horn_envelope,
    horn_f_eq,
    horn_f_mem,
    horn_i_via_mvdf,
    qh_ce_to_mvd,
    qh_f_mem,
    qh_interp_ce_substitute,
)

from conftest import (
    numbered_universe,
    random_definite_horn,
    random_proper_clause,
    random_target,
)


def entail_oracle(target):
    return lambda clause: entails(target, clause)


def relation_oracle(target):
    return lambda rel: all(mvd_holds(rel, c) for c in target.clauses)


# ---------------------------------------------------------------------------
# relation transforms


def test_interp_to_pair_structure():
    u = numbered_universe(5)
    schema = AttributeSchema(u.names)
    interp = Interpretation.from_bits(u, "01100")
    pair = interp_to_pair(interp, schema)
    assert len(pair) == 2
    t, t2 = pair.rows
    for i in range(5):
        assert (t[i] == t2[i]) == bool(interp.mask >> i & 1)

    all_true = Interpretation(u, u.full_mask)
    assert len(interp_to_pair(all_true, schema)) == 1


def test_agreement_round_trip():
    rng = random.Random(3)
    u = numbered_universe(5)
    schema = AttributeSchema(u.names)
    from mvdlearn import agreement_interp

    for _ in range(40):
        interp = Interpretation(u, rng.getrandbits(5))
        pair = interp_to_pair(interp, schema)
        rows = pair.rows
        if len(rows) == 1:
            assert interp.mask == u.full_mask
            continue
        assert agreement_interp(rows[0], rows[1], u) == interp


def test_relation_ce_round_trip():
    u = numbered_universe(4)
    schema = AttributeSchema(u.names)
    target = MvdFormula(u, [parse_clause("1 -> 2 | 3 4", u)])
    hypo = MvdFormula(u, [parse_clause("1 -> 3 | 2 4", u)])
    interp = find_counterexample(target, hypo)
    pair = interp_to_pair(interp, schema)
    got = relation_ce_to_interp(pair, hypo, relation_oracle(target))
    assert got == interp


def test_relation_ce_multi_row():
    u = numbered_universe(3)
    schema = AttributeSchema(u.names)
    target = MvdFormula(u, [parse_clause("1 -> 2 | 3", u)])
    hypo = MvdFormula(u, [parse_clause("2 -> 1 | 3", u)])
    # holds for the target, fails for the hypothesis
    rel = Relation(
        schema,
        [
            ("a", "b", "c"),
            ("a", "b", "c2"),
            ("d", "b", "e"),
        ],
    )
    assert all(mvd_holds(rel, c) for c in target.clauses)
    assert not all(mvd_holds(rel, c) for c in hypo.clauses)
    got = relation_ce_to_interp(rel, hypo, relation_oracle(target))
    assert satisfies(got, target) != satisfies(got, hypo)


def test_relation_ce_single_row_aborts():
    u = numbered_universe(3)
    schema = AttributeSchema(u.names)
    hypo = MvdFormula(u)
    single = Relation(schema, [("a", "b", "c")])
    with pytest.raises(OracleContractError, match="fewer than two rows"):
        relation_ce_to_interp(single, hypo, relation_oracle(hypo))


# ---------------------------------------------------------------------------
# Horn transforms


def test_horn_f_mem_examples():
    u = numbered_universe(3)
    target = parse_formula("vars: 1 2 3\n1 -> 2\n", "horn")
    mem = entail_oracle(target)
    assert horn_f_mem(Interpretation(u, u.full_mask), mem)  # nothing false
    assert not horn_f_mem(Interpretation.from_bits(u, "100"), mem)
    assert horn_f_mem(Interpretation.from_bits(u, "110"), mem)


def test_horn_f_mem_query_count():
    u = numbered_universe(6)
    target = random_definite_horn(u, random.Random(0))
    calls = []

    def counting(clause):
        calls.append(clause)
        return entails(target, clause)

    horn_f_mem(Interpretation.from_bits(u, "110000"), counting)
    assert len(calls) <= u.n


def test_horn_f_eq_examples():
    u = numbered_universe(2)
    c = HornClause(u, 0b01, 1)  # 1 -> 2

    # target entails c, hypothesis does not: local closure, no queries
    hypo_empty = MvdFormula(u)

    def no_queries(_):
        raise AssertionError("membership oracle must not be consulted")

    got = horn_f_eq(c, hypo_empty, no_queries)
    assert got.to_bits() == "10"
    assert satisfies(got, hypo_empty)

    # hypothesis entails c, target does not: closure through the oracle
    target_empty = HornFormula(u)
    hypo = horn_formula_to_mvd(HornFormula(u, [c]))
    got = horn_f_eq(c, hypo, entail_oracle(target_empty))
    assert got.to_bits() == "10"
    assert satisfies(got, target_empty) and not satisfies(got, hypo)

    # an antecedent covering everything closes immediately
    top = HornClause(u, u.full_mask, None)
    hypo_top = horn_formula_to_mvd(HornFormula(u, [top]))
    got = horn_f_eq(top, hypo_top, entail_oracle(target_empty))
    assert got.mask == u.full_mask


def test_horn_f_eq_random_validity():
    rng = random.Random(77)
    from mvdlearn.oracles import enumerate_horn_clauses

    checked = 0
    for _ in range(80):
        n = rng.randrange(2, 6)
        u = numbered_universe(n)
        target = random_definite_horn(u, rng)
        hypo = random_target(u, rng, max_clauses=3)
        separating = [
            c
            for c in enumerate_horn_clauses(u)
            if entails(target, c) != entails(hypo, c)
        ]
        if not separating:
            continue
        clause = rng.choice(separating)
        got = horn_f_eq(clause, hypo, entail_oracle(target))
        assert satisfies(got, target) != satisfies(got, hypo)
        checked += 1
    assert checked > 40


def test_mvdf_to_horn_reference_example():
    u = numbered_universe(6)
    f = MvdFormula(
        u,
        [
            parse_clause("1 2 3 5 6 -> 4 | -", u),
            parse_clause("1 3 5 -> 4 | 2 6", u),
        ],
    )
    horn = mvdf_to_horn(f)
    assert equivalent(horn, parse_formula("vars: 1 2 3 4 5 6\n1 3 5 -> 4\n", "horn"))

    empty = MvdFormula(u)
    assert len(mvdf_to_horn(empty).clauses) == 0


def test_mvdf_to_horn_round_trips_random_horn():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randrange(2, 7)
        u = numbered_universe(n)
        horn = random_definite_horn(u, rng)
        image = horn_formula_to_mvd(horn)
        back = mvdf_to_horn(image)
        assert equivalent(back, horn)


def test_mvdf_to_horn_rejects_non_horn():
    u = numbered_universe(5)
    f = MvdFormula(u, [parse_clause("1 2 3 -> 4 | 5", u)])
    with pytest.raises(ConversionError) as err:
        mvdf_to_horn(f)
    assert err.value.residual is f


def test_horn_envelope_properties():
    rng = random.Random(9)
    from mvdlearn.oracles import enumerate_horn_clauses

    for _ in range(40):
        n = rng.randrange(2, 6)
        u = numbered_universe(n)
        formula = random_target(u, rng, max_clauses=3)
        env = horn_envelope(formula)
        # entails exactly the Horn clauses the input entails
        for clause in enumerate_horn_clauses(u):
            assert entails(env, clause) == entails(formula, clause)
        # and is equivalent whenever the input already was Horn-shaped
        horn = random_definite_horn(u, rng)
        assert equivalent(horn_envelope(horn_formula_to_mvd(horn)), horn)


def test_horn_i_via_mvdf_single_clause_target():
    target = parse_formula("vars: 1 2 3 4 5 6\n1 3 5 -> 4\n", "horn")
    u = target.universe
    teacher = MvdfInterpretationTeacher(target)
    got = horn_i_via_mvdf(u, teacher.membership_answer, teacher.equivalence_answer)
    assert equivalent(got, target)


def test_horn_i_via_mvdf_random_targets():
    rng = random.Random(21)
    for _ in range(40):
        n = rng.randrange(2, 8)
        u = numbered_universe(n)
        target = random_definite_horn(u, rng)
        teacher = MvdfInterpretationTeacher(target)
        got = horn_i_via_mvdf(u, teacher.membership_answer, teacher.equivalence_answer)
        assert isinstance(got, HornFormula)
        assert equivalent(got, target)


def test_horn_i_via_mvdf_aborts_on_non_horn_target():
    target = parse_formula("vars: 1 2 3 4 5\n1 2 3 -> 4 | 5\n", "mvd")
    u = target.universe
    teacher = MvdfInterpretationTeacher(target)
    with pytest.raises(ConversionError):
        horn_i_via_mvdf(u, teacher.membership_answer, teacher.equivalence_answer)


def test_horn_entailment_chain_regression():
    # a target whose run ends with a non-Horn working formula entailing
    # exactly the right Horn clauses; the chain must still come back exact
    target = parse_formula("vars: 1 2 3 4 5 6 7\n2 3 4 6 -> 7\n", "horn")
    u = target.universe
    teacher = EntailmentTeacher(target, "horn")
    got = learn_horn_from_entailments(
        u, teacher.membership_answer, teacher.equivalence_answer
    )
    assert equivalent(got, target)


# ---------------------------------------------------------------------------
# two-literal-clause transforms


def test_qh_f_mem_examples(golden_target):
    u = golden_target.universe
    mem = entail_oracle(golden_target)
    assert not qh_f_mem(Interpretation.from_bits(u, "11100"), mem)
    assert qh_f_mem(Interpretation(u, u.full_mask), mem)
    assert not qh_f_mem(Interpretation.from_bits(u, "01111"), mem)  # single false


def test_qh_f_mem_agrees_with_satisfaction():
    rng = random.Random(13)
    for _ in range(150):
        n = rng.randrange(2, 7)
        u = numbered_universe(n)
        target = random_target(u, rng)
        interp = Interpretation(u, rng.getrandbits(n) & u.full_mask)
        assert qh_f_mem(interp, entail_oracle(target)) == satisfies(interp, target)


def test_qh_ce_to_mvd_reference_example():
    target = parse_formula("vars: 1 2 3 4 5 6\n1 -> 2 3 | 4 5 6\n", "mvd")
    u = target.universe
    hypo = MvdFormula(u)
    clause = QuasiHorn2Clause(u, 0b000001, frozenset((1, 3)))  # 1 -> 2 4
    assert entails(target, clause) and not entails(hypo, clause)
    got = qh_ce_to_mvd(clause, hypo, entail_oracle(target))
    assert entails(target, got) and not entails(hypo, got)


def test_qh_ce_to_mvd_no_free_variables():
    u = numbered_universe(3)
    target = MvdFormula(u, [parse_clause("1 -> 2 | 3", u)])
    clause = QuasiHorn2Clause(u, 0b001, frozenset((1, 2)))
    got = qh_ce_to_mvd(clause, MvdFormula(u), entail_oracle(target))
    assert (got.x_mask, got.y_mask, got.z_mask) == (0b001, 0b010, 0b100)


def test_qh_ce_to_mvd_target_side_keeps_split_entailed():
    # replay the growth decisions and check the invariant directly
    rng = random.Random(31)
    from mvdlearn.core import bit_indices

    replayed = 0
    for _ in range(60):
        n = rng.randrange(3, 7)
        u = numbered_universe(n)
        target = random_target(u, rng, max_clauses=3)
        hypo = random_target(u, rng, max_clauses=3)
        pool = [
            c
            for c in enumerate_quasi2_clauses(u)
            if len(c.consequents) == 2
            and entails(target, c)
            and not entails(hypo, c)
        ]
        if not pool:
            continue
        clause = rng.choice(pool)
        got = qh_ce_to_mvd(clause, hypo, entail_oracle(target))
        v, w = sorted(clause.consequents)
        y, z = 1 << v, 1 << w
        assert entails(target, SplitClause(u, clause.antecedent, y, z))
        for cand in bit_indices(u.full_mask & ~(clause.antecedent | y | z)):
            if entails(target, SplitClause(u, clause.antecedent, y | (1 << cand), z)):
                y |= 1 << cand
            else:
                z |= 1 << cand
            assert entails(target, SplitClause(u, clause.antecedent, y, z))
        assert (got.y_mask, got.z_mask) == (y, z)
        replayed += 1
    assert replayed > 20


def test_qh_interp_ce_substitute_reference(golden_target):
    u = golden_target.universe
    hypo = MvdFormula(u, [parse_clause("2 3 4 5 -> 1 | -", u)])
    clause = QuasiHorn2Clause(u, 0b00111, frozenset((3, 4)))  # 1 2 3 -> 4 5
    assert entails(golden_target, clause) and not entails(hypo, clause)
    got = qh_interp_ce_substitute(clause, hypo, entail_oracle(golden_target))
    assert got.to_bits() == "11100"
    assert satisfies(got, hypo) and not satisfies(got, golden_target)


def test_qh_interp_ce_substitute_unique_candidate():
    # antecedent and consequents together cover everything, so exactly one
    # assignment realizes the clause
    u = numbered_universe(3)
    target = MvdFormula(u, [parse_clause("1 -> 2 | 3", u)])
    hypo = MvdFormula(u)
    clause = QuasiHorn2Clause(u, 0b001, frozenset((1, 2)))
    got = qh_interp_ce_substitute(clause, hypo, entail_oracle(target))
    assert got.to_bits() == "100"


def test_qh_interp_ce_substitute_random_validity():
    rng = random.Random(99)
    checked = 0
    for _ in range(80):
        n = rng.randrange(2, 7)
        u = numbered_universe(n)
        target = random_target(u, rng, max_clauses=3)
        hypo = random_target(u, rng, max_clauses=3)
        pool = [
            c
            for c in enumerate_quasi2_clauses(u)
            if entails(target, c) != entails(hypo, c)
        ]
        if not pool:
            continue
        clause = rng.choice(pool)
        got = qh_interp_ce_substitute(clause, hypo, entail_oracle(target))
        assert satisfies(got, target) != satisfies(got, hypo)
        checked += 1
    assert checked > 40


# ---------------------------------------------------------------------------
# composition


def test_membership_transforms_agree_with_destination_membership():
    # first translation-pair condition: the transformed membership answer
    # must equal plain assignment membership, for all three source kinds
    rng = random.Random(424)
    for _ in range(60):
        n = rng.randrange(2, 6)
        u = numbered_universe(n)
        interp = Interpretation(u, rng.getrandbits(n) & u.full_mask)

        horn_target = random_definite_horn(u, rng)
        assert horn_f_mem(interp, entail_oracle(horn_target)) == satisfies(
            interp, horn_target
        )

        quasi_target = random_target(u, rng, max_clauses=3)
        assert qh_f_mem(interp, entail_oracle(quasi_target)) == satisfies(
            interp, quasi_target
        )

        schema = AttributeSchema(u.names)
        proper_target = MvdFormula(u, [random_proper_clause(u, rng) for _ in range(2)])
        answer = relation_oracle(proper_target)(interp_to_pair(interp, schema))
        assert answer == satisfies(interp, proper_target)


def test_compose_identity_pair_matches_plain_learner(golden_target):
    u = golden_target.universe
    identity = ReductionPair(
        source=FrameworkDescriptor("interpretation", u),
        destination=FrameworkDescriptor("interpretation", u),
        f_mem=lambda example, mem: mem(example),
        f_eq=lambda example, hypothesis, mem: example,
    )
    teacher_a = MvdfInterpretationTeacher(golden_target)
    teacher_b = MvdfInterpretationTeacher(golden_target)
    direct = learn(u, teacher_a.membership_answer, teacher_a.equivalence_answer)
    composed = compose(identity, learn)(
        u, teacher_b.membership_answer, teacher_b.equivalence_answer
    )
    assert direct == composed


def test_framework_descriptor_membership():
    u = numbered_universe(3)
    f = MvdFormula(u, [parse_clause("1 -> 2 | 3", u)])
    interp_fw = FrameworkDescriptor("interpretation", u)
    assert interp_fw.concept_contains(f, Interpretation(u, 0))
    quasi_fw = FrameworkDescriptor("quasi2-clause", u)
    assert quasi_fw.concept_contains(f, QuasiHorn2Clause(u, 0b001, frozenset((1, 2))))
    rel_fw = FrameworkDescriptor("relation", u)
    schema = AttributeSchema(u.names)
    assert rel_fw.concept_contains(f, Relation(schema, [("a", "b", "c")]))
    with pytest.raises(ValueError):
        FrameworkDescriptor("unknown", u)


# ---------------------------------------------------------------------------
# composed learners (small smoke suites; the big ones are acceptance)


def test_learn_mvd_from_relations_smoke():
    rng = random.Random(55)
    for trial in range(25):
        n = rng.randrange(3, 7)
        u = numbered_universe(n)
        schema = AttributeSchema(u.names)
        target = MvdFormula(u, [random_proper_clause(u, rng) for _ in range(2)])
        teacher = RelationTeacher(
            target, schema, "random" if trial % 2 else "exhaustive", seed=trial
        )
        got = learn_mvd_from_relations(
            schema, teacher.membership_answer, teacher.equivalence_answer
        )
        assert find_counterexample(got, target) is None


def test_learn_horn_from_entailments_smoke():
    rng = random.Random(66)
    for trial in range(25):
        n = rng.randrange(2, 8)
        u = numbered_universe(n)
        target = random_definite_horn(u, rng)
        teacher = EntailmentTeacher(
            target, "horn", "random" if trial % 2 else "exhaustive", seed=trial
        )
        got = learn_horn_from_entailments(
            u, teacher.membership_answer, teacher.equivalence_answer
        )
        assert equivalent(got, target)
        assert isinstance(got, HornFormula)


def test_learn_mvdf_from_quasi2_smoke():
    rng = random.Random(88)
    for trial in range(20):
        n = rng.randrange(3, 6)
        u = numbered_universe(n)
        target = random_target(u, rng, max_clauses=3)
        teacher = EntailmentTeacher(
            target, "quasi2", "random" if trial % 2 else "exhaustive", seed=trial
        )
        got = learn_mvdf_from_quasi2(
            u, teacher.membership_answer, teacher.equivalence_answer
        )
        assert find_counterexample(got, target) is None


def test_empty_targets_learn_to_empty():
    u = numbered_universe(4)
    schema = AttributeSchema(u.names)
    empty_mvdf = MvdFormula(u)
    teacher = RelationTeacher(empty_mvdf, schema)
    got = learn_mvd_from_relations(
        schema, teacher.membership_answer, teacher.equivalence_answer
    )
    assert len(got.clauses) == 0

    empty_horn = HornFormula(u)
    teacher = EntailmentTeacher(empty_horn, "horn")
    got = learn_horn_from_entailments(
        u, teacher.membership_answer, teacher.equivalence_answer
    )
    assert len(got.clauses) == 0

    teacher = EntailmentTeacher(empty_mvdf, "quasi2")
    got = learn_mvdf_from_quasi2(
        u, teacher.membership_answer, teacher.equivalence_answer
    )
    assert len(got.clauses) == 0
