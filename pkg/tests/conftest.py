"""Shared fixtures and random-instance generators for the test suite."""

import random

import pytest

from mvdlearn import (
    HornClause,
    HornFormula,
    Interpretation,
    MvdClause,
    MvdFormula,
    VariableUniverse,
    false_clause,
    parse_formula,
    satisfies,
    violates,
)
from mvdlearn.core import enum_masks, popcount

# Target and counterexample script of the worked golden run; the learner
# must reproduce its intermediate states exactly.
GOLDEN_TARGET_TEXT = """\
vars: 1 2 3 4 5
2 3 4 5 -> 1 | -
1 2 3 -> 4 | 5
2 3 5 -> 1 | 4
2 -> 3 | 1 4 5
"""

GOLDEN_SCRIPT_BITS = ("11100", "01101", "01010", "11100")


@pytest.fixture
def golden_target() -> MvdFormula:
    return parse_formula(GOLDEN_TARGET_TEXT, "mvd")


@pytest.fixture
def golden_script(golden_target):
    u = golden_target.universe
    return [Interpretation.from_bits(u, b) for b in GOLDEN_SCRIPT_BITS]


def numbered_universe(n: int) -> VariableUniverse:
    return VariableUniverse([str(i + 1) for i in range(n)])


def random_proper_clause(universe: VariableUniverse, rng: random.Random) -> MvdClause:
    n = universe.n
    while True:
        x = y = z = 0
        for i in range(n):
            r = rng.randrange(3)
            if r == 0:
                x |= 1 << i
            elif r == 1:
                y |= 1 << i
            else:
                z |= 1 << i
        if y and z:
            return MvdClause(universe, x, y, z)


def random_clause(universe: VariableUniverse, rng: random.Random,
                  allow_degenerate: bool = True) -> MvdClause:
    roll = rng.random()
    if allow_degenerate and roll < 0.12:
        x = rng.getrandbits(universe.n) & universe.full_mask
        if x == universe.full_mask:
            return false_clause(universe)
        return MvdClause(universe, x, universe.full_mask ^ x, 0)
    if allow_degenerate and roll < 0.16:
        return false_clause(universe)
    return random_proper_clause(universe, rng)


def random_target(universe: VariableUniverse, rng: random.Random,
                  max_clauses: int = 6, allow_degenerate: bool = True) -> MvdFormula:
    count = rng.randrange(1, max_clauses + 1)
    return MvdFormula(
        universe, [random_clause(universe, rng, allow_degenerate) for _ in range(count)]
    )


def random_definite_horn(universe: VariableUniverse, rng: random.Random,
                         max_clauses: int = 4) -> HornFormula:
    clauses = []
    for _ in range(rng.randrange(1, max_clauses + 1)):
        x = rng.getrandbits(universe.n) & universe.full_mask
        outside = [v for v in range(universe.n) if not x >> v & 1]
        if outside:
            clauses.append(HornClause(universe, x, rng.choice(outside)))
    return HornFormula(universe, clauses)


def model_masks(formula) -> list:
    """All model masks of a formula, via per-assignment satisfaction."""
    u = formula.universe
    return [
        m for m in enum_masks(u.n) if satisfies(Interpretation(u, m), formula)
    ]


def random_negative_example(target: MvdFormula, rng: random.Random):
    """An assignment with at least two false variables that breaks the target,
    or None when none exists."""
    u = target.universe
    pool = [
        m
        for m in range(1 << u.n)
        if popcount(u.full_mask ^ m) >= 2
        and not satisfies(Interpretation(u, m), target)
    ]
    if not pool:
        return None
    return Interpretation(u, rng.choice(pool))


def random_positive_examples(target: MvdFormula, rng: random.Random, count: int):
    models = model_masks(target)
    if not models:
        return []
    u = target.universe
    return [Interpretation(u, rng.choice(models)) for _ in range(count)]


def violates_any(interp, clauses) -> bool:
    return any(violates(interp, c) for c in clauses)
