"""Core propositional machinery for dependency-style implication formulas.

A *variable universe* fixes an ordered set of variable names.  An
*interpretation* is a truth assignment over the universe, stored as the
bitmask of true variables.  The central clause kind is the oriented
implication ``X -> Y | Z`` whose three sides partition the universe; its
violation semantics has three cases:

  (a) Y and Z both non-empty: violated when the antecedent is true and some
      variable of Y and some variable of Z are both false;
  (b) exactly one of Y, Z empty: violated when the antecedent is true and
      exactly one variable is false;
  (c) Y and Z both empty (the clause ``* -> F``): violated only by the
      all-true assignment.

Plain Horn clauses, clauses with at most two positive literals, and
implications whose sides need not cover the universe (``SplitClause``,
read propositionally) are supported as well, since the oracles and the
problem transformations in :mod:`mvdlearn.reductions` exchange all four
kinds.

Entailment and equivalence between formulas are decided by enumerating all
``2**n`` assignments; every assignment-set is held as one big integer whose
bit ``m`` says whether mask ``m`` is a model.  This keeps the checks exact
and fast at desk scale, and the enumeration cap guards against accidental
blow-ups.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import EnumerationCapError, ParseError, UniverseMismatchError

#: Largest universe the enumeration-backed checks accept by default.
DEFAULT_ENUM_CAP = 24

#: Tokens with a fixed meaning in the text format; variable names must avoid them.
_RESERVED_TOKENS = {"-", "*", "F", "|", "->", "vars:"}


class VariableUniverse:
    """An ordered set of distinct variable names.

    The position of a name in ``names`` is its bit index in every mask-based
    value built over the universe; the mapping is fixed for the lifetime of
    the instance.  Instances compare equal when their name sequences match.
    """

    __slots__ = ("names", "_index", "_var_patterns", "_violator_cache")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise ValueError("universe needs at least one variable")
        seen = set()
        for name in names:
            if not name or any(ch.isspace() for ch in name) or name.startswith("#"):
                raise ValueError(f"bad variable name: {name!r}")
            if name in _RESERVED_TOKENS:
                raise ValueError(f"variable name {name!r} is a reserved token")
            if name in seen:
                raise ValueError(f"duplicate variable name: {name!r}")
            seen.add(name)
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}
        self._var_patterns = None
        self._violator_cache = {}

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable: {name!r}") from None

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def names_of(self, mask: int) -> tuple[str, ...]:
        return tuple(self.names[i] for i in bit_indices(mask))

    def __eq__(self, other):
        return isinstance(other, VariableUniverse) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"VariableUniverse({list(self.names)!r})"

    # -- model-set plumbing -------------------------------------------------

    def var_pattern(self, bit: int) -> int:
        """Bitset over all 2**n masks marking those where variable ``bit`` is true."""
        if self._var_patterns is None:
            self._var_patterns = [None] * self.n
        pat = self._var_patterns[bit]
        if pat is None:
            block = ((1 << (1 << bit)) - 1) << (1 << bit)
            width = 1 << self.n
            pat = block
            shift = 1 << (bit + 1)
            while shift < width:
                pat |= pat << shift
                shift <<= 1
            self._var_patterns[bit] = pat
        return pat

    def superset_pattern(self, mask: int) -> int:
        """Bitset marking every assignment whose true-set contains ``mask``."""
        pat = (1 << (1 << self.n)) - 1
        for bit in bit_indices(mask):
            pat &= self.var_pattern(bit)
        return pat


def bit_indices(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _require_same_universe(*items) -> VariableUniverse:
    universe = items[0].universe
    for item in items[1:]:
        if item.universe != universe:
            raise UniverseMismatchError(
                f"values over different universes: {universe!r} vs {item.universe!r}"
            )
    return universe


def require_enumerable(universe: VariableUniverse, cap: int = DEFAULT_ENUM_CAP) -> None:
    if universe.n > cap:
        raise EnumerationCapError(
            f"universe has {universe.n} variables, enumeration cap is {cap}"
        )


# ---------------------------------------------------------------------------
# Interpretations


@dataclass(frozen=True)
class Interpretation:
    """A truth assignment, identified with the bitmask of its true variables."""

    universe: VariableUniverse
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask <= self.universe.full_mask:
            raise ValueError(f"mask {self.mask:#x} outside the universe")

    @property
    def false_mask(self) -> int:
        return self.universe.full_mask ^ self.mask

    def true_names(self) -> tuple[str, ...]:
        return self.universe.names_of(self.mask)

    def to_bits(self) -> str:
        """Serialize as a 0/1 string in variable-declaration order."""
        return "".join("1" if self.mask >> i & 1 else "0" for i in range(self.universe.n))

    @classmethod
    def from_bits(cls, universe: VariableUniverse, bits: str) -> "Interpretation":
        if len(bits) != universe.n or any(ch not in "01" for ch in bits):
            raise ParseError(
                f"interpretation {bits!r} is not a {universe.n}-character 0/1 string"
            )
        mask = 0
        for i, ch in enumerate(bits):
            if ch == "1":
                mask |= 1 << i
        return cls(universe, mask)

    def __repr__(self):
        return f"Interpretation({self.to_bits()})"


def intersect(a: Interpretation, b: Interpretation) -> Interpretation:
    """Componentwise intersection of true-sets."""
    _require_same_universe(a, b)
    return Interpretation(a.universe, a.mask & b.mask)


def enum_interpretations(universe: VariableUniverse) -> Iterator[Interpretation]:
    """All interpretations in the canonical order: ascending size of the
    true-set, ties broken lexicographically on the index tuple."""
    for mask in enum_masks(universe.n):
        yield Interpretation(universe, mask)


def enum_masks(n: int) -> Iterator[int]:
    for size in range(n + 1):
        for combo in itertools.combinations(range(n), size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            yield mask


# ---------------------------------------------------------------------------
# Clause kinds


@dataclass(frozen=True)
class MvdClause:
    """Oriented implication ``X -> Y | Z`` with X, Y, Z partitioning V.

    Orientation matters: ``X -> Y | Z`` and ``X -> Z | Y`` are distinct
    values when both sides are non-empty.  A clause with one empty side is
    stored with the non-empty side on the left (the two spellings have
    identical semantics).  ``Y = Z = empty`` is the always-covered clause
    violated only by the all-true assignment and requires ``X = V``.
    """

    universe: VariableUniverse
    x_mask: int
    y_mask: int
    z_mask: int

    def __post_init__(self):
        full = self.universe.full_mask
        x, y, z = self.x_mask, self.y_mask, self.z_mask
        if x & y or x & z or y & z:
            raise ValueError("clause sides must be pairwise disjoint")
        if (x | y | z) != full:
            raise ValueError("clause sides must cover the universe")
        if y == 0 and z == 0 and x != full:
            raise ValueError("a clause with both sides empty must have X = V")
        if y == 0 and z != 0:
            object.__setattr__(self, "y_mask", z)
            object.__setattr__(self, "z_mask", 0)

    @property
    def is_proper(self) -> bool:
        return self.y_mask != 0 and self.z_mask != 0

    @property
    def is_false_clause(self) -> bool:
        return self.y_mask == 0 and self.z_mask == 0

    def orientation_key(self) -> tuple[int, int, int]:
        """Key identifying the clause up to swapping Y and Z."""
        lo, hi = sorted((self.y_mask, self.z_mask))
        return (self.x_mask, lo, hi)

    def __repr__(self):
        return f"MvdClause({format_clause(self)!r})"


def false_clause(universe: VariableUniverse) -> MvdClause:
    """The clause ``* -> F`` violated only by the all-true assignment."""
    return MvdClause(universe, universe.full_mask, 0, 0)


@dataclass(frozen=True)
class HornClause:
    """Definite clause ``X -> v``, or ``* -> F`` (consequent None, X = V)."""

    universe: VariableUniverse
    antecedent: int
    consequent: Union[int, None]

    def __post_init__(self):
        full = self.universe.full_mask
        if not 0 <= self.antecedent <= full:
            raise ValueError("antecedent outside the universe")
        if self.consequent is None:
            if self.antecedent != full:
                raise ValueError("a FALSE consequent requires antecedent = V")
        else:
            if not 0 <= self.consequent < self.universe.n:
                raise ValueError("consequent outside the universe")
            if self.antecedent >> self.consequent & 1:
                raise ValueError("consequent must not occur in the antecedent")

    def __repr__(self):
        return f"HornClause({format_clause(self)!r})"


@dataclass(frozen=True)
class QuasiHorn2Clause:
    """Propositional clause with at most two positive literals.

    ``consequents`` holds one or two variable indices, or is empty for the
    purely negative clause (FALSE consequent).
    """

    universe: VariableUniverse
    antecedent: int
    consequents: frozenset

    def __post_init__(self):
        full = self.universe.full_mask
        if not 0 <= self.antecedent <= full:
            raise ValueError("antecedent outside the universe")
        cons = frozenset(self.consequents)
        object.__setattr__(self, "consequents", cons)
        if len(cons) > 2:
            raise ValueError("at most two consequent variables allowed")
        for v in cons:
            if not 0 <= v < self.universe.n:
                raise ValueError("consequent outside the universe")
            if self.antecedent >> v & 1:
                raise ValueError("consequents must be disjoint from the antecedent")

    @property
    def consequent_mask(self) -> int:
        mask = 0
        for v in self.consequents:
            mask |= 1 << v
        return mask

    def __repr__(self):
        return f"QuasiHorn2Clause({format_clause(self)!r})"


@dataclass(frozen=True)
class SplitClause:
    """Implication ``X -> Y | Z`` read propositionally, sides need not cover V.

    Satisfied by I when X true implies all of Y true or all of Z true; an
    empty side reads as the constant true.  This differs from
    :class:`MvdClause` exactly on empty sides, which there follow the
    covered-clause case analysis instead.
    """

    universe: VariableUniverse
    x_mask: int
    y_mask: int
    z_mask: int

    def __post_init__(self):
        full = self.universe.full_mask
        x, y, z = self.x_mask, self.y_mask, self.z_mask
        if x & y or x & z or y & z:
            raise ValueError("clause sides must be pairwise disjoint")
        if (x | y | z) & ~full:
            raise ValueError("clause sides outside the universe")

    def __repr__(self):
        u = self.universe
        return (
            "SplitClause("
            f"{' '.join(u.names_of(self.x_mask)) or '-'} -> "
            f"{' '.join(u.names_of(self.y_mask)) or '-'} | "
            f"{' '.join(u.names_of(self.z_mask)) or '-'})"
        )


Clause = Union[MvdClause, HornClause, QuasiHorn2Clause, SplitClause]


# ---------------------------------------------------------------------------
# Formulas


class _BaseFormula:
    __slots__ = ("universe", "clauses")

    def __init__(self, universe: VariableUniverse, clauses: Iterable = ()):
        clauses = tuple(clauses)
        for clause in clauses:
            if clause.universe != universe:
                raise UniverseMismatchError("clause universe differs from formula universe")
        # order-preserving dedup under exact (oriented) equality
        self.universe = universe
        self.clauses = tuple(dict.fromkeys(clauses))

    def __len__(self):
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __eq__(self, other):
        return (
            type(other) is type(self)
            and self.universe == other.universe
            and set(self.clauses) == set(other.clauses)
        )

    def __hash__(self):
        return hash((self.universe, frozenset(self.clauses)))


class MvdFormula(_BaseFormula):
    """A conjunction of :class:`MvdClause` values over one universe."""

    def __repr__(self):
        body = ", ".join(format_clause(c) for c in self.clauses)
        return f"MvdFormula({{{body}}})"


class HornFormula(_BaseFormula):
    """A conjunction of :class:`HornClause` values over one universe."""

    def __repr__(self):
        body = ", ".join(format_clause(c) for c in self.clauses)
        return f"HornFormula({{{body}}})"


Formula = Union[MvdFormula, HornFormula]


def orientation_classes(formula: MvdFormula) -> frozenset:
    """The clauses of ``formula`` up to Y/Z orientation, as a set of keys."""
    return frozenset(c.orientation_key() for c in formula.clauses)


def orientation_class_count(formula: MvdFormula) -> int:
    return len(orientation_classes(formula))


# ---------------------------------------------------------------------------
# Satisfaction


def covers(interp: Interpretation, clause: MvdClause) -> bool:
    """True when the clause's antecedent is entirely true in ``interp``."""
    _require_same_universe(interp, clause)
    return interp.mask & clause.x_mask == clause.x_mask


def violates(interp: Interpretation, clause: MvdClause) -> bool:
    """Case analysis over the clause shape; see the module docstring."""
    _require_same_universe(interp, clause)
    if interp.mask & clause.x_mask != clause.x_mask:
        return False
    false_mask = interp.false_mask
    y, z = clause.y_mask, clause.z_mask
    if y and z:
        return bool(y & false_mask) and bool(z & false_mask)
    if y or z:
        side = y | z
        return popcount(false_mask) == 1 and bool(side & false_mask)
    return false_mask == 0


def _satisfies_clause(interp: Interpretation, clause: Clause) -> bool:
    if isinstance(clause, MvdClause):
        return not violates(interp, clause)
    if isinstance(clause, HornClause):
        if interp.mask & clause.antecedent != clause.antecedent:
            return True
        if clause.consequent is None:
            return False
        return bool(interp.mask >> clause.consequent & 1)
    if isinstance(clause, QuasiHorn2Clause):
        if interp.mask & clause.antecedent != clause.antecedent:
            return True
        return bool(interp.mask & clause.consequent_mask)
    if isinstance(clause, SplitClause):
        if interp.mask & clause.x_mask != clause.x_mask:
            return True
        if clause.y_mask == 0 or clause.z_mask == 0:
            return True
        return (
            interp.mask & clause.y_mask == clause.y_mask
            or interp.mask & clause.z_mask == clause.z_mask
        )
    raise TypeError(f"unsupported clause kind: {type(clause).__name__}")


def satisfies_clause(interp: Interpretation, clause: Clause) -> bool:
    """Satisfaction under the clause kind's own semantics."""
    _require_same_universe(interp, clause)
    return _satisfies_clause(interp, clause)


def satisfies(interp: Interpretation, formula) -> bool:
    """True when no clause of the formula is violated by ``interp``.

    Accepts a formula object or any iterable of clauses over the same
    universe; the empty formula is satisfied by everything.
    """
    clauses = formula.clauses if isinstance(formula, _BaseFormula) else tuple(formula)
    for clause in clauses:
        _require_same_universe(interp, clause)
        if not _satisfies_clause(interp, clause):
            return False
    return True


# ---------------------------------------------------------------------------
# Enumeration-backed entailment and equivalence


def violator_bitset(clause: Clause) -> int:
    """Bitset over all 2**n masks marking the assignments violating ``clause``."""
    universe = clause.universe
    cache = universe._violator_cache
    cached = cache.get(clause)
    if cached is not None:
        return cached
    full_ones = (1 << (1 << universe.n)) - 1
    if isinstance(clause, MvdClause):
        y, z = clause.y_mask, clause.z_mask
        if y and z:
            bits = (
                universe.superset_pattern(clause.x_mask)
                & ~universe.superset_pattern(y)
                & ~universe.superset_pattern(z)
                & full_ones
            )
        elif y or z:
            bits = 0
            for v in bit_indices(y | z):
                bits |= 1 << (universe.full_mask ^ (1 << v))
        else:
            bits = 1 << universe.full_mask
    elif isinstance(clause, HornClause):
        bits = universe.superset_pattern(clause.antecedent)
        if clause.consequent is not None:
            bits &= ~universe.var_pattern(clause.consequent) & full_ones
    elif isinstance(clause, QuasiHorn2Clause):
        bits = universe.superset_pattern(clause.antecedent)
        for v in clause.consequents:
            bits &= ~universe.var_pattern(v) & full_ones
    elif isinstance(clause, SplitClause):
        if clause.y_mask == 0 or clause.z_mask == 0:
            bits = 0
        else:
            bits = (
                universe.superset_pattern(clause.x_mask)
                & ~universe.superset_pattern(clause.y_mask)
                & ~universe.superset_pattern(clause.z_mask)
                & full_ones
            )
    else:
        raise TypeError(f"unsupported clause kind: {type(clause).__name__}")
    cache[clause] = bits
    return bits


def model_bitset(formula, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Bitset over all 2**n masks marking the models of ``formula``."""
    universe = formula.universe
    require_enumerable(universe, cap)
    bits = (1 << (1 << universe.n)) - 1
    for clause in formula.clauses:
        bits &= ~violator_bitset(clause)
    return bits


def entails(formula, clause: Clause, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """True when every model of ``formula`` satisfies ``clause``.

    The clause is judged under its own kind's semantics, so the same call
    works for full-cover implications, Horn clauses, two-literal clauses
    and split implications.
    """
    if clause.universe != formula.universe:
        raise UniverseMismatchError("clause universe differs from formula universe")
    return model_bitset(formula, cap) & violator_bitset(clause) == 0


def equivalent(f1, f2, cap: int = DEFAULT_ENUM_CAP) -> bool:
    """Model-set equality, decided by enumeration."""
    if f1.universe != f2.universe:
        raise UniverseMismatchError("formulas over different universes")
    return model_bitset(f1, cap) == model_bitset(f2, cap)


def find_counterexample(f1, f2, cap: int = DEFAULT_ENUM_CAP):
    """First assignment (canonical order) on which the two formulas disagree.

    Returns ``None`` when the model sets coincide.
    """
    if f1.universe != f2.universe:
        raise UniverseMismatchError("formulas over different universes")
    universe = f1.universe
    diff = model_bitset(f1, cap) ^ model_bitset(f2, cap)
    if diff == 0:
        return None
    for mask in enum_masks(universe.n):
        if diff >> mask & 1:
            return Interpretation(universe, mask)
    raise AssertionError("non-empty symmetric difference with no witness")


# ---------------------------------------------------------------------------
# Clause-kind translations


def horn_to_mvd(clause: HornClause) -> tuple[MvdClause, ...]:
    """The (at most two) full-cover implications equivalent to a Horn clause.

    ``X -> v`` becomes ``V\\{v} -> v`` plus ``X -> v | V\\(X u {v})``; the two
    coincide when X already is ``V\\{v}``.  ``* -> F`` maps to itself.
    """
    universe = clause.universe
    if clause.consequent is None:
        return (false_clause(universe),)
    v_bit = 1 << clause.consequent
    rest = universe.full_mask & ~(clause.antecedent | v_bit)
    degenerate = MvdClause(universe, universe.full_mask ^ v_bit, v_bit, 0)
    if rest == 0:
        return (degenerate,)
    return (degenerate, MvdClause(universe, clause.antecedent, v_bit, rest))


def horn_formula_to_mvd(formula: HornFormula) -> MvdFormula:
    clauses = []
    for clause in formula.clauses:
        clauses.extend(horn_to_mvd(clause))
    return MvdFormula(formula.universe, clauses)


def mvd_to_quasi2(clause: MvdClause) -> tuple[QuasiHorn2Clause, ...]:
    """Distribute a full-cover implication into two-literal clauses.

    Proper clauses yield one clause per (y, z) pair.  A clause with one
    empty side excludes exactly the assignments with a single false
    variable taken from its non-empty side, so it maps to the matching
    ``V\\{w} -> w`` clauses; ``* -> F`` maps to itself.
    """
    universe = clause.universe
    y, z = clause.y_mask, clause.z_mask
    if y and z:
        return tuple(
            QuasiHorn2Clause(universe, clause.x_mask, frozenset((a, b)))
            for a in bit_indices(y)
            for b in bit_indices(z)
        )
    if y or z:
        side = y | z
        return tuple(
            QuasiHorn2Clause(universe, universe.full_mask ^ (1 << w), frozenset((w,)))
            for w in bit_indices(side)
        )
    return (QuasiHorn2Clause(universe, universe.full_mask, frozenset()),)


# ---------------------------------------------------------------------------
# Text format
#
# First line:     vars: <name> <name> ...
# Clause lines:   <X vars> -> <Y vars> | <Z vars>     (mvdf files)
#                 <X vars> -> <v>                     (horn files)
# `-` stands for an empty side, `*` for the whole universe, `* -> F` for the
# clause violated only by the all-true assignment.  `#` starts a comment.


def _parse_side(tokens: list[str], universe: VariableUniverse, line_no: int) -> int:
    if tokens == ["-"]:
        return 0
    if tokens == ["*"]:
        return universe.full_mask
    if not tokens:
        raise ParseError("empty side (use `-` for an empty side)", line_no)
    mask = 0
    for tok in tokens:
        try:
            bit = 1 << universe.index(tok)
        except KeyError:
            raise ParseError(f"unknown variable {tok!r}", line_no) from None
        if mask & bit:
            raise ParseError(f"variable {tok!r} repeated within a side", line_no)
        mask |= bit
    return mask


def _parse_clause_tokens(tokens: list[str], universe: VariableUniverse, kind: str, line_no: int):
    if tokens.count("->") != 1:
        raise ParseError("clause must contain exactly one `->`", line_no)
    arrow = tokens.index("->")
    lhs, rhs = tokens[:arrow], tokens[arrow + 1 :]
    x_mask = _parse_side(lhs, universe, line_no)
    if rhs == ["F"]:
        if x_mask != universe.full_mask:
            raise ParseError("the F consequent requires `*` on the left", line_no)
        if kind == "horn":
            return HornClause(universe, universe.full_mask, None)
        if kind == "quasi2":
            return QuasiHorn2Clause(universe, x_mask, frozenset())
        return false_clause(universe)
    if kind == "mvd":
        if rhs.count("|") != 1:
            raise ParseError("expected `<Y> | <Z>` on the right of `->`", line_no)
        bar = rhs.index("|")
        y_mask = _parse_side(rhs[:bar], universe, line_no)
        z_mask = _parse_side(rhs[bar + 1 :], universe, line_no)
        try:
            return MvdClause(universe, x_mask, y_mask, z_mask)
        except ValueError as exc:
            raise ParseError(str(exc), line_no) from None
    if kind == "horn":
        if len(rhs) != 1:
            raise ParseError("a Horn clause needs exactly one consequent variable", line_no)
        try:
            v = universe.index(rhs[0])
        except KeyError:
            raise ParseError(f"unknown variable {rhs[0]!r}", line_no) from None
        try:
            return HornClause(universe, x_mask, v)
        except ValueError as exc:
            raise ParseError(str(exc), line_no) from None
    if kind == "quasi2":
        if not 1 <= len(rhs) <= 2 or "|" in rhs:
            raise ParseError("expected one or two consequent variables", line_no)
        try:
            cons = frozenset(universe.index(tok) for tok in rhs)
        except KeyError as exc:
            raise ParseError(str(exc.args[0]), line_no) from None
        try:
            return QuasiHorn2Clause(universe, x_mask, cons)
        except ValueError as exc:
            raise ParseError(str(exc), line_no) from None
    raise ValueError(f"unknown clause kind: {kind!r}")


def parse_clause(text: str, universe: VariableUniverse, kind: str = "mvd"):
    """Parse a single clause in the file grammar against a known universe."""
    tokens = text.split()
    if not tokens:
        raise ParseError("empty clause text")
    return _parse_clause_tokens(tokens, universe, kind, 1)


def _logical_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield line_no, body.split()


def parse_formula(text: str, kind: str = "mvd"):
    """Parse formula text into an :class:`MvdFormula` or :class:`HornFormula`.

    The first non-comment line must declare the universe (``vars: ...``);
    the remaining lines hold one clause each.
    """
    if kind not in ("mvd", "horn"):
        raise ValueError(f"unknown formula kind: {kind!r}")
    lines = iter(_logical_lines(text))
    try:
        line_no, tokens = next(lines)
    except StopIteration:
        raise ParseError("empty input, expected a `vars:` line") from None
    if tokens[0] != "vars:" or len(tokens) < 2:
        raise ParseError("first line must be `vars: <name> ...`", line_no)
    try:
        universe = VariableUniverse(tokens[1:])
    except ValueError as exc:
        raise ParseError(str(exc), line_no) from None
    clauses = []
    for line_no, tokens in lines:
        clauses.append(_parse_clause_tokens(tokens, universe, kind, line_no))
    if kind == "horn":
        return HornFormula(universe, clauses)
    return MvdFormula(universe, clauses)


def format_clause(clause) -> str:
    """Render one clause in the file grammar.

    Full-cover implications are shown with the side containing the smallest
    variable index on the left, which is also how orientation twins are
    collapsed when a whole formula is rendered.
    """
    universe = clause.universe

    def side(mask):
        if mask == 0:
            return "-"
        if mask == universe.full_mask:
            return "*"
        return " ".join(universe.names_of(mask))

    if isinstance(clause, MvdClause):
        if clause.is_false_clause:
            return "* -> F"
        y, z = clause.y_mask, clause.z_mask
        if y and z:
            low_y = next(bit_indices(y))
            low_z = next(bit_indices(z))
            if low_z < low_y:
                y, z = z, y
        return f"{side(clause.x_mask)} -> {side(y)} | {side(z)}"
    if isinstance(clause, HornClause):
        if clause.consequent is None:
            return "* -> F"
        return f"{side(clause.antecedent)} -> {universe.names[clause.consequent]}"
    if isinstance(clause, QuasiHorn2Clause):
        if not clause.consequents:
            return f"{side(clause.antecedent)} -> F"
        names = " ".join(universe.names[v] for v in sorted(clause.consequents))
        return f"{side(clause.antecedent)} -> {names}"
    raise TypeError(f"unsupported clause kind: {type(clause).__name__}")


def format_formula(formula) -> str:
    """Render a formula in the file grammar, one clause per line.

    Orientation twins collapse to a single displayed clause; clause order
    follows first appearance, so rendering is deterministic.
    """
    lines = [f"vars: {' '.join(formula.universe.names)}"]
    if isinstance(formula, MvdFormula):
        seen = set()
        for clause in formula.clauses:
            key = clause.orientation_key()
            if key in seen:
                continue
            seen.add(key)
            lines.append(format_clause(clause))
    else:
        for clause in formula.clauses:
            lines.append(format_clause(clause))
    return "\n".join(lines) + "\n"
