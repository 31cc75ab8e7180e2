"""Batch command-line surface.

Commands run learning sessions against simulated or scripted teachers,
check dependencies in CSV data, and test entailments.  Exit codes:

  0  success
  1  usage error
  2  invalid input (bad formula, clause, CSV or script text)
  3  oracle or contract violation (invalid scripted counterexample,
     exhausted script, inconsistent oracle answers)
  4  bound violation (a run exceeded a guaranteed bound)

All output is deterministic for a fixed command line and input files; the
random oracle strategy is driven entirely by --seed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .core import (
    DEFAULT_ENUM_CAP,
    format_clause,
    format_formula,
    parse_clause,
    parse_formula,
)
from .errors import (
    BoundViolationError,
    ConversionError,
    MvdLearnError,
    OracleContractError,
)
from .learner import LearnerSession, TheoreticalBounds
from .oracles import (
    EntailmentTeacher,
    MvdfInterpretationTeacher,
    RelationTeacher,
    parse_clause_script,
    parse_interpretation_script,
    parse_relation_script,
    stats_snapshot,
)
from .reductions import (
    horn_entailment_reduction,
    horn_envelope,
    mvdf_to_horn,
    quasi2_reduction,
    relation_reduction,
)
from .relations import AttributeSchema, find_violating_pair, read_csv

USAGE_EXIT = 1
INPUT_EXIT = 2
ORACLE_EXIT = 3
BOUND_EXIT = 4


class _UsageError(Exception):
    """Inconsistent flag combination (beyond what argparse can express)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise MvdLearnError(f"{path}: {exc.strerror or exc}") from None


def format_trace_record(record) -> str:
    parts = [
        f"iter={record.iteration}",
        f"event={record.event}",
        f"removed={record.removed}",
        f"ce={record.counterexample}",
        f"P={record.positives}",
        f"L={record.negatives}",
        f"H={record.hypothesis_size}",
        f"mem={record.membership_queries}",
        f"eq={record.equivalence_queries}",
    ]
    if record.potential is not None:
        parts.append(f"E={record.potential}")
    return " ".join(parts)


def _add_oracle_args(sub):
    sub.add_argument("--oracle", choices=("exhaustive", "random", "script"),
                     default="exhaustive", help="counterexample strategy")
    sub.add_argument("--seed", type=int, default=0, help="seed for --oracle random")
    sub.add_argument("--script", help="counterexample script (required with --oracle script)")
    sub.add_argument("--trace", help="write per-iteration trace records to this file")
    sub.add_argument("--output", choices=("text", "trace"), default="text",
                     help="print the hypothesis only, or the trace records too")
    sub.add_argument("--max-vars", type=int, default=DEFAULT_ENUM_CAP,
                     help="enumeration cap on the universe size")


def build_parser() -> _Parser:
    parser = _Parser(prog="mvdlearn", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"mvdlearn {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("learn", help="learn a dependency formula from assignments")
    p.add_argument("--target", required=True, help="target formula file")
    _add_oracle_args(p)

    p = commands.add_parser("learn-mvd", help="learn dependencies from data relations")
    p.add_argument("--target", required=True,
                   help="target dependency file (proper clauses over the schema)")
    _add_oracle_args(p)

    p = commands.add_parser("learn-horn", help="learn a Horn formula")
    p.add_argument("--target", required=True, help="target Horn formula file")
    p.add_argument("--examples", choices=("entailments", "interpretations"),
                   default="interpretations", help="example kind the oracles use")
    _add_oracle_args(p)

    p = commands.add_parser("learn-q",
                            help="learn a dependency formula from two-literal-clause oracles")
    p.add_argument("--target", required=True, help="target formula file")
    _add_oracle_args(p)

    p = commands.add_parser("check-mvd", help="check one dependency against CSV data")
    p.add_argument("--relation", required=True, help="CSV file, header row first")
    p.add_argument("--mvd", required=True, help="dependency over the CSV attributes")

    p = commands.add_parser("entails", help="test whether a formula entails a clause")
    p.add_argument("--formula", required=True, help="formula file")
    p.add_argument("--formula-kind", choices=("mvd", "horn"), default="mvd",
                   help="grammar of the formula file")
    p.add_argument("--clause", required=True, help="clause in the file grammar")
    p.add_argument("--kind", choices=("auto", "mvd", "horn", "quasi2"), default="auto",
                   help="clause kind (auto: mvd when a `|` or F is present, horn otherwise)")
    p.add_argument("--max-vars", type=int, default=DEFAULT_ENUM_CAP)

    return parser


def _load_script(args, teacher_kind, universe):
    if args.oracle != "script":
        if args.script:
            raise _UsageError("--script only makes sense with --oracle script")
        return None
    if not args.script:
        raise _UsageError("--oracle script requires --script FILE")
    text = _read_text(args.script)
    if teacher_kind == "interpretation":
        return parse_interpretation_script(text, universe)
    if teacher_kind == "relation":
        return parse_relation_script(text)
    return parse_clause_script(text, universe, teacher_kind)


_STRATEGY = {"exhaustive": "exhaustive", "random": "random", "script": "scripted"}


def _emit_run(session, result, teacher, args):
    lines = []
    if args.output == "trace":
        lines.extend(format_trace_record(r) for r in session.trace)
    lines.append("hypothesis:")
    lines.extend("  " + line for line in format_formula(result).splitlines())
    stats = stats_snapshot(session)
    lines.append(
        "stats: iterations={} positive={} append={} replace={} removed={}".format(
            stats.iterations, stats.positive_events, stats.append_events,
            stats.replace_events, stats.removals,
        )
    )
    lines.append(
        "queries: learner mem={} eq={}; teacher mem={} eq={}".format(
            stats.membership_queries, stats.equivalence_queries,
            teacher.stats["membership_queries"], teacher.stats["equivalence_queries"],
        )
    )
    print("\n".join(lines))
    if args.trace:
        Path(args.trace).write_text(
            "".join(format_trace_record(r) + "\n" for r in session.trace)
        )


def _cmd_learn(args) -> int:
    target = parse_formula(_read_text(args.target), "mvd")
    universe = target.universe
    script = _load_script(args, "interpretation", universe)
    teacher = MvdfInterpretationTeacher(
        target, _STRATEGY[args.oracle], args.seed, script, cap=args.max_vars
    )
    session = LearnerSession(
        universe,
        teacher.membership_answer,
        teacher.equivalence_answer,
        bounds=TheoreticalBounds(universe.n, len(target.clauses)),
    )
    result = session.run()
    _emit_run(session, result, teacher, args)
    return 0


def _cmd_learn_mvd(args) -> int:
    target = parse_formula(_read_text(args.target), "mvd")
    universe = target.universe
    schema = AttributeSchema(universe.names)
    script = _load_script(args, "relation", universe)
    teacher = RelationTeacher(
        target, schema, _STRATEGY[args.oracle], args.seed, script, cap=args.max_vars
    )
    reduction = relation_reduction(schema)
    session = LearnerSession(
        universe,
        lambda interp: reduction.f_mem(interp, teacher.membership_answer),
        lambda hypo: _translated_eq(reduction, teacher, hypo),
        bounds=TheoreticalBounds(universe.n, len(target.clauses)),
    )
    result = session.run()
    _emit_run(session, result, teacher, args)
    return 0


def _translated_eq(reduction, teacher, hypothesis):
    counterexample = teacher.equivalence_answer(hypothesis)
    if counterexample is None:
        return None
    return reduction.f_eq(counterexample, hypothesis, teacher.membership_answer)


def _cmd_learn_horn(args) -> int:
    target = parse_formula(_read_text(args.target), "horn")
    universe = target.universe
    # the working formula represents the target through the two-clause
    # encoding, so its size bound is twice the Horn clause count
    bounds = TheoreticalBounds(universe.n, 2 * len(target.clauses))
    if args.examples == "interpretations":
        script = _load_script(args, "interpretation", universe)
        teacher = MvdfInterpretationTeacher(
            target, _STRATEGY[args.oracle], args.seed, script, cap=args.max_vars
        )
        session = LearnerSession(
            universe, teacher.membership_answer, teacher.equivalence_answer,
            bounds=bounds,
        )
        learned = session.run()
        result = mvdf_to_horn(learned)
    else:
        script = _load_script(args, "horn", universe)
        teacher = EntailmentTeacher(
            target, "horn", _STRATEGY[args.oracle], args.seed, script, cap=args.max_vars
        )
        reduction = horn_entailment_reduction(universe)
        session = LearnerSession(
            universe,
            lambda interp: reduction.f_mem(interp, teacher.membership_answer),
            lambda hypo: _translated_eq(reduction, teacher, hypo),
            bounds=bounds,
        )
        learned = session.run()
        try:
            result = mvdf_to_horn(learned)
        except ConversionError:
            result = horn_envelope(learned)
    _emit_run(session, result, teacher, args)
    return 0


def _cmd_learn_q(args) -> int:
    target = parse_formula(_read_text(args.target), "mvd")
    universe = target.universe
    script = _load_script(args, "quasi2", universe)
    teacher = EntailmentTeacher(
        target, "quasi2", _STRATEGY[args.oracle], args.seed, script, cap=args.max_vars
    )
    reduction = quasi2_reduction(universe)
    session = LearnerSession(
        universe,
        lambda interp: reduction.f_mem(interp, teacher.membership_answer),
        lambda hypo: _translated_eq(reduction, teacher, hypo),
        bounds=TheoreticalBounds(universe.n, len(target.clauses)),
    )
    result = session.run()
    _emit_run(session, result, teacher, args)
    return 0


def _cmd_check_mvd(args) -> int:
    relation = read_csv(_read_text(args.relation))
    universe = relation.schema.to_universe()
    clause = parse_clause(args.mvd, universe, "mvd")
    pair = find_violating_pair(relation, clause)
    if pair is None:
        print(f"holds: {format_clause(clause)}")
    else:
        print(f"violated: {format_clause(clause)}")
        print(f"pair: {','.join(pair[0])} / {','.join(pair[1])}")
    return 0


def _cmd_entails(args) -> int:
    from .core import entails as entails_check

    formula = parse_formula(_read_text(args.formula), args.formula_kind)
    kind = args.kind
    if kind == "auto":
        tokens = args.clause.split()
        kind = "mvd" if "|" in tokens or tokens[-1:] == ["F"] else "horn"
    clause = parse_clause(args.clause, formula.universe, kind)
    answer = entails_check(formula, clause, cap=args.max_vars)
    print("yes" if answer else "no")
    return 0


_COMMANDS = {
    "learn": _cmd_learn,
    "learn-mvd": _cmd_learn_mvd,
    "learn-horn": _cmd_learn_horn,
    "learn-q": _cmd_learn_q,
    "check-mvd": _cmd_check_mvd,
    "entails": _cmd_entails,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"mvdlearn: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except BoundViolationError as exc:
        print(f"mvdlearn: bound violation: {exc}", file=sys.stderr)
        return BOUND_EXIT
    except (OracleContractError, ConversionError) as exc:
        print(f"mvdlearn: oracle error: {exc}", file=sys.stderr)
        return ORACLE_EXIT
    except (MvdLearnError, ValueError) as exc:
        print(f"mvdlearn: {exc}", file=sys.stderr)
        return INPUT_EXIT


if __name__ == "__main__":
    sys.exit(main())
