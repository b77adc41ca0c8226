"""Command line: run goals in either mode, print rule ladders, benchmark.

Exit status is 0 on success, 1 for bad usage, 2 when program or goal text
does not parse or validate, 3 for a runtime error and 4 when a benchmark
answer disagrees with its oracle.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import __version__
from .bench import OUT_DIR_ENV, BenchConfig, render, output_path, run_bench
from .engine import Registration
from .errors import (EngineError, MatchFailure, NotRegistered, RuleSyntaxError, SchemeMismatch,
                     TemplateMismatch, ValidationError, VerificationMismatch)
from .interp import DEFAULT_MAX_STEPS, run_original
from .parser import parse_goal, parse_program
from .programs import EXAMPLES, load
from .rules import Program, StepStats, format_rule, validate_program
from .schemes import detect_scheme
from .terms import functor_of
from .unfold import DEFAULT_CAP

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_RUNTIME, EXIT_MISMATCH = 0, 1, 2, 3, 4

# shipped programs that --program accepts by name
NAMED_PROGRAMS = ("summation", "reversal", "sorting", "countdown")

_INPUT_ERRORS = (RuleSyntaxError, ValidationError, TemplateMismatch, SchemeMismatch, MatchFailure,
                 NotRegistered)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load_program(source: str) -> Program:
    if source in NAMED_PROGRAMS and not os.path.exists(source):
        return load(source)
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read program {source!r}: {e.strerror}") from None
    p = parse_program(text)
    validate_program(p)
    return p


def _fit_goal(p: Program, goal) -> Program:
    """``p`` renamed to the goal's constraint symbol when only the name differs."""
    name, arity = functor_of(goal)
    if (name, arity) == p.predicate:
        return p
    if arity == p.predicate[1]:
        return p.renamed(name)
    raise NotRegistered(f"goal {name}/{arity} does not match the program's "
                        f"{p.predicate[0]}/{p.predicate[1]}")


def _print_stats(stats: StepStats, mode: str, out):
    print(f"mode: {mode}", file=out)
    print(f"rule applications: {stats.rule_applications}", file=out)
    print(f"recursive applications: {stats.recursive_applications}", file=out)
    print(f"guard checks: {stats.guard_checks}", file=out)
    print(f"builtin work: {stats.builtin_work}", file=out)
    if mode == "unfolded":
        print(f"rules generated: {stats.rules_generated}", file=out)
        print(f"applied rules: {stats.applied_rule_indices}", file=out)


def cmd_run(args, out=None) -> int:
    out = out or sys.stdout
    program = _load_program(args.program)
    goal, _ = parse_goal(args.goal)
    program = _fit_goal(program, goal)
    if args.mode == "original":
        answer = run_original(goal, program, args.max_steps)
    else:
        scheme = detect_scheme(program.recursive_rule)
        reg = Registration(program.predicate, program, scheme, args.unfold_cap, args.max_steps,
                           use_cache=not args.no_cache)
        answer = reg.call(goal)
    print(answer, file=out)
    _print_stats(answer.stats, args.mode, out)
    return EXIT_OK


def cmd_rules(args, out=None) -> int:
    out = out or sys.stdout
    if args.example not in NAMED_PROGRAMS:
        raise UsageError(f"unknown example {args.example!r}; choose from {', '.join(NAMED_PROGRAMS)}")
    goal, _ = parse_goal(args.goal)
    program = _fit_goal(load(args.example), goal)
    scheme = detect_scheme(program.recursive_rule)
    reg = Registration(program.predicate, program, scheme, args.unfold_cap, use_cache=False)
    ladder = reg.ladder_for(goal, StepStats())
    for r in ladder.rules:
        print(format_rule(r), file=out)
    return EXIT_OK


def cmd_bench(args, out=None) -> int:
    out = out or sys.stdout
    try:
        config = BenchConfig(args.example, args.mode, args.sizes, args.reps, args.seed,
                             args.format, not args.no_cache, args.jobs)
        rows = run_bench(config, progress=_progress if args.verbose else None)
    except ValueError as e:
        raise UsageError(str(e)) from None
    text = render(rows, config)
    path = output_path(args.out)
    if path is None:
        out.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {path}", file=sys.stderr)
    return EXIT_OK


def _progress(row):
    print(f"{row.example} {row.mode} {row.size}: {row.total_s:.6f}s", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rrunfold", description="Runtime repeated recursion unfolding for CHR rules.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    run = sub.add_parser("run", help="run a goal against a program")
    run.add_argument("--program", required=True,
                     help=f"rule file, or one of {', '.join(NAMED_PROGRAMS)}")
    run.add_argument("--goal", required=True, help="goal such as 'sum(10,S)'")
    run.add_argument("--mode", choices=("original", "unfolded"), default="unfolded")
    run.add_argument("--no-cache", action="store_true", help="rebuild the unfolded rules")
    run.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
    run.add_argument("--unfold-cap", type=int, default=DEFAULT_CAP)
    run.set_defaults(func=cmd_run)

    rules = sub.add_parser("rules", help="print the rule ladder built for a goal")
    rules.add_argument("--example", required=True, choices=NAMED_PROGRAMS)
    rules.add_argument("--goal", required=True)
    rules.add_argument("--unfold-cap", type=int, default=DEFAULT_CAP)
    rules.set_defaults(func=cmd_rules)

    bench = sub.add_parser("bench", help="time both modes and verify every answer",
                           epilog=f"--out is resolved against ${OUT_DIR_ENV} when it is set")
    bench.add_argument("--example", required=True, choices=sorted(EXAMPLES))
    bench.add_argument("--mode", choices=("original", "unfolded", "both"), default="both")
    bench.add_argument("--sizes", help="e.g. '2^12..2^15,2^20+1'; default depends on example and mode")
    bench.add_argument("--reps", type=int, default=1)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--format", choices=("csv", "md", "markdown"), default="csv")
    bench.add_argument("--out")
    bench.add_argument("--no-cache", action="store_true")
    bench.add_argument("--jobs", type=int, default=1,
                       help="run cases in parallel processes (correctness sweeps only)")
    bench.add_argument("-v", "--verbose", action="store_true", help="report each case on stderr")
    bench.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"rrunfold: {e}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationMismatch as e:
        print(f"rrunfold: verification failed: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except _INPUT_ERRORS as e:
        print(f"rrunfold: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INPUT
    except EngineError as e:
        print(f"rrunfold: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
