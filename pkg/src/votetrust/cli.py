"""Command line entry point.

Exit codes: 0 success, 1 validation or claim failures, 2 parse errors or
unreadable files, 3 usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import analysis, dsl, reports, scenarios
from .analysis import DEFAULT_WEIGHTS, WeightConfig
from .corpus import CORPUS_FILES, check_paper_claims, corpus_text, load_builtin_corpus
from .diagnostics import ModelError, UnknownReferenceError
from .model import GoalId, Impact, PartyId, SystemId, TrustModel
from .render import RenderFormat, render

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _enum(cls, what):
    def convert(text):
        try:
            return cls(text)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise argparse.ArgumentTypeError(f"unknown {what} '{text}' (choose from {choices})") from None
    convert.__name__ = what
    return convert


def _weights(text):
    try:
        return WeightConfig.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cell(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected SYSTEM:GOAL:PARTY, got '{text}'")
    return (_enum(SystemId, "system")(parts[0]), _enum(GoalId, "goal")(parts[1]), _enum(PartyId, "party")(parts[2]))


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="votetrust", description="Analyse trust assumptions of voting systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    source = _Parser(add_help=False)
    source.add_argument("--model", nargs="+", metavar="FILE", default=[],
                        help="model files (.vtm or exported .json); default is the bundled corpus")
    source.add_argument("--corpus", action="store_true", help="include the bundled corpus")
    source.add_argument("--format", type=RenderFormat, choices=list(RenderFormat), default=RenderFormat.MARKDOWN,
                        metavar="{markdown,csv,json}")

    def scope(p, required=False):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--goal", type=_enum(GoalId, "goal"))
        g.add_argument("--overall", action="store_true")

    p = sub.add_parser("validate", help="parse and validate model files")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--corpus", action="store_true", help="merge with the bundled corpus before validating")

    p = sub.add_parser("matrix", parents=[source], help="party matrix for one goal")
    p.add_argument("--goal", type=_enum(GoalId, "goal"), required=True)

    p = sub.add_parser("profile", parents=[source], help="assumption counts by impact and mode")
    p.add_argument("--system", type=_enum(SystemId, "system"), required=True)
    scope(p, required=True)

    p = sub.add_parser("compare", parents=[source], help="dominance relation between two systems")
    p.add_argument("a", type=_enum(SystemId, "system"))
    p.add_argument("b", type=_enum(SystemId, "system"))
    scope(p)

    p = sub.add_parser("frontier", parents=[source], help="undominated systems for a goal")
    p.add_argument("--goal", type=_enum(GoalId, "goal"), required=True)

    for name in ("score", "rank"):
        p = sub.add_parser(name, parents=[source], help="weighted scores" if name == "score" else "ranking by score")
        scope(p)
        p.add_argument("--weights", type=_weights, default=DEFAULT_WEIGHTS,
                       help="single,subset,all,conditional_factor (default 1,4,16,1/2)")
        if name == "score":
            p.add_argument("--system", type=_enum(SystemId, "system"))

    p = sub.add_parser("whatif", parents=[source], help="breach analysis for a scenario, or cell removal")
    p.add_argument("--scenario", metavar="FILE")
    p.add_argument("--system", type=_enum(SystemId, "system"))
    p.add_argument("--remove", type=_cell, nargs="+", metavar="SYSTEM:GOAL:PARTY", default=[])
    p.add_argument("--weights", type=_weights, default=DEFAULT_WEIGHTS)

    p = sub.add_parser("coalition", parents=[source],
                       help="minimal corrupt coalitions (or resilience table without --goal/--level)")
    p.add_argument("--system", type=_enum(SystemId, "system"), required=True)
    p.add_argument("--goal", type=_enum(GoalId, "goal"))
    p.add_argument("--level", type=_enum(Impact, "impact level"))
    p.add_argument("--scenario", metavar="FILE", help="take condition settings from a scenario file")

    p = sub.add_parser("claims", parents=[source], help="re-check the comparative claims")

    p = sub.add_parser("export", help="write the model as JSON or canonical text")
    p.add_argument("--model", nargs="+", metavar="FILE", default=[])
    p.add_argument("--corpus", action="store_true")
    p.add_argument("--format", choices=["json", "vtm"], default="json")
    return parser


def _load(files: Sequence[str], corpus: bool, out_err) -> TrustModel:
    if not files:
        return load_builtin_corpus()
    docs = list(dsl.read_documents(files))
    if corpus:
        docs = [dsl.parse_document(corpus_text(n), f"corpus/{n}") for n in CORPUS_FILES] + docs
    model, diags = dsl.load_models(docs)
    warnings = [d for d in diags if not d.is_error]
    if model is None:
        raise ModelError(diags)
    out_err.write(reports.format_diagnostics([w for w in warnings if w.stage == "parse"]))
    return model


def _cmd_validate(args, out, err) -> int:
    docs = list(dsl.read_documents(args.files))
    if args.corpus:
        docs = [dsl.parse_document(corpus_text(n), f"corpus/{n}") for n in CORPUS_FILES] + docs
    model, diags = dsl.load_models(docs)
    err.write(reports.format_diagnostics(diags))
    errors = [d for d in diags if d.is_error]
    if any(d.stage == "parse" for d in errors):
        return EXIT_PARSE
    if errors:
        return EXIT_FAILED
    out.write(f"ok: {len(model.systems)} systems, {len(model.goals)} goals, "
              f"{len(model.assumptions)} assumptions, {len(model.notes)} notes\n")
    return EXIT_OK


def _run(args, out, err) -> int:
    if args.command == "validate":
        return _cmd_validate(args, out, err)
    model = _load(args.model, args.corpus, err)
    goal = getattr(args, "goal", None)

    if args.command == "export":
        if args.format == "vtm":
            out.write(dsl.serialize_model(model))
        else:
            out.write(json.dumps(dsl.model_to_json(model), indent=2, ensure_ascii=False) + "\n")
        return EXIT_OK

    status = EXIT_OK
    if args.command == "matrix":
        report = reports.matrix_report(analysis.goal_matrix(model, goal))
    elif args.command == "profile":
        report = reports.profile_report(args.system, goal, analysis.profile(model, args.system, goal))
    elif args.command == "compare":
        report = reports.compare_report(args.a, args.b, goal, analysis.dominance(model, args.a, args.b, goal))
    elif args.command == "frontier":
        report = reports.frontier_report(model, goal, analysis.pareto_frontier(model, goal))
    elif args.command == "score":
        systems = [args.system] if args.system else model.sorted_systems()
        scores = [(s, analysis.score(model, s, goal, args.weights)) for s in systems]
        report = reports.score_report(goal, args.weights, scores)
    elif args.command == "rank":
        report = reports.rank_report(goal, args.weights, analysis.rank(model, goal, args.weights))
    elif args.command == "whatif":
        if not args.scenario and not args.remove:
            raise UsageError("whatif needs --scenario FILE or --remove SYSTEM:GOAL:PARTY")
        if args.remove:
            try:
                _, delta = scenarios.whatif_remove(model, args.remove, args.weights)
            except KeyError as exc:
                raise UsageError(exc.args[0]) from None
            report = reports.delta_report(delta)
            if args.scenario:
                out.write(render(report, args.format))
        if args.scenario:
            scenario = scenarios.load_scenario(args.scenario)
            systems = [args.system] if args.system else None
            entries = scenarios.breach_report(model, scenario.coalition, scenario.env, systems)
            report = reports.breach_report(scenario.coalition, scenario.env, entries)
    elif args.command == "coalition":
        env = scenarios.load_scenario(args.scenario).env if args.scenario else scenarios.DEFAULT_ENV
        if (args.goal is None) != (args.level is None):
            raise UsageError("coalition needs both --goal and --level, or neither")
        if args.goal is None:
            report = reports.resilience_report(args.system, scenarios.system_resilience(model, args.system, env))
        else:
            found = scenarios.minimal_coalitions(model, args.system, args.goal, args.level, env)
            report = reports.coalition_report(args.system, args.goal, args.level, found)
    elif args.command == "claims":
        result = check_paper_claims(model)
        report = reports.claims_report(result)
        status = EXIT_OK if result.all_passed else EXIT_FAILED
    else:  # pragma: no cover - argparse rejects unknown commands
        raise UsageError(f"unknown command {args.command}")
    out.write(render(report, args.format))
    return status


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _run(args, out, err)
    except UsageError as exc:
        parser.print_usage(err)
        err.write(f"votetrust: error: {exc}\n")
        return EXIT_USAGE
    except UnknownReferenceError as exc:
        err.write(f"votetrust: error: {exc}\n")
        return EXIT_USAGE
    except ModelError as exc:
        err.write(reports.format_diagnostics(exc.diagnostics))
        return EXIT_PARSE
    except OSError as exc:
        err.write(f"votetrust: error: cannot read {exc.filename or ''}: {exc.strerror or exc}\n")
        return EXIT_PARSE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
