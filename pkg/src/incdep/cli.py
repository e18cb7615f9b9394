"""Command-line interface.

Exit status: 0 when the answer is positive (entailed, claim confirmed,
reduction agrees), 1 when it is negative, 2 on errors or oracle mismatch.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass

from .calculus.rules import b3_coverage
from .decide import decide
from .errors import CapExceeded, IncdepError, ProblemError, WitnessVerificationFailed
from .experiments import check_armstrong_gap, check_no_kary
from .oracle import DEFAULT_CAP, HARD_CAP, Oracle, parse_dimacs, reduce_3sat, sat_bruteforce
from .semantics import serialize_team
from .syntax import parse_problem, render_atom

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    path: str | None = None
    witness: str = "table"
    trace: bool = False
    oracle: bool = False
    max_oracle_vars: int = DEFAULT_CAP
    format: str = "text"
    figures: str | None = None
    n: int = 2
    fresh: int = 1


def _section(title: str) -> str:
    return f"== {title} =="


def _emit(cfg: RunConfig, text_lines: list, payload: dict) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(text_lines))


def run_decide(cfg: RunConfig) -> int:
    with open(cfg.path) as fh:
        problem = parse_problem(fh.read())
    nvars = len(problem.variables)
    if cfg.oracle and nvars > cfg.max_oracle_vars:
        raise CapExceeded(f"--oracle: {nvars} variables exceed --max-oracle-vars {cfg.max_oracle_vars}")
    verdict = decide(problem)
    lines = [_section("verdict"), "entailed" if verdict.entailed else "not-entailed"]
    payload = verdict.to_json(cfg.witness) if not verdict.entailed else {"verdict": "entailed"}
    if verdict.entailed:
        if cfg.trace:
            lines += [_section("trace"), *verdict.trace.lines()]
            payload["trace"] = verdict.trace.to_json()
    elif cfg.witness == "table" and verdict.witness is not None:
        lines += [_section("witness"), serialize_team(verdict.witness).rstrip()]
    elif cfg.witness != "none":
        lines += [_section("witness constraints"), *verdict.plan.constraint_lines()]
    status = EXIT_YES if verdict.entailed else EXIT_NO
    if cfg.oracle:
        oracle = Oracle(problem.variables, cap=cfg.max_oracle_vars, override=cfg.max_oracle_vars > DEFAULT_CAP)
        truth = oracle.entails(problem.assumptions, problem.query)
        agree = truth == verdict.entailed
        answer = "entailed" if truth else "not-entailed"
        lines += [_section("oracle"), f"oracle: {answer}, {'agreement' if agree else 'MISMATCH'}"]
        payload["oracle"] = {"verdict": answer, "agree": agree}
        if not agree:
            lines.insert(0, "!!! MISMATCH: decide and the oracle disagree !!!")
            status = EXIT_ERROR
    if cfg.figures and verdict.witness is not None:
        from .report import figure_path, plot_team

        path = plot_team(verdict.witness, figure_path(cfg.figures, "witness.png"))
        lines += [_section("figures"), path]
        payload["figures"] = [path]
    _emit(cfg, lines, payload)
    return status


def run_armstrong(cfg: RunConfig) -> int:
    report = check_armstrong_gap()
    lines = [
        _section("armstrong"),
        f"teams examined: {report.teams_examined}",
        f"satisfying p1 <= p2: {report.satisfying}",
        f"  also p3 <= p2 only: {report.only_first}",
        f"  also p2 <= p1 only: {report.only_second}",
        f"  both: {report.both}",
        f"  neither: {len(report.violations)}",
        f"oracle p1 <= p2 |= p3 <= p2: {report.oracle_first}",
        f"oracle p1 <= p2 |= p2 <= p1: {report.oracle_second}",
        f"gap confirmed over {report.teams_examined} teams" if report.confirmed else "gap NOT confirmed",
    ]
    payload = {
        "teams_examined": report.teams_examined,
        "satisfying": report.satisfying,
        "only_first": report.only_first,
        "only_second": report.only_second,
        "both": report.both,
        "violations": [sorted(t.sorted_bits()) for t in report.violations],
        "oracle_first": report.oracle_first,
        "oracle_second": report.oracle_second,
        "confirmed": report.confirmed,
    }
    if cfg.figures:
        from .report import figure_path, plot_armstrong

        path = plot_armstrong(report, figure_path(cfg.figures, "armstrong.png"))
        lines += [_section("figures"), path]
        payload["figures"] = [path]
    _emit(cfg, lines, payload)
    return EXIT_YES if report.confirmed else EXIT_NO


def run_no_kary(cfg: RunConfig) -> int:
    from .report import no_kary_text

    report = check_no_kary(cfg.n, cfg.fresh)
    lines = [_section(f"no-kary n={cfg.n}"), no_kary_text(report)]
    payload = {
        "n": report.n,
        "premises": [render_atom(b) for b in report.B],
        "conclusion": render_atom(report.conclusion),
        "conclusion_entailed": report.conclusion_entailed,
        "b3_premises": report.b3_premises,
        "independence": {render_atom(b): t is not None for b, t in report.independence.items()},
        "proper_subsets_entailing": sum(report.subsets.values()),
        "allowed_consequences": sorted(render_atom(a) for a in report.allowed_consequences),
        "refutations": {render_atom(a): {"team": n, "verified": ok} for a, (n, ok) in report.refutations.items()},
        "unrefuted": [{"atom": render_atom(a), "entailed": e} for a, e in report.gaps],
        "confirmed": report.confirmed,
    }
    if cfg.figures:
        from .report import figure_path, plot_no_kary

        path = plot_no_kary(report, figure_path(cfg.figures, f"no_kary_n{cfg.n}.png"))
        lines += [_section("figures"), path]
        payload["figures"] = [path]
    _emit(cfg, lines, payload)
    return EXIT_YES if report.confirmed else EXIT_NO


def run_reduce(cfg: RunConfig) -> int:
    with open(cfg.path) as fh:
        formula = parse_dimacs(fh.read())
    candidates, target = reduce_3sat(formula)
    covered, uncovered = b3_coverage(candidates, target)
    sat = sat_bruteforce(formula)
    agree = covered == (not sat)
    lines = [
        _section("reduction"),
        *[f"A: {render_atom(a)}" for a in candidates],
        f"target: {render_atom(target)}",
        f"coverage: {covered}",
        f"sat_bruteforce: {sat}",
        f"agreement: {agree}",
    ]
    if uncovered is not None:
        lines.insert(-3, "uncovered: " + " ".join(uncovered))
    payload = {
        "candidates": [render_atom(a) for a in candidates],
        "target": render_atom(target),
        "coverage": covered,
        "uncovered": list(uncovered) if uncovered is not None else None,
        "sat": sat,
        "agree": agree,
    }
    _emit(cfg, lines, payload)
    return EXIT_YES if agree else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--figures", metavar="DIR", help="write matplotlib figures into DIR")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="incdep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", parents=[common], help="decide an implication problem file")
    d.add_argument("path")
    d.add_argument("--oracle", action="store_true", help="cross-check with exhaustive team enumeration")
    d.add_argument("--witness", choices=("table", "constraints", "none"), default="table")
    d.add_argument("--trace", action="store_true")
    d.add_argument(
        "--max-oracle-vars",
        type=int,
        default=DEFAULT_CAP,
        help=f"oracle variable cap (default {DEFAULT_CAP}; {HARD_CAP} is the most allowed)",
    )

    sub.add_parser("check-armstrong", parents=[common], help="no Armstrong team for p1 <= p2")

    k = sub.add_parser("check-no-kary", parents=[common], help="arity lower bound claims at arity N")
    k.add_argument("--n", type=int, required=True)
    k.add_argument("--fresh", type=int, default=1, help="fresh variables in the candidate sweep")

    r = sub.add_parser("reduce-3sat", parents=[common], help="3-CNF to B3 coverage, checked by brute force")
    r.add_argument("path")
    return parser


RUNNERS = {
    "decide": run_decide,
    "check-armstrong": run_armstrong,
    "check-no-kary": run_no_kary,
    "reduce-3sat": run_reduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    cfg = RunConfig(
        command=args.command,
        path=getattr(args, "path", None),
        witness=getattr(args, "witness", "table"),
        trace=getattr(args, "trace", False),
        oracle=getattr(args, "oracle", False),
        max_oracle_vars=getattr(args, "max_oracle_vars", DEFAULT_CAP),
        format=args.format,
        figures=args.figures,
        n=getattr(args, "n", 2),
        fresh=getattr(args, "fresh", 1),
    )
    try:
        return RUNNERS[cfg.command](cfg)
    except (ProblemError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except WitnessVerificationFailed as exc:
        print(f"error: incomplete: {exc}", file=sys.stderr)
    except (CapExceeded, IncdepError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
