"""Command-line front end. Every command prints ``key=value`` lines.

Exit codes: 0 success, 1 verified false or non-Borda findings, 2 usage or
parse error, 3 capacity limit.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from collections.abc import Sequence
from pathlib import Path

from .borda import borda_rule
from .catalog import LemmaId, build_table, check_built, prove_sign_constant, prove_tie, sample_params
from .catalog.families import negative_base
from .consistency import couple, third_margin
from .core import FINITE, MODES, MarginDistribution, parse_election, parse_rational
from .errors import BordaCertError, CapacityError, DomainError, ParseError
from .search import build_problem, classify_solutions, enumerate_solutions, format_solutions
from .tet import m0_distribution, parse_table, read_certificate, replay, validate, write_certificate

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class Report:
    def __init__(self, command: str) -> None:
        self.lines: list[tuple[str, object]] = [("command", command)]
        self.status = "ok"

    def add(self, key: str, value: object) -> None:
        self.lines.append((key, value))

    def render(self, elapsed: float | None) -> str:
        out = [f"{k}={v}" for k, v in self.lines]
        out.insert(1, f"status={self.status}")
        if elapsed is not None:
            out.append(f"elapsed_s={elapsed:.3f}")
        return "\n".join(out) + "\n"


def _vector(k: int, text: str, mode: str) -> MarginDistribution:
    return MarginDistribution.parse(k, text, mode)


def cmd_verify_table(args, rep: Report) -> int:
    tet = parse_table(Path(args.path).read_text())
    report = validate(tet)
    rep.add("k", tet.k)
    rep.add("mode", tet.mode)
    rep.add("rows", tet.m)
    rep.add("columns", tet.t)
    rep.add("valid", str(report.valid).lower())
    rep.add("tying", str(report.tying).lower())
    for v in report.violations:
        rep.add("violation", v)
    if not report.valid:
        rep.status = "violations"
        return EXIT_FALSE
    if not report.tying:
        rep.add("m0", m0_distribution(tet))
    return EXIT_OK


def cmd_verify_catalog(args, rep: Report) -> int:
    lemmas = [LemmaId.parse(args.lemma)] if args.lemma else list(LemmaId)
    rng = random.Random(args.seed)
    rep.add("seed", args.seed)
    total_bad = 0
    for lid in lemmas:
        bad = repaired = 0
        for i in range(args.samples):
            params, notes = sample_params(lid, rng)
            repaired += bool(notes)
            for note in notes:
                rep.add("note", f"{lid} sample {i}: {note}")
            try:
                problems = check_built(build_table(lid, **params))
            except BordaCertError as exc:
                problems = [f"{type(exc).__name__}: {exc}"]
            for p in problems:
                rep.add("violation", f"{lid} sample {i}: {p}")
            bad += bool(problems)
        rep.add(f"lemma.{lid}", f"samples={args.samples} violations={bad} repaired={repaired}")
        total_bad += bad
    rep.add("violations", total_bad)
    if total_bad:
        rep.status = "violations"
        return EXIT_FALSE
    return EXIT_OK


def cmd_search(args, rep: Report) -> int:
    problem = build_problem(args.k, args.n)
    rep.add("k", args.k)
    rep.add("n", args.n)
    rep.add("variables", len(problem.variables))
    rep.add("constraints", len(problem.constraints))
    solutions = enumerate_solutions(problem)
    cls = classify_solutions(solutions)
    rep.add("count", len(solutions))
    for tag in (1, 0, -1):
        rep.add(f"borda.{tag:+d}" if tag else "borda.0", cls.counts[tag])
    rep.add("non_borda", cls.counts["non-Borda"])
    for idx, wit in cls.witnesses:
        rep.add("witness", f"solution {idx + 1}: " + " ".join(f"w={w:+d}@{a}" if w else f"w=0@{a}" for w, a in wit.items()))
    if args.emit_solutions:
        Path(args.emit_solutions).write_text(format_solutions(problem, solutions))
        rep.add("solutions_file", args.emit_solutions)
    if args.k >= 4 and len(solutions) == 3 and cls.all_borda:
        return EXIT_OK
    rep.status = "violations"
    return EXIT_FALSE


def cmd_prove(args, rep: Report) -> int:
    alpha = _vector(args.k, args.alpha, args.mode)
    if args.n is not None and alpha.total != args.n:
        raise DomainError(f"vector has total {alpha.total}, but --n is {args.n}")
    d1 = alpha.margin_sum()
    rep.add("alpha", alpha)
    rep.add("d1", d1)
    if d1 > 0:
        rep.add("note", "positive margin: proving the reflected vector, f(alpha) = -f(reflect(alpha))")
        alpha = alpha.reflect()
        d1 = -d1
    if d1 == 0:
        cert = prove_tie(alpha)
    else:
        if alpha.mode != FINITE:
            raise DomainError("non-zero margins are linked in finite mode only")
        base = negative_base(int(alpha.total))
        if alpha.k > 4:
            base = base.with_k(alpha.k)
        cert = prove_sign_constant(alpha, base)
    write_certificate(cert, args.out)
    result = replay(read_certificate(args.out))
    rep.add("goal", cert.goal)
    rep.add("steps", len(cert.steps))
    for note in cert.notes:
        rep.add("route", note.removeprefix("route "))
    rep.add("out", args.out)
    rep.add("accepted", str(result.accepted).lower())
    if not result.accepted:
        rep.add("failure", result.message)
        rep.status = "violations"
        return EXIT_FALSE
    return EXIT_OK


def cmd_rank(args, rep: Report) -> int:
    election = parse_election(Path(args.path).read_text())
    w = parse_rational(args.w)
    rep.add("k", election.k)
    rep.add("w", args.w)
    rep.add("ranking", borda_rule(election, w))
    return EXIT_OK


def cmd_couple(args, rep: Report) -> int:
    a1, a2 = _vector(args.k, args.alpha1, args.mode), _vector(args.k, args.alpha2, args.mode)
    c = couple(a1, a2)
    rep.add("feasible", str(c is not None).lower())
    if c is None:
        rep.status = "violations"
        return EXIT_FALSE
    for (d1, d2), w in c.cells:
        rep.add("cell", f"({d1},{d2}) {w}")
    rep.add("third", third_margin(c))
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bordacert", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timing", action="store_true", help="append elapsed wall time to the report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-table", parents=[common], help="parse and validate a table file")
    s.add_argument("path")
    s.set_defaults(fn=cmd_verify_table)

    s = sub.add_parser("verify-catalog", parents=[common], help="sample every lemma's hypothesis region and check its table")
    s.add_argument("--lemma", choices=[x.value for x in LemmaId])
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(fn=cmd_verify_catalog)

    s = sub.add_parser("search", parents=[common], help="enumerate consistent relative welfare functions")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--emit-solutions", metavar="FILE")
    s.set_defaults(fn=cmd_search)

    s = sub.add_parser("prove", parents=[common], help="write and replay a certificate for a vector")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--alpha", required=True, help="comma-separated weights, margins ascending")
    s.add_argument("--mode", choices=MODES, default=FINITE)
    s.add_argument("--out", required=True)
    s.set_defaults(fn=cmd_prove)

    s = sub.add_parser("rank", parents=[common], help="Borda ranking of an election file")
    s.add_argument("path")
    s.add_argument("--w", default="1")
    s.set_defaults(fn=cmd_rank)

    s = sub.add_parser("couple", parents=[common], help="couple two margin distributions")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--alpha1", required=True)
    s.add_argument("--alpha2", required=True)
    s.add_argument("--mode", choices=MODES, default=FINITE)
    s.set_defaults(fn=cmd_couple)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    rep = Report(args.command)
    start = time.perf_counter()
    try:
        code = args.fn(args, rep)
    except CapacityError as exc:
        rep.status = "error"
        rep.add("error", f"capacity: {exc}")
        code = EXIT_CAPACITY
    except (ParseError, DomainError, OSError) as exc:
        rep.status = "error"
        rep.add("error", f"{type(exc).__name__}: {exc}")
        code = EXIT_USAGE
    except BordaCertError as exc:
        rep.status = "error"
        rep.add("error", f"{type(exc).__name__}: {exc}")
        code = EXIT_FALSE
    sys.stdout.write(rep.render(time.perf_counter() - start if args.timing else None))
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
