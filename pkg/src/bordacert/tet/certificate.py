"""Certificates: ordered tables with row provenance, replayed by the kernel alone."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from ..core import FINITE, MarginDistribution
from ..errors import DomainError, IncompleteFactsError, InconsistencyError, ParseError
from .kernel import Conclusion, FactBase, Term, apply, infer
from .table import TransitiveElectionTable, format_table, parse_table, row_distributions

SOURCE_X = "X"
SOURCE_AXIOM = "axiom-tying"


def step_source(m: int) -> str:
    return f"step {m}"


@dataclass(frozen=True)
class Step:
    table: TransitiveElectionTable
    sources: tuple[str, ...]
    claim: str
    note: str = ""


@dataclass(frozen=True)
class Goal:
    """``tie``: ``f(a) = T``. ``link``: ``f(a) = f(b)`` through the live symbol."""

    kind: str
    vectors: tuple[MarginDistribution, ...]

    def __str__(self) -> str:
        return " ".join([self.kind, *map(str, self.vectors)])


@dataclass(frozen=True)
class Certificate:
    k: int
    mode: str
    goal: Goal
    steps: tuple[Step, ...] = ()
    notes: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class ReplayReport:
    accepted: bool
    steps_checked: int
    failed_step: int | None = None
    message: str = ""
    facts: FactBase | None = None


def parse_claim(text: str, k: int, mode: str) -> Conclusion:
    s = text.strip()
    if s in ("X=T", "-X=T"):
        return Conclusion(None, Term.X if s == "X=T" else Term.NEG_X)
    if s == "T=T":
        return Conclusion(None, Term.T)
    vec, sep, value = s.rpartition("=")
    if not sep:
        raise ParseError(f"bad claim {text!r}")
    return Conclusion(MarginDistribution.parse(k, vec, mode), Term.parse(value))


def _same_claim(claimed: Conclusion, derived: Conclusion) -> bool:
    if claimed.tying or derived.tying:
        return claimed.tying and derived.tying and claimed.value.symbolic == derived.value.symbolic
    return claimed == derived


def check_step(facts: FactBase, step: Step, index: int, k: int, mode: str) -> tuple[FactBase, Conclusion]:
    """Verify one step against the facts so far and return the updated facts."""
    tet = step.table
    if (tet.k, tet.mode) != (k, mode):
        raise DomainError(f"table is k={tet.k}, mode={tet.mode}; certificate is k={k}, mode={mode}")
    rows = row_distributions(tet)
    if len(step.sources) != len(rows):
        raise DomainError(f"{len(rows)} rows but {len(step.sources)} sources")
    local = facts
    for i, (alpha, src) in enumerate(zip(rows, step.sources), 1):
        if src == SOURCE_X:
            if facts.anchor is None:
                facts = facts.introduce(alpha, index)
                local = local.introduce(alpha, index)
            elif alpha not in (facts.anchor, facts.anchor.reflect()):
                raise InconsistencyError(f"row x{i} ({alpha}) is not the live anchor {facts.anchor}")
        elif src == SOURCE_AXIOM:
            if not alpha.is_symmetric():
                raise InconsistencyError(f"row x{i} ({alpha}) is not reflection-symmetric")
            if alpha not in local:
                local = local.with_fact(alpha, Term.T, 0)
        else:
            m = re.fullmatch(r"step (\d+)", src)
            if not m:
                raise ParseError(f"unknown row source {src!r}")
            ref = int(m.group(1))
            if ref >= index:
                raise InconsistencyError(f"row x{i} cites step {ref}, which is not earlier than step {index}")
            if facts.provenance(alpha) != ref:
                raise IncompleteFactsError(f"row x{i} ({alpha}) was not established by step {ref}")
    derived = infer(tet, local)
    claimed = parse_claim(step.claim, k, mode)
    if not _same_claim(claimed, derived):
        raise InconsistencyError(f"step claims {step.claim} but the table yields {derived}")
    return apply(facts, derived, index), derived


def goal_holds(goal: Goal, facts: FactBase) -> bool:
    if goal.kind == "tie":
        return facts.lookup(goal.vectors[0]) == Term.T
    if goal.kind == "link":
        a, b = goal.vectors
        if a == b:
            return True
        va, vb = facts.lookup(a), facts.lookup(b)
        return va is not None and va == vb and va.symbolic
    raise DomainError(f"unknown goal {goal.kind!r}")


def replay(cert: Certificate) -> ReplayReport:
    """Check every step in order, then the goal. No search happens here."""
    facts = FactBase()
    for index, step in enumerate(cert.steps, 1):
        try:
            facts, _ = check_step(facts, step, index, cert.k, cert.mode)
        except (DomainError, InconsistencyError, IncompleteFactsError, ParseError) as exc:
            return ReplayReport(False, index - 1, index, str(exc), facts)
    if not goal_holds(cert.goal, facts):
        return ReplayReport(False, len(cert.steps), None, f"goal {cert.goal} not established", facts)
    return ReplayReport(True, len(cert.steps), None, "", facts)


MANIFEST = "manifest.txt"
_STEP_RE = re.compile(r"step (\d+): table (\S+), rows from \[([^\]]*)\], conclude (.+)")


def format_manifest(cert: Certificate, names: list[str]) -> str:
    lines = ["certificate", f"k={cert.k}", f"mode={cert.mode}", f"goal {cert.goal}"]
    lines += [f"# {n}" for n in cert.notes]
    for i, (step, name) in enumerate(zip(cert.steps, names), 1):
        line = f"step {i}: table {name}, rows from [{', '.join(step.sources)}], conclude {step.claim}"
        lines.append(f"{line}  # {step.note}" if step.note else line)
    return "\n".join(lines) + "\n"


def write_certificate(cert: Certificate, directory: str | Path) -> Path:
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    names = [f"step{i:03d}.tet" for i in range(1, len(cert.steps) + 1)]
    for step, name in zip(cert.steps, names):
        (out / name).write_text(format_table(step.table))
    (out / MANIFEST).write_text(format_manifest(cert, names))
    return out / MANIFEST


def read_certificate(directory: str | Path) -> Certificate:
    base = Path(directory)
    text = (base / MANIFEST).read_text()
    header: dict[str, str] = {}
    goal_text = None
    steps: list[Step] = []
    notes: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, comment = raw.partition("#")
        line = line.strip()
        if not line:
            if comment.strip() and not steps:
                notes.append(comment.strip())
            continue
        if line == "certificate":
            continue
        if line.startswith("goal "):
            goal_text = line[5:]
            continue
        m = _STEP_RE.fullmatch(line)
        if m:
            if int(m.group(1)) != len(steps) + 1:
                raise ParseError(f"steps out of order: expected {len(steps) + 1}", line=lineno)
            sources = tuple(s.strip() for s in m.group(3).split(",") if s.strip())
            table = parse_table((base / m.group(2)).read_text())
            steps.append(Step(table, sources, m.group(4).strip(), comment.strip()))
            continue
        key, sep, value = line.partition("=")
        if sep and key.strip() in ("k", "mode"):
            header[key.strip()] = value.strip()
            continue
        raise ParseError(f"unrecognised manifest line {raw!r}", line=lineno)
    if "k" not in header or goal_text is None:
        raise ParseError("manifest needs k= and goal lines")
    k, mode = int(header["k"]), header.get("mode", FINITE)
    kind, *vecs = goal_text.split()
    goal = Goal(kind, tuple(MarginDistribution.parse(k, v, mode) for v in vecs))
    return Certificate(k, mode, goal, tuple(steps), tuple(notes))
