"""Transitive election tables: weights, a margin matrix and a parenthesization.

A table ``(w, M, P)`` has ``m`` rows and ``t`` weighted columns. Row ``i``
describes the margin distribution ``alpha(w, M_i)``; the column sums ``M0``
describe the distribution the table concludes about.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from ..core import (
    FINITE,
    MODES,
    MarginDistribution,
    Weight,
    format_rational,
    in_margin_set,
    normalize_weight,
    parse_rational,
)
from ..errors import DomainError, ParseError
from .paren import Leaf, Node, ParenTree, internal_nodes, leaves, parse_paren


def _coerce(x: Weight, mode: str) -> Weight:
    q = Fraction(x)
    return int(q) if mode == FINITE and q.denominator == 1 else q


@dataclass(frozen=True)
class TransitiveElectionTable:
    k: int
    mode: str
    w: tuple[Weight, ...]
    M: tuple[tuple[int, ...], ...]
    P: ParenTree | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise DomainError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "w", tuple(_coerce(x, self.mode) for x in self.w))
        object.__setattr__(self, "M", tuple(tuple(int(v) for v in row) for row in self.M))
        if not self.M:
            raise DomainError("table has no rows")
        for i, row in enumerate(self.M, 1):
            if len(row) != len(self.w):
                raise DomainError(f"row {i} has {len(row)} entries, expected {len(self.w)}")
        if self.P is not None and leaves(self.P) != list(range(1, len(self.M) + 1)):
            raise DomainError(f"parenthesization leaves do not match {len(self.M)} rows")

    @property
    def m(self) -> int:
        return len(self.M)

    @property
    def t(self) -> int:
        return len(self.w)

    def m0(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.M)) if self.t else ()

    def is_tying(self) -> bool:
        return all(v == 0 for v in self.m0())

    def total(self) -> Weight:
        return sum(self.w, 0 if self.mode == FINITE else Fraction(0))

    def tree(self) -> ParenTree:
        """``P``, or the synthesized one where it may be omitted."""
        if self.P is not None:
            return self.P
        if self.m == 1:
            return Leaf(1)
        if self.m == 2 or (self.m == 3 and self.is_tying()):
            return Node(Node(Leaf(1), Leaf(2)), Leaf(3)) if self.m == 3 else Node(Leaf(1), Leaf(2))
        raise DomainError(f"table with {self.m} rows needs an explicit parenthesization")

    def node_sum(self, span: tuple[int, int]) -> tuple[int, ...]:
        lo, hi = span
        return tuple(sum(col[lo - 1 : hi]) for col in zip(*self.M))

    def with_k(self, k: int) -> TransitiveElectionTable:
        return TransitiveElectionTable(k, self.mode, self.w, self.M, self.P)

    def without_empty_columns(self) -> TransitiveElectionTable:
        keep = [c for c, x in enumerate(self.w) if x != 0]
        return TransitiveElectionTable(
            self.k, self.mode, tuple(self.w[c] for c in keep), tuple(tuple(row[c] for c in keep) for row in self.M), self.P
        )

    def grouped(self) -> TransitiveElectionTable:
        """Merge identical columns and drop zero weights; column order is first appearance."""
        merged: dict[tuple[int, ...], Weight] = {}
        for c, x in enumerate(self.w):
            if x:
                col = tuple(row[c] for row in self.M)
                merged[col] = merged.get(col, 0) + x
        cols = list(merged)
        return TransitiveElectionTable(
            self.k, self.mode, tuple(merged[c] for c in cols), tuple(tuple(c[i] for c in cols) for i in range(self.m)), self.P
        )

    def append_row(self, row: Sequence[int], P: ParenTree | None = None) -> TransitiveElectionTable:
        return TransitiveElectionTable(self.k, self.mode, self.w, self.M + (tuple(row),), P)


def _distribution(k: int, mode: str, w: Sequence[Weight], values: Sequence[int]) -> MarginDistribution:
    counts: dict[int, Weight] = {}
    for x, d in zip(w, values):
        if x:
            counts[d] = counts.get(d, 0) + x
    return MarginDistribution.from_mapping(k, counts, mode)


def row_distribution(tet: TransitiveElectionTable, i: int) -> MarginDistribution:
    """``alpha(w, M_i)`` for 1-based row ``i``."""
    if not 1 <= i <= tet.m:
        raise DomainError(f"row {i} out of range 1..{tet.m}")
    return _distribution(tet.k, tet.mode, tet.w, tet.M[i - 1])


def row_distributions(tet: TransitiveElectionTable) -> list[MarginDistribution]:
    return [row_distribution(tet, i) for i in range(1, tet.m + 1)]


def m0_distribution(tet: TransitiveElectionTable) -> MarginDistribution:
    if tet.is_tying():
        raise DomainError("tying table has no M0 distribution")
    return _distribution(tet.k, tet.mode, tet.w, tet.m0())


@dataclass(frozen=True)
class Violation:
    kind: str
    where: str
    column: int | None = None
    detail: str = ""

    def __str__(self) -> str:
        col = f" column {self.column}" if self.column is not None else ""
        return f"{self.kind} at {self.where}{col}: {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    tying: bool
    violations: tuple[Violation, ...] = field(default=())
    m0: tuple[int, ...] = ()


def _span_name(span: tuple[int, int]) -> str:
    return f"x{span[0]}" if span[0] == span[1] else f"x{span[0]}..x{span[1]}"


def validate(tet: TransitiveElectionTable) -> ValidationReport:
    """Check weights, entries, every inner node sum and ``M0``; list each failure."""
    out: list[Violation] = []
    k = tet.k
    for c, x in enumerate(tet.w, 1):
        if x < 0:
            out.append(Violation("weight", "w", c, f"negative weight {format_rational(x)}"))
        elif tet.mode == FINITE and Fraction(x).denominator != 1:
            out.append(Violation("weight", "w", c, f"finite mode needs integers, got {format_rational(x)}"))
    total = tet.total()
    if tet.mode == FINITE:
        if total <= 0:
            out.append(Violation("weight", "w", None, f"weights sum to {format_rational(total)}, need a positive total"))
    elif total != 1:
        out.append(Violation("weight", "w", None, f"weights sum to {format_rational(total)}, need 1"))
    for i, row in enumerate(tet.M, 1):
        for c, v in enumerate(row, 1):
            if not in_margin_set(v, k):
                out.append(Violation("entry", f"x{i}", c, f"{v} not in D_{k}"))
    m0 = tet.m0()
    tying = tet.t > 0 and all(v == 0 for v in m0)
    if tet.m < 2:
        out.append(Violation("shape", "M", None, "a table needs at least two rows"))
    tree: ParenTree | None = tet.P
    if tree is None:
        if tet.m == 2 or (tet.m == 3 and tying):
            tree = tet.tree()
        elif tet.m > 2:
            out.append(Violation("parenthesization", "P", None, f"{tet.m} rows need an explicit P"))
    if tree is not None and tet.m >= 2:
        root = tree.span
        for node in internal_nodes(tree):
            if node.span == root:
                continue
            for c, v in enumerate(tet.node_sum(node.span), 1):
                if not in_margin_set(v, k):
                    out.append(Violation("node", _span_name(node.span), c, f"sum {v} not in D_{k}"))
    if not tying:
        for c, v in enumerate(m0, 1):
            if not in_margin_set(v, k):
                out.append(Violation("M0", "root", c, f"sum {v} not in D_{k} and M0 is not identically zero"))
    return ValidationReport(not out, tying, tuple(out), m0)


def format_table(tet: TransitiveElectionTable) -> str:
    lines = [f"k={tet.k}", f"mode={tet.mode}", "w=[" + ",".join(format_rational(x) for x in tet.w) + "]"]
    if tet.P is not None:
        lines.append(f"P={tet.P}")
    for row in tet.M:
        lines.append("M=[" + ",".join(str(v) for v in row) + "]")
    return "\n".join(lines) + "\n"


def _bracket_list(text: str, lineno: int) -> list[str]:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("expected a bracketed list", line=lineno)
    inner = s[1:-1].strip()
    return [p.strip() for p in inner.split(",")] if inner else []


def parse_table(text: str) -> TransitiveElectionTable:
    """Parse the ``k= / mode= / w= / P= / M=`` line format; ``#`` starts a comment."""
    fields: dict[str, tuple[str, int]] = {}
    rows: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ParseError(f"expected key=value, got {raw!r}", line=lineno)
        if key == "M":
            try:
                row = tuple(int(v) for v in _bracket_list(value, lineno))
            except ValueError:
                raise ParseError("M entries must be integers", line=lineno) from None
            if 0 in row:
                raise ParseError("M entries must be non-zero margins", line=lineno)
            rows.append(row)
        elif key in ("k", "mode", "w", "P"):
            if key in fields:
                raise ParseError(f"duplicate field {key}", line=lineno)
            fields[key] = (value.strip(), lineno)
        else:
            raise ParseError(f"unknown field {key!r}", line=lineno)
    for key in ("k", "mode", "w"):
        if key not in fields:
            raise ParseError(f"missing field {key}")
    k_text, k_line = fields["k"]
    try:
        k = int(k_text)
    except ValueError:
        raise ParseError(f"bad k {k_text!r}", line=k_line) from None
    if k < 2:
        raise ParseError("k must be at least 2", line=k_line)
    mode, mode_line = fields["mode"]
    if mode not in MODES:
        raise ParseError(f"bad mode {mode!r}", line=mode_line)
    w_text, w_line = fields["w"]
    try:
        w = tuple(normalize_weight(parse_rational(x), mode) for x in _bracket_list(w_text, w_line))
    except ParseError as exc:
        raise ParseError(str(exc), line=w_line) from None
    except DomainError as exc:
        raise ParseError(str(exc), line=w_line) from None
    if not rows:
        raise ParseError("table has no M rows")
    for i, row in enumerate(rows, 1):
        if len(row) != len(w):
            raise ParseError(f"M row {i} has {len(row)} entries, w has {len(w)}")
    P = None
    if "P" in fields:
        p_text, p_line = fields["P"]
        try:
            P = parse_paren(p_text, len(rows))
        except ParseError as exc:
            raise ParseError(f"P: {exc}", line=p_line) from None
    return TransitiveElectionTable(k, mode, w, tuple(rows), P)
