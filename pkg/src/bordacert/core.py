"""Rankings, weighted elections and their pairwise margin distributions.

Weights are exact rationals. In ``finite`` mode they are non-negative integers
that sum to the number of voters ``n``; in ``weighted`` mode they are
non-negative fractions summing to one.

A margin distribution over ``D_k = {±1, ..., ±(k-1)}`` is stored in the
canonical ascending order ``1-k, ..., -1, 1, ..., k-1``.
"""

from __future__ import annotations

import itertools
import math
import re
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Union

from .errors import DomainError, ParseError

Weight = Union[int, Fraction]

FINITE = "finite"
WEIGHTED = "weighted"
MODES = (FINITE, WEIGHTED)


class Outcome(IntEnum):
    """Pairwise comparison result, ordered ``L < T < W``."""

    L = -1
    T = 0
    W = 1

    def __neg__(self) -> Outcome:
        return Outcome(-int(self))

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, text: str) -> Outcome:
        try:
            return cls[text.strip()]
        except KeyError:
            raise ParseError(f"unknown outcome {text!r}") from None


def margin_values(k: int) -> tuple[int, ...]:
    """``D_k`` in canonical ascending order."""
    if k < 2:
        raise DomainError(f"need at least two candidates, got k={k}")
    return tuple(range(1 - k, 0)) + tuple(range(1, k))


def in_margin_set(d: int, k: int) -> bool:
    return d != 0 and -k < d < k


_RATIONAL = re.compile(r"([+-]?\d+)(?:/(\d+))?")


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q``."""
    m = _RATIONAL.fullmatch(text.strip())
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise ParseError(f"not a rational: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def format_rational(x: Weight) -> str:
    q = Fraction(x)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def normalize_weight(x: Weight | str, mode: str) -> Weight:
    """Coerce a weight to ``int`` (finite) or ``Fraction`` (weighted)."""
    q = parse_rational(x) if isinstance(x, str) else Fraction(x)
    if q < 0:
        raise DomainError(f"negative weight {format_rational(q)}")
    if mode == FINITE:
        if q.denominator != 1:
            raise DomainError(f"finite mode needs integer weights, got {format_rational(q)}")
        return int(q)
    if mode == WEIGHTED:
        return q
    raise DomainError(f"unknown mode {mode!r}")


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise DomainError(f"unknown mode {mode!r}")


def _check_total(total: Weight, mode: str) -> None:
    if mode == WEIGHTED and total != 1:
        raise DomainError(f"weighted mode needs total 1, got {format_rational(total)}")


@dataclass(frozen=True, order=True)
class Ranking:
    """A strict ranking stored as ranks: ``positions[i]`` is the rank of ``c_{i+1}``.

    The top candidate has rank ``k-1`` and the bottom one rank ``0``.
    """

    positions: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.positions) != list(range(len(self.positions))):
            raise DomainError(f"not a permutation of ranks: {self.positions}")

    @property
    def k(self) -> int:
        return len(self.positions)

    @classmethod
    def from_order(cls, order: Sequence[int]) -> Ranking:
        """Build from candidate indices listed best first (1-based)."""
        k = len(order)
        if sorted(order) != list(range(1, k + 1)):
            raise DomainError(f"not an ordering of 1..{k}: {tuple(order)}")
        positions = [0] * k
        for place, c in enumerate(order):
            positions[c - 1] = k - 1 - place
        return cls(tuple(positions))

    def order(self) -> tuple[int, ...]:
        """Candidate indices best first."""
        return tuple(sorted(range(1, self.k + 1), key=lambda c: -self.positions[c - 1]))

    def rank(self, i: int) -> int:
        if not 1 <= i <= self.k:
            raise DomainError(f"candidate index {i} out of range 1..{self.k}")
        return self.positions[i - 1]

    def relabel(self, sigma: Sequence[int]) -> Ranking:
        """Move candidate ``c`` to ``sigma[c-1]``, keeping its rank."""
        positions = [0] * self.k
        for c, target in enumerate(sigma):
            positions[target - 1] = self.positions[c]
        return Ranking(tuple(positions))

    def __str__(self) -> str:
        return " ".join(map(str, self.order()))


def all_rankings(k: int) -> tuple[Ranking, ...]:
    return tuple(Ranking.from_order(p) for p in itertools.permutations(range(1, k + 1)))


@dataclass(frozen=True)
class WeakOrdering:
    """A total preorder as tiers of candidate indices, best tier first."""

    tiers: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        flat = sorted(c for tier in self.tiers for c in tier)
        if flat != list(range(1, len(flat) + 1)) or any(not t for t in self.tiers):
            raise DomainError(f"tiers do not partition the candidates: {self.tiers}")
        object.__setattr__(self, "tiers", tuple(tuple(sorted(t)) for t in self.tiers))

    @property
    def k(self) -> int:
        return sum(len(t) for t in self.tiers)

    @classmethod
    def from_scores(cls, scores: Mapping[int, Weight]) -> WeakOrdering:
        """Group candidates by score, highest first."""
        levels = sorted(set(scores.values()), reverse=True)
        return cls(tuple(tuple(c for c in sorted(scores) if scores[c] == s) for s in levels))

    def tier_of(self, i: int) -> int:
        for idx, tier in enumerate(self.tiers):
            if i in tier:
                return idx
        raise DomainError(f"candidate index {i} out of range 1..{self.k}")

    def relation(self, i: int, j: int) -> Outcome:
        """Outcome of ``c_i`` against ``c_j``."""
        a, b = self.tier_of(i), self.tier_of(j)
        return Outcome.W if a < b else Outcome.L if a > b else Outcome.T

    def relabel(self, sigma: Sequence[int]) -> WeakOrdering:
        return WeakOrdering(tuple(tuple(sigma[c - 1] for c in tier) for tier in self.tiers))

    def __str__(self) -> str:
        return " > ".join("~".join(map(str, t)) for t in self.tiers)


@dataclass(frozen=True)
class WeightedElection:
    """A weighted multiset of rankings on ``k`` candidates.

    ``items`` is kept sorted and free of zero weights so equal elections
    compare and hash equal.
    """

    k: int
    items: tuple[tuple[Ranking, Weight], ...]
    mode: str = FINITE

    def __post_init__(self) -> None:
        _check_mode(self.mode)
        merged: dict[Ranking, Weight] = {}
        for r, w in self.items:
            if r.k != self.k:
                raise DomainError(f"ranking {r} has {r.k} candidates, expected {self.k}")
            merged[r] = merged.get(r, 0) + normalize_weight(w, self.mode)
        cleaned = tuple(sorted((r, w) for r, w in merged.items() if w != 0))
        object.__setattr__(self, "items", cleaned)
        if not cleaned:
            raise DomainError("election has no positive weight")
        _check_total(self.total, self.mode)

    @classmethod
    def from_weights(cls, k: int, weights: Mapping[Ranking, Weight], mode: str = FINITE) -> WeightedElection:
        return cls(k, tuple(weights.items()), mode)

    @classmethod
    def from_ballots(cls, ballots: Iterable[Sequence[int]]) -> WeightedElection:
        """Anonymize a list of best-first ballots into a finite election."""
        counts: dict[Ranking, int] = {}
        for b in ballots:
            r = Ranking.from_order(b)
            counts[r] = counts.get(r, 0) + 1
        if not counts:
            raise DomainError("no ballots")
        ks = {r.k for r in counts}
        if len(ks) != 1:
            raise DomainError("ballots rank different numbers of candidates")
        return cls(ks.pop(), tuple(counts.items()), FINITE)

    @property
    def weights(self) -> dict[Ranking, Weight]:
        return dict(self.items)

    @property
    def total(self) -> Weight:
        return sum((w for _, w in self.items), 0 if self.mode == FINITE else Fraction(0))

    def relabel(self, sigma: Sequence[int]) -> WeightedElection:
        return WeightedElection(self.k, tuple((r.relabel(sigma), w) for r, w in self.items), self.mode)


@dataclass(frozen=True)
class MarginDistribution:
    """Weights on ``D_k`` in canonical ascending order."""

    k: int
    weights: tuple[Weight, ...]
    mode: str = FINITE

    def __post_init__(self) -> None:
        _check_mode(self.mode)
        if len(self.weights) != 2 * (self.k - 1):
            raise DomainError(f"expected {2 * (self.k - 1)} entries for k={self.k}, got {len(self.weights)}")
        ws = tuple(normalize_weight(w, self.mode) for w in self.weights)
        object.__setattr__(self, "weights", ws)
        _check_total(self.total, self.mode)

    @classmethod
    def from_mapping(cls, k: int, mapping: Mapping[int, Weight], mode: str = FINITE) -> MarginDistribution:
        ds = margin_values(k)
        for d in mapping:
            if d not in ds:
                raise DomainError(f"margin {d} not in D_{k}")
        return cls(k, tuple(mapping.get(d, 0) for d in ds), mode)

    @classmethod
    def from_margins(cls, k: int, margins: Iterable[int], mode: str = FINITE) -> MarginDistribution:
        """Count a list of margins (one per unit-weight voter)."""
        counts: dict[int, int] = {}
        for d in margins:
            counts[d] = counts.get(d, 0) + 1
        return cls.from_mapping(k, counts, mode)

    @classmethod
    def from_descending(cls, k: int, values: Sequence[Weight], mode: str = FINITE) -> MarginDistribution:
        """Build from weights listed for ``k-1, ..., 1, -1, ..., 1-k``."""
        return cls(k, tuple(reversed(tuple(values))), mode)

    def descending(self) -> tuple[Weight, ...]:
        return tuple(reversed(self.weights))

    def __getitem__(self, d: int) -> Weight:
        if not in_margin_set(d, self.k):
            raise DomainError(f"margin {d} not in D_{self.k}")
        return self.weights[d + self.k - 1 if d < 0 else d + self.k - 2]

    def items(self) -> Iterator[tuple[int, Weight]]:
        return zip(margin_values(self.k), self.weights)

    def support(self) -> tuple[int, ...]:
        return tuple(d for d, w in self.items() if w)

    @property
    def total(self) -> Weight:
        return sum(self.weights, 0 if self.mode == FINITE else Fraction(0))

    def margin_sum(self) -> Weight:
        """``sum_d d * alpha_d``: the Borda margin at unit weight."""
        return sum((d * w for d, w in self.items()), 0 if self.mode == FINITE else Fraction(0))

    def reflect(self) -> MarginDistribution:
        return MarginDistribution(self.k, tuple(reversed(self.weights)), self.mode)

    def is_symmetric(self) -> bool:
        return self.weights == tuple(reversed(self.weights))

    def with_k(self, k: int) -> MarginDistribution:
        """Re-embed into ``D_k``; shrinking requires the dropped entries to be zero."""
        return MarginDistribution.from_mapping(k, {d: w for d, w in self.items() if w or in_margin_set(d, k)}, self.mode)

    def __add__(self, other: MarginDistribution) -> MarginDistribution:
        if not isinstance(other, MarginDistribution):
            return NotImplemented
        if (self.k, self.mode) != (other.k, other.mode) or self.mode != FINITE:
            raise DomainError("only finite distributions over the same D_k can be added")
        return MarginDistribution(self.k, tuple(a + b for a, b in zip(self.weights, other.weights)), self.mode)

    def __str__(self) -> str:
        return ",".join(format_rational(w) for w in self.weights)

    @classmethod
    def parse(cls, k: int, text: str, mode: str = FINITE) -> MarginDistribution:
        """Parse comma-separated weights in canonical order."""
        parts = [p for p in text.replace(" ", "").split(",") if p]
        return cls(k, tuple(parse_rational(p) for p in parts), mode)


@dataclass(frozen=True)
class MarginProfile:
    """One margin per voter: the finite-mode preimage of a distribution."""

    k: int
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        for d in self.values:
            if not in_margin_set(d, self.k):
                raise DomainError(f"margin {d} not in D_{self.k}")

    @property
    def n(self) -> int:
        return len(self.values)

    def distribution(self) -> MarginDistribution:
        return MarginDistribution.from_margins(self.k, self.values)

    @classmethod
    def canonical(cls, alpha: MarginDistribution) -> MarginProfile:
        """Entries in descending margin order."""
        if alpha.mode != FINITE:
            raise DomainError("profiles exist only in finite mode")
        values: list[int] = []
        for d, w in zip(reversed(margin_values(alpha.k)), alpha.descending()):
            values.extend([d] * w)
        return cls(alpha.k, tuple(values))


def project_margin(r: Ranking, i: int, j: int) -> int:
    """``pi_{i,j}(r) = r(c_i) - r(c_j)``."""
    if i == j:
        raise DomainError("projection needs two distinct candidates")
    return r.rank(i) - r.rank(j)


def project_election(election: WeightedElection, i: int, j: int) -> MarginDistribution:
    """Push the election's weights forward through ``pi_{i,j}``."""
    counts: dict[int, Weight] = {}
    for r, w in election.items:
        d = project_margin(r, i, j)
        counts[d] = counts.get(d, 0) + w
    return MarginDistribution.from_mapping(election.k, counts, election.mode)


def reflect(alpha: MarginDistribution) -> MarginDistribution:
    """``(rho alpha)_d = alpha_{-d}``."""
    return alpha.reflect()


def majorizes(a: MarginDistribution, b: MarginDistribution) -> bool:
    """True when every upper tail of ``a`` carries at least the weight of ``b``'s."""
    if (a.k, a.mode) != (b.k, b.mode) or a.total != b.total:
        raise DomainError("majorization compares distributions of the same k, mode and total")
    tail_a = tail_b = 0
    for wa, wb in zip(reversed(a.weights), reversed(b.weights)):
        tail_a += wa
        tail_b += wb
        if tail_a < tail_b:
            return False
    return True


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Non-negative integer vectors of length ``parts`` summing to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def count_compositions(total: int, parts: int) -> int:
    return math.comb(total + parts - 1, parts - 1)


def all_margin_distributions(k: int, n: int) -> Iterator[MarginDistribution]:
    """Every finite distribution on ``D_k`` with total ``n``, in a fixed order."""
    for c in compositions(n, 2 * (k - 1)):
        yield MarginDistribution(k, c, FINITE)


def all_elections(k: int, n: int) -> Iterator[WeightedElection]:
    rankings = all_rankings(k)
    for c in compositions(n, len(rankings)):
        yield WeightedElection(k, tuple((r, w) for r, w in zip(rankings, c) if w), FINITE)


SocialWelfareFunction = Callable[[WeightedElection], WeakOrdering]


@dataclass(frozen=True)
class AxiomReport:
    miia: bool
    neutral: bool
    relative_swf: dict | None
    """Per ordered pair ``(i, j)``: the induced table ``alpha -> outcome`` (when MIIA holds)."""
    shared_swf: dict | None
    """The single table all pairs induce, when they coincide."""
    witness: str | None = None


MAX_AXIOM_K = 4
MAX_AXIOM_N = 3


def check_axioms(F: SocialWelfareFunction | Mapping, k: int, n: int) -> AxiomReport:
    """Test margin-based IIA and neutrality by full enumeration of the finite domain."""
    if not (2 <= k <= MAX_AXIOM_K and 1 <= n <= MAX_AXIOM_N):
        raise DomainError(f"axiom check enumerates k<={MAX_AXIOM_K}, n<={MAX_AXIOM_N}; got k={k}, n={n}")
    rule = F.__getitem__ if isinstance(F, Mapping) else F
    elections = list(all_elections(k, n))
    results: dict[WeightedElection, WeakOrdering] = {}
    for e in elections:
        try:
            results[e] = rule(e)
        except KeyError:
            raise DomainError("social welfare function is not defined on the whole domain") from None

    pairs = [(i, j) for i in range(1, k + 1) for j in range(1, k + 1) if i != j]
    tables: dict[tuple[int, int], dict[MarginDistribution, Outcome]] = {}
    miia = True
    witness = None
    for i, j in pairs:
        table: dict[MarginDistribution, Outcome] = {}
        for e in elections:
            alpha = project_election(e, i, j)
            out = results[e].relation(i, j)
            seen = table.setdefault(alpha, out)
            if seen != out and miia:
                miia = False
                witness = f"pair ({i},{j}) margin {alpha} gives both {seen} and {out}"
        tables[(i, j)] = table

    neutral = True
    for sigma in itertools.permutations(range(1, k + 1)):
        for e in elections:
            if results[e.relabel(sigma)] != results[e].relabel(sigma):
                neutral = False
                break
        if not neutral:
            break

    if not miia:
        return AxiomReport(False, neutral, None, None, witness)
    first = tables[pairs[0]]
    shared = first if all(t == first for t in tables.values()) else None
    return AxiomReport(True, neutral, tables, shared, None)


def parse_election(text: str) -> WeightedElection:
    """Read the ``k=/mode=/total=`` header followed by ``"<order>" = <weight>`` lines."""
    header: dict[str, str] = {}
    weights: dict[Ranking, Weight] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith('"'):
            close = line.find('"', 1)
            if close < 0 or "=" not in line[close:]:
                raise ParseError("expected '\"<order>\" = <weight>'", line=lineno)
            try:
                order = [int(t) for t in line[1:close].split()]
                r = Ranking.from_order(order)
            except (ValueError, DomainError) as exc:
                raise ParseError(f"bad ranking: {exc}", line=lineno) from None
            value = parse_rational(line[close + 1 :].split("=", 1)[1])
            if r in weights:
                raise ParseError(f"ranking {r} listed twice", line=lineno)
            weights[r] = value
            continue
        key, sep, value = line.partition("=")
        if not sep or key.strip() not in ("k", "mode", "total"):
            raise ParseError(f"unrecognised line {raw!r}", line=lineno)
        header[key.strip()] = value.strip()
    for key in ("k", "mode", "total"):
        if key not in header:
            raise ParseError(f"missing header field {key}")
    try:
        k = int(header["k"])
    except ValueError:
        raise ParseError(f"bad k {header['k']!r}") from None
    mode = header["mode"]
    if mode not in MODES:
        raise ParseError(f"bad mode {mode!r}")
    try:
        election = WeightedElection.from_weights(k, weights, mode)
    except DomainError as exc:
        raise ParseError(str(exc)) from None
    if election.total != parse_rational(header["total"]):
        raise ParseError(f"weights sum to {format_rational(election.total)}, header says {header['total']}")
    return election


def format_election(election: WeightedElection) -> str:
    lines = [f"k={election.k}", f"mode={election.mode}", f"total={format_rational(election.total)}"]
    for r, w in election.items:
        lines.append(f'"{r}" = {format_rational(w)}')
    return "\n".join(lines) + "\n"
