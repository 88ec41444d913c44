"""Weighted Borda scores and relative social welfare tables."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    FINITE,
    MarginDistribution,
    Outcome,
    Weight,
    WeakOrdering,
    WeightedElection,
    all_margin_distributions,
)
from .errors import DomainError

BORDA_PATTERNS: dict[int, str] = {1: "borda", 0: "tie", -1: "reverse-borda"}


def borda_score(election: WeightedElection, i: int, w: Weight = 1) -> Weight:
    """``w * sum_r weight(r) * r(c_i)``."""
    return w * sum(weight * r.rank(i) for r, weight in election.items)


def borda_margin(alpha: MarginDistribution, w: Weight = 1) -> Weight:
    """``d_w(alpha) = w * sum_d d * alpha_d``."""
    return w * alpha.margin_sum()


def sign_outcome(x: Weight) -> Outcome:
    return Outcome.W if x > 0 else Outcome.L if x < 0 else Outcome.T


def borda_rule(election: WeightedElection, w: Weight = 1) -> WeakOrdering:
    """Order candidates by weighted Borda score."""
    return WeakOrdering.from_scores({i: borda_score(election, i, w) for i in range(1, election.k + 1)})


@dataclass(frozen=True)
class RelativeSwfTable:
    """A relative social welfare function: outcome per margin distribution.

    Antisymmetry ``f(rho alpha) = -f(alpha)`` is enforced on construction.
    """

    k: int
    mode: str
    assignments: Mapping[MarginDistribution, Outcome] = field(hash=False)
    n: Weight | None = None

    def __post_init__(self) -> None:
        table = dict(self.assignments)
        for alpha, out in table.items():
            if (alpha.k, alpha.mode) != (self.k, self.mode):
                raise DomainError(f"entry {alpha} does not match k={self.k}, mode={self.mode}")
            mirror = table.get(alpha.reflect())
            if mirror is not None and mirror != -out:
                raise DomainError(f"antisymmetry violated at {alpha}: {out} vs reflected {mirror}")
        object.__setattr__(self, "assignments", table)
        if self.n is None and table:
            object.__setattr__(self, "n", next(iter(table)).total)

    def __getitem__(self, alpha: MarginDistribution) -> Outcome:
        if alpha in self.assignments:
            return self.assignments[alpha]
        mirror = self.assignments.get(alpha.reflect())
        if mirror is None:
            raise KeyError(alpha)
        return -mirror

    def __contains__(self, alpha: object) -> bool:
        return isinstance(alpha, MarginDistribution) and (
            alpha in self.assignments or alpha.reflect() in self.assignments
        )

    def __len__(self) -> int:
        return len(self.assignments)

    def domain(self) -> list[MarginDistribution]:
        """Every distribution the table determines, reflections included."""
        seen = dict.fromkeys(self.assignments)
        for alpha in self.assignments:
            seen.setdefault(alpha.reflect())
        return list(seen)


def borda_pattern_table(k: int, n: int, w: int) -> RelativeSwfTable:
    """The finite table ``alpha -> phi(d_w(alpha))`` on all of ``A'_{k,n}``."""
    return RelativeSwfTable(k, FINITE, {a: sign_outcome(borda_margin(a, w)) for a in all_margin_distributions(k, n)}, n)


def classify_borda_pattern(f: RelativeSwfTable, sampled: bool = False) -> int | None:
    """Return ``w`` in ``{1, 0, -1}`` when ``f`` agrees with ``phi(d_w)``, else ``None``.

    Without ``sampled`` the table must cover all of ``A'_{k,n}`` (finite mode);
    with it, only the entries present are compared.
    """
    if not sampled:
        if f.mode != FINITE:
            raise DomainError("weighted tables can only be classified with sampled=True")
        n = f.n
        if n is None or Fraction(n).denominator != 1:
            raise DomainError("table has no integer total")
        missing = [a for a in all_margin_distributions(f.k, int(n)) if a not in f]
        if missing:
            raise DomainError(f"table is not total on A'_{{{f.k},{n}}}: {len(missing)} entries missing, e.g. {missing[0]}")
    for w in (1, 0, -1):
        if all(sign_outcome(borda_margin(a, w)) == out for a, out in f.assignments.items()):
            return w
    return None
