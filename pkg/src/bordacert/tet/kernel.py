"""The inference kernel: fold a table's parenthesization over known facts.

Facts assign each margin distribution one of ``W, T, L`` or the symbolic
``X`` / ``-X``. At most one symbol is live at a time; it stands for the
value of its anchor distribution and can be bound to ``T`` by a tying table.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType

from ..core import MarginDistribution, Outcome
from ..errors import DomainError, IncompleteFactsError, InconsistencyError
from .paren import Leaf, Node, ParenTree
from .table import TransitiveElectionTable, m0_distribution, row_distributions, validate


class Term(Enum):
    W = "W"
    T = "T"
    L = "L"
    X = "X"
    NEG_X = "-X"

    def __neg__(self) -> Term:
        return _NEG[self]

    def __str__(self) -> str:
        return self.value

    @property
    def symbolic(self) -> bool:
        return self in (Term.X, Term.NEG_X)

    @classmethod
    def of(cls, outcome: Outcome) -> Term:
        return cls[outcome.name]

    @classmethod
    def parse(cls, text: str) -> Term:
        for t in cls:
            if t.value == text.strip():
                return t
        raise DomainError(f"unknown term {text!r}")


_NEG = {Term.W: Term.L, Term.L: Term.W, Term.T: Term.T, Term.X: Term.NEG_X, Term.NEG_X: Term.X}


def combine(a: Term, b: Term) -> Term | None:
    """The value forced on a sum of two margins, or ``None`` when nothing follows.

    ``Y`` results when ``{Y} <= {a, b} <= {Y, T}``.
    """
    if a == b:
        return a
    if a == Term.T:
        return b
    if b == Term.T:
        return a
    return None


@dataclass(frozen=True)
class FactBase:
    """Immutable map from distributions to terms, with the live anchor if any.

    Lookups see through reflection: ``f(rho alpha) = -f(alpha)``.
    ``origin`` records the step that established each fact.
    """

    facts: Mapping[MarginDistribution, Term] = field(default_factory=dict)
    origin: Mapping[MarginDistribution, int] = field(default_factory=dict)
    anchor: MarginDistribution | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "facts", MappingProxyType(dict(self.facts)))
        object.__setattr__(self, "origin", MappingProxyType(dict(self.origin)))

    def _key(self, alpha: MarginDistribution) -> tuple[MarginDistribution, bool] | None:
        if alpha in self.facts:
            return alpha, False
        r = alpha.reflect()
        if r in self.facts:
            return r, True
        return None

    def lookup(self, alpha: MarginDistribution) -> Term | None:
        hit = self._key(alpha)
        if hit is None:
            return None
        key, flipped = hit
        value = self.facts[key]
        return -value if flipped else value

    def provenance(self, alpha: MarginDistribution) -> int | None:
        hit = self._key(alpha)
        return None if hit is None else self.origin.get(hit[0])

    def __contains__(self, alpha: object) -> bool:
        return isinstance(alpha, MarginDistribution) and self._key(alpha) is not None

    def __len__(self) -> int:
        return len(self.facts)

    def with_fact(self, alpha: MarginDistribution, value: Term, step: int) -> FactBase:
        current = self.lookup(alpha)
        if current is not None:
            if current != value:
                raise InconsistencyError(f"{alpha} is already {current}, cannot also be {value}")
            return self
        if value.symbolic and self.anchor is None:
            raise InconsistencyError("symbolic fact without a live anchor")
        facts, origin = dict(self.facts), dict(self.origin)
        facts[alpha], origin[alpha] = value, step
        return FactBase(facts, origin, self.anchor)

    def introduce(self, alpha: MarginDistribution, step: int) -> FactBase:
        """Start a symbolic session: ``f(alpha) = X``."""
        if self.anchor is not None:
            raise InconsistencyError(f"a symbol is already live (anchor {self.anchor})")
        if alpha in self:
            raise InconsistencyError(f"{alpha} already has value {self.lookup(alpha)}")
        facts, origin = dict(self.facts), dict(self.origin)
        facts[alpha], origin[alpha] = Term.X, step
        return FactBase(facts, origin, alpha)

    def bind_true(self, step: int) -> FactBase:
        """Substitute ``X = T`` everywhere and close the session."""
        if self.anchor is None:
            raise InconsistencyError("no live symbol to bind")
        facts = {a: (Term.T if v.symbolic else v) for a, v in self.facts.items()}
        origin = dict(self.origin)
        origin[self.anchor] = step
        return FactBase(facts, origin, None)


@dataclass(frozen=True)
class Conclusion:
    """Either ``f(vector) = value`` or, for a tying table, ``value = T``."""

    vector: MarginDistribution | None
    value: Term

    @property
    def tying(self) -> bool:
        return self.vector is None

    @property
    def binds(self) -> bool:
        return self.tying and self.value.symbolic

    def __str__(self) -> str:
        if self.tying:
            return "X=T" if self.value.symbolic else f"{self.value}=T"
        return f"{self.vector} = {self.value}"


def _fold(tree: ParenTree, values: list[Term]) -> Term:
    if isinstance(tree, Leaf):
        return values[tree.index - 1]
    assert isinstance(tree, Node)
    a, b = _fold(tree.left, values), _fold(tree.right, values)
    out = combine(a, b)
    if out is None:
        lo, hi = tree.span
        raise InconsistencyError(f"node x{lo}..x{hi} combines {a} with {b}: no value follows")
    return out


def _tying_trees(tet: TransitiveElectionTable) -> list[ParenTree]:
    if tet.P is not None:
        return [tet.P]
    if tet.m == 3:
        return [
            Node(Node(Leaf(1), Leaf(2)), Leaf(3)),
            Node(Leaf(1), Node(Leaf(2), Leaf(3))),
        ]
    return [tet.tree()]


def row_terms(tet: TransitiveElectionTable, facts: FactBase) -> list[Term]:
    terms = []
    for i, alpha in enumerate(row_distributions(tet), 1):
        t = facts.lookup(alpha)
        if t is None:
            raise IncompleteFactsError(f"row x{i} ({alpha}) has no known value")
        terms.append(t)
    return terms


def infer(tet: TransitiveElectionTable, facts: FactBase) -> Conclusion:
    """What ``tet`` forces given the row facts.

    A non-tying table yields ``f(alpha(w, M0))``. A tying one forces its
    root value to be ``T``; when that value is symbolic this binds ``X = T``.
    """
    report = validate(tet)
    if not report.valid:
        raise DomainError("table is not a valid transitive election table: " + "; ".join(map(str, report.violations)))
    values = row_terms(tet, facts)
    if not report.tying:
        return Conclusion(m0_distribution(tet), _fold(tet.tree(), values))
    last: InconsistencyError | None = None
    for tree in _tying_trees(tet):
        try:
            root = _fold(tree, values)
        except InconsistencyError as exc:
            last = exc
            continue
        if root in (Term.W, Term.L):
            raise InconsistencyError(f"tying table forces {root} = T")
        return Conclusion(None, root)
    assert last is not None
    raise last


def apply(facts: FactBase, conclusion: Conclusion, step: int) -> FactBase:
    """Record a conclusion; a binding closes the live session."""
    if conclusion.tying:
        return facts.bind_true(step) if conclusion.binds else facts
    assert conclusion.vector is not None
    return facts.with_fact(conclusion.vector, conclusion.value, step)
