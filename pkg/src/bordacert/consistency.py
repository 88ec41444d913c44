"""Three-way consistency: couplings of two margins and the constraints they induce."""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from .borda import RelativeSwfTable
from .core import (
    FINITE,
    MarginDistribution,
    Outcome,
    Ranking,
    Weight,
    WeightedElection,
    all_margin_distributions,
    in_margin_set,
    majorizes,
    margin_values,
)
from .errors import CapacityError, DomainError

CONSISTENT_MULTISETS = frozenset(
    {
        (Outcome.L, Outcome.W, Outcome.W),
        (Outcome.L, Outcome.T, Outcome.W),
        (Outcome.L, Outcome.L, Outcome.W),
        (Outcome.T, Outcome.T, Outcome.T),
    }
)


def multiset_consistent(a: Outcome, b: Outcome, c: Outcome) -> bool:
    """Whether three pairwise outcomes can close a cycle ``c1-c2, c2-c3, c3-c1``."""
    return tuple(sorted((a, b, c))) in CONSISTENT_MULTISETS


def margin_pair_feasible(d1: int, d2: int, k: int) -> bool:
    """Some ranking has ``pi_{1,2} = d1`` and ``pi_{2,3} = d2``."""
    return in_margin_set(d1, k) and in_margin_set(d2, k) and in_margin_set(d1 + d2, k)


def feasible_pairs(k: int) -> tuple[tuple[int, int], ...]:
    ds = margin_values(k)
    return tuple((a, b) for a in ds for b in ds if margin_pair_feasible(a, b, k))


def construct_ranking(d1: int, d2: int, k: int) -> Ranking:
    """A ranking realizing the margin pair.

    ``c1..c3`` sit as high as the pair allows; ``c4..ck`` fill the free ranks
    from the top in index order.
    """
    if not margin_pair_feasible(d1, d2, k):
        raise DomainError(f"margin pair ({d1},{d2}) is not feasible for k={k}")
    r3 = k - 1 - max(0, d2, d1 + d2)
    ranks = {1: r3 + d1 + d2, 2: r3 + d2, 3: r3}
    free = [p for p in reversed(range(k)) if p not in ranks.values()]
    positions = [ranks[1], ranks[2], ranks[3]] + free
    return Ranking(tuple(positions))


@dataclass(frozen=True)
class Coupling:
    """Weights on feasible cells ``(d1, d2)``."""

    k: int
    cells: tuple[tuple[tuple[int, int], Weight], ...]
    mode: str = FINITE

    def __post_init__(self) -> None:
        merged: Counter = Counter()
        for (a, b), w in self.cells:
            if not margin_pair_feasible(a, b, self.k):
                raise DomainError(f"cell ({a},{b}) is not feasible for k={self.k}")
            if w < 0:
                raise DomainError(f"negative weight on cell ({a},{b})")
            merged[(a, b)] += w
        object.__setattr__(self, "cells", tuple(sorted((c, w) for c, w in merged.items() if w)))

    def row_marginal(self) -> MarginDistribution:
        return self._marginal(lambda a, b: a)

    def col_marginal(self) -> MarginDistribution:
        return self._marginal(lambda a, b: b)

    def sum_marginal(self) -> MarginDistribution:
        return self._marginal(lambda a, b: a + b)

    def _marginal(self, key) -> MarginDistribution:
        counts: Counter = Counter()
        for (a, b), w in self.cells:
            counts[key(a, b)] += w
        return MarginDistribution.from_mapping(self.k, counts, self.mode)


def _scale(alphas: tuple[MarginDistribution, ...]) -> int:
    return math.lcm(*(Fraction(w).denominator for a in alphas for w in a.weights))


def couple(alpha1: MarginDistribution, alpha2: MarginDistribution) -> Coupling | None:
    """A coupling with the given marginals supported on feasible cells, or ``None``.

    Solved as a bipartite min-cost max-flow after scaling weights to integers.
    """
    if (alpha1.k, alpha1.mode) != (alpha2.k, alpha2.mode):
        raise DomainError("marginals must share k and mode")
    if alpha1.total != alpha2.total:
        raise DomainError("marginals must have the same total")
    k = alpha1.k
    scale = _scale((alpha1, alpha2))
    g = nx.DiGraph()
    for d, w in alpha1.items():
        if w:
            g.add_edge("s", ("r", d), capacity=int(w * scale))
    for d, w in alpha2.items():
        if w:
            g.add_edge(("c", d), "t", capacity=int(w * scale))
    for a, b in feasible_pairs(k):
        if alpha1[a] and alpha2[b]:
            # Comonotone cells are cheapest, which makes the choice canonical.
            g.add_edge(("r", a), ("c", b), weight=abs(a - b))
    need = int(alpha1.total * scale)
    if need == 0:
        return Coupling(k, (), alpha1.mode)
    if "s" not in g or "t" not in g:
        return None
    flow = nx.max_flow_min_cost(g, "s", "t")
    if sum(flow["s"].values()) != need:
        return None
    cells = []
    for node, outs in flow.items():
        if not (isinstance(node, tuple) and node[0] == "r"):
            continue
        for (_, b), x in outs.items():
            if x:
                w = Fraction(x, scale)
                cells.append(((node[1], b), int(w) if alpha1.mode == FINITE else w))
    return Coupling(k, tuple(cells), alpha1.mode)


def coupling_to_election(coupling: Coupling) -> WeightedElection:
    """Realize each cell by ``construct_ranking``."""
    weights: dict[Ranking, Weight] = {}
    for (a, b), w in coupling.cells:
        r = construct_ranking(a, b, coupling.k)
        weights[r] = weights.get(r, 0) + w
    return WeightedElection.from_weights(coupling.k, weights, coupling.mode)


def third_margin(coupling: Coupling) -> MarginDistribution:
    """Distribution of ``pi_{1,3} = d1 + d2``; its reflection is the ``(3,1)`` projection."""
    return coupling.sum_marginal()


MAX_TRIPLE_PAIRS = 40
MAX_TRIPLE_N = 6


def enumerate_constraint_triples(k: int, n: int) -> Iterator[tuple[MarginDistribution, MarginDistribution, MarginDistribution]]:
    """Every ``(pi_12, pi_23, pi_13)`` distribution triple of an ``n``-voter election, once each.

    The cycle ``c1-c2, c2-c3, c3-c1`` is closed by the reflection of the third entry.
    """
    pairs = feasible_pairs(k)
    if len(pairs) > MAX_TRIPLE_PAIRS or n > MAX_TRIPLE_N:
        raise CapacityError(
            f"triple enumeration is limited to {MAX_TRIPLE_PAIRS} feasible pairs and n<={MAX_TRIPLE_N}; "
            f"k={k} has {len(pairs)} pairs, n={n}"
        )
    if n < 1:
        raise DomainError("need at least one voter")
    size = 2 * (k - 1)

    def slot(d: int) -> int:
        return d + k - 1 if d < 0 else d + k - 2

    seen: set = set()
    for combo in itertools.combinations_with_replacement(pairs, n):
        r, c, s = [0] * size, [0] * size, [0] * size
        for a, b in combo:
            r[slot(a)] += 1
            c[slot(b)] += 1
            s[slot(a + b)] += 1
        key = (tuple(r), tuple(c), tuple(s))
        if key in seen:
            continue
        seen.add(key)
        yield tuple(MarginDistribution(k, v, FINITE) for v in key)  # type: ignore[misc]


def _domain(f: RelativeSwfTable) -> list[MarginDistribution]:
    if f.mode == FINITE and f.n is not None:
        return list(all_margin_distributions(f.k, int(f.n)))
    return f.domain()


def check_pareto(f: RelativeSwfTable) -> bool:
    """Unanimous preference for ``c_i`` (all margins positive) must give ``W``."""
    positive = [a for a in _domain(f) if all(d > 0 for d in a.support())]
    missing = [a for a in positive if a not in f]
    if missing:
        raise DomainError(f"table lacks the all-positive entry {missing[0]}")
    return all(f[a] == Outcome.W for a in positive)


def _covers(alpha: MarginDistribution) -> Iterator[MarginDistribution]:
    """Distributions one unit of weight higher: the cover relation of majorization."""
    w = alpha.weights
    for i in range(len(w) - 1):
        if w[i]:
            up = list(w)
            up[i] -= 1
            up[i + 1] += 1
            yield MarginDistribution(alpha.k, tuple(up), alpha.mode)


def check_positive_responsiveness(f: RelativeSwfTable) -> bool:
    """``alpha1`` majorizing ``alpha2`` forces ``f(alpha1) >= f(alpha2)``.

    On a full finite domain majorization is generated by unit moves to the
    next higher margin, so checking those covers suffices.
    """
    domain = _domain(f)
    missing = [a for a in domain if a not in f]
    if missing:
        raise DomainError(f"table lacks entry {missing[0]}")
    values = {a: f[a] for a in domain}
    if f.mode == FINITE and f.n is not None:
        return all(values[up] >= v for a, v in values.items() for up in _covers(a))
    for a1 in domain:
        for a2 in domain:
            if values[a1] < values[a2] and majorizes(a1, a2):
                return False
    return True
