"""Exhaustive search for consistent relative social welfare functions.

One variable per reflect-pair of finite margin distributions; each election's
three pairwise distributions must receive a transitive outcome triple. The
search backtracks with generalized arc consistency over those triples.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import product

from .borda import RelativeSwfTable, borda_margin, classify_borda_pattern, sign_outcome
from .consistency import CONSISTENT_MULTISETS, enumerate_constraint_triples
from .core import FINITE, MarginDistribution, Outcome, compositions, count_compositions
from .errors import CapacityError

MAX_DISTRIBUTIONS = 10**6

# Domains are bitmasks over W, T, L.
_BIT = {Outcome.W: 1, Outcome.T: 2, Outcome.L: 4}
_VALUES = (Outcome.W, Outcome.T, Outcome.L)
_FULL = 7


def enumerate_margin_distributions(k: int, n: int) -> list[MarginDistribution]:
    """All of ``A'_{k,n}`` in lexicographic order of the weight vector."""
    count = count_compositions(n, 2 * (k - 1))
    if count > MAX_DISTRIBUTIONS:
        raise CapacityError(f"A'_{{{k},{n}}} has {count} distributions, limit {MAX_DISTRIBUTIONS}")
    return [MarginDistribution(k, c, FINITE) for c in compositions(n, 2 * (k - 1))]


Literal = tuple[int, int]
"""``(variable, sign)``: the distribution's value is ``sign * value(variable)``."""


@dataclass(frozen=True)
class SearchProblem:
    k: int
    n: int
    variables: tuple[MarginDistribution, ...]
    forced: frozenset[int]
    constraints: tuple[tuple[Literal, Literal, Literal], ...]
    index: dict[MarginDistribution, Literal] = field(repr=False, compare=False)

    def literal(self, alpha: MarginDistribution) -> Literal:
        return self.index[alpha]

    def order(self) -> list[int]:
        """Decision order: ascending ``|d1|``, ties by canonical position."""
        return sorted(range(len(self.variables)), key=lambda v: (abs(self.variables[v].margin_sum()), v))


def _neg(lit: Literal) -> Literal:
    return lit[0], -lit[1]


def _canonical_key(lits: Iterable[Literal]) -> tuple[Literal, ...]:
    a = tuple(sorted(lits))
    b = tuple(sorted((v, -s) for v, s in a))
    return min(a, b)


def build_problem(k: int, n: int, shuffle_seed: int | None = None) -> SearchProblem:
    """Variables and deduplicated triple constraints for ``A'_{k,n}``.

    ``shuffle_seed`` permutes the constraint generation order; the resulting
    problem is identical, which the determinism tests rely on.
    """
    dists = enumerate_margin_distributions(k, n)
    index: dict[MarginDistribution, Literal] = {}
    variables: list[MarginDistribution] = []
    forced = set()
    for alpha in dists:
        if alpha in index:
            continue
        r = alpha.reflect()
        rep = min(alpha, r, key=lambda x: x.weights)
        v = len(variables)
        variables.append(rep)
        index[rep] = (v, 1)
        if r != alpha:
            index[r if rep == alpha else alpha] = (v, -1)
        else:
            forced.add(v)
    triples = list(enumerate_constraint_triples(k, n))
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(triples)
    # The cycle uses pi_31, the reflection of the third entry.
    keys = {_canonical_key((index[a1], index[a2], _neg(index[a3]))) for a1, a2, a3 in triples}
    return SearchProblem(k, n, tuple(variables), frozenset(forced), tuple(sorted(keys)), index)


def _allowed(signs: Sequence[int]) -> set[tuple[int, int, int]]:
    """Variable value triples (as ints) that satisfy a constraint with these signs."""
    out = set()
    for vals in product((1, 0, -1), repeat=3):
        outs = tuple(sorted(Outcome(s * x) for s, x in zip(signs, vals)))
        if outs in CONSISTENT_MULTISETS:
            out.add(vals)
    return out


class _Solver:
    def __init__(self, problem: SearchProblem, propagate: bool) -> None:
        self.p = problem
        self.propagate = propagate
        self.cons = [(tuple(v for v, _ in c), _allowed(tuple(s for _, s in c))) for c in problem.constraints]
        self.watch: list[list[int]] = [[] for _ in problem.variables]
        for i, (vs, _) in enumerate(self.cons):
            for v in set(vs):
                self.watch[v].append(i)
        self.solutions: list[tuple[int, ...]] = []

    @staticmethod
    def _ints(mask: int) -> list[int]:
        return [x for x, bit in ((1, 1), (0, 2), (-1, 4)) if mask & bit]

    def _revise(self, dom: list[int], ci: int) -> list[int] | None:
        """Variables whose domain shrank; ``None`` on a wipe-out."""
        vs, allowed = self.cons[ci]
        support = dict.fromkeys(vs, 0)
        for vals in product(*(self._ints(dom[v]) for v in vs)):
            chosen: dict[int, int] = {}
            if any(chosen.setdefault(v, x) != x for v, x in zip(vs, vals)):
                continue
            if vals in allowed:
                for v, x in chosen.items():
                    support[v] |= _BIT[Outcome(x)]
        changed = []
        for v, sup in support.items():
            new = dom[v] & sup
            if new != dom[v]:
                if not new:
                    return None
                dom[v] = new
                changed.append(v)
        return changed

    def _fixpoint(self, dom: list[int], start: Iterable[int]) -> bool:
        queue = list(dict.fromkeys(start))
        queued = set(queue)
        while queue:
            ci = queue.pop()
            queued.discard(ci)
            changed = self._revise(dom, ci)
            if changed is None:
                return False
            for v in changed:
                for cj in self.watch[v]:
                    if cj not in queued:
                        queued.add(cj)
                        queue.append(cj)
        return True

    def _complete_ok(self, dom: list[int]) -> bool:
        for vs, allowed in self.cons:
            vals = tuple(self._ints(dom[v])[0] for v in vs)
            if vals not in allowed:
                return False
        return True

    def run(self) -> list[tuple[int, ...]]:
        dom = [_FULL] * len(self.p.variables)
        for v in self.p.forced:
            dom[v] = _BIT[Outcome.T]
        if self.propagate and not self._fixpoint(dom, range(len(self.cons))):
            return []
        self._search(dom, self.p.order(), 0)
        return sorted(set(self.solutions))

    def _search(self, dom: list[int], order: list[int], depth: int) -> None:
        while depth < len(order) and dom[order[depth]] in (1, 2, 4):
            depth += 1
        if depth == len(order):
            if self._complete_ok(dom):
                self.solutions.append(tuple(self._ints(m)[0] for m in dom))
            return
        v = order[depth]
        for value in _VALUES:
            bit = _BIT[value]
            if not dom[v] & bit:
                continue
            child = list(dom)
            child[v] = bit
            if self.propagate:
                if not self._fixpoint(child, self.watch[v]):
                    continue
            elif not self._partial_ok(child, v):
                continue
            self._search(child, order, depth + 1)

    def _partial_ok(self, dom: list[int], v: int) -> bool:
        for ci in self.watch[v]:
            vs, allowed = self.cons[ci]
            if all(dom[u] in (1, 2, 4) for u in vs):
                if tuple(self._ints(dom[u])[0] for u in vs) not in allowed:
                    return False
        return True


def _to_table(problem: SearchProblem, values: tuple[int, ...]) -> RelativeSwfTable:
    return RelativeSwfTable(problem.k, FINITE, {a: Outcome(x) for a, x in zip(problem.variables, values)}, problem.n)


def enumerate_solutions(problem: SearchProblem, propagate: bool = True) -> list[RelativeSwfTable]:
    """Every total assignment satisfying all triple constraints, in a fixed order."""
    return [_to_table(problem, vals) for vals in _Solver(problem, propagate).run()]


# --- reports ----------------------------------------------------------------------


NON_BORDA = "non-Borda"


@dataclass(frozen=True)
class Classification:
    tags: tuple[int | str, ...]
    counts: dict[int | str, int]
    witnesses: tuple[tuple[int, dict[int, MarginDistribution]], ...]

    @property
    def all_borda(self) -> bool:
        return self.counts[NON_BORDA] == 0


def _deviation(f: RelativeSwfTable, w: int) -> MarginDistribution | None:
    for alpha, out in f.assignments.items():
        if sign_outcome(borda_margin(alpha, w)) != out:
            return alpha
    return None


def classify_solutions(solutions: Sequence[RelativeSwfTable]) -> Classification:
    """Tag each solution with its Borda pattern ``+1, 0, -1`` or ``non-Borda``.

    A non-Borda solution gets one witness per pattern: a distribution where it
    disagrees with that pattern.
    """
    counts: dict[int | str, int] = {1: 0, 0: 0, -1: 0, NON_BORDA: 0}
    tags: list[int | str] = []
    witnesses = []
    for i, f in enumerate(solutions):
        w = classify_borda_pattern(f)
        tag: int | str = NON_BORDA if w is None else w
        counts[tag] += 1
        tags.append(tag)
        if w is None:
            witnesses.append((i, {p: _deviation(f, p) for p in (1, 0, -1)}))
    return Classification(tuple(tags), counts, tuple(witnesses))


@dataclass(frozen=True)
class Violation:
    solution: int
    kind: str
    witness: tuple[MarginDistribution, ...]

    def __str__(self) -> str:
        return f"solution {self.solution}: {self.kind} at " + ", ".join(map(str, self.witness))


def cross_validate(solutions: Sequence[RelativeSwfTable], k: int = 4, n: int | None = None) -> list[Violation]:
    """Solutions must tie every zero-margin vector and be constant on negative ones."""
    out: list[Violation] = []
    for i, f in enumerate(solutions):
        dom = f.domain()
        for alpha in dom:
            if alpha.margin_sum() == 0 and f[alpha] != Outcome.T:
                out.append(Violation(i, "zero margin not tied", (alpha,)))
        neg = [a for a in dom if a.margin_sum() < 0]
        if neg:
            first = neg[0]
            for alpha in neg[1:]:
                if f[alpha] != f[first]:
                    out.append(Violation(i, "negative margins not constant", (first, alpha)))
                    break
    return out


def format_solutions(problem: SearchProblem, solutions: Sequence[RelativeSwfTable]) -> str:
    lines = []
    for i, f in enumerate(solutions, 1):
        lines.append(f"# solution {i}")
        lines += [f"{alpha} -> {f[alpha]}" for alpha in problem.variables]
    return "\n".join(lines) + "\n"
