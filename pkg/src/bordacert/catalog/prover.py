"""Certificate generation: chain catalog tables into replayable proofs.

The ``Builder`` owns the growing step list and a kernel fact base. Each
emitted table gets its row sources filled in automatically (live symbol,
symmetric axiom, or the step that established the row) and is checked by the
kernel before being appended, so a finished certificate always replays.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Iterable

from ..core import FINITE, WEIGHTED, MarginDistribution
from ..errors import IncompleteFactsError, InconsistencyError, PreconditionError, ProofSearchError
from ..tet.certificate import SOURCE_AXIOM, SOURCE_X, Certificate, Goal, Step, check_step, step_source
from ..tet.kernel import Conclusion, FactBase, Term, combine, infer
from ..tet.paren import Leaf, Node
from ..tet.table import TransitiveElectionTable, row_distributions
from . import families as fam
from . import lemmas as lm
from .families import parts
from .lemmas import BuiltTable, LemmaId

_MAX_DEPTH = 200


class Builder:
    def __init__(self, k: int, mode: str) -> None:
        self.k, self.mode = k, mode
        self.steps: list[Step] = []
        self.facts = FactBase()
        self.pending: MarginDistribution | None = None
        self.routes: Counter[str] = Counter()

    # -- facts ----------------------------------------------------------------

    def lift(self, alpha: MarginDistribution) -> MarginDistribution:
        return alpha if alpha.k == self.k else alpha.with_k(self.k)

    def value(self, alpha: MarginDistribution) -> Term | None:
        alpha = self.lift(alpha)
        known = self.facts.lookup(alpha)
        if known is None and alpha.is_symmetric():
            return Term.T
        return known

    def is_tied(self, alpha: MarginDistribution) -> bool:
        return self.value(alpha) == Term.T

    @property
    def live(self) -> bool:
        return self.facts.anchor is not None or self.pending is not None

    def open_session(self, anchor: MarginDistribution) -> None:
        if self.live:
            raise ProofSearchError("a symbolic session is already open")
        self.pending = self.lift(anchor)

    def close_pending(self) -> None:
        self.pending = None

    # -- emission ---------------------------------------------------------------

    def _sources(self, tet: TransitiveElectionTable) -> tuple[tuple[str, ...], object]:
        facts = self.facts
        local = facts
        sources = []
        for alpha in row_distributions(tet):
            anchor = facts.anchor
            if anchor is not None and alpha in (anchor, anchor.reflect()):
                sources.append(SOURCE_X)
            elif anchor is None and self.pending is not None and alpha in (self.pending, self.pending.reflect()):
                facts = facts.introduce(alpha, len(self.steps) + 1)
                local = local.introduce(alpha, len(self.steps) + 1)
                sources.append(SOURCE_X)
            elif alpha.is_symmetric():
                if alpha not in local:
                    local = local.with_fact(alpha, Term.T, 0)
                sources.append(SOURCE_AXIOM)
            else:
                prov = facts.provenance(alpha)
                if prov is None or prov == 0:
                    raise IncompleteFactsError(f"row {alpha} has no established value")
                sources.append(step_source(prov))
        return tuple(sources), local

    def emit(self, table: TransitiveElectionTable | BuiltTable, note: str = "") -> Conclusion | None:
        """Append ``table`` as a step; returns its conclusion, or ``None`` when redundant.

        A conclusion that contradicts a known value closes the session: the row
        ``-M0`` is appended and the resulting tying table binds the symbol.
        """
        if isinstance(table, BuiltTable):
            note = note or str(table.lemma)
            self.routes[str(table.lemma)] += 1
            table = table.table
        tet = table.grouped() if table.k == self.k else table.with_k(self.k).grouped()
        sources, local = self._sources(tet)
        derived = infer(tet, local)
        if not derived.tying:
            known = local.lookup(derived.vector)
            if known == derived.value:
                return None
            if known is not None:
                tree = tet.tree()
                tet = tet.append_row(tuple(-x for x in tet.m0()), Node(tree, Leaf(tet.m + 1)))
                sources, local = self._sources(tet)
                derived = infer(tet, local)
                note = f"{note}; contradiction closes the session" if note else "contradiction closes the session"
        step = Step(tet, sources, str(derived), note)
        self.facts, conclusion = check_step(self.facts, step, len(self.steps) + 1, self.k, self.mode)
        self.steps.append(step)
        if conclusion.binds:
            self.pending = None
        return conclusion

    def certificate(self, goal: Goal, notes: Iterable[str] = ()) -> Certificate:
        return Certificate(self.k, self.mode, goal, tuple(self.steps), tuple(notes))


# --- finite ties, four candidates ---------------------------------------------------


class _TieProver:
    def __init__(self, b: Builder) -> None:
        self.b = b
        self.depth = 0

    def tie(self, alpha: MarginDistribution) -> None:
        b = self.b
        if b.facts.lookup(b.lift(alpha)) == Term.T:
            return
        if alpha.margin_sum() != 0:
            raise PreconditionError(f"d1({alpha}) = {alpha.margin_sum()}, expected 0")
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise ProofSearchError("tie recursion too deep")
        try:
            self._tie(alpha)
        finally:
            self.depth -= 1
        if b.facts.lookup(b.lift(alpha)) != Term.T:
            raise ProofSearchError(f"route for {alpha} did not establish a tie")

    def _session(self, alpha: MarginDistribution, tables: Iterable[BuiltTable]) -> None:
        b = self.b
        b.open_session(alpha)
        for t in tables:
            b.emit(t)
            if not b.live:
                return
        b.close_pending()
        raise ProofSearchError(f"session on {alpha} did not close")

    def _plain(self, built: BuiltTable) -> None:
        for row in row_distributions(built.table):
            if not row.is_symmetric():
                self.tie(row)
        self.b.emit(built)

    def _tie(self, alpha: MarginDistribution) -> None:
        if alpha.is_symmetric():
            self._session(alpha, [lm.two_candidate_symmetric(alpha)])
            return
        k = alpha.k
        if k >= 5:
            self._tie_large(alpha)
            return
        a3, a2, a1, am1, am2, am3 = parts(alpha)
        if a3 == 0 and am3 == 0:
            self._tie_b3(alpha)
        elif a3 + am3 != 1:
            self._plain(lm.almost_b4(alpha))
        elif am3 == 1:
            self.tie(alpha.reflect())
        else:
            self._tie_one_three(alpha)

    def _tie_large(self, alpha: MarginDistribution) -> None:
        k = alpha.k
        if alpha[k - 1] == 0 and alpha[1 - k] == 0:
            self.tie(_restrict(alpha))
            return
        built = lm.lift_split(alpha)
        for row in built.rows:
            assert row is not None
            if not row.is_symmetric():
                self.tie(_restrict(row))
        self.b.emit(built)

    def _tie_one_three(self, alpha: MarginDistribution) -> None:
        a3, a2, a1, am1, am2, am3 = parts(alpha)
        n = alpha.total
        if am2 == 0:
            built = lm.alpha1(alpha)
        elif am1 == 0:
            built = lm.alpha2(alpha)
        elif n >= 6:
            built = lm.alpha12(alpha)
        else:
            built = lm.small_n(alpha)
        if built.tying:
            self._session(alpha, [built])
        elif built.target != alpha:
            # X-table: rows are alpha itself, the conclusion contradicts a known tie.
            self.tie(built.target)
            self._session(alpha, [built])
        else:
            self._plain(built)

    def _tie_b3(self, alpha: MarginDistribution) -> None:
        n = alpha.total
        a3, a2, a1, am1, am2, am3 = parts(alpha)
        if am2 > a2:
            self.tie(alpha.reflect())
            return
        q = a2 - am2
        self.anchor_tie(n, q)
        self.diagonal(n, q, a2 - q)

    def anchor_tie(self, n: int, a: int) -> None:
        """Establish ``f(alpha_(a,a)) = T``."""
        alpha = fam.anchor(n, a)
        b = self.b
        if b.is_tied(alpha):
            return
        if 3 * a == n:
            self._session(alpha, [lm.three_an(n)])
        elif 5 * a <= n:
            self._session(alpha, [lm.twelve_step(n, a)])
        elif 4 * a <= n:
            r = n % 2
            self.tie(fam.diagonal(n, (n - a) // 2, r))
            self.tie(fam.diagonal(n, (n - r) // 2, r))
            self._session(alpha, [lm.kleqn4_first(n, a), lm.kleqn4_second(n, a)])
        else:
            self.anchor_tie(n, 4 * a - n)
            self._session(alpha, [lm.kleqn3_beta(n, a), lm.kleqn3_gamma(n, a)])

    def diagonal(self, n: int, q: int, s: int) -> None:
        """Extend the tie along ``alpha_(t+q, q)`` from ``t = 0`` to ``t = s``.

        With ``g(s) = X`` assumed, saturate the diagonal triple tables until a
        derived value contradicts a known one, which binds ``X = T``.
        """
        b = self.b
        target = fam.diagonal(n, s + q, q)
        if b.is_tied(target):
            return
        m = (n - 3 * q) // 2

        def g(t: int) -> Term | None:
            if t == s and b.facts.anchor is None and b.pending is not None:
                return Term.X
            return b.value(fam.diagonal(n, t + q, q))

        b.open_session(target)
        progress = True
        while progress and b.live:
            progress = False
            for s1 in range(m + 1):
                for s2 in range(s1, m - s1 + 1):
                    v1, v2 = g(s1), g(s2)
                    c = None if v1 is None or v2 is None else combine(v1, v2)
                    if c is None or g(m - s1 - s2) == -c:
                        continue
                    b.emit(lm.diagonal_triple(n, q, s1, s2))
                    progress = True
                    if b.facts.anchor is None and b.is_tied(target):
                        b.close_pending()
                    if not b.live:
                        return
        b.close_pending()
        raise ProofSearchError(f"diagonal saturation failed for n={n}, q={q}, s={s}")


def _restrict(alpha: MarginDistribution) -> MarginDistribution:
    k = alpha.k
    if alpha[k - 1] or alpha[1 - k]:
        raise PreconditionError(f"{alpha} uses margin +-{k - 1}")
    return MarginDistribution.from_mapping(k - 1, {d: alpha[d] for d in range(2 - k, k - 1) if d}, alpha.mode)


# --- weighted ties ------------------------------------------------------------------


def _symmetric_tie(b: Builder, alpha: MarginDistribution) -> None:
    if b.facts.lookup(b.lift(alpha)) != Term.T:
        b.open_session(alpha)
        b.emit(lm.two_candidate_symmetric(alpha))


def _weighted_tie(b: Builder, alpha: MarginDistribution) -> None:
    """Three comb tables for ``k = 4``; larger ``k`` halves into ``D_{k-1}`` first."""
    if b.facts.lookup(b.lift(alpha)) == Term.T:
        return
    k = alpha.k
    if k > 4:
        if alpha.is_symmetric():
            _symmetric_tie(b, alpha)
        elif alpha[k - 1] == 0 and alpha[1 - k] == 0:
            _weighted_tie(b, _restrict(alpha))
        else:
            built = lm.layers(alpha)
            row = built.rows[0]
            assert row is not None
            _weighted_tie(b, _restrict(row))
            b.emit(built)
        return
    beta = fam.comb_rows(alpha)
    gamma = fam.comb_rows(beta)
    if gamma.is_symmetric():
        _symmetric_tie(b, gamma)
    else:
        b.emit(lm.first_comb(gamma))
    if beta.is_symmetric():
        _symmetric_tie(b, beta)
    else:
        b.emit(lm.second_comb(beta))
    b.emit(lm.third_comb(alpha))


# --- public entry points ------------------------------------------------------------


def prove_tie(alpha: MarginDistribution) -> Certificate:
    """A certificate concluding ``f(alpha) = T`` for a distribution with zero margin."""
    if alpha.margin_sum() != 0:
        raise PreconditionError(f"prove_tie needs d1 = 0, got d1 = {alpha.margin_sum()}")
    if alpha.k < 4 and not alpha.is_symmetric():
        raise PreconditionError(f"prove_tie needs k >= 4 for asymmetric distributions, got k={alpha.k}")
    b = Builder(alpha.k, alpha.mode)
    if alpha.mode == WEIGHTED:
        _weighted_tie(b, alpha)
    else:
        _TieProver(b).tie(alpha)
    notes = [f"route {name} x{count}" for name, count in sorted(b.routes.items())]
    return b.certificate(Goal("tie", (alpha,)), notes)


# --- negative margins -----------------------------------------------------------------


def negative_route(alpha: MarginDistribution) -> BuiltTable | None:
    """The table concluding ``alpha`` from smaller cases; ``None`` for the base."""
    k, n = alpha.k, alpha.total
    if k >= 5:
        if alpha[k - 1] == 0 and alpha[1 - k] == 0:
            raise PreconditionError("restrict first")  # pragma: no cover
        return lm.lift_split(alpha)
    if alpha == fam.negative_base(n):
        return None
    m = alpha.margin_sum()
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    if m <= -2:
        if n == 2:
            for i, (_, _, target) in enumerate(fam.N2_CHAIN, 1):
                if fam.v4(*target) == alpha:
                    return lm.n2_special(i)
            raise ProofSearchError(f"{alpha} missing from the two-voter chain")  # pragma: no cover
        return lm.halving(alpha)
    if lm.first_m1_applies(alpha):
        return lm.first_m1_odd(alpha) if n % 2 else lm.first_m1_even(alpha)
    if n % 2 == 0 and a1 + am1 + am3 == 0:
        return lm.even_fix(alpha)
    if a2 + am2 >= 1:
        if a3 + am1 >= 1 and a1 + am3 >= 1:
            return lm.second_m1(alpha)
        return lm.third_m1_a(alpha)
    if a1 + am3 > 0:
        return lm.third_m1(alpha)
    return lm.last_m1(alpha)


class _SignPlanner:
    """Orders the tables linking negative distributions to the base symbol."""

    def __init__(self, k: int) -> None:
        self.k = k
        self.order: list[BuiltTable] = []
        self.ties: list[MarginDistribution] = []
        self.done: set[MarginDistribution] = set()

    def _norm(self, alpha: MarginDistribution) -> MarginDistribution:
        while alpha.k > 4 and alpha[alpha.k - 1] == 0 and alpha[1 - alpha.k] == 0:
            alpha = _restrict(alpha)
        return alpha

    def visit(self, alpha: MarginDistribution, depth: int = 0) -> None:
        if depth > _MAX_DEPTH:
            raise ProofSearchError("negative-margin recursion too deep")
        alpha = self._norm(alpha)
        if alpha.with_k(self.k) in self.done:
            return
        self.done.add(alpha.with_k(self.k))
        if alpha.total == 2 and alpha.k == 4 and alpha.margin_sum() <= -2:
            self._n2(alpha)
            return
        built = negative_route(alpha)
        if built is None:
            return
        for row in row_distributions(built.table):
            row = self._norm(row)
            m = row.margin_sum()
            if m == 0:
                if not row.is_symmetric():
                    self.ties.append(row)
            elif m < 0:
                self.visit(row, depth + 1)
            else:
                raise ProofSearchError(f"row {row} of {built.lemma} has positive margin")  # pragma: no cover
        self.order.append(built)

    def _n2(self, alpha: MarginDistribution) -> None:
        """Two voters: run the fixed chain up to ``alpha``."""
        for i, (_, _, target) in enumerate(fam.N2_CHAIN, 1):
            t = fam.v4(*target)
            if t.with_k(self.k) not in self.done or t == alpha:
                self.done.add(t.with_k(self.k))
                self.order.append(lm.n2_special(i))
            if t == alpha:
                return


def prove_sign_constant(alpha1: MarginDistribution, alpha2: MarginDistribution) -> Certificate:
    """A certificate showing ``f(alpha1) = f(alpha2)``, both equal to one live symbol."""
    for a in (alpha1, alpha2):
        if a.mode != FINITE:
            raise PreconditionError("prove_sign_constant works in finite mode")
        if a.margin_sum() >= 0:
            raise PreconditionError(f"d1({a}) = {a.margin_sum()}, expected < 0")
    if alpha1.k != alpha2.k or alpha1.total != alpha2.total:
        raise PreconditionError("both distributions need the same k and n")
    k, n = alpha1.k, alpha1.total
    if k < 4:
        raise PreconditionError(f"prove_sign_constant needs k >= 4, got k={k}")
    planner = _SignPlanner(k)
    planner.visit(alpha1)
    planner.visit(alpha2)
    b = Builder(k, FINITE)
    tp = _TieProver(b)
    for t in planner.ties:
        tp.tie(t)
    base = fam.negative_base(n)
    if planner.order:
        b.open_session(base)
        for built in planner.order:
            b.emit(built)
        b.close_pending()
    notes = [f"route {name} x{count}" for name, count in sorted(b.routes.items())]
    return b.certificate(Goal("link", (alpha1, alpha2)), notes)
