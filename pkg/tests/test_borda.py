from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bordacert.borda import (
    RelativeSwfTable,
    borda_margin,
    borda_pattern_table,
    borda_rule,
    borda_score,
    classify_borda_pattern,
    sign_outcome,
)
from bordacert.core import FINITE, WEIGHTED, MarginDistribution, Outcome, WeakOrdering, WeightedElection, project_election
from bordacert.errors import DomainError

from conftest import elections, finite_distributions, weighted_distributions

SINGLE = WeightedElection.from_ballots([(1, 2, 3, 4)])
MIRROR = WeightedElection.from_ballots([(1, 2, 3, 4), (4, 3, 2, 1)])


def m4(mapping, mode=FINITE):
    return MarginDistribution.from_mapping(4, mapping, mode)


def test_score_examples():
    assert borda_score(SINGLE, 1, 1) == 3
    assert borda_score(MIRROR, 2, 1) == 3
    assert borda_score(MIRROR, 3, 0) == 0


def test_margin_examples():
    b = Fraction(3, 2)
    assert borda_margin(m4({2: b - 1, 1: 2 - b}, WEIGHTED)) == Fraction(3, 2)
    assert borda_margin(m4({1: 2, -2: 1}), 1) == 0
    assert borda_margin(m4({1: 2, -2: 1}), -1) == 0


@pytest.mark.parametrize("x,out", [(Fraction(5, 2), Outcome.W), (0, Outcome.T), (-1, Outcome.L)])
def test_sign_outcome(x, out):
    assert sign_outcome(x) == out


def test_rule_examples():
    assert borda_rule(SINGLE, 1) == WeakOrdering(((1,), (2,), (3,), (4,)))
    assert borda_rule(SINGLE, -1) == WeakOrdering(((4,), (3,), (2,), (1,)))
    assert borda_rule(MIRROR, 1) == WeakOrdering(((1, 2, 3, 4),))
    assert borda_rule(SINGLE, 0) == WeakOrdering(((1, 2, 3, 4),))


@given(finite_distributions(), st.sampled_from([1, 0, -1]))
def test_margin_antisymmetric(alpha, w):
    assert borda_margin(alpha.reflect(), w) == -borda_margin(alpha, w)


@given(weighted_distributions(k=4), weighted_distributions(k=4))
def test_margin_additive(a, b):
    summed = MarginDistribution(4, tuple((x + y) / 2 for x, y in zip(a.weights, b.weights)), WEIGHTED)
    assert 2 * borda_margin(summed) == borda_margin(a) + borda_margin(b)


@given(elections())
def test_rule_reversal(e):
    assert borda_rule(e, -1).tiers == tuple(reversed(borda_rule(e, 1).tiers))


@given(elections(), st.data())
def test_scores_agree_with_rule_and_margin(e, data):
    i = data.draw(st.integers(1, e.k))
    j = data.draw(st.integers(1, e.k).filter(lambda x: x != i))
    diff = borda_score(e, i) - borda_score(e, j)
    assert sign_outcome(diff) == borda_rule(e, 1).relation(i, j)
    assert borda_margin(project_election(e, i, j)) == diff


class TestTables:
    def test_antisymmetry_enforced(self):
        a = m4({1: 1})
        with pytest.raises(DomainError):
            RelativeSwfTable(4, FINITE, {a: Outcome.W, a.reflect(): Outcome.W})

    def test_reflection_lookup(self):
        a = m4({1: 1})
        f = RelativeSwfTable(4, FINITE, {a: Outcome.W})
        assert f[a.reflect()] == Outcome.L

    @pytest.mark.parametrize("w", [1, 0, -1])
    def test_classify_patterns(self, w):
        assert classify_borda_pattern(borda_pattern_table(4, 2, w)) == w

    def test_classify_flipped_entry(self):
        f = borda_pattern_table(4, 2, 1)
        table = dict(f.assignments)
        a = m4({1: 2})
        table[a] = Outcome.T
        table.pop(a.reflect(), None)
        assert classify_borda_pattern(RelativeSwfTable(4, FINITE, table, 2)) is None

    def test_classify_partial_rejected(self):
        f = RelativeSwfTable(4, FINITE, {m4({1: 1}): Outcome.W}, 1)
        with pytest.raises(DomainError):
            classify_borda_pattern(f)
        assert classify_borda_pattern(f, sampled=True) == 1

    def test_weighted_needs_sampled_mode(self):
        a = m4({1: 1}, WEIGHTED)
        f = RelativeSwfTable(4, WEIGHTED, {a: Outcome.L})
        with pytest.raises(DomainError):
            classify_borda_pattern(f)
        assert classify_borda_pattern(f, sampled=True) == -1
