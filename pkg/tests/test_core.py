from fractions import Fraction
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bordacert.borda import borda_rule
from bordacert.core import (
    FINITE,
    WEIGHTED,
    MarginDistribution,
    MarginProfile,
    Outcome,
    Ranking,
    WeakOrdering,
    WeightedElection,
    all_margin_distributions,
    check_axioms,
    format_election,
    majorizes,
    parse_election,
    parse_rational,
    project_election,
    project_margin,
    reflect,
)
from bordacert.errors import DomainError, ParseError

from conftest import elections, finite_distributions, weighted_distributions

R1234 = Ranking.from_order((1, 2, 3, 4))


def m4(mapping, mode=FINITE):
    return MarginDistribution.from_mapping(4, mapping, mode)


class TestRanking:
    def test_positions_from_order(self):
        assert R1234.positions == (3, 2, 1, 0)
        assert R1234.order() == (1, 2, 3, 4)

    def test_rejects_non_permutation(self):
        with pytest.raises(DomainError):
            Ranking((0, 0, 1))
        with pytest.raises(DomainError):
            Ranking.from_order((1, 1, 2))


class TestOutcome:
    def test_negation(self):
        assert -Outcome.W == Outcome.L
        assert -Outcome.L == Outcome.W
        assert -Outcome.T == Outcome.T

    def test_order(self):
        assert Outcome.W > Outcome.T > Outcome.L


class TestProjectMargin:
    @pytest.mark.parametrize("i,j,expected", [(1, 2, 1), (1, 4, 3), (4, 1, -3)])
    def test_examples(self, i, j, expected):
        assert project_margin(R1234, i, j) == expected

    def test_same_candidate_rejected(self):
        with pytest.raises(DomainError):
            project_margin(R1234, 2, 2)

    def test_out_of_range_rejected(self):
        with pytest.raises(DomainError):
            project_margin(R1234, 1, 5)

    @given(st.permutations(range(1, 6)), st.integers(1, 5), st.integers(1, 5))
    def test_antisymmetric_and_nonzero(self, order, i, j):
        if i == j:
            return
        r = Ranking.from_order(order)
        assert project_margin(r, i, j) == -project_margin(r, j, i)
        assert project_margin(r, i, j) != 0


class TestProjectElection:
    def test_mirror_ballots(self):
        e = WeightedElection.from_ballots([(1, 2, 3, 4), (4, 3, 2, 1)])
        assert project_election(e, 1, 2) == m4({1: 1, -1: 1})

    def test_single_ballot(self):
        e = WeightedElection.from_ballots([(1, 2, 3, 4)])
        assert project_election(e, 1, 4) == m4({3: 1})

    def test_three_voters(self):
        e = WeightedElection.from_ballots([(1, 2, 3, 4), (1, 2, 3, 4), (2, 1, 3, 4)])
        assert project_election(e, 1, 2) == m4({1: 2, -1: 1})

    @given(elections(), st.data())
    def test_commutes_with_reflect(self, e, data):
        i = data.draw(st.integers(1, e.k))
        j = data.draw(st.integers(1, e.k).filter(lambda x: x != i))
        assert project_election(e, j, i) == reflect(project_election(e, i, j))

    @given(st.lists(st.permutations(range(1, 5)), min_size=1, max_size=6), st.randoms(use_true_random=False))
    def test_ballot_order_is_irrelevant(self, ballots, rnd):
        shuffled = list(ballots)
        rnd.shuffle(shuffled)
        a, b = WeightedElection.from_ballots(ballots), WeightedElection.from_ballots(shuffled)
        assert a == b
        assert project_election(a, 1, 3) == project_election(b, 1, 3)

    def test_total_preserved_weighted(self):
        e = WeightedElection.from_weights(3, {Ranking.from_order((1, 2, 3)): Fraction(1, 3), Ranking.from_order((3, 1, 2)): Fraction(2, 3)}, WEIGHTED)
        alpha = project_election(e, 1, 2)
        assert alpha.total == 1
        assert alpha == MarginDistribution.from_mapping(3, {1: 1}, WEIGHTED)


class TestMarginDistribution:
    def test_canonical_order_is_ascending(self):
        alpha = m4({-3: 1, 2: 2})
        assert alpha.weights == (1, 0, 0, 0, 2, 0)
        assert alpha.descending() == (0, 2, 0, 0, 0, 1)

    def test_zero_margin_rejected(self):
        with pytest.raises(DomainError):
            m4({0: 1})

    def test_weighted_total_must_be_one(self):
        with pytest.raises(DomainError):
            m4({1: Fraction(1, 2)}, WEIGHTED)

    def test_finite_needs_integers(self):
        with pytest.raises(DomainError):
            m4({1: Fraction(1, 2), -1: Fraction(3, 2)})

    def test_parse_round_trip(self):
        alpha = m4({1: Fraction(1, 3), -2: Fraction(2, 3)}, WEIGHTED)
        assert MarginDistribution.parse(4, str(alpha), WEIGHTED) == alpha

    def test_reflect_example(self):
        assert reflect(m4({1: 2, -2: 1})) == m4({-1: 2, 2: 1})

    def test_symmetric_fixed_point(self):
        alpha = m4({1: 1, -1: 1})
        assert reflect(alpha) == alpha and alpha.is_symmetric()

    @given(finite_distributions())
    def test_reflect_involution(self, alpha):
        assert reflect(reflect(alpha)) == alpha
        assert reflect(alpha).margin_sum() == -alpha.margin_sum()

    @given(weighted_distributions())
    def test_reflect_involution_weighted(self, alpha):
        assert reflect(reflect(alpha)) == alpha

    def test_canonical_profile(self):
        alpha = m4({3: 1, -1: 2})
        prof = MarginProfile.canonical(alpha)
        assert prof.values == (3, -1, -1)
        assert prof.distribution() == alpha

    def test_all_margin_distributions_count(self):
        assert len(list(all_margin_distributions(4, 2))) == 21


class TestMajorizes:
    def test_shift_up(self):
        assert majorizes(m4({1: 3}), m4({-1: 3}))
        assert not majorizes(m4({-1: 3}), m4({1: 3}))

    def test_incomparable(self):
        a, b = m4({3: 1, -3: 1}), m4({1: 1, -1: 1})
        assert not majorizes(a, b) and not majorizes(b, a)

    def test_mismatch_rejected(self):
        with pytest.raises(DomainError):
            majorizes(m4({1: 1}), m4({1: 2}))

    @given(finite_distributions(k=4, n=3), finite_distributions(k=4, n=3), finite_distributions(k=4, n=3))
    def test_partial_order(self, a, b, c):
        assert majorizes(a, a)
        if majorizes(a, b) and majorizes(b, a):
            assert a == b
        if majorizes(a, b) and majorizes(b, c):
            assert majorizes(a, c)


class TestCheckAxioms:
    def test_borda(self):
        rep = check_axioms(lambda e: borda_rule(e, 1), 4, 2)
        assert rep.miia and rep.neutral
        assert all(out == (Outcome.W if a.margin_sum() > 0 else Outcome.L if a.margin_sum() < 0 else Outcome.T) for a, out in rep.shared_swf.items())

    def test_constant_tie(self):
        tie = WeakOrdering(((1, 2, 3, 4),))
        rep = check_axioms(lambda e: tie, 4, 2)
        assert rep.miia and rep.neutral
        assert set(rep.shared_swf.values()) == {Outcome.T}

    def test_index_rank_not_neutral(self):
        fixed = WeakOrdering(((1,), (2,), (3,)))
        rep = check_axioms(lambda e: fixed, 3, 2)
        assert not rep.neutral

    def test_partial_function_rejected(self):
        with pytest.raises(DomainError):
            check_axioms({}, 3, 1)

    def test_guard(self):
        with pytest.raises(DomainError):
            check_axioms(lambda e: None, 5, 1)


ELECTION_TEXT = """k=3
mode=weighted
total=1
"1 2 3" = 1/3   # top ballot
"3 2 1" = 2/3
"""


class TestElectionFile:
    def test_parse(self):
        e = parse_election(ELECTION_TEXT)
        assert e.k == 3 and e.mode == WEIGHTED
        assert e.weights[Ranking.from_order((3, 2, 1))] == Fraction(2, 3)

    def test_round_trip(self):
        e = parse_election(ELECTION_TEXT)
        assert parse_election(format_election(e)) == e

    @pytest.mark.parametrize(
        "text",
        [
            "k=3\nmode=finite\ntotal=2\n\"1 2 3\" = 1\n",
            "k=3\nmode=finite\n\"1 2 3\" = 1\n",
            "k=3\nmode=finite\ntotal=1\n\"1 2 2\" = 1\n",
            "k=3\nmode=odd\ntotal=1\n\"1 2 3\" = 1\n",
            "k=3\nmode=finite\ntotal=1\n\"1 2 3\" = 1/0\n",
        ],
    )
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_election(text)

    def test_rational_parsing(self):
        assert parse_rational("3/6") == Fraction(1, 2)
        for bad in ("1 /2", "a", "1/-2"):
            with pytest.raises(ParseError):
                parse_rational(bad)
