import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from bordacert.borda import borda_margin, sign_outcome
from bordacert.core import FINITE, WEIGHTED, MarginDistribution, in_margin_set
from bordacert.errors import DomainError, IncompleteFactsError, InconsistencyError, ParseError
from bordacert.tet import (
    Certificate,
    FactBase,
    Goal,
    Leaf,
    Node,
    Step,
    Term,
    TransitiveElectionTable,
    combine,
    format_table,
    infer,
    left_comb,
    parse_paren,
    parse_table,
    read_certificate,
    replay,
    row_distribution,
    validate,
    write_certificate,
)
from bordacert.tet.paren import internal_nodes, leaves

DATA = Path(__file__).parent / "data"
TWELVE = "(((((((x1 x2) x3) (x4 x5)) x6) x7) (x8 x9)) ((x10 x11) x12))"


def m4(mapping, mode=FINITE):
    return MarginDistribution.from_mapping(4, mapping, mode)


def three_an(a=1):
    return TransitiveElectionTable(4, FINITE, (a, a, a), ((2, -1, -1), (-1, 2, -1), (-1, -1, 2)))


def two_cand_sym():
    w = (Fraction(1, 6),) * 6
    return TransitiveElectionTable(4, WEIGHTED, w, ((1, -1, 2, -2, 3, -3), (-1, 1, -2, 2, -3, 3)))


class TestParen:
    def test_simple(self):
        assert parse_paren("((x1 x2) x3)") == Node(Node(Leaf(1), Leaf(2)), Leaf(3))

    def test_twelve_leaves(self):
        tree = parse_paren(TWELVE)
        assert leaves(tree) == list(range(1, 13))
        assert len(list(internal_nodes(tree))) == 11

    def test_round_trip(self):
        assert str(parse_paren(TWELVE)) == TWELVE

    def test_bare_top_level(self):
        assert parse_paren("x1(x2 x3)") == Node(Leaf(1), Node(Leaf(2), Leaf(3)))

    @pytest.mark.parametrize("text", ["(x1", "(x1 x2))", "(x1 x2 x3)", "((x1 x3) x2)", "((x1 x1) x2)", "(x1 y2)", ""])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_paren(text)

    def test_error_has_offset(self):
        with pytest.raises(ParseError) as info:
            parse_paren("(x1 x2))")
        assert info.value.offset is not None

    def test_leaf_count_checked(self):
        with pytest.raises(ParseError):
            parse_paren("(x1 x2)", 3)

    @given(st.integers(1, 20))
    def test_left_comb(self, m):
        assert leaves(left_comb(m)) == list(range(1, m + 1))
        assert parse_paren(str(left_comb(m)), m) == left_comb(m) if m > 1 else True


class TestRows:
    def test_three_an_row(self):
        assert row_distribution(three_an(), 1) == m4({2: 1, -1: 2})

    def test_two_cand_sym_row(self):
        sixth = Fraction(1, 6)
        assert row_distribution(two_cand_sym(), 1) == m4({d: sixth for d in (1, -1, 2, -2, 3, -3)}, WEIGHTED)

    def test_zero_weight_column(self):
        tet = TransitiveElectionTable(4, FINITE, (2, 0), ((1, 3), (-2, 1)))
        assert row_distribution(tet, 1) == m4({1: 2})

    def test_index_range(self):
        with pytest.raises(DomainError):
            row_distribution(three_an(), 4)


class TestValidate:
    def test_two_cand_sym(self):
        rep = validate(two_cand_sym())
        assert rep.valid and rep.tying

    def test_three_an(self):
        rep = validate(three_an())
        assert rep.valid and rep.tying

    def test_bad_inner_node(self):
        tet = TransitiveElectionTable(4, FINITE, (1,), ((1,), (-1,), (2,)), parse_paren("((x1 x2) x3)"))
        rep = validate(tet)
        assert not rep.valid
        assert any(v.kind == "node" and v.where == "x1..x2" and v.column == 1 for v in rep.violations)

    def test_missing_parenthesization(self):
        tet = TransitiveElectionTable(4, FINITE, (1,), ((1,), (1,), (-1,)))
        assert not validate(tet).valid

    def test_non_tying_m0(self):
        tet = TransitiveElectionTable(4, FINITE, (1, 1), ((1, 2), (1, -3)))
        rep = validate(tet)
        assert rep.valid and not rep.tying

    def test_partly_zero_m0(self):
        tet = TransitiveElectionTable(4, FINITE, (1, 1), ((1, 2), (-1, 1)))
        rep = validate(tet)
        assert not rep.valid and any(v.kind == "M0" for v in rep.violations)

    def test_weighted_total(self):
        tet = TransitiveElectionTable(4, WEIGHTED, (Fraction(1, 2),), ((1,), (1,)))
        assert not validate(tet).valid

    def test_negative_weight(self):
        tet = TransitiveElectionTable(4, FINITE, (2, -1), ((1, 1), (1, 1)))
        assert any(v.kind == "weight" for v in validate(tet).violations)


def brute_force_valid(tet: TransitiveElectionTable) -> bool:
    """Recompute every node sum from scratch."""
    if any(x < 0 for x in tet.w) or tet.total() <= 0:
        return False
    if any(not in_margin_set(v, tet.k) for row in tet.M for v in row):
        return False
    m0 = [sum(tet.M[i][c] for i in range(tet.m)) for c in range(tet.t)]
    tying = all(v == 0 for v in m0)
    if not tying and any(not in_margin_set(v, tet.k) for v in m0):
        return False
    tree = tet.P if tet.P is not None else (left_comb(tet.m) if tet.m == 2 or (tet.m == 3 and tying) else None)
    if tree is None:
        return False

    def spans(node):
        if isinstance(node, Leaf):
            return []
        lo, hi = leaves(node)[0], leaves(node)[-1]
        return [(lo, hi)] + spans(node.left) + spans(node.right)

    for lo, hi in spans(tree)[1:]:
        for c in range(tet.t):
            if not in_margin_set(sum(tet.M[i][c] for i in range(lo - 1, hi)), tet.k):
                return False
    return True


@st.composite
def random_tables(draw):
    k = draw(st.integers(3, 5))
    m = draw(st.integers(2, 5))
    t = draw(st.integers(1, 4))
    entries = st.integers(1 - k, k - 1).filter(bool)
    M = tuple(tuple(draw(entries) for _ in range(t)) for _ in range(m))
    w = tuple(draw(st.integers(0, 3)) for _ in range(t))
    if not any(w):
        w = (1,) + w[1:]
    P = left_comb(m) if draw(st.booleans()) or m > 3 else None
    return TransitiveElectionTable(k, FINITE, w, M, P)


@given(random_tables())
def test_validate_matches_brute_force(tet):
    assert validate(tet).valid == brute_force_valid(tet)


class TestFile:
    def test_golden_file(self):
        tet = parse_table((DATA / "three_an.tet").read_text())
        assert (tet.t, tet.m) == (3, 3)
        assert tet == three_an()

    def test_round_trip_bytes(self):
        text = (DATA / "three_an.tet").read_text()
        assert format_table(parse_table(text)) == text

    def test_round_trip_with_tree_and_rationals(self):
        tet = TransitiveElectionTable(4, WEIGHTED, (Fraction(1, 3), Fraction(2, 3)), ((1, 2), (1, -3), (-1, -1)), parse_paren("(x1 (x2 x3))"))
        assert parse_table(format_table(tet)) == tet

    def test_comments(self):
        text = "k=4  # four\nmode=finite\nw=[1]\nM=[1] # row\nM=[1]\n"
        assert parse_table(text).m == 2

    @pytest.mark.parametrize(
        "text,line",
        [
            ("k=4\nmode=finite\nw=[1,1]\nM=[1]\nM=[1]\n", None),
            ("k=4\nmode=finite\nw=[1]\nM=[0]\nM=[1]\n", 4),
            ("k=4\nmode=finite\nw=[1/0]\nM=[1]\n", 3),
            ("k=4\nmode=bogus\nw=[1]\nM=[1]\n", 2),
            ("k=4\nmode=finite\nw=[1]\nQ=[1]\n", 4),
            ("k=4\nmode=finite\nM=[1]\n", None),
            ("k=4\nmode=finite\nw=[1]\nP=((x1 x2)\nM=[1]\nM=[1]\n", 4),
        ],
    )
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_table(text)
        assert info.value.line == line


class TestKernel:
    def test_combine(self):
        assert combine(Term.W, Term.T) == Term.W
        assert combine(Term.T, Term.X) == Term.X
        assert combine(Term.X, Term.X) == Term.X
        assert combine(Term.W, Term.L) is None
        assert combine(Term.X, Term.NEG_X) is None
        assert combine(Term.X, Term.W) is None

    def test_w_and_t(self):
        a, b = m4({1: 1, -3: 1}), m4({2: 1, 1: 1})
        tet = TransitiveElectionTable(4, FINITE, (1, 1), ((1, 2), (-3, 1)))
        facts = FactBase().with_fact(m4({1: 1, 2: 1}), Term.W, 1).with_fact(m4({-3: 1, 1: 1}), Term.T, 1)
        c = infer(tet, facts)
        assert c.vector == m4({-2: 1, 3: 1}) and c.value == Term.W

    def test_symbolic_binding(self):
        alpha = m4({2: 1, -1: 2})
        facts = FactBase().introduce(alpha, 1)
        c = infer(three_an(), facts)
        assert c.tying and c.binds

    def test_clash(self):
        tet = TransitiveElectionTable(4, FINITE, (1, 1), ((1, 2), (-3, 1)))
        facts = FactBase().with_fact(m4({1: 1, 2: 1}), Term.W, 1).with_fact(m4({-3: 1, 1: 1}), Term.L, 1)
        with pytest.raises(InconsistencyError):
            infer(tet, facts)

    def test_missing_fact(self):
        with pytest.raises(IncompleteFactsError):
            infer(three_an(), FactBase())

    def test_single_symbol(self):
        facts = FactBase().introduce(m4({2: 1, -1: 2}), 1)
        with pytest.raises(InconsistencyError):
            facts.introduce(m4({1: 3}), 2)

    def test_reflection_lookup(self):
        alpha = m4({2: 1, -1: 1, -3: 1})
        facts = FactBase().introduce(alpha, 1)
        assert facts.lookup(alpha.reflect()) == Term.NEG_X

    def test_immutability(self):
        base = FactBase()
        base.with_fact(m4({1: 1}), Term.W, 1)
        assert len(base) == 0


def _infer_or_clash(tet, facts):
    try:
        return infer(tet, facts)
    except InconsistencyError:
        return "clash"


def _borda_facts(tet):
    from bordacert.tet import row_distributions

    facts = FactBase()
    for alpha in row_distributions(tet):
        if alpha not in facts:
            facts = facts.with_fact(alpha, Term.of(sign_outcome(borda_margin(alpha))), 0)
    return facts


@st.composite
def valid_non_tying(draw):
    """Columns built as walks whose left-to-right partial sums stay in D_k."""
    k = draw(st.integers(3, 5))
    m = draw(st.integers(2, 5))
    t = draw(st.integers(1, 4))
    cols = []
    for _ in range(t):
        acc, col = 0, []
        for i in range(m):
            options = [d for d in range(1 - k, k) if d and (i == 0 or in_margin_set(acc + d, k))]
            d = draw(st.sampled_from(options))
            col.append(d)
            acc += d
        cols.append(col)
    w = tuple(draw(st.integers(1, 3)) for _ in range(t))
    M = tuple(tuple(c[i] for c in cols) for i in range(m))
    return TransitiveElectionTable(k, FINITE, w, M, left_comb(m))


@settings(max_examples=400, suppress_health_check=[HealthCheck.filter_too_much])
@given(valid_non_tying())
def test_borda_pattern_is_a_model(tet):
    from hypothesis import assume

    from bordacert.tet import m0_distribution

    c = _infer_or_clash(tet, _borda_facts(tet))
    assume(c != "clash")
    assert c.value == Term.of(sign_outcome(borda_margin(m0_distribution(tet))))


@given(valid_non_tying(), st.randoms(use_true_random=False))
def test_column_permutation_invariance(tet, rnd):
    order = list(range(tet.t))
    rnd.shuffle(order)
    permuted = TransitiveElectionTable(tet.k, tet.mode, tuple(tet.w[c] for c in order), tuple(tuple(r[c] for c in order) for r in tet.M), tet.P)
    facts = _borda_facts(tet)
    assert _infer_or_clash(permuted, facts) == _infer_or_clash(tet, facts)


@given(valid_non_tying(), st.data())
def test_column_split_invariance(tet, data):
    c = data.draw(st.integers(0, tet.t - 1))
    x = tet.w[c]
    part = data.draw(st.integers(0, x))
    w = tet.w[:c] + (part, x - part) + tet.w[c + 1 :]
    M = tuple(r[:c] + (r[c], r[c]) + r[c + 1 :] for r in tet.M)
    split = TransitiveElectionTable(tet.k, tet.mode, w, M, tet.P)
    from bordacert.tet import row_distributions

    assert row_distributions(split) == row_distributions(tet)
    facts = _borda_facts(tet)
    assert _infer_or_clash(split, facts) == _infer_or_clash(tet, facts)


class TestCertificates:
    def _cert(self):
        alpha = m4({2: 1, -1: 2})
        step = Step(three_an(), ("X", "X", "X"), "X=T")
        return Certificate(4, FINITE, Goal("tie", (alpha,)), (step,))

    def test_replay(self):
        rep = replay(self._cert())
        assert rep.accepted and rep.steps_checked == 1

    def test_round_trip(self, tmp_path):
        cert = self._cert()
        write_certificate(cert, tmp_path / "c")
        again = read_certificate(tmp_path / "c")
        assert again.goal == cert.goal and [s.table for s in again.steps] == [s.table for s in cert.steps]
        assert replay(again).accepted

    def test_wrong_claim_rejected(self):
        cert = self._cert()
        bad = Certificate(4, FINITE, cert.goal, (Step(three_an(), ("X", "X", "X"), "2,0,1,0,0,0=W"),))
        assert not replay(bad).accepted

    def test_forward_reference_rejected(self):
        cert = self._cert()
        bad = Certificate(4, FINITE, cert.goal, (Step(three_an(), ("step 1", "step 1", "step 1"), "X=T"),))
        rep = replay(bad)
        assert not rep.accepted and rep.failed_step == 1

    def test_unmet_goal(self):
        cert = self._cert()
        other = Certificate(4, FINITE, Goal("tie", (m4({1: 3}),)), cert.steps)
        assert not replay(other).accepted

    def test_axiom_needs_symmetry(self):
        bad = Certificate(4, FINITE, Goal("tie", (m4({2: 1, -1: 2}),)), (Step(three_an(), ("axiom-tying",) * 3, "T=T"),))
        assert not replay(bad).accepted
