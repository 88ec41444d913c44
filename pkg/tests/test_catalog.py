import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bordacert.catalog import LemmaId, build_table, check_built, gamma_select, reduce_margins, sample_params, split_profile
from bordacert.catalog.samplers import weighted_with_margin
from bordacert.catalog.families import comb_rows, diagonal, doubling_rows
from bordacert.core import FINITE, WEIGHTED, MarginDistribution, MarginProfile, in_margin_set
from bordacert.errors import PreconditionError
from bordacert.tet import row_distributions, validate

from conftest import weighted_distributions


def desc(*v, mode=FINITE):
    return MarginDistribution.from_descending(4, v, mode)


# --- fixed examples --------------------------------------------------------------


def test_secondcomb_example_rows():
    alpha = desc(0, F(1, 6), F(1, 3), F(1, 3), F(1, 6), 0, mode=WEIGHTED)
    built = build_table("Lsecondcomb", alpha=alpha)
    assert check_built(built) == []
    a3, a2, a1, am1, am2, am3 = alpha.descending()
    want = desc(a1 / 2, (a3 + am1) / 2, a3 / 2 + a2, am3 / 2 + am2, (a1 + am3) / 2, am1 / 2, mode=WEIGHTED)
    assert comb_rows(alpha) == want
    assert all(r == want for r in row_distributions(built.table))


def test_diagonal_example():
    assert diagonal(9, 2, 1) == desc(0, 2, 2, 4, 1, 0)
    built = build_table(LemmaId.Ldiagonals, n=9, a=1, s1=1, s2=2)
    assert check_built(built) == []
    assert row_distributions(built.table)[0] == desc(0, 2, 2, 4, 1, 0)


def test_firstcomb_precondition():
    with pytest.raises(PreconditionError, match="a3 <= a-2 \\+ a-3"):
        build_table(LemmaId.Lfirstcomb, alpha=desc(F(1, 4), 0, 0, F(3, 4), 0, 0, mode=WEIGHTED))


@pytest.mark.parametrize(
    "lemma, params",
    [
        ("Ltwelvestep", {"n": 6, "a": 1}),
        ("Ltwelvestep", {"n": 12, "a": 3}),
        ("Lkleqn4a", {"n": 12, "a": 4}),
        ("Lkleqn4b", {"n": 13, "a": 1}),
        ("Lkleqn3_3an", {"n": 10}),
        ("Lkleqn3_beta", {"n": 12, "a": 3}),
        ("Ldiagonals", {"n": 9, "a": 1, "s1": 3, "s2": 1}),
        ("LconsistentAk", {"b1": F(3, 4), "b2": F(1, 2)}),
        ("Ln2special", {"index": 8}),
    ],
)
def test_out_of_region_parameters_rejected(lemma, params):
    with pytest.raises(PreconditionError):
        build_table(lemma, **params)


def test_unknown_lemma():
    with pytest.raises(PreconditionError):
        LemmaId.parse("Lnope")


def test_gamma_select_example():
    g3, g1, gm1, gm3, d2, dm2 = gamma_select(desc(0, 1, 2, 2, 1, 0))
    assert g3 == gm3 == 0
    assert g1 + gm1 == 2


def test_gamma_select_zero():
    assert gamma_select(desc(0, 0, 0, 0, 0, 0)) == (0,) * 6


def test_gamma_select_rejects_single_three():
    with pytest.raises(PreconditionError):
        gamma_select(desc(1, 0, 0, 3, 0, 0))


def test_gamma_select_rejects_nonzero_margin():
    with pytest.raises(PreconditionError):
        gamma_select(desc(0, 1, 0, 0, 0, 0))


def test_reduce_margins_halving():
    e = MarginProfile(4, (-1, -1, -2))
    u = reduce_margins(e, -2, "halving")
    assert sum(u.values) == -2
    assert all(in_margin_set(x, 4) and in_margin_set(y - x, 4) for x, y in zip(u.values, e.values))


def test_reduce_margins_rejects_n2():
    with pytest.raises(PreconditionError):
        reduce_margins(MarginProfile(4, (-1, -1)), -1, "halving")


def test_reduce_margins_rejects_wrong_target():
    with pytest.raises(PreconditionError):
        reduce_margins(MarginProfile(4, (-1, -1, -2)), -1, "halving")


@pytest.mark.parametrize("values, margins", [((4, -4), (0, 0)), ((-4, 3), (0, -1)), ((-4, -4, 1), (-3, -4))])
def test_split_profile(values, margins):
    u, v = split_profile(MarginProfile(5, values))
    assert u.k == v.k == 4
    assert (sum(u.values), sum(v.values)) == margins
    assert tuple(a + b for a, b in zip(u.values, v.values)) == values


def test_split_profile_rejects_positive_margin():
    with pytest.raises(PreconditionError):
        split_profile(MarginProfile(5, (4, -3)))


def test_split_profile_needs_extreme_entry():
    with pytest.raises(PreconditionError):
        split_profile(MarginProfile(5, (3, -3)))


# --- sampled hypothesis regions --------------------------------------------------


@pytest.mark.parametrize("lemma", list(LemmaId), ids=str)
def test_sampled_tables_hold(lemma):
    rng = random.Random(f"catalog-{lemma}")
    for _ in range(30):
        params, _notes = sample_params(lemma, rng)
        built = build_table(lemma, **params)
        assert check_built(built) == [], params


def test_sampling_is_seeded():
    a = [sample_params(l, random.Random(3))[0] for l in LemmaId]
    b = [sample_params(l, random.Random(3))[0] for l in LemmaId]
    assert a == b


def test_check_built_flags_wrong_target():
    built = build_table("Lkleqn3_3an", n=6)
    from dataclasses import replace

    assert check_built(replace(built, target=desc(1, 0, 0, 0, 0, 5)))


# --- properties ----------------------------------------------------------------------


@given(weighted_distributions(k=4))
def test_doubling_property(alpha):
    built = build_table(LemmaId.Ldoubling, alpha=alpha)
    assert check_built(built) == []
    rows = row_distributions(built.table)
    assert rows[0] == rows[1] == doubling_rows(alpha)
    assert rows[0].margin_sum() == alpha.margin_sum() / 2


@st.composite
def hexagon_points(draw):
    b1 = F(draw(st.integers(-24, 24)), 24)
    lo, hi = max(-1, -1 - b1), min(1, 1 - b1)
    b2 = F(draw(st.integers(int(lo * 24), int(hi * 24))), 24)
    return b1, b2


@given(hexagon_points())
def test_consistent_ak_property(point):
    b1, b2 = point
    built = build_table(LemmaId.LconsistentAk, b1=b1, b2=b2)
    assert validate(built.table).valid
    assert check_built(built) == []
    rows = row_distributions(built.table)
    assert (rows[0].margin_sum(), rows[1].margin_sum()) == (b1, b2)


@given(st.randoms(use_true_random=False))
@settings(max_examples=50)
def test_thirdcomb_on_zero_margin(rng):
    alpha = weighted_with_margin(rng)
    assert alpha.margin_sum() == 0
    built = build_table(LemmaId.Lthirdcomb, alpha=alpha)
    assert check_built(built) == []


def test_split_profile_symmetric_halves():
    u, v = split_profile(MarginProfile(5, (4, -4)))
    assert u.values == v.values == (2, -2)
