import pytest

from bordacert.tet import m0_distribution, row_distributions, validate

import golden

CASES = golden.cases()


@pytest.mark.parametrize("case", CASES, ids=[c.name for c in CASES])
def test_reference_table(case):
    report = validate(case.table)
    assert report.valid, report.violations
    assert report.tying == case.tying
    if case.tying:
        assert all(x == 0 for x in case.table.m0())
        return
    if case.target is not None:
        assert m0_distribution(case.table) == case.target
    if case.row_margins is not None:
        assert tuple(r.margin_sum() for r in row_distributions(case.table)) == tuple(case.row_margins)


@pytest.mark.parametrize("case", [c for c in CASES if c.name.startswith("secondcomb")], ids=lambda c: c.name)
def test_secondcomb_rows_closed_form(case):
    rows = row_distributions(case.table)
    assert rows[0] == rows[1] == golden.second_comb_row(case.target)


@pytest.mark.parametrize("case", [c for c in CASES if c.name.startswith("doubling")], ids=lambda c: c.name)
def test_doubling_rows_closed_form(case):
    rows = row_distributions(case.table)
    assert rows[0] == rows[1] == golden.doubling_row(case.target)


@pytest.mark.parametrize("case", [c for c in CASES if c.name.startswith("firstgeq")], ids=lambda c: c.name)
def test_firstgeq_first_row_is_reference(case):
    assert row_distributions(case.table)[0] == golden.reference(case.target.margin_sum())


def test_diagonal_row_example():
    assert row_distributions(golden.diagonals(9, 1, 1, 2, 0))[0] == golden.desc(0, 2, 2, 4, 1, 0)


def test_kleqn4_second_column_needs_minus_three():
    # With (1, -1) as the second column its sum is not a valid margin.
    from bordacert.core import FINITE
    from bordacert.tet import TransitiveElectionTable

    w = (2, 2, 0, 0, 1, 1, 4, 2)
    M = ((-3, 1, -2, 3, 3, -1, 1, -1), (1, -1, 3, -2, -1, 3, 1, -1))
    assert not validate(TransitiveElectionTable(4, FINITE, w, M)).valid
