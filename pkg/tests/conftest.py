"""Shared strategies and the acceptance summary printed at the end of a run."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bordacert.core import FINITE, WEIGHTED, MarginDistribution, Ranking, WeightedElection, all_rankings

settings.register_profile("repo", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def record(number: int, name: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[number] = (name, ok, detail)
    print(f"ACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {name} {detail}".rstrip())


@st.composite
def finite_distributions(draw, k=None, n=None, max_n=6):
    k = draw(st.integers(2, 6)) if k is None else k
    n = draw(st.integers(1, max_n)) if n is None else n
    size = 2 * (k - 1)
    cuts = sorted(draw(st.lists(st.integers(0, n), min_size=size - 1, max_size=size - 1)))
    weights = [b - a for a, b in zip([0, *cuts], [*cuts, n])]
    return MarginDistribution(k, tuple(weights), FINITE)


@st.composite
def weighted_distributions(draw, k=None):
    k = draw(st.integers(2, 6)) if k is None else k
    raw = draw(st.lists(st.integers(0, 12), min_size=2 * (k - 1), max_size=2 * (k - 1)).filter(any))
    total = sum(raw)
    return MarginDistribution(k, tuple(Fraction(x, total) for x in raw), WEIGHTED)


@st.composite
def elections(draw, k=None, max_ballots=6):
    k = draw(st.integers(2, 5)) if k is None else k
    rankings = all_rankings(k)
    picks = draw(st.lists(st.sampled_from(rankings), min_size=1, max_size=max_ballots))
    counts: dict[Ranking, int] = {}
    for r in picks:
        counts[r] = counts.get(r, 0) + 1
    return WeightedElection.from_weights(k, counts)


@pytest.fixture
def d4():
    def make(*descending, mode=FINITE):
        return MarginDistribution.from_descending(4, descending, mode)

    return make
