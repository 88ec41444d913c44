"""Constructors for every parameterized transitive election table.

``build_table(lemma, **params)`` checks the hypotheses, builds the table and
records what it should conclude: the target distribution of ``M0`` (``None``
for tying tables), the expected row distributions, and each row's Borda margin.
``check_built`` verifies all of that independently of the constructor.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from ..core import FINITE, WEIGHTED, MarginDistribution, MarginProfile, Weight
from ..errors import PreconditionError
from ..tet.paren import ParenTree, parse_paren
from ..tet.table import TransitiveElectionTable, m0_distribution, row_distributions, validate
from . import families as fam
from .families import half, parts, v4
from .reductions import HALVING, M1_NEGATIVE, M1_POSITIVE, gamma_select, reduce_margins, split_profile


class LemmaId(Enum):
    L2candsym = "L2candsym"
    Lfirstcomb = "Lfirstcomb"
    Lsecondcomb = "Lsecondcomb"
    Lthirdcomb = "Lthirdcomb"
    Lfirstgeq = "Lfirstgeq"
    Lsecondgeq = "Lsecondgeq"
    Ldoubling = "Ldoubling"
    LconsistentAk = "LconsistentAk"
    Llayersk = "Llayersk"
    Ldiagonals = "Ldiagonals"
    Ltwelvestep = "Ltwelvestep"
    Lkleqn4a = "Lkleqn4a"
    Lkleqn4b = "Lkleqn4b"
    Lkleqn3_3an = "Lkleqn3_3an"
    Lkleqn3_beta = "Lkleqn3_beta"
    Lkleqn3_gamma = "Lkleqn3_gamma"
    Lalmostb4 = "Lalmostb4"
    Laddingthrees = "Laddingthrees"
    Lalpha12 = "Lalpha12"
    Lalpha1 = "Lalpha1"
    Lalpha2 = "Lalpha2"
    Lsmalln = "Lsmalln"
    Lfirstm1_odd = "Lfirstm1_odd"
    Lfirstm1_even = "Lfirstm1_even"
    Levenfix = "Levenfix"
    Lsecondm1 = "Lsecondm1"
    Lthirdm1A = "Lthirdm1A"
    Lthirdm1 = "Lthirdm1"
    Llastm1 = "Llastm1"
    Lmmain = "Lmmain"
    Ln2special = "Ln2special"
    Lak = "Lak"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> LemmaId:
        try:
            return cls(text)
        except ValueError:
            raise PreconditionError(f"unknown lemma id {text!r}") from None


@dataclass(frozen=True)
class BuiltTable:
    lemma: LemmaId
    table: TransitiveElectionTable
    target: MarginDistribution | None
    rows: tuple[MarginDistribution | None, ...]
    row_margins: tuple[Weight | None, ...]

    @property
    def tying(self) -> bool:
        return self.target is None


Column = tuple[Weight, tuple[int, ...]]


def _require(cond: bool, text: str) -> None:
    if not cond:
        raise PreconditionError(f"hypothesis fails: {text}")


def _table(k: int, mode: str, cols: Sequence[Column], P: ParenTree | None = None) -> TransitiveElectionTable:
    m = len(cols[0][1])
    return TransitiveElectionTable(k, mode, tuple(w for w, _ in cols), tuple(tuple(c[i] for _, c in cols) for i in range(m)), P)


def _pair(w: Weight, a: int, b: int) -> list[Column]:
    """A weight split over ``(a, b)`` and ``(b, a)``."""
    return [(w, (a, b)), (w, (b, a))]


def _profile_table(k: int, rows: Sequence[Sequence[int]], P: ParenTree | None = None) -> TransitiveElectionTable:
    """One unit column per voter, identical columns merged."""
    cols = [(1, tuple(col)) for col in zip(*rows)]
    return _table(k, FINITE, cols, P).grouped()


def _built(lemma, table, target, rows, margins=None) -> BuiltTable:
    rows = tuple(rows)
    if margins is None:
        margins = tuple(None if r is None else r.margin_sum() for r in rows)
    return BuiltTable(lemma, table, target, rows, tuple(margins))


def _weighted4(alpha: MarginDistribution) -> None:
    _require(alpha.k == 4 and alpha.mode == WEIGHTED, "weighted distribution over D_4")


def _finite4(alpha: MarginDistribution) -> None:
    _require(alpha.k == 4 and alpha.mode == FINITE, "finite distribution over D_4")


# --- weighted mode -----------------------------------------------------------


def two_candidate_symmetric(alpha: MarginDistribution) -> BuiltTable:
    _require(alpha.is_symmetric(), "a_d = a_-d for every d")
    cols: list[Column] = []
    for d in range(1, alpha.k):
        cols += [(alpha[d], (d, -d)), (alpha[-d], (-d, d))]
    return _built(LemmaId.L2candsym, _table(alpha.k, alpha.mode, cols), None, (alpha, alpha))


def first_comb(alpha: MarginDistribution) -> BuiltTable:
    _weighted4(alpha)
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    _require(alpha.margin_sum() == 0, "d1(alpha) = 0")
    _require(a3 <= am2 + am3, "a3 <= a-2 + a-3")
    _require(am2 + am3 <= a1 + a2 + a3, "a-2 + a-3 <= a1 + a2 + a3")
    _require(am3 <= a2 + a3, "a-3 <= a2 + a3")
    _require(a2 + a3 <= am1 + am2 + am3, "a2 + a3 <= a-1 + a-2 + a-3")
    s = max(Fraction(0), am3 - a3)
    t = max(Fraction(0), half(am2 - a2 + am3 - a3))
    cols = (
        _pair(half(a2 - s), -1, 3)
        + _pair(t, -2, 3)
        + _pair(half(a3), 1, 2)
        + _pair(half(a1) - t, -1, 2)
        + _pair(t + half(a2 - am2 + a3 - am3), -3, 2)
        + [(s, (1, 1))]
        + _pair(half(a1 + a2 - am2) + a3 - am3 - t, -2, 1)
        + _pair(half(am2 + am3 - a3 - s), -3, 1)
        + [(s + a3 - am3, (-1, -1))]
        + _pair(half(am3), -2, -1)
    )
    outer = half(a2 - s) + t
    middle = half(a2 - am2 + 2 * a3 - am3 + a1)
    inner = half(a2 + s + a1 - am3) - t + a3
    row = v4(outer, middle, inner, inner, middle, outer, WEIGHTED)
    return _built(LemmaId.Lfirstcomb, _table(4, WEIGHTED, cols), alpha, (row, row))


def _comb_columns(alpha: MarginDistribution) -> list[Column]:
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    return (
        _pair(half(a1), -2, 3)
        + _pair(half(a3), 1, 2)
        + _pair(half(am1), -3, 2)
        + [(a2, (1, 1)), (am2, (-1, -1))]
        + _pair(half(am3), -2, -1)
    )


def second_comb(alpha: MarginDistribution) -> BuiltTable:
    _weighted4(alpha)
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    _require(alpha.margin_sum() == 0, "d1(alpha) = 0")
    _require(am3 <= 2 * a2 + 2 * a3, "a-3 <= 2 a2 + 2 a3")
    _require(a3 <= 2 * am2 + 2 * am3, "a3 <= 2 a-2 + 2 a-3")
    row = fam.comb_rows(alpha)
    return _built(LemmaId.Lsecondcomb, _table(4, WEIGHTED, _comb_columns(alpha)), alpha, (row, row))


def third_comb(alpha: MarginDistribution) -> BuiltTable:
    _weighted4(alpha)
    _require(alpha.margin_sum() == 0, "d1(alpha) = 0")
    row = fam.comb_rows(alpha)
    return _built(LemmaId.Lthirdcomb, _table(4, WEIGHTED, _comb_columns(alpha)), alpha, (row, row))


def _share(part: Weight, whole: Weight, amount: Weight) -> Fraction:
    return Fraction(0) if whole == 0 else Fraction(part) / whole * amount


def first_geq(alpha: MarginDistribution) -> BuiltTable:
    _weighted4(alpha)
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    b = alpha.margin_sum()
    _require(a3 == 0 and am3 == 0, "a3 = a-3 = 0")
    _require(a1 + am1 >= Fraction(1, 2), "a1 + a-1 >= 1/2")
    _require(0 <= b <= Fraction(1, 10), "0 <= d1(alpha) <= 1/10")
    q = Fraction(1, 4)
    c = min(a1, q - half(b), a1 + am1 - Fraction(1, 2))
    upper = 3 * q + half(b) - a1 - am1 + c
    lower = q - half(b) - c
    cols: list[Column] = [
        (c, (-1, 2)),
        (a1 + am1 - Fraction(1, 2) - c, (1, -2)),
        (half(a1 - c), (2, -1)),
        (half(a1 - c), (-2, 3)),
        (half(Fraction(1, 2) - a1 + c), (2, -3)),
        (half(Fraction(1, 2) - a1 + c), (-2, 1)),
        (_share(a2, a2 + am2, upper), (1, 1)),
        (_share(am2, a2 + am2, upper), (1, -3)),
        (_share(a2, a2 + am2, lower), (-1, 3)),
        (_share(am2, a2 + am2, lower), (-1, -1)),
    ]
    return _built(LemmaId.Lfirstgeq, _table(4, WEIGHTED, cols), alpha, (fam.reference(b), None), (b, 0))


def second_geq(alpha: MarginDistribution) -> BuiltTable:
    _weighted4(alpha)
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    b = alpha.margin_sum()
    _require(a3 == 0 and am3 == 0, "a3 = a-3 = 0")
    _require(0 <= b <= Fraction(1, 10), "0 <= d1(alpha) <= 1/10")
    _require(a1 + am1 < Fraction(1, 2), "a1 + a-1 < 1/2 (otherwise the first geq table applies)")
    lam = Fraction(1, 2) + Fraction(b) / (2 + 2 * a1 + 2 * am1)
    cols: list[Column] = [
        (lam * a1, (2, -1)),
        (lam * am1, (2, -3)),
        ((1 - lam) * a1, (-2, 3)),
        ((1 - lam) * am1, (-2, 1)),
        (lam * a2, (1, 1)),
        (lam * am2, (1, -3)),
        ((1 - lam) * a2, (-1, 3)),
        ((1 - lam) * am2, (-1, -1)),
    ]
    s1, s2 = a1 + am1, a2 + am2
    row = v4(0, lam * s1, lam * s2, (1 - lam) * s2, (1 - lam) * s1, 0, WEIGHTED)
    return _built(LemmaId.Lsecondgeq, _table(4, WEIGHTED, cols), alpha, (row, None), (b, 0))


def doubling(alpha: MarginDistribution) -> BuiltTable:
    _weighted4(alpha)
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    cols = (
        _pair(half(a3), 1, 2)
        + [(a2, (1, 1))]
        + _pair(half(a1), -1, 2)
        + _pair(half(am1), -2, 1)
        + [(am2, (-1, -1))]
        + _pair(half(am3), -1, -2)
    )
    row = fam.doubling_rows(alpha)
    return _built(LemmaId.Ldoubling, _table(4, WEIGHTED, cols), alpha, (row, row))


def layers(alpha: MarginDistribution) -> BuiltTable:
    """Halve the margin of a ``k``-candidate distribution into ``D_{k-1}``."""
    k = alpha.k
    _require(k >= 4 and alpha.mode == WEIGHTED, "weighted distribution with k >= 4")
    cols: list[Column] = []
    row: dict[int, Fraction] = {}

    def add(d: int, w: Fraction) -> None:
        row[d] = row.get(d, Fraction(0)) + w

    for sign in (1, -1):
        for i in range(1, (k - 1) // 2 + 1):
            w = alpha[sign * 2 * i]
            cols.append((w, (sign * i, sign * i)))
            add(sign * i, 2 * Fraction(w) / 2)
        for i in range(1, (k - 2) // 2 + 1):
            w = half(alpha[sign * (2 * i + 1)])
            cols += _pair(w, sign * i, sign * (i + 1))
            add(sign * i, w)
            add(sign * (i + 1), w)
    cols += _pair(half(alpha[1]), -1, 2) + _pair(half(alpha[-1]), -2, 1)
    add(-1, half(alpha[1]))
    add(2, half(alpha[1]))
    add(-2, half(alpha[-1]))
    add(1, half(alpha[-1]))
    expected = MarginDistribution.from_mapping(k, row, WEIGHTED)
    b = alpha.margin_sum()
    return _built(LemmaId.Llayersk, _table(k, WEIGHTED, cols), alpha, (expected, expected), (b / 2, b / 2))


_HEXAGON = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def hexagon_weights(b1: Fraction, b2: Fraction) -> dict[tuple[int, int], Fraction]:
    """Convex weights on the hexagon vertices, from the fan of triangles at ``(1, 0)``."""
    b1, b2 = Fraction(b1), Fraction(b2)
    _require(abs(b1) <= 1 and abs(b2) <= 1 and abs(b1 + b2) <= 1, "(b1, b2) inside the hexagon")
    p0 = _HEXAGON[0]
    for i in range(1, 5):
        p1, p2 = _HEXAGON[i], _HEXAGON[i + 1]
        det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])
        l1 = Fraction((b1 - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (b2 - p0[1]), det)
        l2 = Fraction((p1[0] - p0[0]) * (b2 - p0[1]) - (b1 - p0[0]) * (p1[1] - p0[1]), det)
        l0 = 1 - l1 - l2
        if min(l0, l1, l2) >= 0:
            out = {v: Fraction(0) for v in _HEXAGON}
            out[p0] += l0
            out[p1] += l1
            out[p2] += l2
            return out
    raise PreconditionError(f"({b1}, {b2}) not in the hexagon")  # pragma: no cover


def consistent_triple(b1: Fraction, b2: Fraction) -> BuiltTable:
    lam = hexagon_weights(b1, b2)
    cols: list[Column] = []
    blocks = {
        (1, 0): [(1, 2), (1, -2)],
        (0, 1): [(2, 1), (-2, 1)],
        (1, -1): [(1, 1), (1, -3)],
        (-1, 1): [(1, 1), (-3, 1)],
        (-1, 0): [(-1, 2), (-1, -2)],
        (0, -1): [(2, -1), (-2, -1)],
    }
    for v in _HEXAGON:
        for col in blocks[v]:
            cols.append((lam[v] / 2, col))
    tet = _table(4, WEIGHTED, cols)
    return _built(LemmaId.LconsistentAk, tet, m0_distribution(tet) if not tet.is_tying() else None, (None, None), (b1, b2))


# --- finite mode, margin zero -----------------------------------------------------


def _diag_params(n: int, a: int) -> None:
    _require(n >= 1 and a >= 0, "n >= 1, a >= 0")
    _require((n - a) % 2 == 0, "2 | n - a")
    _require(3 * a <= n, "a <= n/3")


def diagonal_triple(n: int, a: int, s1: int, s2: int) -> BuiltTable:
    _diag_params(n, a)
    m = (n - 3 * a) // 2
    s3 = m - s1 - s2
    _require(s1 >= 0 and s2 >= 0 and s3 >= 0, "s1, s2, s3 >= 0 with s1 + s2 + s3 = (n - 3a)/2")
    w = (s1 + a, s2 + a, s3 + a, s1, s2, s3)
    M = ((2, -1, -1, -2, 1, 1), (-1, 2, -1, 1, -2, 1))
    tet = TransitiveElectionTable(4, FINITE, w, M)
    rows = (fam.diagonal(n, s1 + a, a), fam.diagonal(n, s2 + a, a))
    return _built(LemmaId.Ldiagonals, tet, fam.diagonal(n, s3 + a, a).reflect(), rows)


TWELVE_ROWS = (
    (-1, -1, -1, 1, 2, -1, 1),
    (-1, -1, 2, 1, -1, -1, 1),
    (-1, -1, 2, -1, 1, -1, 1),
    (-1, 1, -1, -1, 2, 1, -1),
    (2, 1, -1, -1, -1, 1, -1),
    (-1, -1, 1, 2, -1, -1, 1),
    (2, -1, -1, 1, -1, 1, -1),
    (-1, -1, -1, 2, 1, -1, 1),
    (-1, 2, -1, -1, 1, -1, 1),
    (-1, 2, 1, -1, -1, 1, -1),
    (2, -1, 1, -1, -1, 1, -1),
    (2, 1, -1, -1, -1, 1, -1),
)
TWELVE_P = "(((((((x1 x2) x3) (x4 x5)) x6) x7) (x8 x9)) ((x10 x11) x12))"


def twelve_step(n: int, a: int) -> BuiltTable:
    _require((n - a) % 2 == 0, "2 | n - a")
    _require(a >= 0 and 5 * a <= n, "0 <= a <= n/5")
    ell = (n - 5 * a) // 2
    tet = TransitiveElectionTable(4, FINITE, (a,) * 5 + (ell,) * 2, TWELVE_ROWS, parse_paren(TWELVE_P, 12))
    return _built(LemmaId.Ltwelvestep, tet, None, (fam.anchor(n, a),) * 12)


def _kleqn4_params(n: int, a: int) -> int:
    b = n % 2
    _require((n - a) % 2 == 0, "2 | n - a")
    _require(b <= a and 4 * a <= n, "b <= a <= n/4")
    return b


def kleqn4_first(n: int, a: int) -> BuiltTable:
    b = _kleqn4_params(n, a)
    w = ((a - b) // 2, (n - a) // 2, (a + b) // 2, (n - 3 * a) // 2, b, a - b)
    M = ((2, -1, 2, 1, -1, -1), (1, 2, -1, -2, -1, -2))
    rows = (fam.anchor(n, a), fam.diagonal(n, (n - a) // 2, b))
    return _built(LemmaId.Lkleqn4a, TransitiveElectionTable(4, FINITE, w, M), fam.kleqn4_gamma(n, a, b), rows)


def kleqn4_second(n: int, a: int) -> BuiltTable:
    b = _kleqn4_params(n, a)
    _require(a >= 3 * b, "a >= 3b")
    w = (a - b, a - b, b, b, (a - 3 * b) // 2, (a - 3 * b) // 2, (n - 2 * a + 3 * b) // 2, (n - 4 * a + 3 * b) // 2)
    M = ((-3, 1, -2, 3, 3, -1, 1, -1), (1, -3, 3, -2, -1, 3, 1, -1))
    gamma = fam.kleqn4_gamma(n, a, b)
    return _built(LemmaId.Lkleqn4b, TransitiveElectionTable(4, FINITE, w, M), fam.kleqn4_delta(n, b), (gamma, gamma))


def three_an(n: int) -> BuiltTable:
    _require(n >= 3 and n % 3 == 0, "3 | n")
    a = n // 3
    M = ((2, -1, -1), (-1, 2, -1), (-1, -1, 2))
    tet = TransitiveElectionTable(4, FINITE, (a, a, a), M)
    return _built(LemmaId.Lkleqn3_3an, tet, None, (fam.anchor(n, a),) * 3)


def _kleqn3_params(n: int, a: int) -> None:
    _require((n - a) % 2 == 0, "2 | n - a")
    _require(n < 4 * a < 4 * n / 3, "n/4 < a < n/3")


def kleqn3_beta(n: int, a: int) -> BuiltTable:
    _kleqn3_params(n, a)
    x, y = (n - 3 * a) // 2, (5 * a - n) // 2
    w = (x, x, y, y, n - 2 * a)
    M = ((2, 1, 2, -1, -1), (1, 2, -1, 2, -1))
    row = fam.anchor(n, a)
    return _built(LemmaId.Lkleqn3_beta, TransitiveElectionTable(4, FINITE, w, M), fam.kleqn3_beta(n, a), (row, row))


def kleqn3_gamma(n: int, a: int) -> BuiltTable:
    _kleqn3_params(n, a)
    w = (n - 3 * a, n - 3 * a, a, a, 4 * a - n)
    M = ((3, -2, 1, -2, 1), (-2, 3, -2, 1, 1))
    row = fam.kleqn3_beta(n, a)
    return _built(LemmaId.Lkleqn3_gamma, TransitiveElectionTable(4, FINITE, w, M), fam.anchor(n, 4 * a - n), (row, row))


def _tied4(alpha: MarginDistribution) -> None:
    _finite4(alpha)
    _require(alpha.margin_sum() == 0, "d1(alpha) = 0")


def _split_columns(alpha: MarginDistribution, delta: tuple[int, int] = (0, 0)) -> list[Column]:
    """Columns of the tie-splitting table; both rows have margin zero."""
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    g3, g1, gm1, gm3, d2, dm2 = gamma_select(alpha, delta)
    return [
        (g3, (2, 1)),
        (a3 - g3, (1, 2)),
        (a2 - 2 * d2, (1, 1)),
        (d2, (3, -1)),
        (d2, (-1, 3)),
        (g1, (2, -1)),
        (a1 - g1, (-1, 2)),
        (gm1, (1, -2)),
        (am1 - gm1, (-2, 1)),
        (am2 - 2 * dm2, (-1, -1)),
        (dm2, (-3, 1)),
        (dm2, (1, -3)),
        (gm3, (-1, -2)),
        (am3 - gm3, (-2, -1)),
    ]


def _from_columns(lemma: LemmaId, target: MarginDistribution, cols: list[Column]) -> BuiltTable:
    cols = [c for c in cols if c[0]] or cols
    tet = _table(4, FINITE, cols)
    rows = row_distributions(tet)
    return _built(lemma, tet, target, rows, (0,) * len(rows))


def almost_b4(alpha: MarginDistribution, delta: tuple[int, int] = (0, 0)) -> BuiltTable:
    _tied4(alpha)
    a3, _, _, _, _, am3 = parts(alpha)
    _require(a3 + am3 != 1, "a3 + a-3 != 1")
    built = _from_columns(LemmaId.Lalmostb4, alpha, _split_columns(alpha, delta))
    if delta == (0, 0):
        for r in built.rows:
            _require(r[3] == 0 and r[-3] == 0, "rows avoid margins +-3")
    return built


def _minus(alpha: MarginDistribution, *desc: int) -> MarginDistribution:
    a = parts(alpha)
    return v4(*(x - y for x, y in zip(a, desc)))


def _extended(lemma, alpha, rest: MarginDistribution, extra1: Sequence[int], extra2: Sequence[int], delta=(0, 0)) -> BuiltTable:
    cols = _split_columns(rest, delta) if rest.total else []
    cols = [c for c in cols if c[0]] + [(1, (x, y)) for x, y in zip(extra1, extra2)]
    return _from_columns(lemma, alpha, cols)


def adding_threes(alpha: MarginDistribution) -> BuiltTable:
    """Split a tied, ``+-3``-free vector into two tied rows that each use a ``+-3``."""
    _tied4(alpha)
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    _require(a3 == 0 and am3 == 0, "a3 = a-3 = 0")
    _require(alpha.total >= 3, "n >= 3")
    L = LemmaId.Laddingthrees
    if a2 >= 2 or am2 >= 2:
        delta = (1, 0) if a2 >= 2 else (0, 1)
        return _from_columns(L, alpha, [c for c in _split_columns(alpha, delta) if c[0]])
    if (a2, am2) == (1, 0):
        return _extended(L, alpha, _minus(alpha, 0, 1, 0, 2, 0, 0), (1, -3, 2), (1, 2, -3))
    if (a2, am2) == (0, 1):
        return _extended(L, alpha, _minus(alpha, 0, 0, 2, 0, 1, 0), (-1, 3, -2), (-1, -2, 3))
    if (a2, am2) == (1, 1):
        return _extended(L, alpha, _minus(alpha, 0, 1, 1, 1, 1, 0), (3, 2, -2, -3), (-1, -3, 3, 1))
    return _extended(L, alpha, _minus(alpha, 0, 0, 2, 2, 0, 0), (3, -3, 2, -2), (-2, 2, -3, 3))


def _one_three(alpha: MarginDistribution) -> tuple[int, ...]:
    _tied4(alpha)
    a = parts(alpha)
    _require(a[0] == 1 and a[5] == 0, "a3 = 1 and a-3 = 0")
    return a


def alpha12(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _one_three(alpha)
    _require(am1 >= 1 and am2 >= 1, "a-1 >= 1 and a-2 >= 1")
    _require(alpha.total >= 6, "n >= 6")
    inner = adding_threes(_minus(alpha, 1, 0, 0, 1, 1, 0))
    cols = [(w, c) for w, c in zip(inner.table.w, zip(*inner.table.M))] + [(1, (-3, 2)), (1, (2, 1)), (1, (1, -3))]
    return _from_columns(LemmaId.Lalpha12, alpha, cols)


ALPHA1_ROWS = ((3, -1, -1, -1, 1, -1), (-1, 3, -1, -1, 1, -1), (-1, -1, 3, -1, -1, 1), (-1, -1, -1, 3, -1, 1))
ALPHA1_P = "((x1 x2) (x3 x4))"


def alpha1(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _one_three(alpha)
    _require(am2 == 0, "a-2 = 0")
    if a2 == 0:
        tet = TransitiveElectionTable(4, FINITE, (1, 1, 1, 1, a1, a1), ALPHA1_ROWS, parse_paren(ALPHA1_P, 4))
        return _built(LemmaId.Lalpha1, tet, None, (alpha,) * 4)
    return _extended(LemmaId.Lalpha1, alpha, _minus(alpha, 1, 1, 0, 5, 0, 0), (2, -1, -3, -3, 2, 2, 1), (1, 3, 2, 2, -3, -3, -2))


def alpha2(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _one_three(alpha)
    _require(am1 == 0, "a-1 = 0")
    return _extended(LemmaId.Lalpha2, alpha, _minus(alpha, 1, 0, 1, 0, 2, 0), (1, 3, -3, -1), (2, -2, 1, -1))


SMALLN_FIRST = ((3, 1, -1, -1, -2), (-2, 1, -1, -1, 3))
SMALLN_SECOND = ((2, 1, -3, 1, -1), (1, 1, 2, -3, -1))
SMALLN_THIRD = ((3, -1, -2), (-1, -2, 3), (-2, 3, -1))


def small_n(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _one_three(alpha)
    _require(am1 >= 1 and am2 >= 1, "a-1 >= 1 and a-2 >= 1")
    _require(alpha.total <= 5, "n <= 5")
    rest = parts(_minus(alpha, 1, 0, 0, 1, 1, 0))
    L = LemmaId.Lsmalln
    if rest == (0, 0, 1, 1, 0, 0):
        tet = TransitiveElectionTable(4, FINITE, (1,) * 5, SMALLN_FIRST)
        return _built(L, tet, fam.smalln_middle(), (alpha, alpha))
    if rest == (0, 1, 0, 0, 1, 0):
        first = v4(1, 0, 1, 2, 1, 0).reflect()
        return _built(L, TransitiveElectionTable(4, FINITE, (1,) * 5, SMALLN_SECOND), alpha, (first, first))
    if rest == (0,) * 6:
        return _built(L, TransitiveElectionTable(4, FINITE, (1, 1, 1), SMALLN_THIRD), None, (alpha,) * 3)
    raise PreconditionError(f"hypothesis fails: {alpha} is not one of the three small cases")  # pragma: no cover


# --- finite mode, negative margins ----------------------------------------------


def _m1(alpha: MarginDistribution) -> tuple[int, ...]:
    _finite4(alpha)
    _require(alpha.margin_sum() == -1, "d1(alpha) = -1")
    return parts(alpha)


def first_m1_applies(alpha: MarginDistribution) -> bool:
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    n = alpha.total
    if n % 2:
        return a3 + am1 <= (n - 1) // 2 and a1 + am3 <= (n + 1) // 2
    return a3 + am1 <= n // 2 and a1 + am3 <= n // 2 and a1 + am1 + am3 >= 1


def _gamma_pair(total: int, a2: int, am2: int) -> tuple[int, int]:
    g2 = max(0, total - am2)
    return g2, total - g2


def first_m1_odd(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _m1(alpha)
    n = alpha.total
    _require(n % 2 == 1, "n odd")
    _require(a3 + am1 <= (n - 1) // 2, "a3 + a-1 <= (n-1)/2")
    _require(a1 + am3 <= (n + 1) // 2, "a1 + a-3 <= (n+1)/2")
    g2, gm2 = _gamma_pair((n - 1) // 2 - a3 - am1, a2, am2)
    w = (a3, a1, am1, am3, g2, gm2, a2 - g2, am2 - gm2)
    M = ((1, -1, 1, -1, 1, 1, -1, -1), (2, 2, -2, -2, 1, -3, 3, -1))
    return _built(LemmaId.Lfirstm1_odd, TransitiveElectionTable(4, FINITE, w, M), alpha, (fam.negative_base(n), None), (-1, 0))


def first_m1_even(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _m1(alpha)
    n = alpha.total
    _require(n % 2 == 0, "n even")
    _require(a3 + am1 <= n // 2, "a3 + a-1 <= n/2")
    _require(a1 + am3 <= n // 2, "a1 + a-3 <= n/2")
    _require(a1 + am1 + am3 >= 1, "a1 + a-1 + a-3 >= 1")
    j = -1 if a1 + am3 == 0 else (1 if a1 >= 1 else -3)
    p1, pm1, pm3 = a1 - (j == 1), am1 - (j == -1), am3 - (j == -3)
    g2, gm2 = _gamma_pair(n // 2 - a3 - am1, a2, am2)
    if j == -1:
        if g2 < a2:
            g2 += 1
        else:
            gm2 += 1
    w = (a3, p1, pm1, pm3, g2, gm2, a2 - g2, am2 - gm2, 1)
    M = ((1, -1, 1, -1, 1, 1, -1, -1, -2), (2, 2, -2, -2, 1, -3, 3, -1, j + 2))
    return _built(LemmaId.Lfirstm1_even, TransitiveElectionTable(4, FINITE, w, M), alpha, (fam.negative_base(n), None), (-1, 0))


def even_fix(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _m1(alpha)
    n = alpha.total
    _require(n % 2 == 0, "n even")
    _require(a1 + am1 + am3 == 0, "a1 + a-1 + a-3 = 0")
    g = -((a2 + a3 - n // 2) // 2)
    w = ((a3 + 1) // 2, (a3 - 1) // 2, a2, n - 2 * g - a2 - a3, g, g)
    M = ((2, 1, 1, -1, 1, -3), (1, 2, 1, -1, -3, 1))
    tet = TransitiveElectionTable(4, FINITE, w, M)
    return _built(LemmaId.Levenfix, tet, alpha, (None, row_distributions(tet)[1]), (0, -1))


def _profile_split(lemma: LemmaId, alpha: MarginDistribution, u: Sequence[int], e: Sequence[int]) -> BuiltTable:
    rest = [x - y for x, y in zip(e, u)]
    tet = _profile_table(4, (u, rest))
    mu, mr = sum(u), sum(rest)
    return _built(lemma, tet, alpha, (MarginProfile(4, tuple(u)).distribution(), MarginProfile(4, tuple(rest)).distribution()), (mu, mr))


def m1_side(alpha: MarginDistribution) -> str:
    """Which of the two reductions applies: the one whose class is over-full."""
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    n = alpha.total
    cap = (n - 1) // 2 if n % 2 else n // 2
    return M1_POSITIVE if a3 + am1 > cap else M1_NEGATIVE


def second_m1(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _m1(alpha)
    _require(a3 + am1 >= 1, "a3 + a-1 >= 1")
    _require(a1 + am3 >= 1, "a1 + a-3 >= 1")
    _require(a2 + am2 >= 1, "a2 + a-2 >= 1")
    e = MarginProfile.canonical(alpha)
    u = reduce_margins(e, -1, m1_side(alpha))
    return _profile_split(LemmaId.Lsecondm1, alpha, u.values, e.values)


def third_m1_a(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _m1(alpha)
    _require(a2 + am2 >= 1, "a2 + a-2 >= 1")
    _require(a1 + am3 == 0 or a3 + am1 == 0, "a_i + a_-3i = 0 for some i = +-1")
    e = MarginProfile.canonical(alpha)
    u = reduce_margins(e, -1, m1_side(alpha), relaxed=True)
    return _profile_split(LemmaId.Lthirdm1A, alpha, u.values, e.values)


def _odd_profile(alpha: MarginDistribution) -> list[int]:
    a3, _, a1, am1, _, am3 = parts(alpha)
    return [3] * a3 + [-1] * am1 + [1] * a1 + [-3] * am3


def third_m1(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _m1(alpha)
    n = alpha.total
    _require(a1 + am3 > 0, "a1 + a-3 > 0")
    _require(a2 + am2 == 0, "a2 + a-2 = 0")
    h = (n - 1) // 2
    b = [2] * h + [-2] * h + [-1]
    return _profile_split(LemmaId.Lthirdm1, alpha, b, _odd_profile(alpha))


def last_m1(alpha: MarginDistribution) -> BuiltTable:
    a3, a2, a1, am1, am2, am3 = _m1(alpha)
    n = alpha.total
    _require(a3 + am1 == n, "a3 + a-1 = n")
    _require(n % 4 == 1 and n >= 5, "n = 1 (mod 4) and n >= 5")
    h = (n - 1) // 2
    b = [2] * h + [-2] * (n - 3 - h) + [-3, -3, 1]
    a = [3] * ((n - 1) // 4) + [-1] * (n - (n - 1) // 4)
    return _profile_split(LemmaId.Llastm1, alpha, b, a)


def halving(alpha: MarginDistribution) -> BuiltTable:
    _finite4(alpha)
    m = alpha.margin_sum()
    _require(m <= -2, "d1(alpha) <= -2")
    _require(alpha.total != 2, "n != 2")
    e = MarginProfile.canonical(alpha)
    u = reduce_margins(e, m // 2, HALVING)
    return _profile_split(LemmaId.Lmmain, alpha, u.values, e.values)


def n2_special(index: int) -> BuiltTable:
    _require(1 <= index <= len(fam.N2_CHAIN), f"1 <= index <= {len(fam.N2_CHAIN)}")
    r1, r2, target = fam.N2_CHAIN[index - 1]
    tet = TransitiveElectionTable(4, FINITE, (1, 1), (r1, r2))
    rows = (MarginDistribution.from_margins(4, r1), MarginDistribution.from_margins(4, r2))
    return _built(LemmaId.Ln2special, tet, v4(*target), rows)


def lift_split(alpha: MarginDistribution) -> BuiltTable:
    """Split a distribution using ``+-(k-1)`` into two over ``D_{k-1}``."""
    _require(alpha.mode == FINITE and alpha.k >= 5, "finite distribution with k >= 5")
    e = MarginProfile.canonical(alpha)
    u, v = split_profile(e)
    tet = _profile_table(alpha.k, (u.values, v.values))
    rows = (u.distribution().with_k(alpha.k), v.distribution().with_k(alpha.k))
    return _built(LemmaId.Lak, tet, alpha, rows)


# --- dispatch -------------------------------------------------------------------


_BUILDERS: dict[LemmaId, Callable[..., BuiltTable]] = {
    LemmaId.L2candsym: two_candidate_symmetric,
    LemmaId.Lfirstcomb: first_comb,
    LemmaId.Lsecondcomb: second_comb,
    LemmaId.Lthirdcomb: third_comb,
    LemmaId.Lfirstgeq: first_geq,
    LemmaId.Lsecondgeq: second_geq,
    LemmaId.Ldoubling: doubling,
    LemmaId.LconsistentAk: consistent_triple,
    LemmaId.Llayersk: layers,
    LemmaId.Ldiagonals: diagonal_triple,
    LemmaId.Ltwelvestep: twelve_step,
    LemmaId.Lkleqn4a: kleqn4_first,
    LemmaId.Lkleqn4b: kleqn4_second,
    LemmaId.Lkleqn3_3an: three_an,
    LemmaId.Lkleqn3_beta: kleqn3_beta,
    LemmaId.Lkleqn3_gamma: kleqn3_gamma,
    LemmaId.Lalmostb4: almost_b4,
    LemmaId.Laddingthrees: adding_threes,
    LemmaId.Lalpha12: alpha12,
    LemmaId.Lalpha1: alpha1,
    LemmaId.Lalpha2: alpha2,
    LemmaId.Lsmalln: small_n,
    LemmaId.Lfirstm1_odd: first_m1_odd,
    LemmaId.Lfirstm1_even: first_m1_even,
    LemmaId.Levenfix: even_fix,
    LemmaId.Lsecondm1: second_m1,
    LemmaId.Lthirdm1A: third_m1_a,
    LemmaId.Lthirdm1: third_m1,
    LemmaId.Llastm1: last_m1,
    LemmaId.Lmmain: halving,
    LemmaId.Ln2special: n2_special,
    LemmaId.Lak: lift_split,
}


def build_table(lemma: LemmaId | str, **params) -> BuiltTable:
    """Build the table for ``lemma``; hypotheses are checked first."""
    lid = lemma if isinstance(lemma, LemmaId) else LemmaId.parse(lemma)
    return _BUILDERS[lid](**params)


def check_built(built: BuiltTable) -> list[str]:
    """Every way ``built`` fails its contract; empty when it holds."""
    out: list[str] = []
    tet = built.table
    report = validate(tet)
    out += [str(v) for v in report.violations]
    if report.violations:
        return out
    if built.target is None:
        if not report.tying:
            out.append("expected a tying table but M0 is non-zero")
    elif report.tying:
        out.append("M0 vanishes but a target was expected")
    else:
        got = m0_distribution(tet)
        if got != built.target:
            out.append(f"M0 gives {got}, expected {built.target}")
    rows = row_distributions(tet)
    for i, (got, want, margin) in enumerate(zip(rows, built.rows, built.row_margins), 1):
        if want is not None and got != want:
            out.append(f"row x{i} is {got}, expected {want}")
        if margin is not None and got.margin_sum() != margin:
            out.append(f"row x{i} has margin {got.margin_sum()}, expected {margin}")
    return out
