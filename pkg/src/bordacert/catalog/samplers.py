"""Seeded random parameters inside each lemma's hypothesis region.

``sample_params`` returns the keyword arguments for ``build_table`` plus notes
on any repair made to land inside the region (parity fixes, for instance).
"""

from __future__ import annotations

import random
from collections.abc import Callable
from fractions import Fraction

from ..core import FINITE, WEIGHTED, MarginDistribution, MarginProfile, margin_values
from ..errors import ProofSearchError
from . import families as fam
from .families import parts, v4
from .lemmas import LemmaId, first_m1_applies

Sample = tuple[dict, list[str]]
_D4 = (3, 2, 1, -1, -2, -3)
_TRIES = 2000


def _profile_with_margin(rng: random.Random, n0: int, target: int, values=_D4) -> list[int]:
    """Random voters, then extra voters until the margin sum is ``target``."""
    e = [rng.choice(values) for _ in range(n0)]
    diff = target - sum(e)
    while diff:
        sign = 1 if diff > 0 else -1
        steps = [v for v in values if v * sign > 0 and abs(v) <= abs(diff)]
        v = rng.choice(steps)
        e.append(v)
        diff -= v
    return e


def finite_with_margin(rng: random.Random, n0: int, target: int, values=_D4) -> MarginDistribution:
    return MarginProfile(4, tuple(_profile_with_margin(rng, n0, target, values))).distribution()


def weighted_with_margin(rng: random.Random, n0: int = 8, target: int = 0) -> MarginDistribution:
    counts = {d: rng.randint(0, 6) for d in _D4}
    counts[rng.choice(_D4)] += 1
    s = sum(d * c for d, c in counts.items()) - target
    if s > 0:
        counts[-1] += s
    elif s < 0:
        counts[1] -= s
    total = sum(counts.values())
    return MarginDistribution.from_mapping(4, {d: Fraction(c, total) for d, c in counts.items()}, WEIGHTED)


def weighted_any(rng: random.Random, k: int = 4) -> MarginDistribution:
    values = margin_values(k)
    counts = [rng.randint(0, 5) for _ in values]
    counts[rng.randrange(len(values))] += 1
    total = sum(counts)
    return MarginDistribution.from_mapping(k, {d: Fraction(c, total) for d, c in zip(values, counts)}, WEIGHTED)


def _retry(rng: random.Random, draw: Callable[[], MarginDistribution | None], fallback: Callable[[], MarginDistribution]) -> MarginDistribution:
    for _ in range(_TRIES):
        alpha = draw()
        if alpha is not None:
            return alpha
    return fallback()


def _rational(rng: random.Random, lo: Fraction, hi: Fraction, den: int = 60) -> Fraction:
    a, b = int(lo * den), int(hi * den)
    while Fraction(a, den) < lo:
        a += 1
    while Fraction(b, den) > hi:
        b -= 1
    return Fraction(rng.randint(a, b), den) if a <= b else lo


def _geq_sample(rng: random.Random, wide: bool) -> MarginDistribution:
    while True:
        s1 = _rational(rng, Fraction(1, 2), Fraction(1)) if wide else _rational(rng, Fraction(0), Fraction(29, 60))
        s2 = 1 - s1
        a2 = _rational(rng, Fraction(0), s2)
        am2 = s2 - a2
        b = _rational(rng, Fraction(0), Fraction(1, 10))
        diff = b - 2 * (a2 - am2)
        if abs(diff) <= s1:
            return v4(0, a2, (s1 + diff) / 2, (s1 - diff) / 2, am2, 0, WEIGHTED)


def _symmetric(rng: random.Random) -> MarginDistribution:
    k = rng.randint(2, 6)
    mode = rng.choice((FINITE, WEIGHTED))
    counts = {d: rng.randint(0, 4) for d in range(1, k) if (d - k) % 2}
    if not any(counts.values()):
        counts[max(counts)] = 1
    total = 2 * sum(counts.values())
    mapping = {}
    for d, c in counts.items():
        w = Fraction(c, total) if mode == WEIGHTED else c
        mapping[d] = mapping[-d] = w
    return MarginDistribution.from_mapping(k, mapping, mode)


def _first_comb_ok(a: MarginDistribution) -> bool:
    a3, a2, a1, am1, am2, am3 = parts(a)
    return a3 <= am2 + am3 <= a1 + a2 + a3 and am3 <= a2 + a3 <= am1 + am2 + am3


def _second_comb_ok(a: MarginDistribution) -> bool:
    a3, a2, a1, am1, am2, am3 = parts(a)
    return am3 <= 2 * (a2 + a3) and a3 <= 2 * (am2 + am3)


def _fit_parity(n: int, a: int, ok: Callable[[int, int], bool], notes: list[str]) -> tuple[int, int]:
    """Move ``a`` (then ``n``) the least distance so that ``2 | n - a`` and ``ok(n, a)``."""
    if (n - a) % 2 == 0 and ok(n, a):
        return n, a
    for dn in range(0, 8):
        for da in sorted(range(-n - 1, n + 2), key=abs):
            nn, aa = n + dn, a + da
            if aa >= 0 and (nn - aa) % 2 == 0 and ok(nn, aa):
                notes.append(f"repaired (n, a) = ({n}, {a}) to ({nn}, {aa}) so that 2 | n - a")
                return nn, aa
    raise ProofSearchError(f"no admissible (n, a) near ({n}, {a})")  # pragma: no cover


def _na(rng, ok, lo, hi, notes, a_hi: Callable[[int], int]) -> dict:
    n = rng.randint(lo, hi)
    a = rng.randint(0, max(0, a_hi(n)))
    n, a = _fit_parity(n, a, ok, notes)
    return {"n": n, "a": a}


def _b_prime(rng: random.Random, lo_n: int = 1, values=_D4) -> MarginDistribution:
    while True:
        alpha = finite_with_margin(rng, rng.randint(0, 9), 0, values)
        if alpha.total >= lo_n:
            return alpha


def _m1(rng: random.Random, pred: Callable[[MarginDistribution], bool], values=_D4) -> MarginDistribution | None:
    for _ in range(_TRIES):
        alpha = finite_with_margin(rng, rng.randint(0, 11), -1, values)
        if pred(alpha):
            return alpha
    return None


def _a(alpha: MarginDistribution) -> dict:
    return {"alpha": alpha}


def sample_params(lemma: LemmaId | str, rng: random.Random) -> Sample:
    lid = lemma if isinstance(lemma, LemmaId) else LemmaId.parse(lemma)
    notes: list[str] = []
    L = LemmaId
    if lid == L.L2candsym:
        return _a(_symmetric(rng)), notes
    if lid == L.Lthirdcomb:
        return _a(weighted_with_margin(rng)), notes
    if lid == L.Lsecondcomb:
        def draw():
            a = weighted_with_margin(rng)
            return a if _second_comb_ok(a) else None
        return _a(_retry(rng, draw, lambda: fam.comb_rows(weighted_with_margin(rng)))), notes
    if lid == L.Lfirstcomb:
        def draw():
            a = weighted_with_margin(rng)
            return a if _first_comb_ok(a) else None
        if rng.random() < 0.5:
            return _a(fam.comb_rows(fam.comb_rows(weighted_with_margin(rng)))), notes
        return _a(_retry(rng, draw, lambda: fam.comb_rows(fam.comb_rows(weighted_with_margin(rng))))), notes
    if lid == L.Lfirstgeq:
        return _a(_geq_sample(rng, True)), notes
    if lid == L.Lsecondgeq:
        return _a(_geq_sample(rng, False)), notes
    if lid == L.Ldoubling:
        return _a(weighted_any(rng)), notes
    if lid == L.Llayersk:
        return _a(weighted_any(rng, rng.randint(4, 7))), notes
    if lid == L.LconsistentAk:
        while True:
            b1, b2 = Fraction(rng.randint(-12, 12), 12), Fraction(rng.randint(-12, 12), 12)
            if abs(b1 + b2) <= 1:
                return {"b1": b1, "b2": b2}, notes
    if lid == L.Ldiagonals:
        p = _na(rng, lambda n, a: 3 * a <= n, 1, 40, notes, lambda n: n // 3)
        m = (p["n"] - 3 * p["a"]) // 2
        s1 = rng.randint(0, m)
        p.update(s1=s1, s2=rng.randint(0, m - s1))
        return p, notes
    if lid == L.Ltwelvestep:
        return _na(rng, lambda n, a: 5 * a <= n, 1, 60, notes, lambda n: n // 5), notes
    if lid == L.Lkleqn4a:
        return _na(rng, lambda n, a: n % 2 <= a and 4 * a <= n, 4, 60, notes, lambda n: n // 4), notes
    if lid == L.Lkleqn4b:
        return _na(rng, lambda n, a: 3 * (n % 2) <= a and 4 * a <= n, 4, 60, notes, lambda n: n // 4), notes
    if lid == L.Lkleqn3_3an:
        return {"n": 3 * rng.randint(1, 20)}, notes
    if lid in (L.Lkleqn3_beta, L.Lkleqn3_gamma):
        return _na(rng, lambda n, a: n < 4 * a and 3 * a < n, 5, 60, notes, lambda n: n // 3), notes
    if lid == L.Lalmostb4:
        while True:
            alpha = _b_prime(rng)
            a = parts(alpha)
            if a[0] + a[5] != 1:
                return _a(alpha), notes
    if lid == L.Laddingthrees:
        return _a(_b_prime(rng, 3, (2, 1, -1, -2))), notes
    if lid == L.Lalpha12:
        rest = _b_prime(rng, 3, (2, 1, -1, -2))
        return _a(rest + v4(1, 0, 0, 1, 1, 0)), notes
    if lid == L.Lalpha1:
        a2, a1 = rng.randint(0, 4), rng.randint(0, 6)
        return _a(v4(1, a2, a1, 3 + 2 * a2 + a1, 0, 0)), notes
    if lid == L.Lalpha2:
        a2, j = rng.randint(0, 4), rng.randint(0, 4)
        return _a(v4(1, a2, 2 * j + 1, 0, 2 + a2 + j, 0)), notes
    if lid == L.Lsmalln:
        return _a(rng.choice((v4(1, 0, 1, 2, 1, 0), v4(1, 1, 0, 1, 2, 0), v4(1, 0, 0, 1, 1, 0)))), notes
    if lid in (L.Lfirstm1_odd, L.Lfirstm1_even):
        parity = 1 if lid == L.Lfirstm1_odd else 0
        alpha = _m1(rng, lambda a: a.total % 2 == parity and first_m1_applies(a))
        return _a(alpha or (fam.negative_base(3) if parity else v4(0, 0, 2, 1, 1, 0))), notes
    if lid == L.Levenfix:
        a3, a2 = 4 * rng.randint(0, 3) + 3, rng.randint(0, 5)
        return _a(v4(a3, a2, 0, 0, (3 * a3 + 2 * a2 + 1) // 2, 0)), notes
    if lid == L.Lsecondm1:
        def pred(a):
            a3, a2, a1, am1, am2, am3 = parts(a)
            return a3 + am1 >= 1 and a1 + am3 >= 1 and a2 + am2 >= 1 and not first_m1_applies(a)
        return _a(_m1(rng, pred) or v4(2, 1, 0, 6, 0, 0)), notes
    if lid == L.Lthirdm1A:
        def pred(a):
            a3, a2, a1, am1, am2, am3 = parts(a)
            return a2 + am2 >= 1 and (a1 + am3 == 0 or a3 + am1 == 0) and not first_m1_applies(a)
        return _a(_m1(rng, pred) or v4(0, 0, 0, 1, 0, 0) + v4(0, 1, 0, 0, 1, 0)), notes
    if lid == L.Lthirdm1:
        def pred(a):
            a3, a2, a1, am1, am2, am3 = parts(a)
            return a1 + am3 > 0
        return _a(_m1(rng, pred, (3, 1, -1, -3)) or v4(0, 0, 1, 2, 0, 0)), notes
    if lid == L.Llastm1:
        a3 = rng.randint(1, 10)
        return _a(v4(a3, 0, 0, 3 * a3 + 1, 0, 0)), notes
    if lid == L.Lmmain:
        while True:
            alpha = finite_with_margin(rng, rng.randint(0, 10), -rng.randint(2, 12))
            if alpha.total != 2:
                return _a(alpha), notes
    if lid == L.Ln2special:
        return {"index": rng.randint(1, len(fam.N2_CHAIN))}, notes
    if lid == L.Lak:
        k = rng.randint(5, 6)
        vals = margin_values(k)
        while True:
            e = [rng.choice((k - 1, 1 - k))] + [rng.choice(vals) for _ in range(rng.randint(0, 4))]
            if sum(e) <= 0:
                return _a(MarginProfile(k, tuple(e)).distribution()), notes
    raise AssertionError(lid)  # pragma: no cover
