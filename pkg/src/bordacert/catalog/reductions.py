"""Splitting a margin profile into two profiles with prescribed Borda margins.

Each voter's margin ``e_i`` is written as ``u_i + (e_i - u_i)`` with both
parts in the margin set. A dynamic program over voters picks the split with
the smallest imbalance ``sum |2 u_i - e_i|``; ties go to the lexicographically
least ``u``.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable

from ..core import MarginProfile, in_margin_set
from ..errors import PreconditionError, ProofSearchError
from .families import parts

M1_POSITIVE = "m1_positive"
M1_NEGATIVE = "m1_negative"
HALVING = "halving"
REDUCTION_MODES = (M1_POSITIVE, M1_NEGATIVE, HALVING)

# (u_max, u_min) for each voter margin.
_BOUNDS = {
    M1_POSITIVE: {3: (2, 2), 2: (3, -1), 1: (3, -2), -1: (2, -2), -2: (1, -3), -3: (-1, -2)},
    M1_NEGATIVE: {3: (2, 1), 2: (3, -1), 1: (2, -2), -1: (2, -3), -2: (1, -3), -3: (-2, -2)},
    HALVING: {3: (2, 1), 2: (3, -1), 1: (3, -2), -1: (2, -3), -2: (1, -3), -3: (-1, -2)},
}


def allowed_parts(e: int, mode: str, relaxed: bool = False, k: int = 4) -> tuple[int, ...]:
    """Values ``u`` with ``u`` and ``e - u`` both in ``D_k``, inside the mode's bounds unless relaxed."""
    hi, lo = (k - 1, 1 - k) if relaxed else _BOUNDS[mode][e]
    return tuple(u for u in range(lo, hi + 1) if in_margin_set(u, k) and in_margin_set(e - u, k))


def _search(
    values: tuple[int, ...],
    options: list[tuple[int, ...]],
    target: int,
    key: Callable[[int], tuple[int, int]] | None = None,
    accept: Callable[[int, int], bool] | None = None,
) -> tuple[int, ...] | None:
    """Least ``(imbalance, u)`` with ``sum u = target``.

    ``key`` maps a chosen ``u`` to increments of two counters; ``accept``
    filters the final counter pair.
    """
    states: dict[tuple[int, int, int], tuple[int, tuple[int, ...]]] = {(0, 0, 0): (0, ())}
    for e, opts in zip(values, options):
        nxt: dict[tuple[int, int, int], tuple[int, tuple[int, ...]]] = {}
        for (s, c1, c2), (cost, prefix) in states.items():
            for u in opts:
                d1, d2 = key(u) if key else (0, 0)
                st = (s + u, c1 + d1, c2 + d2)
                cand = (cost + abs(2 * u - e), prefix + (u,))
                if st not in nxt or cand < nxt[st]:
                    nxt[st] = cand
        states = nxt
    best = None
    for (s, c1, c2), cand in states.items():
        if s == target and (accept is None or accept(c1, c2)) and (best is None or cand < best):
            best = cand
    return None if best is None else best[1]


def m1_target_ok(n: int, c31: int, c13: int) -> bool:
    """Whether a margin ``-1`` distribution with these class counts is handled directly.

    ``c31`` counts margins in ``{3, -1}`` and ``c13`` those in ``{1, -3}``.
    """
    if n % 2:
        return c31 <= (n - 1) // 2 and c13 <= (n + 1) // 2
    return c31 <= n // 2 and c13 <= n // 2


def _classes(u: int) -> tuple[int, int]:
    return (1 if u in (3, -1) else 0, 1 if u in (1, -3) else 0)


def reduce_margins(e: MarginProfile, target: int, mode: str, relaxed: bool = False) -> MarginProfile:
    """Part ``u`` of ``e`` with ``sum u = target``; the rest is ``e - u``.

    ``m1_*`` modes take a profile with margin ``-1`` and return ``u`` whose
    distribution satisfies the direct ``-1`` construction, leaving ``e - u`` tied.
    ``halving`` takes margin ``m <= -2`` and returns ``sum u = floor(m/2)``.
    """
    if mode not in REDUCTION_MODES:
        raise PreconditionError(f"unknown reduction mode {mode!r}")
    if e.k != 4:
        raise PreconditionError(f"reductions are defined for k=4, got k={e.k}")
    n, m = e.n, sum(e.values)
    a3, a2, a1, am1, am2, am3 = parts(e.distribution()) if n else (0,) * 6
    if mode == HALVING:
        if n == 2:
            raise PreconditionError("halving needs n != 2")
        if m > -2:
            raise PreconditionError(f"halving needs margin <= -2, got {m}")
        if target != m // 2:
            raise PreconditionError(f"halving target must be floor({m}/2) = {m // 2}")
        opts = [allowed_parts(x, mode, relaxed) for x in e.values]
        u = _search(e.values, opts, target)
    else:
        if m != -1:
            raise PreconditionError(f"m1 reduction needs margin -1, got {m}")
        if target != -1:
            raise PreconditionError("m1 reduction target must be -1")
        if a2 + am2 < 1:
            raise PreconditionError("m1 reduction needs a2 + a-2 >= 1")
        if not relaxed:
            if mode == M1_POSITIVE and a1 + am3 < 1:
                raise PreconditionError("m1_positive needs a1 + a-3 >= 1")
            if mode == M1_NEGATIVE and a3 + am1 < 1:
                raise PreconditionError("m1_negative needs a3 + a-1 >= 1")
        opts = [allowed_parts(x, mode, relaxed) for x in e.values]
        u = _search(e.values, opts, target, _classes, lambda c31, c13: m1_target_ok(n, c31, c13))
    if u is None:
        raise ProofSearchError(f"no {mode} split of {e.values} reaches {target}")
    return MarginProfile(e.k, u)


def split_profile(e: MarginProfile) -> tuple[MarginProfile, MarginProfile]:
    """``e = u + v`` over ``D_{k-1}`` with margins ``ceil(b/2)`` and ``floor(b/2)``."""
    k = e.k
    if k < 5:
        raise PreconditionError(f"split_profile needs k >= 5, got k={k}")
    b = sum(e.values)
    if b > 0:
        raise PreconditionError(f"split_profile needs margin b <= 0, got b={b}")
    if not any(abs(x) == k - 1 for x in e.values):
        raise PreconditionError(f"split_profile needs an entry with |e_i| = {k - 1}")
    opts = [tuple(u for u in range(2 - k, k - 1) if in_margin_set(u, k - 1) and in_margin_set(x - u, k - 1)) for x in e.values]
    up = -((-b) // 2)
    u = _search(e.values, opts, up)
    if u is None:
        raise ProofSearchError(f"no split of {e.values} over D_{k - 1}")
    v = tuple(x - y for x, y in zip(e.values, u))
    return MarginProfile(k - 1, u), MarginProfile(k - 1, v)


def gamma_select(alpha, delta: Iterable[int] = (0, 0)) -> tuple[int, int, int, int, int, int]:
    """``(g3, g1, g-1, g-3, d2, d-2)`` making both rows of the tie-splitting table tied.

    Starts from ``g3 + g-3 = c`` with ``2c = a3 + a-3 (mod 3)`` and descends in
    steps of six, filling the latest coordinate first.
    """
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    if alpha.margin_sum() != 0:
        raise PreconditionError("gamma_select needs margin 0")
    if a3 + am3 == 1:
        raise PreconditionError("gamma_select needs a3 + a-3 != 1")
    d2, dm2 = delta
    if d2 < 0 or dm2 < 0 or 2 * d2 > a2 or 2 * dm2 > am2:
        raise PreconditionError("delta needs 0 <= 2*d_i <= a_i")
    c = next(c for c in range(3) if (2 * c - (a3 + am3)) % 3 == 0)
    g = {3: 0, 1: 0, -1: 0, -3: 0}

    def put_threes(x: int) -> None:
        take = min(x, am3 - g[-3])
        g[-3] += take
        g[3] += x - take

    put_threes(c)
    D = a3 + 3 * a1 + 3 * am1 + am3 - 2 * (g[3] + 3 * g[1] + 3 * g[-1] + g[-3])
    while D > 0:
        if g[-3] + 3 <= am3:
            g[-3] += 3
        elif g[-1] < am1:
            g[-1] += 1
        elif g[1] < a1:
            g[1] += 1
        elif g[3] + g[-3] + 3 <= a3 + am3:
            put_threes(3)
        else:
            raise ProofSearchError(f"gamma descent stalled at {D} for {alpha}")
        D -= 6
    if D != 0:
        raise ProofSearchError(f"gamma descent overshot to {D} for {alpha}")
    return (g[3], g[1], g[-1], g[-3], d2, dm2)
