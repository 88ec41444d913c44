"""Named margin distributions used by the table catalog (four candidates unless noted).

Components are passed high margin first: ``(a3, a2, a1, a-1, a-2, a-3)``.
"""

from __future__ import annotations

from fractions import Fraction

from ..core import FINITE, WEIGHTED, MarginDistribution, Weight
from ..errors import PreconditionError


def v4(a3: Weight, a2: Weight, a1: Weight, am1: Weight, am2: Weight, am3: Weight, mode: str = FINITE) -> MarginDistribution:
    return MarginDistribution.from_descending(4, (a3, a2, a1, am1, am2, am3), mode)


def parts(alpha: MarginDistribution) -> tuple[Weight, ...]:
    """``(a3, a2, a1, a-1, a-2, a-3)`` of a four-candidate distribution."""
    if alpha.k != 4:
        raise PreconditionError(f"expected k=4, got k={alpha.k}")
    return alpha.descending()


def half(x: Weight) -> Fraction:
    return Fraction(x) / 2


def diagonal(n: int, t: int, a: int) -> MarginDistribution:
    """``(0, t, (n-a)/2 - t, (n+3a)/2 - t, t - a, 0)``: tied, two-sided at distance ``a``."""
    if (n - a) % 2:
        raise PreconditionError(f"2 | n - a fails for n={n}, a={a}")
    if not a <= t <= (n - a) // 2:
        raise PreconditionError(f"a <= t <= (n-a)/2 fails for n={n}, a={a}, t={t}")
    return v4(0, t, (n - a) // 2 - t, (n + 3 * a) // 2 - t, t - a, 0)


def anchor(n: int, a: int) -> MarginDistribution:
    """The diagonal start ``alpha_(a,a)``."""
    return diagonal(n, a, a)


def negative_base(n: int) -> MarginDistribution:
    """The distribution whose value names the constant on negative margins."""
    if n < 1:
        raise PreconditionError("n >= 1")
    if n % 2:
        return v4(0, 0, (n - 1) // 2, (n + 1) // 2, 0, 0)
    return v4(0, 0, n // 2, n // 2 - 1, 1, 0)


def comb_rows(alpha: MarginDistribution) -> MarginDistribution:
    """Row distribution of the comb table: halves ``d1`` and pulls mass inward."""
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    return v4(half(a1), half(a3 + am1), half(a3) + a2, half(am3) + am2, half(a1 + am3), half(am1), WEIGHTED)


def doubling_rows(alpha: MarginDistribution) -> MarginDistribution:
    a3, a2, a1, am1, am2, am3 = parts(alpha)
    return v4(0, half(a3 + a1), half(a3 + 2 * a2 + am1), half(a1 + 2 * am2 + am3), half(am1 + am3), 0, WEIGHTED)


def reference(b: Fraction) -> MarginDistribution:
    """``alpha_b = (0, 1/4, 1/4 + b/2, 1/4 - b/2, 1/4, 0)``, the representative of margin ``b``."""
    q = Fraction(1, 4)
    return v4(0, q, q + half(b), q - half(b), q, 0, WEIGHTED)


def kleqn4_gamma(n: int, a: int, b: int) -> MarginDistribution:
    return v4((a - b) // 2, 0, (n + b) // 2, (n - 3 * a) // 2, b, a - b)


def kleqn4_delta(n: int, b: int) -> MarginDistribution:
    return v4(0, (n - 3 * b) // 2, 2 * b, 0, (n - b) // 2, 0)


def kleqn3_beta(n: int, a: int) -> MarginDistribution:
    return v4(n - 3 * a, 0, 5 * a - n, 0, n - 2 * a, 0)


def smalln_middle() -> MarginDistribution:
    return v4(0, 1, 2, 0, 2, 0)


def thirdm1_beta(n: int) -> MarginDistribution:
    return v4(0, (n - 1) // 2, 0, 1, (n - 1) // 2, 0)


def lastm1_beta(n: int) -> MarginDistribution:
    return v4(0, (n - 1) // 2, 1, 0, (n - 5) // 2, 2)


N2_CHAIN: tuple[tuple[tuple[int, int], tuple[int, int], tuple[int, ...]], ...] = (
    ((1, -2), (-2, 1), (0, 0, 0, 2, 0, 0)),
    ((-1, -1), (2, -2), (0, 0, 1, 0, 0, 1)),
    ((1, -3), (-2, 1), (0, 0, 0, 1, 1, 0)),
    ((1, -3), (-3, 1), (0, 0, 0, 0, 2, 0)),
    ((-2, -2), (1, -1), (0, 0, 0, 1, 0, 1)),
    ((-1, -1), (-1, -2), (0, 0, 0, 0, 1, 1)),
    ((-1, -1), (-2, -2), (0, 0, 0, 0, 0, 2)),
)
"""Two-voter tables: margins of voter 1 and voter 2 in the two rows, and the target (high first)."""
