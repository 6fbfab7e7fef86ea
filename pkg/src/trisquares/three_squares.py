"""Integer kernels for sums of three squares.

A positive integer n is a sum of three squares (zeros allowed) exactly
when n is not of the form 4^s(8t+7).  Among the representable n a finer
split matters here: whether some representation has all three parts
nonvanishing, or only a two-square representation a^2+b^2 with a,b >= 1
exists, or n is a perfect square with no other representation at all.
The classification drives the case analysis of the replay engine, and
the only perfect squares with no nonvanishing representation are 4^s
and 25*4^s (Hurwitz), which verify_hurwitz confirms by enumeration.

All arithmetic is exact integer arithmetic.  Enumeration shares one
growable table of perfect squares so range scans never recompute
integer square roots.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import NamedTuple, Union


class Representation(NamedTuple):
    """Ordered triple a <= b <= c with a^2 + b^2 + c^2 equal to the target."""

    a: int
    b: int
    c: int

    def value(self) -> int:
        return self.a * self.a + self.b * self.b + self.c * self.c


@dataclass(frozen=True)
class NonvanishingRepresentable:
    """n = a^2+b^2+c^2 with a,b,c >= 1; witness is the least such triple."""

    witness: Representation


@dataclass(frozen=True)
class TwoSquareOnly:
    """n = a^2+b^2 with 1 <= a <= b, and no nonvanishing triple exists."""

    a: int
    b: int


@dataclass(frozen=True)
class PureSquareOnly:
    """n = root^2 and every three-square representation uses two zeros."""

    root: int


@dataclass(frozen=True)
class NotRepresentable:
    """n = 4^s (8t+7), excluded by the three-square theorem."""

    s: int
    t: int


ThreeSquaresClass = Union[
    NonvanishingRepresentable, TwoSquareOnly, PureSquareOnly, NotRepresentable
]

# Shared perfect-square table: square -> root.  Grows on demand.
_SQUARE_ROOT: dict[int, int] = {0: 0}
_SQUARE_MAX = 0


def _ensure_squares(limit: int) -> None:
    global _SQUARE_MAX
    if limit <= _SQUARE_MAX:
        return
    r = isqrt(_SQUARE_MAX)
    top = isqrt(limit)
    for k in range(r + 1, top + 1):
        _SQUARE_ROOT[k * k] = k
    _SQUARE_MAX = top * top


def _strip_fours(n: int) -> tuple[int, int]:
    """Write n = 4^s * m with 4 not dividing m; return (s, m)."""
    s = 0
    while n % 4 == 0:
        n //= 4
        s += 1
    return s, n


def _least_nonvanishing(n: int) -> Representation | None:
    """Lexicographically least (a,b,c), all parts >= 1, or None.

    Scans a ascending, then b ascending, so the first hit is least.
    """
    _ensure_squares(n)
    table = _SQUARE_ROOT
    a = 1
    while 3 * a * a <= n:
        ra = n - a * a
        b = a
        while 2 * b * b <= ra:
            c = table.get(ra - b * b)
            if c is not None and c > 0:
                return Representation(a, b, c)
            b += 1
        a += 1
    return None


def _least_two_square(n: int) -> tuple[int, int] | None:
    """Least (a,b) with 1 <= a <= b and a^2 + b^2 = n, or None."""
    _ensure_squares(n)
    table = _SQUARE_ROOT
    a = 1
    while 2 * a * a <= n:
        b = table.get(n - a * a)
        if b is not None and b > 0:
            return a, b
        a += 1
    return None


def representations(n: int, nonvanishing: bool = True) -> list[Representation]:
    """All triples a <= b <= c with a^2+b^2+c^2 = n, ascending lexicographically.

    Parts are >= 1 by default; with nonvanishing=False zero parts are
    allowed, so e.g. representations(4, nonvanishing=False) == [(0, 0, 2)].
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    _ensure_squares(n)
    table = _SQUARE_ROOT
    lo = 1 if nonvanishing else 0
    out: list[Representation] = []
    a = lo
    while 3 * a * a <= n:
        ra = n - a * a
        b = max(a, lo)
        while 2 * b * b <= ra:
            c = table.get(ra - b * b)
            if c is not None and c >= lo and c >= b:
                out.append(Representation(a, b, c))
            b += 1
        a += 1
    return out


def classify(n: int) -> ThreeSquaresClass:
    """Classify n by its three-square representations.

    Checked in priority order: nonvanishing triple first, then a
    two-square representation with both parts nonzero, then pure square,
    and the 4^s(8t+7) test decides non-representability arithmetically.
    So 25*4^s reports TwoSquareOnly, never PureSquareOnly.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    s, m = _strip_fours(n)
    if m % 8 == 7:
        return NotRepresentable(s, (m - 7) // 8)
    witness = _least_nonvanishing(n)
    if witness is not None:
        return NonvanishingRepresentable(witness)
    pair = _least_two_square(n)
    if pair is not None:
        return TwoSquareOnly(pair[0], pair[1])
    root = isqrt(n)
    if root * root == n:
        return PureSquareOnly(root)
    raise AssertionError(
        f"classify({n}): representable by the mod-8 test yet no representation found"
    )


def verify_hurwitz(limit: int) -> list[int]:
    """All perfect squares <= limit with no nonvanishing triple, ascending.

    Pure enumeration; callers compare against hurwitz_expected to confirm
    the squares 4^s and 25*4^s are exactly the exceptional ones.
    """
    if limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    out = []
    for m in range(1, isqrt(limit) + 1):
        if _least_nonvanishing(m * m) is None:
            out.append(m * m)
    return out


def hurwitz_expected(limit: int) -> list[int]:
    """The set {4^s} union {25 * 4^s} up to limit, ascending."""
    if limit < 1:
        raise ValueError(f"limit must be positive, got {limit}")
    out = set()
    p = 1
    while p <= limit:
        out.add(p)
        if 25 * p <= limit:
            out.add(25 * p)
        p *= 4
    return sorted(out)


def five_power_representation(s: int) -> Representation:
    """A nonvanishing triple for 5^s, s >= 3.

    Odd s uses the scaling of 125 = 3^2 + 4^2 + 10^2 by the square
    5^(s-3); even s falls back to enumeration (5^s is then a square
    outside the Hurwitz list, so a triple exists) and returns the
    lexicographically least one.
    """
    if s < 3:
        raise ValueError(f"s must be at least 3, got {s}")
    if s % 2 == 1:
        k = 5 ** ((s - 3) // 2)
        return Representation(3 * k, 4 * k, 10 * k)
    witness = _least_nonvanishing(5**s)
    if witness is None:
        raise AssertionError(f"5^{s} unexpectedly has no nonvanishing triple")
    return witness
