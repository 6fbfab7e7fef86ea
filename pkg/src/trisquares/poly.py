"""Exact univariate polynomial arithmetic over the rationals.

Polynomials are dense coefficient lists in ascending power order,
normalized so the leading coefficient is nonzero; the zero polynomial
is the empty list.  Everything here is exact: coefficients are ints or
`fractions.Fraction`, roots are found by rational-root enumeration over
divisor pairs, never by floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from typing import Sequence

Poly = list[Fraction]


def normalize(coeffs: Sequence[Fraction | int]) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence[Fraction]) -> int:
    """Degree of p, with the zero polynomial mapped to -1."""
    return len(p) - 1


def is_zero(p: Sequence[Fraction]) -> bool:
    return len(p) == 0


def add(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    n = max(len(p), len(q))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return normalize(out)


def sub(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    return add(p, [-c for c in q])


def mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return normalize(out)


def scale(p: Sequence[Fraction], k: Fraction | int) -> Poly:
    return normalize([c * k for c in p])


def evaluate(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def canonical_int_coeffs(p: Sequence[Fraction | int]) -> list[int]:
    """Scale p to the canonical integer form: primitive, positive leading
    coefficient.  Raises ValueError on the zero polynomial (it has no
    canonical nonzero scaling)."""
    q = normalize(p)
    if not q:
        raise ValueError("zero polynomial has no canonical form")
    den = 1
    for c in q:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in q]
    content = 0
    for c in ints:
        content = gcd(content, c)
    ints = [c // content for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return ints


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p: Sequence[Fraction | int]) -> list[Fraction]:
    """All rational roots of p, each listed once, sorted ascending.

    Uses the rational-root theorem on the primitive integer form: any
    root r/s in lowest terms has r dividing the constant term and s
    dividing the leading coefficient.  Irrational and complex roots are
    simply absent from the result.
    """
    ints = canonical_int_coeffs(p)  # ValueError on zero polynomial
    if len(ints) == 1:
        return []  # nonzero constant, no roots
    roots: list[Fraction] = []
    # factor out x^k first so the constant term is nonzero
    k = 0
    while ints[k] == 0:
        k += 1
    if k > 0:
        roots.append(Fraction(0))
        ints = ints[k:]
    if len(ints) > 1:
        lead = ints[-1]
        const = ints[0]
        for s in _divisors(lead):
            for r in _divisors(const):
                if gcd(r, s) != 1:
                    continue
                for cand in (Fraction(r, s), Fraction(-r, s)):
                    if evaluate([Fraction(c) for c in ints], cand) == 0:
                        roots.append(cand)
    return sorted(set(roots))


class RationalFunction:
    """Quotient num/den of two polynomials, den not the zero polynomial.

    No gcd cancellation is performed; degrees stay tiny in this package
    and exactness is all that matters.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: Sequence[Fraction | int], den: Sequence[Fraction | int] = (1,)):
        self.num = normalize(num)
        self.den = normalize(den)
        if is_zero(self.den):
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def const(cls, value: Fraction | int) -> "RationalFunction":
        return cls([Fraction(value)])

    @classmethod
    def x(cls) -> "RationalFunction":
        return cls([Fraction(0), Fraction(1)])

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            add(mul(self.num, other.den), mul(other.num, self.den)),
            mul(self.den, other.den),
        )

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            sub(mul(self.num, other.den), mul(other.num, self.den)),
            mul(self.den, other.den),
        )

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(mul(self.num, other.num), mul(self.den, other.den))

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        if is_zero(other.num):
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(mul(self.num, other.den), mul(self.den, other.num))

    def square(self) -> "RationalFunction":
        return self * self

    def is_zero(self) -> bool:
        return is_zero(self.num)

    def defined_nonzero_at(self, x: Fraction) -> bool:
        """True when the function is defined and nonzero at x."""
        return evaluate(self.den, x) != 0 and evaluate(self.num, x) != 0

    def __repr__(self) -> str:  # debugging aid only
        return f"RationalFunction({self.num!r}, {self.den!r})"


def sqrt_exact(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if q < 0:
        return None
    rn = isqrt(q.numerator)
    rd = isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None
