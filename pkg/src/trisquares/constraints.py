"""Constraint records shared by the solver and the certificate format.

Two constraint shapes capture everything the functional equation and
multiplicativity can say about a candidate function f:

  SumOfSquares(a, b, c, s):  f(s) = f(a)^2 + f(b)^2 + f(c)^2, s = a^2+b^2+c^2
  Coprime(m, n):             f(m*n) = f(m) * f(n), gcd(m, n) = 1

Both are value objects with a canonical orientation (a <= b <= c, m < n)
so equal constraints compare equal and serialize identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Union


@dataclass(frozen=True)
class SumOfSquares:
    a: int
    b: int
    c: int
    s: int

    def __post_init__(self) -> None:
        if not (1 <= self.a <= self.b <= self.c):
            raise ValueError(f"parts must satisfy 1 <= a <= b <= c, got {self}")
        if self.s != self.a * self.a + self.b * self.b + self.c * self.c:
            raise ValueError(f"sum mismatch in {self}")

    def slots(self) -> tuple[int, ...]:
        """Distinct slots mentioned, parts before sum."""
        seen: list[int] = []
        for x in (self.a, self.b, self.c, self.s):
            if x not in seen:
                seen.append(x)
        return tuple(seen)


@dataclass(frozen=True)
class Coprime:
    m: int
    n: int

    def __post_init__(self) -> None:
        if not (1 <= self.m < self.n):
            raise ValueError(f"factors must satisfy 1 <= m < n, got {self}")
        if gcd(self.m, self.n) != 1:
            raise ValueError(f"factors not coprime in {self}")

    @property
    def product(self) -> int:
        return self.m * self.n

    def slots(self) -> tuple[int, ...]:
        seen: list[int] = []
        for x in (self.m, self.n, self.m * self.n):
            if x not in seen:
                seen.append(x)
        return tuple(seen)


Constraint = Union[SumOfSquares, Coprime]


def constraint_to_obj(con: Constraint) -> dict:
    """JSON-ready dict with a fixed key order."""
    if isinstance(con, SumOfSquares):
        return {"t": "sos", "a": con.a, "b": con.b, "c": con.c, "s": con.s}
    if isinstance(con, Coprime):
        return {"t": "coprime", "m": con.m, "n": con.n}
    raise TypeError(f"not a constraint: {con!r}")


def constraint_from_obj(obj: object) -> Constraint:
    """Inverse of constraint_to_obj; raises ValueError on malformed input."""
    if not isinstance(obj, dict):
        raise ValueError(f"constraint must be an object, got {type(obj).__name__}")
    tag = obj.get("t")
    if tag == "sos":
        keys = {"t", "a", "b", "c", "s"}
        if set(obj) != keys:
            raise ValueError(f"sum-of-squares constraint has keys {sorted(obj)}")
        a, b, c, s = obj["a"], obj["b"], obj["c"], obj["s"]
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (a, b, c, s)):
            raise ValueError("sum-of-squares fields must be integers")
        return SumOfSquares(a, b, c, s)
    if tag == "coprime":
        keys = {"t", "m", "n"}
        if set(obj) != keys:
            raise ValueError(f"coprime constraint has keys {sorted(obj)}")
        m, n = obj["m"], obj["n"]
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (m, n)):
            raise ValueError("coprime fields must be integers")
        return Coprime(m, n)
    raise ValueError(f"unknown constraint tag {tag!r}")
