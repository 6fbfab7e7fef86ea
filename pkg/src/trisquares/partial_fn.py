"""Partially defined multiplicative function with bounded closure.

PartialFn maps positive integers to exact rationals and remembers, for
every slot, the derivation step that first assigned it.  Assigning a
slot can trigger multiplicative closure: products of coprime assigned
slots and quotients by coprime assigned divisors are derived
automatically, but only for target slots up to `closure_horizon` (0
turns closure off).  The horizon caps what closure may create, not what
it may read: f(50) assigned with horizon 15 will not spawn f(25), but
does spawn f(13) from f(26)/f(2) since 13 <= 15.

Re-assigning a slot to the value it already holds is a silent no-op
(the offered step is dropped); a different value raises ConflictError.
Closure is processed smallest slot first and, within one slot, smallest
derived target first, so the step list is deterministic.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Iterator

from .certificate import DerivationStep, Division, Multiplicativity, with_index

Rational = Fraction


class ConflictError(ValueError):
    """Two derivations disagree about one slot."""

    def __init__(self, slot: int, existing: Fraction, proposed: Fraction):
        super().__init__(
            f"f({slot}) already derived as {existing}, cannot re-derive as {proposed}"
        )
        self.slot = slot
        self.existing = existing
        self.proposed = proposed


class PartialFn:
    def __init__(self, closure_horizon: int = 0, record_steps: bool = True):
        if closure_horizon < 0:
            raise ValueError("closure_horizon must be nonnegative")
        self.closure_horizon = closure_horizon
        self.record_steps = record_steps
        self.steps: list[DerivationStep] = []
        self._values: dict[int, Fraction] = {}
        self._step_of: dict[int, int] = {}
        self._count = 0

    # -- mapping surface ---------------------------------------------------

    def __contains__(self, n: int) -> bool:
        return n in self._values

    def __len__(self) -> int:
        return len(self._values)

    def __getitem__(self, n: int) -> Fraction:
        return self._values[n]

    def get(self, n: int, default: Fraction | None = None) -> Fraction | None:
        return self._values.get(n, default)

    def slots(self) -> list[int]:
        return sorted(self._values)

    def items(self) -> Iterator[tuple[int, Fraction]]:
        for n in sorted(self._values):
            yield n, self._values[n]

    def step_index_of(self, n: int) -> int:
        """Index of the step that first assigned slot n."""
        return self._step_of[n]

    def refs_for(self, slots: Iterable[int]) -> tuple[int, ...]:
        """Sorted distinct indices of the steps that assigned the given slots."""
        return tuple(sorted({self._step_of[s] for s in slots}))

    # -- assignment and closure ----------------------------------------------

    def assign(self, n: int, value: Fraction | int, step: DerivationStep) -> bool:
        """Record f(n) = value, justified by step.  Returns True if new.

        A consistent duplicate drops the step and changes nothing.
        """
        if n < 1:
            raise ValueError(f"slot must be a positive integer, got {n}")
        value = Fraction(value)
        held = self._values.get(n)
        if held is not None:
            if held != value:
                raise ConflictError(n, held, value)
            return False
        self._record(n, value, step)
        if self.closure_horizon:
            self._close_from(n)
        return True

    def record_aux(self, step: DerivationStep) -> int:
        """Record a step that assigns nothing (a root set); returns its index."""
        self._count += 1
        if self.record_steps:
            self.steps.append(with_index(step, self._count))
        return self._count

    def _record(self, n: int, value: Fraction, step: DerivationStep) -> None:
        self._count += 1
        self._values[n] = value
        self._step_of[n] = self._count
        if self.record_steps:
            self.steps.append(with_index(step, self._count))

    def _close_from(self, seed: int) -> None:
        pending = [seed]
        queued = {seed}
        while pending:
            q = heapq.heappop(pending)
            queued.discard(q)
            for target, value, step in self._derivations_from(q):
                held = self._values.get(target)
                if held is not None:
                    if held != value:
                        raise ConflictError(target, held, value)
                    continue
                self._record(target, value, step)
                if target not in queued:
                    heapq.heappush(pending, target)
                    queued.add(target)

    def _derivations_from(self, q: int):
        """All closure consequences of slot q against the current table.

        Yields (target, value, step) sorted by target.  Three shapes:
        coprime products q*p, quotients where q divides an assigned slot,
        and quotients of q itself by an assigned divisor.
        """
        horizon = self.closure_horizon
        vq = self._values[q]
        found: list[tuple[int, int, Fraction, DerivationStep]] = []
        if q >= 2:
            for p in range(2, horizon // q + 1):
                if p == q or p not in self._values or gcd(p, q) != 1:
                    continue
                m, k = min(p, q), max(p, q)
                value = self._values[p] * vq
                step = Multiplicativity(0, p * q, value, m, k, self.refs_for((m, k)))
                found.append((p * q, 0, value, step))
            if vq != 0:
                for t in range(2, horizon + 1):
                    if gcd(q, t) != 1 or q * t not in self._values:
                        continue
                    value = self._values[q * t] / vq
                    step = Division(0, t, value, q * t, q, self.refs_for((q * t, q)))
                    found.append((t, 1, value, step))
            for d in self._divisors(q):
                t = q // d
                if t < 2 or t > horizon or gcd(d, t) != 1:
                    continue
                vd = self._values.get(d)
                if d < 2 or vd is None or vd == 0:
                    continue
                value = vq / vd
                step = Division(0, t, value, q, d, self.refs_for((q, d)))
                found.append((t, 2, value, step))
        found.sort(key=lambda item: (item[0], item[1], item[3].m))
        for target, _, value, step in found:
            yield target, value, step

    @staticmethod
    def _divisors(n: int) -> list[int]:
        low = []
        high = []
        for d in range(1, isqrt(n) + 1):
            if n % d == 0:
                low.append(d)
                if d != n // d:
                    high.append(n // d)
        return low + high[::-1]

    # -- reporting ----------------------------------------------------------

    def first_non_identity(self, bound: int) -> int | None:
        """Least n <= bound with f(n) missing or f(n) != n, or None."""
        for n in range(1, bound + 1):
            if self._values.get(n) != n:
                return n
        return None

    def format_table(self, bound: int | None = None) -> str:
        """Sorted "n = p/q" lines, optionally limited to slots <= bound."""
        lines = []
        for n in sorted(self._values):
            if bound is not None and n > bound:
                continue
            lines.append(f"{n} = {self._values[n]}")
        return "\n".join(lines)
