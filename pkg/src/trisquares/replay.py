"""Staged derivation of f(n) = n for every n up to a bound.

The only assumptions are f(1) = 1, multiplicativity on coprime
arguments, and the sum rule f(a^2+b^2+c^2) = f(a)^2+f(b)^2+f(c)^2.
Verification runs in two stages:

Seed stage.  A fixed script pins the small values.  f(3) = 3 is the sum
rule on (1,1,1).  f(2) and f(5) are each cornered by two root sets:
constraint chains that reduce to one polynomial in the unknown, whose
rational root sets intersect in a single value.  Multiplicative closure
(horizon 15) and a few more sum-rule instances then fill every slot up
to 15 plus the auxiliaries 21, 24, 25, 26, 27, 30 and 50.

Induction stage.  For each remaining n, ascending, one of four moves
applies, chosen by the three-square classification of n:
  - a representation n = a^2+b^2+c^2 with nonzero parts gives f(n)
    directly from smaller values;
  - n = 4^s(8t+7) splits multiplicatively for s >= 1, while for s = 0
    the doubled value 2n is representable with nonzero parts and f(n)
    follows by dividing f(2n) by f(2);
  - n = a^2+b^2 with no nonzero triple is lifted through
    25n = (5a)^2+(3b)^2+(4b)^2 when 5 does not divide n, and split
    through its power-of-five part otherwise;
  - n = 4^s falls out of 3n = 3*4^s, a sum of three equal squares.

Every move appends certificate steps to the shared table, so a run
yields both the value table and a replayable derivation.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .certificate import (
    Axiom,
    Certificate,
    Division,
    FunctionalEquation,
    Intersection,
    Multiplicativity,
    RootSet,
)
from .constraints import Coprime, SumOfSquares
from .partial_fn import PartialFn
from .poly import rational_roots
from .three_squares import (
    NonvanishingRepresentable,
    NotRepresentable,
    PureSquareOnly,
    TwoSquareOnly,
    _least_nonvanishing,
    classify,
    five_power_representation,
)

ENGINE = "trisquares.replay/1"
BOOTSTRAP_HORIZON = 15

BOOTSTRAP_SLOTS = frozenset(range(1, 16)) | {21, 24, 25, 26, 27, 30, 50}


class ReplayError(Exception):
    """Base for derivation failures; subclasses say what broke."""


class HypothesisGap(ReplayError):
    """A value the induction step relies on was never derived."""


class CaseFallthrough(ReplayError):
    """The classification promised a witness that does not exist."""


class InternalInconsistency(ReplayError):
    """Derived values contradict each other or an invariant failed."""


# Constraint chains cornering f(2) and f(5).  Each chain reads in order:
# every constraint but the last defines one new slot in terms of the
# unknown, the last closes the system.  Naming is by the sum threaded.
_CHAIN_2_VIA_6 = (Coprime(2, 3), SumOfSquares(1, 1, 2, 6))
_POLY_2_VIA_6 = (2, -3, 1)  # x^2 - 3x + 2

_CHAIN_2_VIA_21 = (
    SumOfSquares(2, 2, 2, 12),
    Coprime(3, 4),
    SumOfSquares(1, 2, 3, 14),
    Coprime(2, 7),
    SumOfSquares(1, 2, 4, 21),
    Coprime(3, 7),
)
_POLY_2_VIA_21 = (-30, 1, -3, 1, 0, 1)  # x^5 + x^3 - 3x^2 + x - 30

_CHAIN_5_VIA_27 = (SumOfSquares(1, 1, 5, 27),)
_POLY_5_VIA_27 = (-25, 0, 1)  # x^2 - 25

_CHAIN_5_VIA_30 = (Coprime(5, 6), SumOfSquares(1, 2, 5, 30))
_POLY_5_VIA_30 = (5, -6, 1)  # x^2 - 6x + 5

# Seed script.  Closure (horizon 15) handles 4, 6, 7, 8, 10, 13, 15 on
# its own; 25 needs an explicit division because 25 > 15.
_SCRIPT = (
    ("axiom",),
    ("fe", 3, 1, 1, 1),
    ("root", 2, _CHAIN_2_VIA_6, _POLY_2_VIA_6),
    ("root", 2, _CHAIN_2_VIA_21, _POLY_2_VIA_21),
    ("pick", 2),
    ("fe", 27, 3, 3, 3),
    ("root", 5, _CHAIN_5_VIA_27, _POLY_5_VIA_27),
    ("root", 5, _CHAIN_5_VIA_30, _POLY_5_VIA_30),
    ("pick", 5),
    ("fe", 12, 2, 2, 2),
    ("fe", 14, 1, 2, 3),
    ("fe", 21, 1, 2, 4),
    ("fe", 9, 1, 2, 2),
    ("fe", 11, 1, 1, 3),
    ("fe", 26, 1, 3, 4),
    ("fe", 24, 2, 2, 4),
    ("fe", 30, 1, 2, 5),
    ("fe", 50, 3, 4, 5),
    ("div", 25, 50, 2),
)


@dataclass
class BootstrapState:
    """Seed-stage progress: the table plus root-set bookkeeping."""

    fn: PartialFn
    candidates: dict[int, set[Fraction]] = field(default_factory=dict)
    root_set_steps: dict[int, list[int]] = field(default_factory=dict)


def _require(fn: PartialFn, slots: tuple[int, ...], context: int) -> None:
    for s in slots:
        if s not in fn:
            raise HypothesisGap(f"f({s}) needed for n = {context} but never derived")


def _fe_assign(fn: PartialFn, target: int, parts: tuple[int, int, int]) -> None:
    a, b, c = parts
    if not (1 <= a <= b <= c) or a * a + b * b + c * c != target:
        raise InternalInconsistency(f"({a},{b},{c}) is not a representation of {target}")
    _require(fn, parts, target)
    value = fn[a] ** 2 + fn[b] ** 2 + fn[c] ** 2
    fn.assign(
        target, value, FunctionalEquation(0, target, value, a, b, c, fn.refs_for(parts))
    )


def _mult_assign(fn: PartialFn, target: int, m: int, k: int) -> None:
    lo, hi = min(m, k), max(m, k)
    if lo * hi != target:
        raise InternalInconsistency(f"{lo}*{hi} != {target}")
    _require(fn, (lo, hi), target)
    value = fn[lo] * fn[hi]
    fn.assign(
        target, value, Multiplicativity(0, target, value, lo, hi, fn.refs_for((lo, hi)))
    )


def _div_assign(fn: PartialFn, target: int, mn: int, m: int) -> None:
    _require(fn, (mn, m), target)
    if fn[m] == 0:
        raise InternalInconsistency(f"cannot divide by f({m}) = 0 for n = {target}")
    value = fn[mn] / fn[m]
    fn.assign(target, value, Division(0, target, value, mn, m, fn.refs_for((mn, m))))


def bootstrap(stop_after: int | None = None) -> BootstrapState:
    """Run the seed script; stop_after limits how many directives execute.

    With stop_after=None the resulting table is checked against the
    expected seed slots, all holding their own index.
    """
    fn = PartialFn(closure_horizon=BOOTSTRAP_HORIZON)
    state = BootstrapState(fn=fn)
    for count, event in enumerate(_SCRIPT, start=1):
        if stop_after is not None and count > stop_after:
            break
        kind = event[0]
        if kind == "axiom":
            fn.assign(1, Fraction(1), Axiom(0, 1, Fraction(1)))
        elif kind == "fe":
            _, target, a, b, c = event
            _fe_assign(fn, target, (a, b, c))
        elif kind == "root":
            _, target, chain, poly = event
            roots = tuple(rational_roots(list(poly)))
            priors = sorted(
                {s for con in chain for s in con.slots() if s != target and s in fn}
            )
            step = RootSet(0, target, chain, poly, roots, fn.refs_for(priors))
            index = fn.record_aux(step)
            state.root_set_steps.setdefault(target, []).append(index)
            held = state.candidates.get(target)
            state.candidates[target] = (
                set(roots) if held is None else held & set(roots)
            )
        elif kind == "pick":
            _, target = event
            indices = state.root_set_steps.get(target, [])
            surviving = state.candidates.get(target, set())
            if len(surviving) != 1:
                raise InternalInconsistency(
                    f"root sets leave {len(surviving)} candidates for f({target})"
                )
            value = next(iter(surviving))
            fn.assign(target, value, Intersection(0, target, value, tuple(indices)))
        elif kind == "div":
            _, target, mn, m = event
            _div_assign(fn, target, mn, m)
        else:  # pragma: no cover - script is a module constant
            raise InternalInconsistency(f"unknown seed directive {kind!r}")
    if stop_after is None:
        if set(fn.slots()) != BOOTSTRAP_SLOTS:
            raise InternalInconsistency(
                f"seed stage produced slots {sorted(fn.slots())}"
            )
        for n, v in fn.items():
            if v != n:
                raise InternalInconsistency(f"seed stage derived f({n}) = {v}")
    return state


def branch_label(shape: object) -> str:
    """Histogram key for a classification variant."""
    if isinstance(shape, NonvanishingRepresentable):
        return "nonvanishing"
    if isinstance(shape, NotRepresentable):
        return "not_representable"
    if isinstance(shape, TwoSquareOnly):
        return "two_square"
    if isinstance(shape, PureSquareOnly):
        return "pure_square"
    raise InternalInconsistency(f"unhandled classification {shape!r}")


def induction_step(fn: PartialFn, n: int, shape=None):
    """Derive f(n) from smaller values; returns the steps emitted.

    Appends one or two certificate steps to fn and assumes every slot
    below n is already present (HypothesisGap otherwise).  Passing the
    precomputed classification avoids classifying twice.
    """
    before = len(fn.steps)
    if n in fn:
        return []
    if shape is None:
        shape = classify(n)
    if isinstance(shape, NonvanishingRepresentable):
        _fe_assign(fn, n, tuple(shape.witness))
    elif isinstance(shape, NotRepresentable):
        if shape.s >= 1:
            _mult_assign(fn, n, 4**shape.s, n // 4**shape.s)
        else:
            # 2n = 16t+14 always has a representation with nonzero parts,
            # and n is odd, so f(n) = f(2n)/f(2).
            double = 2 * n
            if double not in fn:
                rep = _least_nonvanishing(double)
                if rep is None:
                    raise CaseFallthrough(
                        f"{double} has no nonvanishing representation"
                    )
                _fe_assign(fn, double, tuple(rep))
            _div_assign(fn, n, double, 2)
    elif isinstance(shape, TwoSquareOnly):
        a, b = shape.a, shape.b
        if n % 5:
            # 25n = (5a)^2 + (3b)^2 + (4b)^2 with all parts nonzero and
            # below n, then divide by the coprime factor f(25) = 25.
            if not (5 * a < n and 4 * b < n):
                raise InternalInconsistency(
                    f"lift parts for n = {n} are not below n"
                )
            lifted = 25 * n
            if lifted not in fn:
                _fe_assign(fn, lifted, tuple(sorted((5 * a, 3 * b, 4 * b))))
            _div_assign(fn, n, lifted, 25)
        else:
            k, s = n, 0
            while k % 5 == 0:
                k //= 5
                s += 1
            power = 5**s
            if s >= 3 and power not in fn:
                _fe_assign(fn, power, tuple(five_power_representation(s)))
            if k == 1:
                if n not in fn:
                    raise HypothesisGap(f"f({n}) expected from the seed table")
            else:
                _mult_assign(fn, n, power, k)
    elif isinstance(shape, PureSquareOnly):
        r = shape.root
        if r < 2 or r & (r - 1):
            raise InternalInconsistency(
                f"{n} = {r}^2 is outside the power-of-four family"
            )
        tripled = 3 * n
        if tripled not in fn:
            _fe_assign(fn, tripled, (r, r, r))
        _div_assign(fn, n, tripled, 3)
    else:
        raise InternalInconsistency(f"unhandled classification {shape!r}")
    return fn.steps[before:]


@dataclass
class ReplayRun:
    bound: int
    fn: PartialFn
    certificate: Certificate
    histogram: dict[str, int]
    elapsed_s: float


def run_replay(bound: int) -> ReplayRun:
    """Derive f on 1..bound, confirm identity, and package the certificate."""
    if bound < 1:
        raise ValueError("bound must be a positive integer")
    start = time.perf_counter()
    fn = bootstrap().fn
    fn.closure_horizon = 0
    histogram: Counter[str] = Counter()
    for n in range(1, bound + 1):
        if n in fn:
            histogram["seed" if n in BOOTSTRAP_SLOTS else "forward"] += 1
            continue
        shape = classify(n)
        induction_step(fn, n, shape)
        histogram[branch_label(shape)] += 1
    bad = fn.first_non_identity(bound)
    if bad is not None:
        raise InternalInconsistency(f"f({bad}) != {bad} after replay")
    cert = Certificate(bound=bound, engine=ENGINE, flags={}, steps=list(fn.steps))
    return ReplayRun(
        bound, fn, cert, dict(histogram), time.perf_counter() - start
    )


def verify_up_to(bound: int) -> tuple[PartialFn, Certificate]:
    run = run_replay(bound)
    return run.fn, run.certificate
