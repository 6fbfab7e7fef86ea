"""Derivation certificates: schema, canonical serialization, checker.

A certificate is a header plus a list of derivation steps.  Each step
either assigns one value of the function f (axiom, functional equation,
multiplicativity, division, intersection) or records the exact rational
root set of a one-unknown reduction (root set).  The checker replays
every step with exact arithmetic and accepts only if all steps validate
and the extracted value table is the identity up to the header bound.

Canonical wire form is line-delimited JSON with the suffix
".sqcert.jsonl": the header line first, then one step per line, keys in
fixed order, rationals as lowest-term strings ("25", "-3/2").  The
writer is deterministic byte for byte; the reader rejects malformed
lines with the offending line number.

Root-set steps carry the constraint chain they were reduced from.  The
checker rebuilds the univariate polynomial from that chain by symbolic
substitution (never trusting the stored coefficients), then confirms
the claimed roots both ways: every claimed root satisfies the
polynomial, and divisor-pair enumeration over the integer coefficients
proves no rational root is missing.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Union

from .constraints import (
    Constraint,
    Coprime,
    SumOfSquares,
    constraint_from_obj,
    constraint_to_obj,
)
from .poly import (
    RationalFunction,
    canonical_int_coeffs,
    evaluate,
    is_zero,
    rational_roots,
)

FORMAT = "sqcert/1"
FILE_SUFFIX = ".sqcert.jsonl"

_RATIONAL_RE = re.compile(r"^-?(?:0|[1-9][0-9]*)(?:/[1-9][0-9]*)?$")


def format_rational(value: Fraction) -> str:
    """Canonical string: lowest terms, positive denominator, no '/1'."""
    return str(value)


def parse_rational(text: str) -> Fraction:
    """Parse a canonical rational string; reject any other spelling."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text):
        raise ValueError(f"malformed rational {text!r}")
    value = Fraction(text)
    if str(value) != text:
        raise ValueError(f"rational {text!r} is not in canonical form")
    return value


# --------------------------------------------------------------------------
# step schema


@dataclass(frozen=True)
class Axiom:
    """f(1) = 1, the multiplicativity normalization."""

    index: int
    target: int
    value: Fraction
    refs: tuple[int, ...] = ()


@dataclass(frozen=True)
class FunctionalEquation:
    """f(n) = f(a)^2 + f(b)^2 + f(c)^2 for n = a^2 + b^2 + c^2."""

    index: int
    target: int
    value: Fraction
    a: int
    b: int
    c: int
    refs: tuple[int, ...] = ()


@dataclass(frozen=True)
class Multiplicativity:
    """f(n) = f(m) * f(k) for n = m * k with gcd(m, k) = 1."""

    index: int
    target: int
    value: Fraction
    m: int
    k: int
    refs: tuple[int, ...] = ()


@dataclass(frozen=True)
class Division:
    """f(n) = f(mn) / f(m) for n = mn / m, gcd(m, n) = 1, f(m) nonzero."""

    index: int
    target: int
    value: Fraction
    mn: int
    m: int
    refs: tuple[int, ...] = ()


@dataclass(frozen=True)
class RootSet:
    """Exact rational root set for the target slot, reduced from a chain.

    The chain is an ordered list of constraints; all but the last define
    one new slot each as a rational function of the target, the last
    closes the system into one equation.  poly holds the canonical
    integer coefficients (ascending powers) of that equation, roots the
    complete set of its rational solutions.  Records candidates only,
    assigns nothing, so value is always None.
    """

    index: int
    target: int
    chain: tuple[Constraint, ...]
    poly: tuple[int, ...]
    roots: tuple[Fraction, ...]
    refs: tuple[int, ...] = ()

    value = None


@dataclass(frozen=True)
class Intersection:
    """Assigns the single value surviving all recorded root sets for a slot."""

    index: int
    target: int
    value: Fraction
    refs: tuple[int, ...] = ()


DerivationStep = Union[
    Axiom, FunctionalEquation, Multiplicativity, Division, RootSet, Intersection
]

_KIND_OF = {
    Axiom: "axiom",
    FunctionalEquation: "func_eq",
    Multiplicativity: "mult",
    Division: "div",
    RootSet: "root_set",
    Intersection: "intersection",
}


def with_index(step: DerivationStep, index: int) -> DerivationStep:
    return replace(step, index=index)


def step_to_obj(step: DerivationStep) -> dict:
    """JSON-ready dict with the canonical key order."""
    kind = _KIND_OF[type(step)]
    obj: dict = {"i": step.index, "n": step.target}
    obj["v"] = None if step.value is None else format_rational(step.value)
    obj["kind"] = kind
    if isinstance(step, FunctionalEquation):
        obj["a"], obj["b"], obj["c"] = step.a, step.b, step.c
    elif isinstance(step, Multiplicativity):
        obj["m"], obj["k"] = step.m, step.k
    elif isinstance(step, Division):
        obj["mn"], obj["m"] = step.mn, step.m
    elif isinstance(step, RootSet):
        obj["chain"] = [constraint_to_obj(c) for c in step.chain]
        obj["poly"] = list(step.poly)
        obj["roots"] = [format_rational(r) for r in step.roots]
    obj["refs"] = list(step.refs)
    return obj


def _expect_int(obj: dict, key: str) -> int:
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ValueError(f"field {key!r} must be an integer")
    return v


def _expect_refs(obj: dict) -> tuple[int, ...]:
    v = obj.get("refs")
    if not isinstance(v, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in v
    ):
        raise ValueError("field 'refs' must be a list of integers")
    return tuple(v)


_STEP_KEYS = {
    "axiom": {"i", "n", "v", "kind", "refs"},
    "func_eq": {"i", "n", "v", "kind", "a", "b", "c", "refs"},
    "mult": {"i", "n", "v", "kind", "m", "k", "refs"},
    "div": {"i", "n", "v", "kind", "mn", "m", "refs"},
    "root_set": {"i", "n", "v", "kind", "chain", "poly", "roots", "refs"},
    "intersection": {"i", "n", "v", "kind", "refs"},
}


def step_from_obj(obj: object) -> DerivationStep:
    """Inverse of step_to_obj; raises ValueError on any structural defect."""
    if not isinstance(obj, dict):
        raise ValueError("step must be a JSON object")
    kind = obj.get("kind")
    if kind not in _STEP_KEYS:
        raise ValueError(f"unknown step kind {kind!r}")
    if set(obj) != _STEP_KEYS[kind]:
        raise ValueError(f"step of kind {kind!r} has keys {sorted(obj)}")
    index = _expect_int(obj, "i")
    target = _expect_int(obj, "n")
    refs = _expect_refs(obj)
    raw_v = obj.get("v")
    if kind == "root_set":
        if raw_v is not None:
            raise ValueError("root_set steps must have a null value")
        chain_raw = obj["chain"]
        if not isinstance(chain_raw, list) or not chain_raw:
            raise ValueError("field 'chain' must be a nonempty list")
        chain = tuple(constraint_from_obj(c) for c in chain_raw)
        poly_raw = obj["poly"]
        if not isinstance(poly_raw, list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in poly_raw
        ):
            raise ValueError("field 'poly' must be a list of integers")
        roots_raw = obj["roots"]
        if not isinstance(roots_raw, list):
            raise ValueError("field 'roots' must be a list")
        roots = tuple(parse_rational(r) for r in roots_raw)
        return RootSet(index, target, chain, tuple(poly_raw), roots, refs)
    value = parse_rational(raw_v)
    if kind == "axiom":
        return Axiom(index, target, value, refs)
    if kind == "func_eq":
        return FunctionalEquation(
            index, target, value,
            _expect_int(obj, "a"), _expect_int(obj, "b"), _expect_int(obj, "c"),
            refs,
        )
    if kind == "mult":
        return Multiplicativity(
            index, target, value, _expect_int(obj, "m"), _expect_int(obj, "k"), refs
        )
    if kind == "div":
        return Division(
            index, target, value, _expect_int(obj, "mn"), _expect_int(obj, "m"), refs
        )
    return Intersection(index, target, value, refs)


# --------------------------------------------------------------------------
# certificate container and wire form


@dataclass
class Certificate:
    bound: int
    engine: str
    flags: dict[str, bool] = field(default_factory=dict)
    steps: list[DerivationStep] = field(default_factory=list)


class ParseError(ValueError):
    """Malformed certificate input; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.reason = message


def serialize(cert: Certificate) -> bytes:
    header: dict = {"format": FORMAT, "bound": cert.bound, "engine": cert.engine}
    header["flags"] = {k: cert.flags[k] for k in sorted(cert.flags)}
    lines = [json.dumps(header, separators=(",", ":"))]
    for step in cert.steps:
        lines.append(json.dumps(step_to_obj(step), separators=(",", ":")))
    return ("\n".join(lines) + "\n").encode("utf-8")


def deserialize(data: bytes) -> Certificate:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(0, f"not valid UTF-8: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError(1, "empty certificate")
    parsed = []
    for lineno, line in enumerate(lines, start=1):
        try:
            parsed.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise ParseError(lineno, f"invalid JSON: {exc.msg}") from exc
    header = parsed[0]
    if not isinstance(header, dict) or set(header) != {"format", "bound", "engine", "flags"}:
        raise ParseError(1, "malformed header")
    if header["format"] != FORMAT:
        raise ParseError(1, f"unsupported format {header['format']!r}")
    bound = header["bound"]
    if not isinstance(bound, int) or isinstance(bound, bool) or bound < 0:
        raise ParseError(1, "header bound must be a nonnegative integer")
    engine = header["engine"]
    if not isinstance(engine, str):
        raise ParseError(1, "header engine must be a string")
    flags = header["flags"]
    if not isinstance(flags, dict) or not all(
        isinstance(k, str) and isinstance(v, bool) for k, v in flags.items()
    ):
        raise ParseError(1, "header flags must map strings to booleans")
    steps = []
    for lineno, obj in enumerate(parsed[1:], start=2):
        try:
            steps.append(step_from_obj(obj))
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from exc
    return Certificate(bound=bound, engine=engine, flags=dict(flags), steps=steps)


def load(path: str) -> Certificate:
    with open(path, "rb") as fh:
        return deserialize(fh.read())


def save(cert: Certificate, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(cert))


# --------------------------------------------------------------------------
# root-set chains


class ChainError(ValueError):
    """A root-set constraint chain that cannot be reduced."""


def chain_polynomial(
    chain: Iterable[Constraint], target: int, values: Mapping[int, Fraction]
) -> tuple[list[int], list[Fraction], list[int]]:
    """Reduce a constraint chain to a univariate polynomial in f(target).

    Walks the chain in order keeping an environment of slots expressed
    as rational functions of x = f(target).  Slots present in `values`
    are constants (priors); each non-final constraint must define
    exactly one new slot; the final constraint must close into an
    equation.  Returns (canonical integer coefficients, complete sorted
    rational root list, sorted prior slots used).  Roots where any
    intermediate division is undefined or zero are excluded.
    """
    x = RationalFunction.x()
    env: dict[int, RationalFunction] = {}
    divisors_used: list[RationalFunction] = []
    priors: set[int] = set()

    def expr_of(slot: int) -> RationalFunction | None:
        if slot == target:
            return x
        if slot in env:
            return env[slot]
        if slot in values:
            priors.add(slot)
            return RationalFunction.const(values[slot])
        return None

    chain = list(chain)
    if not chain:
        raise ChainError("empty chain")
    equation: RationalFunction | None = None
    for pos, con in enumerate(chain):
        last = pos == len(chain) - 1
        if isinstance(con, SumOfSquares):
            undefined = [s for s in con.slots() if expr_of(s) is None]
            if not undefined:
                lhs = RationalFunction.const(0)
                for p in (con.a, con.b, con.c):
                    e = expr_of(p)
                    assert e is not None
                    lhs = lhs + e.square()
                rhs = expr_of(con.s)
                assert rhs is not None
                if not last:
                    raise ChainError(f"constraint {con} adds nothing before the chain end")
                equation = lhs - rhs
            elif undefined == [con.s]:
                if last:
                    raise ChainError("chain ends with a definition, not an equation")
                total = RationalFunction.const(0)
                for p in (con.a, con.b, con.c):
                    e = expr_of(p)
                    assert e is not None
                    total = total + e.square()
                env[con.s] = total
            else:
                raise ChainError(f"cannot solve {con} for a squared part symbolically")
        elif isinstance(con, Coprime):
            if con.m == 1:
                raise ChainError("trivial coprime constraint in chain")
            undefined = [s for s in con.slots() if expr_of(s) is None]
            if not undefined:
                em, en, ep = expr_of(con.m), expr_of(con.n), expr_of(con.product)
                assert em is not None and en is not None and ep is not None
                if not last:
                    raise ChainError(f"constraint {con} adds nothing before the chain end")
                equation = ep - em * en
            elif len(undefined) == 1:
                if last:
                    raise ChainError("chain ends with a definition, not an equation")
                u = undefined[0]
                if u == con.product:
                    em, en = expr_of(con.m), expr_of(con.n)
                    assert em is not None and en is not None
                    env[u] = em * en
                else:
                    other = con.n if u == con.m else con.m
                    eo, ep = expr_of(other), expr_of(con.product)
                    assert eo is not None and ep is not None
                    if eo.is_zero():
                        raise ChainError("division by an identically zero factor")
                    divisors_used.append(eo)
                    env[u] = ep / eo
            else:
                raise ChainError(f"more than one unknown in {con}")
        else:
            raise ChainError(f"not a constraint: {con!r}")
    assert equation is not None  # loop ran at least once or chain was empty
    if is_zero(equation.num):
        raise ChainError("chain reduces to a tautology")
    roots = []
    for r in rational_roots(equation.num):
        if evaluate(equation.den, r) == 0:
            continue
        if any(not d.defined_nonzero_at(r) for d in divisors_used):
            continue
        roots.append(r)
    return canonical_int_coeffs(equation.num), roots, sorted(priors)


# --------------------------------------------------------------------------
# checker


@dataclass
class CheckReport:
    valid: bool
    failure_index: int | None
    failure_reason: str | None
    steps_checked: int
    assigned: int
    bound: int

    def to_obj(self) -> dict:
        return {
            "valid": self.valid,
            "failure_index": self.failure_index,
            "failure_reason": self.failure_reason,
            "steps_checked": self.steps_checked,
            "assigned": self.assigned,
            "bound": self.bound,
        }


def check(cert: Certificate) -> CheckReport:
    """Re-derive every step from scratch; accept only a complete identity table.

    The checker consults nothing but the certificate itself: values come
    from earlier steps, root-set polynomials are rebuilt from their
    constraint chains, and root completeness is re-proved by divisor
    enumeration.  Any mismatch reports the first failing step.
    """
    store: dict[int, Fraction] = {}
    assigner: dict[int, int] = {}
    root_sets: dict[int, list[tuple[int, tuple[Fraction, ...]]]] = {}
    checked = 0

    def fail(index: int | None, reason: str) -> CheckReport:
        return CheckReport(False, index, reason, checked, len(store), cert.bound)

    def canonical_refs(slots: Iterable[int]) -> tuple[int, ...] | None:
        out = set()
        for s in slots:
            if s not in assigner:
                return None
            out.add(assigner[s])
        return tuple(sorted(out))

    for pos, step in enumerate(cert.steps, start=1):
        if step.index != pos:
            return fail(pos, f"step indices must be dense and ascending, got {step.index}")
        if step.target < 1:
            return fail(pos, "target must be a positive integer")
        if any(r < 1 or r >= pos for r in step.refs):
            return fail(pos, "back-reference violated: refs must cite earlier steps")
        if list(step.refs) != sorted(set(step.refs)):
            return fail(pos, "refs must be strictly ascending")

        if isinstance(step, Axiom):
            if step.target != 1 or step.value != 1:
                return fail(pos, "axiom must state f(1) = 1")
            if step.refs != ():
                return fail(pos, "axiom cites no references")
            expected = Fraction(1)
        elif isinstance(step, FunctionalEquation):
            a, b, c = step.a, step.b, step.c
            if not (1 <= a <= b <= c):
                return fail(pos, "parts must satisfy 1 <= a <= b <= c")
            if a * a + b * b + c * c != step.target:
                return fail(pos, f"{a}^2+{b}^2+{c}^2 != {step.target}")
            refs = canonical_refs({a, b, c})
            if refs is None:
                return fail(pos, "functional equation uses an unassigned part")
            if step.refs != refs:
                return fail(pos, f"refs must be {list(refs)}")
            expected = store[a] ** 2 + store[b] ** 2 + store[c] ** 2
        elif isinstance(step, Multiplicativity):
            m, k = step.m, step.k
            if not (2 <= m < k):
                return fail(pos, "factors must satisfy 2 <= m < k")
            if gcd(m, k) != 1:
                return fail(pos, f"factors {m}, {k} are not coprime")
            if m * k != step.target:
                return fail(pos, f"{m}*{k} != {step.target}")
            refs = canonical_refs({m, k})
            if refs is None:
                return fail(pos, "multiplicativity uses an unassigned factor")
            if step.refs != refs:
                return fail(pos, f"refs must be {list(refs)}")
            expected = store[m] * store[k]
        elif isinstance(step, Division):
            mn, m = step.mn, step.m
            if m < 2 or mn % m != 0 or mn // m != step.target:
                return fail(pos, f"{mn}/{m} does not give {step.target}")
            if gcd(m, step.target) != 1:
                return fail(pos, f"divisor {m} not coprime to {step.target}")
            refs = canonical_refs({mn, m})
            if refs is None:
                return fail(pos, "division uses an unassigned value")
            if step.refs != refs:
                return fail(pos, f"refs must be {list(refs)}")
            if store[m] == 0:
                return fail(pos, f"division by f({m}) = 0")
            expected = store[mn] / store[m]
        elif isinstance(step, RootSet):
            if step.target in store:
                return fail(pos, "root set for an already assigned slot")
            try:
                poly, roots, priors = chain_polynomial(step.chain, step.target, store)
            except ChainError as exc:
                return fail(pos, f"bad constraint chain: {exc}")
            if tuple(poly) != step.poly:
                return fail(pos, f"polynomial mismatch: chain gives {poly}")
            if tuple(roots) != step.roots:
                return fail(
                    pos,
                    f"root set mismatch: polynomial has rational roots "
                    f"{[str(r) for r in roots]}",
                )
            refs = canonical_refs(priors)
            if refs is None:  # unreachable: chain_polynomial only uses store slots
                return fail(pos, "root set uses an unassigned prior")
            if step.refs != refs:
                return fail(pos, f"refs must be {list(refs)}")
            root_sets.setdefault(step.target, []).append((pos, step.roots))
            checked += 1
            continue
        elif isinstance(step, Intersection):
            recorded = root_sets.get(step.target, [])
            if not recorded:
                return fail(pos, "intersection with no recorded root sets")
            if step.refs != tuple(idx for idx, _ in recorded):
                return fail(pos, f"refs must cite all root sets for slot {step.target}")
            surviving = set(recorded[0][1])
            for _, roots in recorded[1:]:
                surviving &= set(roots)
            if len(surviving) != 1:
                return fail(
                    pos, f"intersection leaves {len(surviving)} candidates, not one"
                )
            if step.target in store:
                return fail(pos, "intersection for an already assigned slot")
            expected = next(iter(surviving))
        else:  # pragma: no cover - schema is closed
            return fail(pos, f"unknown step type {type(step).__name__}")

        if step.value != expected:
            return fail(pos, f"value mismatch: recomputed {expected}, step says {step.value}")
        prior = store.get(step.target)
        if prior is None:
            store[step.target] = expected
            assigner[step.target] = pos
        elif prior != expected:
            return fail(pos, f"conflicting assignment for f({step.target})")
        checked += 1

    for n in range(1, cert.bound + 1):
        v = store.get(n)
        if v is None:
            return fail(None, f"f({n}) never assigned, table incomplete")
        if v != n:
            return fail(None, f"f({n}) = {v}, table is not the identity")
    return CheckReport(True, None, None, checked, len(store), cert.bound)
