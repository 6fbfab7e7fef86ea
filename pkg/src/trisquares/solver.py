"""Constraint-propagation solver over rational candidate assignments.

An independent route to the small values: instead of a scripted
derivation, enumerate every sum-rule and coprime-product constraint
whose slots fit under a horizon, then saturate candidate sets and
search.  The solver knows nothing about representability classes or
derivation order; agreement with the staged engine on the forced values
is evidence for both.

Candidate semantics: a slot absent from the dict is unconstrained; a
present slot holds the finite set of rational values still possible.
f(1) = 1 is the seeded axiom.  Propagation applies three moves to a
fixpoint:

  - a constraint with every slot pinned but one determines the last
    (for a squared part this narrows to the rational square roots);
  - a sum-rule constraint with one repeated unknown part and an unknown
    sum substitutes through a coprime split sum = alpha * x with alpha
    pinned, giving a quadratic in x (this is how f(2) gets {1, 2} from
    1 + 1 + f(2)^2 = f(2) * f(3));
  - every quadratic narrowing records its polynomial, complete rational
    root set, and the constraints used, for comparison against
    certificate root sets.

Search branches on the smallest slot with a finite multi-candidate set,
trying values ascending, and reports the values forced across all
surviving leaves.  Leaves are re-verified against every fully pinned
constraint before they count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence

from .constraints import Constraint, Coprime, SumOfSquares
from .poly import canonical_int_coeffs, rational_roots

Candidates = dict[int, set[Fraction]]

DEFAULT_BRANCH_CAP = 10_000


class BudgetExceeded(RuntimeError):
    """Search abandoned after too many branch decisions."""

    def __init__(self, branches: int, cap: int):
        super().__init__(f"search took {branches} branches, cap is {cap}")
        self.branches = branches
        self.cap = cap


def generate_constraints(horizon: int) -> list[Constraint]:
    """Every constraint whose largest slot is at most horizon.

    Sum-rule constraints come first ordered by (sum, a, b, c), then
    coprime splits ordered by (product, smaller factor), factor pairs
    starting at 1 (the m = 1 instances restate the axiom; they narrow
    nothing but belong to the system).
    """
    if horizon < 3:
        raise ValueError("horizon must be at least 3")
    out: list[Constraint] = []
    for s in range(3, horizon + 1):
        a = 1
        while 3 * a * a <= s:
            b = a
            while a * a + 2 * b * b <= s:
                rest = s - a * a - b * b
                c = _exact_root(rest)
                if c is not None and c >= b:
                    out.append(SumOfSquares(a, b, c, s))
                b += 1
            a += 1
    pairs = []
    for m in range(1, horizon + 1):
        for n in range(m + 1, horizon // m + 1):
            if gcd(m, n) == 1:
                pairs.append(Coprime(m, n))
    pairs.sort(key=lambda con: (con.product, con.m))
    out.extend(pairs)
    return out


def _exact_root(n: int) -> int | None:
    if n < 1:
        return None
    r = isqrt(n)
    return r if r * r == n else None


def initial_candidates() -> Candidates:
    return {1: {Fraction(1)}}


@dataclass(frozen=True)
class RootSetRecord:
    """One quadratic narrowing: slot, its polynomial, roots, provenance."""

    slot: int
    poly: tuple[int, ...]
    roots: tuple[Fraction, ...]
    chain: tuple[Constraint, ...]


@dataclass
class PropagationOutcome:
    status: str  # "progress", "stuck", or "contradiction"
    stuck_slot: int | None = None
    conflict_slot: int | None = None
    records: list[RootSetRecord] = field(default_factory=list)


def _singleton(candidates: Candidates, slot: int) -> Fraction | None:
    held = candidates.get(slot)
    if held is not None and len(held) == 1:
        return next(iter(held))
    return None


def propagate(
    constraints: Sequence[Constraint], candidates: Candidates
) -> PropagationOutcome:
    """Narrow candidates to a fixpoint; mutates the dict in place."""
    records: list[RootSetRecord] = []
    by_product: dict[int, list[Coprime]] = {}
    for con in constraints:
        if isinstance(con, Coprime):
            by_product.setdefault(con.product, []).append(con)

    conflict: int | None = None

    def narrow(slot: int, allowed: Iterable[Fraction], record: RootSetRecord | None) -> bool:
        nonlocal conflict
        held = candidates.get(slot)
        new = set(allowed) if held is None else held & set(allowed)
        if held is not None and new == held:
            return False
        candidates[slot] = new
        if record is not None:
            records.append(record)
        if not new:
            conflict = slot
        return True

    changed = True
    while changed and conflict is None:
        changed = False
        for con in constraints:
            if conflict is not None:
                break
            if isinstance(con, SumOfSquares):
                changed |= _apply_sum(con, candidates, narrow, by_product)
            else:
                changed |= _apply_coprime(con, candidates, narrow)

    if conflict is not None:
        return PropagationOutcome("contradiction", conflict_slot=conflict, records=records)
    multi = sorted(s for s, held in candidates.items() if len(held) > 1)
    if multi:
        return PropagationOutcome("stuck", stuck_slot=multi[0], records=records)
    return PropagationOutcome("progress", records=records)


def _apply_sum(con, candidates, narrow, by_product) -> bool:
    """Narrowings from one sum-rule constraint.  Returns True on change."""
    parts = (con.a, con.b, con.c)
    vs = _singleton(candidates, con.s)
    pinned: dict[int, Fraction] = {}
    loose: list[int] = []
    for p in set(parts):
        v = _singleton(candidates, p)
        if v is None:
            loose.append(p)
        else:
            pinned[p] = v
    if not loose:
        total = sum(pinned[p] ** 2 for p in parts)
        return narrow(con.s, {total}, None)
    if len(loose) != 1:
        return False
    x = loose[0]
    mult = parts.count(x)
    known = sum(pinned[p] ** 2 for p in parts if p != x)
    if vs is not None:
        # mult * x^2 + known = vs
        poly = canonical_int_coeffs([known - vs, 0, mult])
        roots = rational_roots(poly)
        record = RootSetRecord(x, tuple(poly), tuple(roots), (con,))
        return narrow(x, roots, record)
    # Unknown sum: substitute sum = alpha * x through a coprime split.
    did = False
    for split in by_product.get(con.s, ()):
        if split.m == x:
            alpha = _singleton(candidates, split.n)
        elif split.n == x:
            alpha = _singleton(candidates, split.m)
        else:
            continue
        if alpha is None:
            continue
        poly = canonical_int_coeffs([known, -alpha, mult])
        roots = rational_roots(poly)
        record = RootSetRecord(x, tuple(poly), tuple(roots), (split, con))
        did |= narrow(x, roots, record)
    return did


def _apply_coprime(con, candidates, narrow) -> bool:
    vm = _singleton(candidates, con.m)
    vn = _singleton(candidates, con.n)
    vp = _singleton(candidates, con.product)
    if vm is not None and vn is not None:
        return narrow(con.product, {vm * vn}, None)
    if vp is not None and vn is not None and vm is None:
        if vn == 0:
            return narrow(con.m, set(), None) if vp != 0 else False
        return narrow(con.m, {vp / vn}, None)
    if vp is not None and vm is not None and vn is None:
        if vm == 0:
            return narrow(con.n, set(), None) if vp != 0 else False
        return narrow(con.n, {vp / vm}, None)
    return False


Decision = tuple[int, Fraction, tuple[Fraction, ...]]  # slot, chosen, alternatives


@dataclass
class BranchNode:
    """One point in the search tree: candidates plus how we got here."""

    candidates: Candidates
    decisions: tuple[Decision, ...] = ()

    def child(self, slot: int, value: Fraction) -> "BranchNode":
        copied = {s: set(v) for s, v in self.candidates.items()}
        copied[slot] = {value}
        alternatives = tuple(v for v in sorted(self.candidates[slot]) if v != value)
        return BranchNode(copied, self.decisions + ((slot, value, alternatives),))


@dataclass
class Leaf:
    """A surviving assignment: every tracked slot pinned, all checks pass."""

    values: dict[int, Fraction]
    decisions: tuple[Decision, ...]


@dataclass
class SearchReport:
    horizon: int
    report_bound: int
    branches: int
    leaves: list[Leaf]
    contradictions: int
    forced: dict[int, Fraction]
    unforced: list[int]
    identity_leaf: bool

    def to_obj(self) -> dict:
        return {
            "horizon": self.horizon,
            "report_bound": self.report_bound,
            "branches": self.branches,
            "leaves": len(self.leaves),
            "contradictions": self.contradictions,
            "forced": {str(slot): str(self.forced[slot]) for slot in sorted(self.forced)},
            "unforced": list(self.unforced),
            "identity_leaf": self.identity_leaf,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), separators=(",", ":"), sort_keys=False)


def _verify_leaf(constraints: Sequence[Constraint], candidates: Candidates) -> bool:
    """Exact re-check of every fully pinned constraint at a leaf."""
    for con in constraints:
        vals = [_singleton(candidates, s) for s in con.slots()]
        if any(v is None for v in vals):
            continue
        if isinstance(con, SumOfSquares):
            lookup = dict(zip(con.slots(), vals))
            total = lookup[con.a] ** 2 + lookup[con.b] ** 2 + lookup[con.c] ** 2
            if total != lookup[con.s]:
                return False
        else:
            lookup = dict(zip(con.slots(), vals))
            if lookup[con.m] * lookup[con.n] != lookup[con.product]:
                return False
    return True


def search(
    horizon: int,
    report_bound: int | None = None,
    branch_cap: int = DEFAULT_BRANCH_CAP,
    assignments: dict[int, Fraction | int] | None = None,
) -> SearchReport:
    """Exhaust the branch tree under the horizon's constraint system.

    A slot n <= report_bound is forced when every surviving leaf pins it
    to the same value; unforced lists the rest.  Extra starting
    assignments pin slots before the first propagation pass.  Raises
    BudgetExceeded past branch_cap branch decisions.
    """
    if report_bound is None:
        report_bound = horizon
    if report_bound > horizon:
        raise ValueError("report_bound must not exceed the horizon")
    constraints = generate_constraints(horizon)
    root = initial_candidates()
    for slot, value in (assignments or {}).items():
        root[slot] = {Fraction(value)}
    leaves: list[Leaf] = []
    stats = {"branches": 0, "contradictions": 0}

    def descend(node: BranchNode) -> None:
        outcome = propagate(constraints, node.candidates)
        if outcome.status == "contradiction":
            stats["contradictions"] += 1
            return
        if outcome.status == "progress":
            if _verify_leaf(constraints, node.candidates):
                values = {s: next(iter(v)) for s, v in node.candidates.items()}
                leaves.append(Leaf(values, node.decisions))
            else:
                stats["contradictions"] += 1
            return
        slot = outcome.stuck_slot
        assert slot is not None
        for value in sorted(node.candidates[slot]):
            stats["branches"] += 1
            if stats["branches"] > branch_cap:
                raise BudgetExceeded(stats["branches"], branch_cap)
            descend(node.child(slot, value))

    descend(BranchNode(root))

    forced: dict[int, Fraction] = {}
    identity_leaf = False
    if leaves:
        shared = set(leaves[0].values)
        for leaf in leaves[1:]:
            shared &= set(leaf.values)
        for slot in sorted(shared):
            if slot > report_bound:
                continue
            values = {leaf.values[slot] for leaf in leaves}
            if len(values) == 1:
                forced[slot] = next(iter(values))
        identity_leaf = any(
            all(v == s for s, v in leaf.values.items()) for leaf in leaves
        )
    unforced = [n for n in range(1, report_bound + 1) if n not in forced]
    return SearchReport(
        horizon=horizon,
        report_bound=report_bound,
        branches=stats["branches"],
        leaves=leaves,
        contradictions=stats["contradictions"],
        forced=forced,
        unforced=unforced,
        identity_leaf=identity_leaf,
    )


def replay_decisions(
    horizon: int,
    decisions: Iterable[tuple[int, Fraction | int]] | Iterable[Decision],
    assignments: dict[int, Fraction | int] | None = None,
) -> Candidates:
    """Reconstruct a leaf's candidate state from its decision list.

    Applies each (slot, value) decision in order with a propagation pass
    between, exactly as the search did.
    """
    constraints = generate_constraints(horizon)
    candidates = initial_candidates()
    for slot, value in (assignments or {}).items():
        candidates[slot] = {Fraction(value)}
    propagate(constraints, candidates)
    for decision in decisions:
        slot, value = decision[0], Fraction(decision[1])
        candidates[slot] = {value}
        propagate(constraints, candidates)
    return candidates


def propagate_with(
    horizon: int, assignments: dict[int, Fraction | int] | None = None
) -> tuple[Candidates, PropagationOutcome]:
    """Seed, pin the given slots, propagate once.  For tests and the CLI."""
    constraints = generate_constraints(horizon)
    candidates = initial_candidates()
    for slot, value in (assignments or {}).items():
        candidates[slot] = {Fraction(value)}
    outcome = propagate(constraints, candidates)
    return candidates, outcome
