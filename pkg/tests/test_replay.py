"""Staged derivation: seed script, case analysis, full replay."""

from fractions import Fraction as F

import pytest

from trisquares.certificate import (
    Axiom,
    Division,
    FunctionalEquation,
    Intersection,
    Multiplicativity,
    RootSet,
    check,
)
from trisquares.partial_fn import PartialFn
from trisquares.replay import (
    BOOTSTRAP_SLOTS,
    HypothesisGap,
    bootstrap,
    branch_label,
    induction_step,
    run_replay,
    verify_up_to,
)
from trisquares.three_squares import (
    NonvanishingRepresentable,
    NotRepresentable,
    PureSquareOnly,
    TwoSquareOnly,
    classify,
)

# The seed stage is a fixed script; its full trace is frozen here.
# Each entry: (step type, target slot, distinguishing fields).
EXPECTED_TRACE = [
    (Axiom, 1, {}),
    (FunctionalEquation, 3, {"a": 1, "b": 1, "c": 1}),
    (RootSet, 2, {"poly": (2, -3, 1), "roots": (F(1), F(2))}),
    (RootSet, 2, {"poly": (-30, 1, -3, 1, 0, 1), "roots": (F(2),)}),
    (Intersection, 2, {"refs": (3, 4)}),
    (Multiplicativity, 6, {"m": 2, "k": 3}),
    (FunctionalEquation, 27, {"a": 3, "b": 3, "c": 3}),
    (RootSet, 5, {"poly": (-25, 0, 1), "roots": (F(-5), F(5))}),
    (RootSet, 5, {"poly": (5, -6, 1), "roots": (F(1), F(5))}),
    (Intersection, 5, {"refs": (8, 9)}),
    (Multiplicativity, 10, {"m": 2, "k": 5}),
    (Multiplicativity, 15, {"m": 3, "k": 5}),
    (FunctionalEquation, 12, {"a": 2, "b": 2, "c": 2}),
    (Division, 4, {"mn": 12, "m": 3}),
    (FunctionalEquation, 14, {"a": 1, "b": 2, "c": 3}),
    (Division, 7, {"mn": 14, "m": 2}),
    (FunctionalEquation, 21, {"a": 1, "b": 2, "c": 4}),
    (FunctionalEquation, 9, {"a": 1, "b": 2, "c": 2}),
    (FunctionalEquation, 11, {"a": 1, "b": 1, "c": 3}),
    (FunctionalEquation, 26, {"a": 1, "b": 3, "c": 4}),
    (Division, 13, {"mn": 26, "m": 2}),
    (FunctionalEquation, 24, {"a": 2, "b": 2, "c": 4}),
    (Division, 8, {"mn": 24, "m": 3}),
    (FunctionalEquation, 30, {"a": 1, "b": 2, "c": 5}),
    (FunctionalEquation, 50, {"a": 3, "b": 4, "c": 5}),
    (Division, 25, {"mn": 50, "m": 2}),
]


def test_bootstrap_trace_is_frozen():
    fn = bootstrap().fn
    assert len(fn.steps) == len(EXPECTED_TRACE) == 26
    for step, (cls, target, fields) in zip(fn.steps, EXPECTED_TRACE):
        assert type(step) is cls, step
        assert step.target == target, step
        for name, want in fields.items():
            assert getattr(step, name) == want, step
    # dense 1-based indices
    assert [s.index for s in fn.steps] == list(range(1, 27))


def test_bootstrap_slots_and_values():
    fn = bootstrap().fn
    assert set(fn.slots()) == set(BOOTSTRAP_SLOTS)
    assert BOOTSTRAP_SLOTS == frozenset(range(1, 16)) | {21, 24, 25, 26, 27, 30, 50}
    for n, v in fn.items():
        assert v == n


def test_bootstrap_candidate_narrowing():
    # after the first f(2) system: two candidates; the quintic kills f(2)=1
    state = bootstrap(stop_after=3)
    assert state.candidates[2] == {F(1), F(2)}
    assert 2 not in state.fn
    state = bootstrap(stop_after=4)
    assert state.candidates[2] == {F(2)}
    # same shape for f(5): +-5 from the square, then {1, 5} from the line
    state = bootstrap(stop_after=7)
    assert state.candidates[5] == {F(-5), F(5)}
    state = bootstrap(stop_after=8)
    assert state.candidates[5] == {F(5)}
    assert state.root_set_steps[2] == [3, 4]
    assert state.root_set_steps[5] == [8, 9]


def test_bootstrap_root_set_refs_name_priors():
    fn = bootstrap().fn
    rs_quintic = fn.steps[3]
    # priors of the long f(2) chain are f(1) and f(3): steps 1 and 2
    assert rs_quintic.refs == (1, 2)
    rs_30 = fn.steps[8]
    # f(1), f(2), f(6) enter the second f(5) system
    assert rs_30.refs == (1, 5, 6)


# -- induction branches ------------------------------------------------------


def test_nonvanishing_branch():
    fn = run_replay(16).fn
    steps = induction_step(fn, 17)
    assert len(steps) == 1
    (fe,) = steps
    assert isinstance(fe, FunctionalEquation)
    assert (fe.a, fe.b, fe.c) == (2, 2, 3)
    assert fn[17] == 17


def test_not_representable_odd_branch():
    # 23 = 8*2+7 is blocked; 46 = 1+9+36 carries the value down
    fn = run_replay(22).fn
    steps = induction_step(fn, 23)
    assert [type(s) for s in steps] == [FunctionalEquation, Division]
    fe, div = steps
    assert fe.target == 46 and (fe.a, fe.b, fe.c) == (1, 3, 6)
    assert div.target == 23 and (div.mn, div.m) == (46, 2)
    assert fn[23] == 23


def test_not_representable_even_branch():
    # 28 = 4 * 7 splits off the full power of four
    fn = run_replay(27).fn
    steps = induction_step(fn, 28)
    assert [type(s) for s in steps] == [Multiplicativity]
    assert (steps[0].m, steps[0].k) == (4, 7)
    assert fn[28] == 28


def test_two_square_prime_to_five_branch():
    # 58 = 3^2 + 7^2 only; lift to 25*58 = 15^2 + 21^2 + 28^2
    fn = run_replay(57).fn
    assert classify(58) == TwoSquareOnly(a=3, b=7)
    steps = induction_step(fn, 58)
    assert [type(s) for s in steps] == [FunctionalEquation, Division]
    fe, div = steps
    assert fe.target == 1450 and (fe.a, fe.b, fe.c) == (15, 21, 28)
    assert div.target == 58 and (div.mn, div.m) == (1450, 25)
    assert fn[58] == 58


def test_two_square_multiple_of_five_branch():
    # 100 = 5^2 * 4: coprime split against the seed value f(25)
    fn = run_replay(99).fn
    assert classify(100) == TwoSquareOnly(a=6, b=8)
    steps = induction_step(fn, 100)
    assert [type(s) for s in steps] == [Multiplicativity]
    assert (steps[0].m, steps[0].k) == (4, 25)
    assert fn[100] == 100


def test_pure_square_branch():
    # 16 has only the bare 4^2; triple it: 48 = 16+16+16
    fn = run_replay(15).fn
    assert classify(16) == PureSquareOnly(root=4)
    steps = induction_step(fn, 16)
    assert [type(s) for s in steps] == [FunctionalEquation, Division]
    fe, div = steps
    assert fe.target == 48 and (fe.a, fe.b, fe.c) == (4, 4, 4)
    assert div.target == 16 and (div.mn, div.m) == (48, 3)
    assert fn[16] == 16


def test_cached_slot_emits_nothing():
    fn = run_replay(30).fn
    assert induction_step(fn, 10) == []
    assert induction_step(fn, 25) == []


def test_missing_hypotheses_raise():
    fn = PartialFn()
    fn.assign(1, 1, Axiom(0, 1, F(1)))
    with pytest.raises(HypothesisGap):
        induction_step(fn, 17)


def test_five_power_lift_is_dead_below_ten_thousand():
    # every two-square-only n <= 10^4 has 5-adic valuation <= 2, so the
    # branch that would synthesize f(5^s), s >= 3, never fires
    for n in range(1, 10_001):
        shape = classify(n)
        if isinstance(shape, TwoSquareOnly):
            s = 0
            k = n
            while k % 5 == 0:
                k //= 5
                s += 1
            assert s <= 2, n


# -- full replay --------------------------------------------------------------


def test_run_replay_identity_and_certificate():
    run = run_replay(300)
    assert run.bound == 300
    assert run.fn.first_non_identity(300) is None
    assert sum(run.histogram.values()) == 300
    assert set(run.histogram) <= {
        "seed",
        "forward",
        "nonvanishing",
        "not_representable",
        "two_square",
        "pure_square",
    }
    assert run.histogram["seed"] == 22
    report = check(run.certificate)
    assert report.valid, report.failure_reason
    assert run.elapsed_s >= 0


def test_histogram_matches_classification():
    run = run_replay(300)
    expected = {"seed": 0, "forward": 0}
    fn = bootstrap().fn
    seen = set(fn.slots())
    for n in range(1, 301):
        if n in seen:
            expected["seed" if n in BOOTSTRAP_SLOTS else "forward"] = (
                expected.get("seed" if n in BOOTSTRAP_SLOTS else "forward", 0) + 1
            )
            continue
        shape = classify(n)
        expected[branch_label(shape)] = expected.get(branch_label(shape), 0) + 1
        seen.add(n)
        # mirror the auxiliary slots the step would create
        if isinstance(shape, NotRepresentable) and shape.s == 0:
            seen.add(2 * n)
        elif isinstance(shape, TwoSquareOnly) and n % 5:
            seen.add(25 * n)
        elif isinstance(shape, PureSquareOnly):
            seen.add(3 * n)
    expected = {k: v for k, v in expected.items() if v}
    assert run.histogram == expected


def test_verify_up_to():
    fn, cert = verify_up_to(80)
    assert fn.first_non_identity(80) is None
    assert cert.bound == 80
    assert check(cert).valid


def test_run_replay_rejects_nonpositive():
    with pytest.raises(ValueError):
        run_replay(0)


def test_branch_label_variants():
    assert branch_label(classify(17)) == "nonvanishing"
    assert branch_label(classify(7)) == "not_representable"
    assert branch_label(classify(13)) == "two_square"
    assert branch_label(classify(16)) == "pure_square"
    assert isinstance(classify(17), NonvanishingRepresentable)
