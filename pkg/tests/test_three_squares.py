"""Three-square kernels against brute-force oracles.

The oracle here is deliberately dumb: triple loops over a*a+b*b+c*c.
Anything the fast enumeration in the package gets wrong, the dumb loop
catches.
"""

from math import isqrt

import pytest

from trisquares.three_squares import (
    NonvanishingRepresentable,
    NotRepresentable,
    PureSquareOnly,
    Representation,
    TwoSquareOnly,
    classify,
    five_power_representation,
    hurwitz_expected,
    representations,
    verify_hurwitz,
)


def brute_triples(n, nonvanishing):
    """All ordered triples a <= b <= c with a^2+b^2+c^2 = n, by exhaustion."""
    lo = 1 if nonvanishing else 0
    out = []
    for a in range(lo, isqrt(n) + 1):
        for b in range(max(a, lo), isqrt(n) + 1):
            rest = n - a * a - b * b
            if rest < b * b:
                break
            c = isqrt(rest)
            if c * c == rest:
                out.append((a, b, c))
    return out


def legendre_blocked(n):
    """True iff n = 4^s (8t+7), the unrepresentable shape."""
    while n % 4 == 0:
        n //= 4
    return n % 8 == 7


def test_representations_match_brute_force():
    for n in range(1, 2000):
        for nonvanishing in (False, True):
            got = [(r.a, r.b, r.c) for r in representations(n, nonvanishing=nonvanishing)]
            assert got == brute_triples(n, nonvanishing), (n, nonvanishing)


def test_representation_value():
    assert Representation(3, 4, 5).value() == 50
    assert Representation(0, 0, 1).value() == 1


def test_worked_examples():
    assert [(r.a, r.b, r.c) for r in representations(50)] == [(3, 4, 5)]
    assert classify(7) == NotRepresentable(s=0, t=0)
    assert classify(2**4 * 7) == NotRepresentable(s=2, t=0)
    assert classify(17) == NonvanishingRepresentable(witness=Representation(2, 2, 3))
    assert classify(13) == TwoSquareOnly(a=2, b=3)
    assert classify(16) == PureSquareOnly(root=4)
    assert classify(1) == PureSquareOnly(root=1)
    assert classify(2) == TwoSquareOnly(a=1, b=1)
    assert classify(3) == NonvanishingRepresentable(witness=Representation(1, 1, 1))


def test_classify_against_brute_force():
    for n in range(1, 3000):
        shape = classify(n)
        nonzero = brute_triples(n, True)
        anyrep = brute_triples(n, False)
        if isinstance(shape, NonvanishingRepresentable):
            assert nonzero and tuple(shape.witness) == nonzero[0]
        elif isinstance(shape, TwoSquareOnly):
            assert not nonzero
            assert (0, shape.a, shape.b) in anyrep
            assert shape.a >= 1
        elif isinstance(shape, PureSquareOnly):
            assert not nonzero
            assert shape.root * shape.root == n
            # pure square beats two-square here: no 0,a,b with a >= 1 works
            assert all(a == 0 for _, a, _ in anyrep)
        else:
            assert isinstance(shape, NotRepresentable)
            assert not anyrep
            assert 4**shape.s * (8 * shape.t + 7) == n


def test_legendre_consistency():
    for n in range(1, 10_001):
        blocked = legendre_blocked(n)
        assert isinstance(classify(n), NotRepresentable) == blocked
        if blocked and n < 2000:
            assert not brute_triples(n, False)


def test_witness_is_least():
    # classify must return the lexicographically least nonvanishing triple
    for n in (17, 50, 54, 100 + 25 + 1, 3000):
        shape = classify(n)
        if isinstance(shape, NonvanishingRepresentable):
            assert tuple(shape.witness) == brute_triples(n, True)[0]


def test_hurwitz_small():
    assert verify_hurwitz(1) == [1]
    assert verify_hurwitz(30) == [1, 4, 16, 25]
    assert verify_hurwitz(10_000) == hurwitz_expected(10_000)
    assert hurwitz_expected(1600) == [1, 4, 16, 25, 64, 100, 256, 400, 1024, 1600]


def test_five_power_representation():
    for s in range(3, 10):
        rep = five_power_representation(s)
        assert rep.a >= 1 and rep.b >= 1 and rep.c >= 1
        assert rep.value() == 5**s
    assert five_power_representation(4) == Representation(9, 12, 20)
    assert five_power_representation(6) == Representation(3, 80, 96)
    with pytest.raises(ValueError):
        five_power_representation(2)


def test_rejects_nonpositive():
    for bad in (0, -1):
        with pytest.raises(ValueError):
            classify(bad)
        with pytest.raises(ValueError):
            representations(bad)
    with pytest.raises(ValueError):
        verify_hurwitz(0)
