"""Polynomial helpers: algebra, canonical integer form, rational roots."""

import random
from fractions import Fraction as F

import pytest

from trisquares.poly import (
    RationalFunction,
    add,
    canonical_int_coeffs,
    degree,
    evaluate,
    is_zero,
    mul,
    normalize,
    rational_roots,
    scale,
    sqrt_exact,
    sub,
)


def test_normalize_strips_leading_zeros():
    assert normalize([1, 2, 0, 0]) == [F(1), F(2)]
    assert normalize([0, 0]) == []
    assert normalize([]) == []


def test_degree_and_is_zero():
    # both operate on normalized coefficient lists
    assert degree([]) == -1
    assert degree([F(5)]) == 0
    assert degree([0, 0, 1]) == 2
    assert is_zero([])
    assert is_zero(normalize([0, F(0)]))
    assert not is_zero([0, 1])


def test_ring_ops():
    p = [F(1), F(2)]          # 1 + 2x
    q = [F(-1), F(0), F(1)]   # x^2 - 1
    assert add(p, q) == [F(0), F(2), F(1)]
    assert sub(q, q) == []
    assert mul(p, q) == [F(-1), F(-2), F(1), F(2)]
    assert scale(q, F(1, 2)) == [F(-1, 2), F(0), F(1, 2)]
    assert evaluate(q, F(3)) == 8
    assert evaluate([], F(7)) == 0


def test_mul_matches_evaluation():
    rng = random.Random(7)
    for _ in range(50):
        p = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(0, 4))]
        q = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(rng.randint(0, 4))]
        x = F(rng.randint(-6, 6), rng.randint(1, 4))
        assert evaluate(mul(p, q), x) == evaluate(p, x) * evaluate(q, x)


def test_canonical_int_coeffs():
    # clears denominators, divides by content, makes the top coefficient positive
    assert canonical_int_coeffs([F(1, 2), F(-3, 4)]) == [-2, 3]
    assert canonical_int_coeffs([2, -3, 1]) == [2, -3, 1]
    assert canonical_int_coeffs([4, 8]) == [1, 2]
    assert canonical_int_coeffs([0, 0, F(-1, 3)]) == [0, 0, 1]
    with pytest.raises(ValueError):
        canonical_int_coeffs([])
    with pytest.raises(ValueError):
        canonical_int_coeffs([0, F(0)])


def test_rational_roots_frozen_cases():
    # the four constraint-chain polynomials from the seed derivation
    assert rational_roots([2, -3, 1]) == [F(1), F(2)]
    assert rational_roots([-25, 0, 1]) == [F(-5), F(5)]
    assert rational_roots([5, -6, 1]) == [F(1), F(5)]
    assert rational_roots([-30, 1, -3, 1, 0, 1]) == [F(2)]


def test_rational_roots_completeness_by_scan():
    # every rational p/q with small numerator and denominator that kills the
    # polynomial must appear in the returned list
    rng = random.Random(11)
    for _ in range(40):
        coeffs = [rng.randint(-8, 8) for _ in range(rng.randint(1, 5))]
        if is_zero(coeffs):
            continue
        found = set(rational_roots(coeffs))
        for num in range(-40, 41):
            for den in range(1, 9):
                x = F(num, den)
                if evaluate([F(c) for c in coeffs], x) == 0:
                    assert x in found
        for r in found:
            assert evaluate([F(c) for c in coeffs], r) == 0


def test_rational_roots_zero_poly_rejected():
    with pytest.raises(ValueError):
        rational_roots([])
    with pytest.raises(ValueError):
        rational_roots([0, 0])


def test_rational_function_arithmetic():
    x = RationalFunction.x()
    one = RationalFunction.const(1)
    g = (x + one) / x
    # g(x) = (x+1)/x, so g(2) relates num/den as 3/2
    num_at_2 = evaluate(g.num, F(2))
    den_at_2 = evaluate(g.den, F(2))
    assert num_at_2 / den_at_2 == F(3, 2)
    assert g.defined_nonzero_at(F(2))
    assert not g.defined_nonzero_at(F(0))    # pole
    assert not g.defined_nonzero_at(F(-1))   # zero
    assert (g - g).is_zero()
    sq = g.square()
    assert evaluate(sq.num, F(2)) / evaluate(sq.den, F(2)) == F(9, 4)


def test_rational_function_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        RationalFunction.x() / RationalFunction.const(0)


def test_sqrt_exact():
    assert sqrt_exact(F(9, 4)) == F(3, 2)
    assert sqrt_exact(F(0)) == 0
    assert sqrt_exact(F(2)) is None
    assert sqrt_exact(F(-4)) is None
    assert sqrt_exact(F(49)) == 7
