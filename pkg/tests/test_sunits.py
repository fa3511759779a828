from __future__ import annotations

from fractions import Fraction
from math import gcd

import pytest

from ckpolylog.sunits import (OpenIntegerScheme, SUnitPoint, enumerate_points, height, primes_up_to,
                              valuation_vector)


def brute_points(Z: OpenIntegerScheme, b: int) -> set[Fraction]:
    out = set()
    for num in range(-b, b + 1):
        for den in range(1, b + 1):
            if gcd(num, den) != 1:
                continue
            z = Fraction(num, den)
            if z not in (0, 1) and Z.is_unit(z) and Z.is_unit(1 - z):
                out.add(z)
    return out


def test_parse():
    assert OpenIntegerScheme.parse("Z").primes == ()
    assert OpenIntegerScheme.parse("Spec Z").primes == ()
    assert OpenIntegerScheme.parse("Z[1/3, 1/2]").primes == (2, 3)
    assert OpenIntegerScheme.parse("Z>5").primes == (2, 3, 5)
    assert str(OpenIntegerScheme.parse("Z>5")) == "Z>5"
    assert str(OpenIntegerScheme.parse("Z[1/2,1/3]")) == "Z[1/2,1/3]"
    for bad in ("Q", "Z[1/4]", "Z[2]"):
        with pytest.raises(ValueError):
            OpenIntegerScheme.parse(bad)


def test_q_s():
    assert OpenIntegerScheme.parse("Z").q_s == 2
    assert OpenIntegerScheme.parse("Z[1/2,1/7]").q_s == 7


def test_units():
    Z = OpenIntegerScheme.inverting([2, 3])
    assert Z.is_unit(Fraction(-9, 8))
    assert not Z.is_unit(Fraction(5, 2))
    assert not Z.is_unit(0)


@pytest.mark.parametrize("scheme,b", [("Z", 50), ("Z[1/2]", 64), ("Z[1/3]", 81), ("Z[1/2,1/3]", 60),
                                      ("Z[1/2,1/5]", 40), ("Z>3", 50)])
def test_enumeration_matches_brute_force(scheme, b):
    Z = OpenIntegerScheme.parse(scheme)
    got = [pt.value for pt in enumerate_points(Z, b)]
    assert set(got) == brute_points(Z, b)
    assert got == sorted(got, key=lambda z: (height(z), z.numerator, z.denominator))


def test_classical_answers():
    assert [pt.value for pt in enumerate_points(OpenIntegerScheme.parse("Z[1/2]"), 1000)] == [
        Fraction(-1), Fraction(1, 2), Fraction(2)]
    assert enumerate_points(OpenIntegerScheme.parse("Z"), 1000) == []
    assert enumerate_points(OpenIntegerScheme.parse("Z[1/3]"), 3 ** 8) == []
    # the 21 solutions of the {2,3}-unit equation, all of height <= 9
    assert len(enumerate_points(OpenIntegerScheme.parse("Z[1/2,1/3]"), 3 ** 6)) == 21


def test_valuation_vectors():
    pt = SUnitPoint(Fraction(9, 8), (2, 3))
    assert pt.v() == (-3, 2)
    assert pt.v_one_minus() == (-3, 0)
    assert pt.height == 9
    with pytest.raises(ValueError):
        valuation_vector(Fraction(5, 2), (2, 3))
    assert str(SUnitPoint.tangent_minus_one()) == "-1_1"


def test_primes_up_to():
    assert primes_up_to(12) == [2, 3, 5, 7, 11]
