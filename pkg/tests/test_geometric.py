from __future__ import annotations

import json
import random
from fractions import Fraction
from math import factorial

import pytest
import sympy

from ckpolylog.geometric import (IdealPresentation, ev_sharp, geometric_ideal, goncharov_dimension,
                                 goncharov_dimension_lie, goncharov_is_everything, is_homogeneous,
                                 target_symbols, vanishes_under_ev)
from ckpolylog.words import GradedAlphabet, tau


def strings(alphabet, n):
    return geometric_ideal(alphabet, n).generator_strings()


def test_depth_one_and_two():
    assert strings(GradedAlphabet.from_primes([2], 1), 1) == []
    assert strings(GradedAlphabet.from_primes([2], 2), 2) == ["Li2 - 1/2*log*Li1"]
    assert strings(GradedAlphabet.from_primes([], 2), 2) == ["log", "Li1", "Li2"]
    assert strings(GradedAlphabet.from_primes([], 1), 1) == ["log", "Li1"]
    assert strings(GradedAlphabet.from_primes([2, 3], 2), 2) == []


def test_sigma_frees_the_top_polylog():
    # sigma_3 contributes an independent coordinate to Li3, so only the depth-2 relation survives
    assert strings(GradedAlphabet.from_primes([2], 3), 3) == ["Li2 - 1/2*log*Li1"]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_single_tau_against_generic_points(n):
    """Oracle: with one tau and no sigmas the image is Li_m = log^(m-1) Li_1 / m!."""
    ideal = geometric_ideal(GradedAlphabet([tau(2)]), n)
    log, *lis = target_symbols(n)
    expected = [lis[m - 1] - log ** (m - 1) * lis[0] / factorial(m) for m in range(2, n + 1)]
    G1 = sympy.groebner(ideal.generators, *reversed(target_symbols(n)), order="lex")
    G2 = sympy.groebner(expected, *reversed(target_symbols(n)), order="lex")
    assert G1 == G2
    rng = random.Random(n)
    for _ in range(5):
        a, b = Fraction(rng.randint(-9, 9)), Fraction(rng.randint(-9, 9))
        point = {log: a, lis[0]: b}
        for m in range(2, n + 1):
            point[lis[m - 1]] = a ** (m - 1) * b / factorial(m)
        assert all(g.subs(point) == 0 for g in ideal.generators)


def test_depth_four_with_sigma():
    ideal = geometric_ideal(GradedAlphabet.from_primes([2], 4), 4)
    gens = ideal.generator_strings()
    assert gens[0] == "Li2 - 1/2*log*Li1"
    assert ("[f:t2]*[f:s3]*Li4 - [f:t2.s3]*log*Li3 - 1/24*[f:t2]*[f:s3]*log^3*Li1"
            " + 1/6*[f:t2.s3]*log^3*Li1") in gens
    assert vanishes_under_ev(ideal)
    assert all(is_homogeneous(g, 4) for g in ideal.generators)


@pytest.mark.parametrize("primes,n", [([2], 2), ([2], 4), ([], 3), ([2, 3], 3)])
def test_generators_vanish_under_ev(primes, n):
    ideal = geometric_ideal(GradedAlphabet.from_primes(primes, n), n)
    assert vanishes_under_ev(ideal, ev_sharp(ideal.alphabet, n))


def test_ideal_roundtrip():
    ideal = geometric_ideal(GradedAlphabet.from_primes([2], 4), 4)
    again = IdealPresentation.from_dict(json.loads(ideal.dumps()))
    assert again.generator_strings() == ideal.generator_strings()
    assert again.coefficient_symbols == ideal.coefficient_symbols
    assert again.dumps() == ideal.dumps()


# dimensions of the Goncharov quotient, computed by both methods and frozen
DIMS = {(2,): [1, 0, 1, 1, 2, 2], (2, 3): [2, 1, 3, 5, 8, 11]}


@pytest.mark.parametrize("primes", [(2,), (2, 3)])
def test_goncharov_dimensions(primes):
    a = GradedAlphabet.from_primes(primes, 6)
    got = [goncharov_dimension(a, m) for m in range(1, 7)]
    assert got == [goncharov_dimension_lie(a, m) for m in range(1, 7)]
    assert got == DIMS[primes]


def test_goncharov_is_everything_small_weight():
    assert goncharov_is_everything(GradedAlphabet.from_primes([2], 4), 4)
    assert goncharov_is_everything(GradedAlphabet.from_primes([2, 3], 3), 3)
    # the first bracket of two elements of weight >= 2 that survives is [[t2, t3], s3]
    assert goncharov_is_everything(GradedAlphabet.from_primes([2, 3], 4), 4)
    assert not goncharov_is_everything(GradedAlphabet.from_primes([2, 3], 5), 5)
