from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ckpolylog.linalg import (EpsilonContext, Inconsistent, LinalgError, RationalMatrix, determinant,
                              eps_linearly_independent, kernel_basis, max_minor_abs, padic_abs,
                              padic_solve, padic_valuation, perturbation_threshold,
                              project_coefficients, rank, solve)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def matrices(rows, cols):
    return st.lists(st.lists(fractions, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def sym(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])


@settings(max_examples=80, deadline=None)
@given(matrices(3, 4))
def test_rank_and_kernel_against_sympy(rows):
    assert rank(rows) == sym(rows).rank()
    ker = kernel_basis(rows)
    assert len(ker) == 4 - rank(rows)
    for v in ker:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


@settings(max_examples=80, deadline=None)
@given(matrices(3, 3))
def test_determinant_against_sympy(rows):
    d = determinant(rows)
    ref = sym(rows).det()
    assert d == Fraction(int(ref.p), int(ref.q))


@settings(max_examples=50, deadline=None)
@given(matrices(3, 3), st.lists(fractions, min_size=3, max_size=3))
def test_solve(rows, x):
    b = [sum(a * c for a, c in zip(r, x)) for r in rows]
    y = solve(rows, b)
    assert [sum(a * c for a, c in zip(r, y)) for r in rows] == b


def test_solve_inconsistent():
    with pytest.raises(LinalgError):
        solve([[1, 1], [2, 2]], [1, 3])


def test_matrix_ops():
    m = RationalMatrix([[1, 2], [3, 4]])
    assert m @ RationalMatrix.identity(2) == m
    assert m.transpose() == RationalMatrix([[1, 3], [2, 4]])
    assert m.rank() == 2


def test_padic_abs():
    assert padic_abs(Fraction(50, 3), 5) == Fraction(1, 25)
    assert padic_abs(0, 5) == 0
    assert padic_valuation(Fraction(3, 25), 5) == -2


def test_max_minor_matches_enumeration():
    rng = random.Random(1)
    for _ in range(100):
        vecs = [[Fraction(rng.randint(-30, 30), rng.choice([1, 5, 7])) for _ in range(4)] for _ in range(2)]
        best, cols = max_minor_abs(vecs, 5)
        brute = max(padic_abs(determinant([[v[c] for c in cs] for v in vecs]), 5)
                    for cs in combinations(range(4), 2))
        assert best == brute
        assert padic_abs(determinant([[v[c] for c in cols] for v in vecs]), 5) == best


def test_eps_independence_methods_agree():
    rng = random.Random(2)
    ctx = EpsilonContext(3, 4)
    for _ in range(100):
        vecs = [[Fraction(rng.randint(-81, 81)) for _ in range(3)] for _ in range(2)]
        assert eps_linearly_independent(vecs, ctx) == eps_linearly_independent(vecs, ctx, "enumerate")


def test_eps_independence_examples():
    ctx = EpsilonContext(5, 2)
    assert eps_linearly_independent([[1, 0], [0, 1]], ctx)
    # det = 125 has |det| = 5^-3 < eps
    assert not eps_linearly_independent([[1, 0], [0, 125]], ctx)
    with pytest.raises(ValueError):
        EpsilonContext(5, 0)


def test_perturbation_threshold_holds():
    rng = random.Random(3)
    ctx = EpsilonContext(5, 3)
    for _ in range(200):
        vecs = [[Fraction(rng.randint(-50, 50)) for _ in range(3)] for _ in range(2)]
        if not eps_linearly_independent(vecs, ctx):
            continue
        t = perturbation_threshold(vecs, ctx)
        k = 0
        while Fraction(1, 5 ** k) > t:
            k += 1
        moved = [[x + rng.randint(-9, 9) * 5 ** k for x in v] for v in vecs]
        assert eps_linearly_independent(moved, ctx)


def test_project_coefficients_in_span():
    span = [[1, 0, 1], [0, 1, 1]]
    target = [2, 3, 5]
    assert project_coefficients(target, span) == [2, 3]


def test_padic_solve_exact_and_approximate():
    rows = [[1, 0, 1], [0, 1, 1]]
    y, prec = padic_solve(rows, [2, 3, 5], 5)
    assert y == [2, 3] and prec is None
    y, prec = padic_solve(rows, [2, 3, 5 + 5 ** 12], 5, prec=10)
    assert prec >= 10
    assert all(a == b or padic_valuation(a - b, 5) >= prec for a, b in zip(y, [2, 3]))
    with pytest.raises(Inconsistent):
        padic_solve(rows, [2, 3, 6], 5, prec=10)
