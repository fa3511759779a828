"""Acceptance suite: one test per criterion, tolerances pinned."""

from __future__ import annotations

import json
import random
import subprocess
import sys
import time
from fractions import Fraction
from math import factorial

import sympy
from oracles import polylog_pairing_brute

from ckpolylog.geometric import geometric_ideal, goncharov_dimension, goncharov_dimension_lie
from ckpolylog.linalg import (EpsilonContext, determinant, eps_linearly_independent, max_minor_abs,
                              perturbation_threshold)
from ckpolylog.loci import assemble_loci, disk_reports, symmetrize
from ckpolylog.motivic_basis import devissage_pairing
from ckpolylog.padic import PadicNumber, padic_log
from ckpolylog.polylog import padic_polylog, padic_zeta
from ckpolylog.shuffle import (PolylogCoordinateRing, ShuffleElement, TensorElement, counit,
                               deconcat_coproduct, monomial_basis, pair, pair_tensor,
                               reduced_coproduct_polylog, unshuffle)
from ckpolylog.linalg import rank
from ckpolylog.sunits import OpenIntegerScheme, enumerate_points
from ckpolylog.words import EMPTY, GradedAlphabet, all_words, sigma, tau


def agrees(a: PadicNumber, b, n: int) -> bool:
    d = a - b
    return d.valuation() >= n and d.prec >= n


# 1 ---------------------------------------------------------------------------


def _hopf_suite(letters) -> None:
    words = [w for k in range(6) for w in all_words(letters, k)]
    small = [w for w in words if len(w) <= 2]
    W = ShuffleElement.word
    for w in words:
        x = W(w)
        d = deconcat_coproduct(x)
        # counit
        assert ShuffleElement({v: c for (u, v), c in d.terms.items() if u == EMPTY}) == x
        assert ShuffleElement({u: c for (u, v), c in d.terms.items() if v == EMPTY}) == x
        # coassociativity
        left, right = {}, {}
        for (u, v), c in d.terms.items():
            for (a, b), c2 in deconcat_coproduct(W(u)).terms.items():
                left[(a, b, v)] = left.get((a, b, v), 0) + c * c2
            for (a, b), c2 in deconcat_coproduct(W(v)).terms.items():
                right[(u, a, b)] = right.get((u, a, b), 0) + c * c2
        assert left == right
    assert counit(ShuffleElement.one()) == 1
    for u in words:
        for v in words:
            if len(u) + len(v) > 5:
                continue
            x, y = W(u), W(v)
            prod = x * y
            assert prod == y * x
            # bialgebra compatibility
            assert deconcat_coproduct(prod) == deconcat_coproduct(x) * deconcat_coproduct(y)
            # pairing duality <x y, w> = <x (x) y, mu(w)>
            t = TensorElement.pure(x, y)
            for w in all_words(letters, len(u) + len(v)):
                assert pair(prod, w) == pair_tensor(t, unshuffle(w))
            for s in small:
                if len(u) + len(v) + len(s) <= 5:
                    assert (x * y) * W(s) == x * (y * W(s))
    alphabet = GradedAlphabet(letters)
    for m in range(1, 6):
        basis = monomial_basis(alphabet, m)
        ws = alphabet.words_of_weight(m)
        assert len(basis) == len(ws)
        assert rank([[b.coefficient(w) for w in ws] for b in basis]) == len(ws)


def test_criterion_01_hopf_suite():
    start = time.monotonic()
    _hopf_suite(GradedAlphabet.polylog().letters)
    _hopf_suite((tau(2), tau(3)))
    assert time.monotonic() - start < 10


# 2 ---------------------------------------------------------------------------


def test_criterion_02_polylog_coproduct():
    for n in range(2, 9):
        ring = PolylogCoordinateRing(n)
        expected = TensorElement()
        for i in range(1, n):
            expected = expected + TensorElement.pure(ring.log() ** i * Fraction(1, factorial(i)), ring.li(n - i))
        assert reduced_coproduct_polylog(n) == expected


# 3 ---------------------------------------------------------------------------


def test_criterion_03_devissage_matches_brute_force():
    rng = random.Random(2024)
    cases = 0
    for taus in ([tau(2)], [tau(2), tau(3)], [tau(5), tau(7)]):
        alphabet = GradedAlphabet(taus + [sigma(3)])
        for _ in range(60):
            alpha = {t: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for t in taus}
            beta = {t: Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for t in taus}
            gamma = {sigma(3): Fraction(rng.randint(-5, 5), rng.randint(1, 3))}
            for m in range(1, 6):
                for w in alphabet.words_of_weight(m):
                    assert devissage_pairing(m, alpha, beta, gamma, w) == polylog_pairing_brute(m, alpha, beta, gamma, w)
                    cases += 1
    assert cases >= 1000


# 4 ---------------------------------------------------------------------------


def test_criterion_04_perturbation_threshold():
    rng = random.Random(7)
    trials = 0
    while trials < 1000:
        p = rng.choice([3, 5, 7])
        ctx = EpsilonContext(p, rng.randint(1, 4))
        d, n = rng.randint(1, 3), rng.randint(3, 4)
        vecs = [[Fraction(rng.randint(-60, 60), rng.choice([1, 1, p])) for _ in range(n)] for _ in range(d)]
        if not eps_linearly_independent(vecs, ctx):
            continue
        eps2 = perturbation_threshold(vecs, ctx)
        k = 0
        while Fraction(1, p ** k) > eps2:
            k += 1
        moved = [[x + Fraction(rng.randint(-50, 50), rng.choice([1, 7 if p != 7 else 11])) * p ** k for x in v]
                 for v in vecs]
        _, cols = max_minor_abs(vecs, p)
        assert determinant([[v[c] for c in cols] for v in moved]) != 0
        assert eps_linearly_independent(moved, ctx)
        trials += 1


# 5 ---------------------------------------------------------------------------


def test_criterion_05_functional_equations():
    start = time.monotonic()
    rng = random.Random(5)
    for p in (5, 7):
        for _ in range(4):
            a, b = rng.randint(1, 40), rng.randint(1, 30)
            a, b = a + (a % p == 0), b + (b % p == 0)
            z = Fraction(p ** rng.randint(1, 2) * a, b) * rng.choice([1, -1])
            assert z.denominator % p and z.numerator % p == 0  # |z| < 1
            for n in range(1, 5):
                lhs = padic_polylog(n, z * z, 24, p)
                rhs = (padic_polylog(n, z, 24, p) + padic_polylog(n, -z, 24, p)) * 2 ** (n - 1)
                assert agrees(lhs, rhs, 20)
        for _ in range(10):
            x = Fraction(rng.randint(1, 500), rng.randint(1, 500)) * rng.choice([1, -1])
            y = Fraction(rng.randint(1, 500), rng.randint(1, 500)) * rng.choice([1, -1])
            assert agrees(padic_log(x * y, p, 24), padic_log(x, p, 24) + padic_log(y, p, 24), 20)
    assert time.monotonic() - start < 60


# 6 ---------------------------------------------------------------------------


def test_criterion_06_zeta_nonvanishing():
    for p in (5, 7):
        kl = padic_zeta(3, p, 20)
        assert kl.prec >= 20 and not kl.is_zero()
        assert kl.abs() > Fraction(1, p ** 20)
        assert agrees(kl, padic_zeta(3, p, 20, method="polylog"), 15)


# 7 ---------------------------------------------------------------------------


def test_criterion_07_geometric_oracle():
    start = time.monotonic()
    one = geometric_ideal(GradedAlphabet.from_primes([2], 2), 2)
    log, li1, li2 = sympy.symbols("log Li1 Li2")
    G = sympy.groebner(one.generators, li2, li1, log, order="lex")
    assert G == sympy.groebner([li2 - log * li1 / 2], li2, li1, log, order="lex")
    assert one.generator_strings() == ["Li2 - 1/2*log*Li1"]
    none = geometric_ideal(GradedAlphabet.from_primes([], 2), 2)
    assert sympy.groebner(none.generators, li2, li1, log, order="lex") == sympy.groebner(
        [log, li1, li2], li2, li1, log, order="lex")
    for primes in ([], [2], [2, 3]):
        a = GradedAlphabet.from_primes(primes, 6)
        for m in range(1, 7):
            assert goncharov_dimension(a, m) == goncharov_dimension_lie(a, m)
    assert time.monotonic() - start < 60


# 8 ---------------------------------------------------------------------------


def test_criterion_08_minus_one_in_locus():
    N = 15
    locus = assemble_loci(OpenIntegerScheme.parse("Z[1/3]"), 2, N, 5)
    fns = symmetrize(locus.functions)
    assert fns
    for f in fns:
        value = f.evaluate(-1, N)
        assert value.prec >= N - 2 and value.valuation() >= N - 2


# 9 ---------------------------------------------------------------------------


def test_criterion_09_locus_containment():
    N, p = 15, 7
    Z = OpenIntegerScheme.parse("Z[1/2]")
    known = [pt.value for pt in enumerate_points(Z, 64)]
    assert known == [Fraction(-1), Fraction(1, 2), Fraction(2)]
    fns = symmetrize(assemble_loci(Z, 2, N, p).functions)
    report = disk_reports(fns, p, N, known)
    matched = {b.matched: b for b in report.balls if b.matched}
    assert set(matched) == {"-1", "1/2", "2"}
    assert all(b.verdict == "certified" and b.expected == 1 for b in matched.values())
    for f in fns:
        for x in known:
            value = f.evaluate(x, N)
            assert value.valuation() >= N - 2


# 10 --------------------------------------------------------------------------


def test_criterion_10_count_spec_z(tmp_path):
    start = time.monotonic()
    out = tmp_path / "report.json"
    proc = subprocess.run([sys.executable, "-m", "ckpolylog", "count", "--scheme", "Z", "--depth", "2",
                           "--precision", "15", "--out", str(out)],
                          capture_output=True, text=True, timeout=600, cwd=tmp_path)
    assert proc.returncode == 0, proc.stderr
    lines = proc.stdout.splitlines()
    assert lines[0] == "∅"
    assert lines[1] == f"report: {out}"
    result = json.loads(out.read_text())["result"]
    state = result["state"]
    assert result["points"] == [] and state["verdict"]
    assert state["report"]["certified"] and state["p"] <= 7 and state["N"] == 15
    assert all(b["verdict"] == "certified" for b in state["report"]["balls"])
    assert time.monotonic() - start < 600
