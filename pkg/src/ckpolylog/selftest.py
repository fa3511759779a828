"""A quick invariant suite runnable from an installed package (``ckpolylog selftest``)."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .geometric import geometric_ideal, goncharov_dimension, goncharov_dimension_lie
from .padic import padic_log
from .polylog import padic_polylog, padic_zeta
from .shuffle import (ShuffleElement, TensorElement, monomial_basis, pair, pair_tensor,
                      reduced_coproduct_polylog, reduced_coproduct_polylog_formula, shuffle_product,
                      unshuffle)
from .linalg import rank
from .words import GradedAlphabet, all_words


def _pairing_duality() -> bool:
    letters = GradedAlphabet.polylog().letters
    words = [w for k in range(3) for w in all_words(letters, k)]
    for u in words:
        for v in words:
            x, y = ShuffleElement.word(u), ShuffleElement.word(v)
            prod = shuffle_product(x, y)
            for w in all_words(letters, len(u) + len(v)):
                if pair(prod, w) != pair_tensor(TensorElement.pure(x, y), unshuffle(w)):
                    return False
    return True


def _radford() -> bool:
    alpha = GradedAlphabet.polylog()
    for m in range(1, 5):
        basis = monomial_basis(alpha, m)
        words = list(alpha.words_of_weight(m))
        rows = [[b.coefficient(w) for w in words] for b in basis]
        if len(basis) != len(words) or rank(rows) != len(words):
            return False
    return True


def _coproduct() -> bool:
    return all(reduced_coproduct_polylog(n) == reduced_coproduct_polylog_formula(n) for n in range(2, 6))


def _log_homomorphism() -> bool:
    p, N = 5, 20
    return (padic_log(Fraction(6 * 7), p, N) - padic_log(6, p, N) - padic_log(7, p, N)).valuation() >= N - 2


def _distribution() -> bool:
    p, N = 7, 15
    z = Fraction(7, 3)
    for n in (2, 3):
        lhs = padic_polylog(n, z * z, N, p)
        rhs = (padic_polylog(n, z, N, p) + padic_polylog(n, -z, N, p)) * 2 ** (n - 1)
        if (lhs - rhs).valuation() < N - 2:
            return False
    return True


def _zeta() -> bool:
    a = padic_zeta(3, 5, 15)
    b = padic_zeta(3, 5, 15, method="polylog")
    return not a.is_zero() and (a - b).valuation() >= 10


def _geometric() -> bool:
    one = geometric_ideal(GradedAlphabet.from_primes([2], 2), 2).generator_strings()
    none = geometric_ideal(GradedAlphabet.from_primes([], 2), 2).generator_strings()
    dims = GradedAlphabet.from_primes([2, 3], 4)
    return (one == ["Li2 - 1/2*log*Li1"] and none == ["log", "Li1", "Li2"]
            and all(goncharov_dimension(dims, m) == goncharov_dimension_lie(dims, m) for m in range(1, 5)))


CHECKS: dict[str, Callable[[], bool]] = {
    "pairing duality": _pairing_duality,
    "monomial basis rank": _radford,
    "polylog coproduct": _coproduct,
    "log homomorphism": _log_homomorphism,
    "distribution relation": _distribution,
    "zeta routes agree": _zeta,
    "geometric ideals": _geometric,
}


def run() -> dict[str, dict]:
    out = {}
    for name, check in CHECKS.items():
        try:
            ok, err = bool(check()), None
        except Exception as exc:  # reported, not raised: the suite summarises failures
            ok, err = False, f"{type(exc).__name__}: {exc}"
        out[name] = {"ok": ok, "error": err}
    return out
