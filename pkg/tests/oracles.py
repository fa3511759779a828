"""Independent brute-force oracles shared by the test modules."""

from __future__ import annotations

from fractions import Fraction
from math import comb

from ckpolylog.words import ONE, ZERO, LetterKind, Word


def ad_e0_power(s: int) -> dict[Word, Fraction]:
    """ad(e0)^(s-1) e1 = sum_j (-1)^j C(s-1, j) e0^(s-1-j) e1 e0^j."""
    out = {}
    for j in range(s):
        w = Word((ZERO,) * (s - 1 - j) + (ONE,) + (ZERO,) * j)
        out[w] = Fraction((-1) ** j * comb(s - 1, j))
    return out


def concat(a: dict[Word, Fraction], b: dict[Word, Fraction]) -> dict[Word, Fraction]:
    out: dict[Word, Fraction] = {}
    for u, x in a.items():
        for v, y in b.items():
            out[u + v] = out.get(u + v, Fraction(0)) + x * y
    return out


def polylog_pairing_brute(m: int, alpha: dict, beta: dict, gamma: dict, w: Word) -> Fraction:
    """<Li_m(c), w>: coefficient of e0^(m-1) e1 in c(w_1) ... c(w_k)."""
    prod = {Word(()): Fraction(1)}
    for letter in w.letters:
        if letter.kind is LetterKind.TAU:
            img = {Word((ZERO,)): Fraction(alpha.get(letter, 0)), Word((ONE,)): Fraction(beta.get(letter, 0))}
        else:
            img = {k: v * gamma.get(letter, 0) for k, v in ad_e0_power(letter.label).items()}
        prod = concat(prod, img)
    return prod.get(Word((ZERO,) * (m - 1) + (ONE,)), Fraction(0))
