"""The graded shuffle Hopf algebra on a graded alphabet and its dual word calculus.

Elements are sparse maps ``Word -> Fraction`` standing for sums of the dual
functionals ``f_w``.  The product is the shuffle product, the coproduct is
deconcatenation.  The dual side (the completed enveloping algebra) has
concatenation as product and the unshuffle coproduct ``mu``; ``pair`` realises
``<f_w, w'> = [w == w']``.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Mapping

from .words import EMPTY, ONE, ZERO, GradedAlphabet, Word, lyndon_words


def _clean(terms: Mapping) -> dict:
    return {k: Fraction(v) for k, v in terms.items() if v != 0}


class ShuffleElement:
    """A finite rational combination of shuffle basis functionals f_w."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Word, Fraction] | None = None):
        self.terms: dict[Word, Fraction] = _clean(terms or {})

    @classmethod
    def word(cls, w: Word | str, coeff=1) -> "ShuffleElement":
        if isinstance(w, str):
            w = Word.parse(w)
        return cls({w: Fraction(coeff)})

    @classmethod
    def one(cls) -> "ShuffleElement":
        return cls({EMPTY: Fraction(1)})

    @classmethod
    def zero(cls) -> "ShuffleElement":
        return cls()

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ShuffleElement.one() * other
        return isinstance(other, ShuffleElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "ShuffleElement") -> "ShuffleElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return ShuffleElement(out)

    def __neg__(self) -> "ShuffleElement":
        return ShuffleElement({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "ShuffleElement") -> "ShuffleElement":
        return self + (-other)

    def __mul__(self, other) -> "ShuffleElement":
        if isinstance(other, ShuffleElement):
            return shuffle_product(self, other)
        c = Fraction(other)
        return ShuffleElement({w: c * v for w, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ShuffleElement":
        out = ShuffleElement.one()
        for _ in range(k):
            out = out * self
        return out

    def coefficient(self, w: Word | str) -> Fraction:
        if isinstance(w, str):
            w = Word.parse(w)
        return self.terms.get(w, Fraction(0))

    def weights(self) -> set[int]:
        return {w.weight for w in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def homogeneous_part(self, weight: int) -> "ShuffleElement":
        return ShuffleElement({w: c for w, c in self.terms.items() if w.weight == weight})

    def sorted_items(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())

    def to_list(self) -> list[list[str]]:
        return [[str(w), f"{c.numerator}/{c.denominator}"] for w, c in self.sorted_items()]

    @classmethod
    def from_list(cls, data) -> "ShuffleElement":
        return cls({Word.parse(w): Fraction(c) for w, c in data})

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*f[{w}]" for w, c in self.sorted_items())


class TensorElement:
    """A finite rational combination of f_w (x) f_w'."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[Word, Word], Fraction] | None = None):
        self.terms: dict[tuple[Word, Word], Fraction] = _clean(terms or {})

    @classmethod
    def pure(cls, x: ShuffleElement, y: ShuffleElement) -> "TensorElement":
        out: dict = defaultdict(Fraction)
        for u, a in x.terms.items():
            for v, b in y.terms.items():
                out[(u, v)] += a * b
        return cls(out)

    def __add__(self, other: "TensorElement") -> "TensorElement":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return TensorElement(out)

    def __neg__(self):
        return TensorElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "TensorElement":
        if isinstance(other, TensorElement):
            out: dict = defaultdict(Fraction)
            for (u, v), a in self.terms.items():
                for (x, y), b in other.terms.items():
                    for s, c1 in _shuffle_words(u, x).items():
                        for t, c2 in _shuffle_words(v, y).items():
                            out[(s, t)] += a * b * c1 * c2
            return TensorElement(out)
        c = Fraction(other)
        return TensorElement({k: c * v for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key()))
        return " + ".join(f"{c}*f[{u}](x)f[{v}]" for (u, v), c in items)


@lru_cache(maxsize=None)
def _shuffle_words_cached(u: Word, v: Word) -> tuple:
    if not len(u):
        return ((v, 1),)
    if not len(v):
        return ((u, 1),)
    out: dict = defaultdict(int)
    a, b = u.letters[0], v.letters[0]
    for w, c in _shuffle_words_cached(u[1:], v):
        out[Word((a,) + w.letters)] += c
    for w, c in _shuffle_words_cached(u, v[1:]):
        out[Word((b,) + w.letters)] += c
    return tuple(out.items())


def _shuffle_words(u: Word, v: Word) -> dict[Word, int]:
    return dict(_shuffle_words_cached(u, v))


def shuffle_product(x: ShuffleElement, y: ShuffleElement) -> ShuffleElement:
    out: dict = defaultdict(Fraction)
    for u, a in x.terms.items():
        for v, b in y.terms.items():
            for w, c in _shuffle_words_cached(u, v):
                out[w] += a * b * c
    return ShuffleElement(out)


def deconcat_coproduct(x: ShuffleElement) -> TensorElement:
    """Delta f_w = sum over w = w'w'' of f_w' (x) f_w''."""
    out: dict = defaultdict(Fraction)
    for w, c in x.terms.items():
        for i in range(len(w) + 1):
            out[(w[:i], w[i:])] += c
    return TensorElement(out)


def reduced_coproduct(x: ShuffleElement) -> TensorElement:
    """Delta'(a) = Delta(a) - 1 (x) a - a (x) 1 on the augmentation ideal.

    The constant part of ``x`` is discarded first, so Delta'(1) = 0.
    """
    x = ShuffleElement({w: c for w, c in x.terms.items() if len(w)})
    one = ShuffleElement.one()
    return deconcat_coproduct(x) - TensorElement.pure(one, x) - TensorElement.pure(x, one)


def counit(x: ShuffleElement) -> Fraction:
    return x.coefficient(EMPTY)


def unshuffle(w: Word) -> dict[tuple[Word, Word], int]:
    """mu(w): sum over splittings of the positions of w into two subsequences."""
    out: dict = defaultdict(int)
    n = len(w)
    for k in range(n + 1):
        for left in combinations(range(n), k):
            ls = set(left)
            u = Word(w.letters[i] for i in left)
            v = Word(w.letters[i] for i in range(n) if i not in ls)
            out[(u, v)] += 1
    return dict(out)


def pair(x: ShuffleElement, w: Word) -> Fraction:
    """<x, w> for a word w in the enveloping algebra."""
    return x.coefficient(w)


def pair_tensor(t: TensorElement, mu: Mapping[tuple[Word, Word], int]) -> Fraction:
    return sum((c * t.terms.get(k, 0) for k, c in mu.items()), Fraction(0))


def concat(terms_a: Mapping[Word, Fraction], terms_b: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
    """Product in the (truncated) enveloping algebra: concatenation."""
    out: dict = defaultdict(Fraction)
    for u, a in terms_a.items():
        for v, b in terms_b.items():
            out[u + v] += a * b
    return {k: v for k, v in out.items() if v}


def monomial_basis(alphabet: GradedAlphabet, weight: int) -> list[ShuffleElement]:
    """Shuffle monomials in the Lyndon functionals f_lambda of the given total weight.

    By Radford's theorem these form a basis of the weight-``weight`` part.
    Monomials are listed as non-increasing sequences of Lyndon words.
    """
    if weight < 0:
        raise ValueError("weight must be >= 0")
    if weight == 0:
        return [ShuffleElement.one()]
    lyn = lyndon_words(alphabet, weight) if len(alphabet) else []
    out = []
    for mono in lyndon_monomials(lyn, weight):
        e = ShuffleElement.one()
        for lam in mono:
            e = e * ShuffleElement.word(lam)
        out.append(e)
    return out


def lyndon_monomials(lyndon: list[Word], weight: int) -> list[tuple[Word, ...]]:
    """Multisets of Lyndon words (as non-increasing tuples) of the given total weight."""
    lyn = sorted(lyndon, key=Word.sort_key)
    out: list[tuple[Word, ...]] = []

    def rec(start: int, remaining: int, acc: list[Word]):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(lyn)):
            lam = lyn[i]
            if lam.weight <= remaining:
                acc.append(lam)
                rec(i, remaining - lam.weight, acc)
                acc.pop()

    rec(0, weight, [])
    return out


class PolylogCoordinateRing:
    """Coordinates on the polylogarithmic quotient, zeros-first convention.

    ``log = f_0`` and ``Li_n = f_{0^{n-1}1}``, up to a fixed depth bound.
    """

    def __init__(self, depth: int):
        if depth < 1:
            raise ValueError("depth must be >= 1")
        self.depth = depth
        self.alphabet = GradedAlphabet.polylog()

    def _check(self, n: int):
        if not 1 <= n <= self.depth:
            raise ValueError(f"depth {n} outside [1, {self.depth}]")

    def log(self) -> ShuffleElement:
        return ShuffleElement.word(Word((ZERO,)))

    def li_word(self, n: int) -> Word:
        self._check(n)
        return Word((ZERO,) * (n - 1) + (ONE,))

    def li(self, n: int) -> ShuffleElement:
        return ShuffleElement.word(self.li_word(n))

    def log_power_over_factorial(self, i: int) -> ShuffleElement:
        """(log)^i / i!, which equals f_{0^i}."""
        return self.log() ** i * Fraction(1, factorial(i))


def reduced_coproduct_polylog(n: int) -> TensorElement:
    """Delta' Li_n computed by deconcatenation of f_{0^{n-1}1}."""
    return reduced_coproduct(PolylogCoordinateRing(n).li(n))


def reduced_coproduct_polylog_formula(n: int) -> TensorElement:
    """sum_{i=1}^{n-1} log^i / i! (x) Li_{n-i}, expanded in words."""
    ring = PolylogCoordinateRing(n)
    out = TensorElement()
    for i in range(1, n):
        out = out + TensorElement.pure(ring.log_power_over_factorial(i), ring.li(n - i))
    return out


def words_to_lyndon_polynomial(alphabet: GradedAlphabet, weight: int):
    """Matrix data expressing each word functional f_w as a polynomial in f_lambda.

    Returns ``(words, monomials, coeffs)`` where ``coeffs[w]`` maps each
    Lyndon monomial (tuple of Lyndon words) to its coefficient.
    """
    from .linalg import solve_many

    words = alphabet.words_of_weight(weight)
    if weight == 0:
        return words, [()], {EMPTY: {(): Fraction(1)}}
    lyn = lyndon_words(alphabet, weight) if len(alphabet) else []
    monos = lyndon_monomials(lyn, weight)
    elems = []
    for mono in monos:
        e = ShuffleElement.one()
        for lam in mono:
            e = e * ShuffleElement.word(lam)
        elems.append(e)
    # rows: monomials expanded in words; solve for each word's coordinates.
    matrix = [[e.coefficient(w) for w in words] for e in elems]
    # f_w = sum_j x_j * mono_j  <=>  x^T * matrix = unit vector e_w
    sols = solve_many(transpose(matrix), [[Fraction(int(i == k)) for i in range(len(words))] for k in range(len(words))])
    coeffs = {}
    for k, w in enumerate(words):
        coeffs[w] = {monos[j]: c for j, c in enumerate(sols[k]) if c}
    return words, monos, coeffs


def transpose(m):
    return [list(r) for r in zip(*m)] if m else []
