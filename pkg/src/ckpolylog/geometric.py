"""The cocycle-evaluation map in coordinates, the Goncharov subalgebra and elimination.

Coordinates on the space of cocycles: for a weight-one generator ``t`` the two
values ``Phi:t:0`` and ``Phi:t:1`` (its images on e0 and e1), and for an odd
generator ``s<r>`` the single value ``Phi:s<r>:0..01``.  The pullback of the
polylogarithmic coordinates is

    log  -> sum_t f_t Phi:t:0
    Li_m -> sum_{r+s=m} f_{t_1..t_r x} Phi:t_1:0 ... Phi:t_r:0 Phi:x:0^(s-1)1

with ``x`` of weight ``s`` (a weight-one generator when s = 1).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

import sympy

from .linalg import kernel_basis, rank, rref
from .shuffle import ShuffleElement, concat, words_to_lyndon_polynomial
from .words import (EMPTY, GradedAlphabet, Letter, LetterKind, Word, lyndon_words,
                    standard_factorization)


class EliminationBudgetExceeded(RuntimeError):
    """The Groebner computation ran past its time budget."""


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True)
class CocycleCoordinate:
    rho: Letter
    lam: Word

    def __post_init__(self):
        if self.rho.weight != self.lam.weight:
            raise ValueError("weight mismatch")
        if self.rho.kind is LetterKind.SIGMA and str(self.lam) != "0" * (self.rho.weight - 1) + "1":
            raise ValueError("odd generators only pair with 0...01")

    @property
    def name(self) -> str:
        return f"Phi:{self.rho}:{self.lam}"

    def symbol(self) -> sympy.Symbol:
        return sympy.Symbol(self.name)


def f_symbol(w: Word) -> sympy.Symbol:
    return sympy.Symbol(f"f:{w}")


def target_symbols(n: int) -> list[sympy.Symbol]:
    """[log, Li1, ..., Lin]."""
    return [sympy.Symbol("log")] + [sympy.Symbol(f"Li{m}") for m in range(1, n + 1)]


def polylog_word(m: int) -> Word:
    return Word.parse("0" * (m - 1) + "1")


# ---------------------------------------------------------------------------
# words -> polynomials in Lyndon coordinates


@lru_cache(maxsize=None)
def _lyndon_table(alphabet: GradedAlphabet, weight: int):
    return words_to_lyndon_polynomial(alphabet, weight)


def word_as_polynomial(alphabet: GradedAlphabet, w: Word) -> sympy.Expr:
    """f_w as a polynomial in the free generators f_lambda (lambda Lyndon)."""
    if w == EMPTY:
        return sympy.Integer(1)
    _, _, coeffs = _lyndon_table(alphabet, w.weight)
    expr = sympy.Integer(0)
    for mono, c in coeffs[w].items():
        term = sympy.Rational(c.numerator, c.denominator)
        for lam in mono:
            term *= f_symbol(lam)
        expr += term
    return sympy.expand(expr)


def shuffle_as_polynomial(alphabet: GradedAlphabet, x: ShuffleElement) -> sympy.Expr:
    return sympy.expand(sum((sympy.Rational(c.numerator, c.denominator) * word_as_polynomial(alphabet, w)
                             for w, c in x.terms.items()), sympy.Integer(0)))


# ---------------------------------------------------------------------------
# ev sharp


@dataclass
class SubstitutionMap:
    alphabet: GradedAlphabet
    depth: int
    images: dict[str, sympy.Expr]
    coordinates: list[CocycleCoordinate]

    def image(self, name: str) -> sympy.Expr:
        return self.images[name]


def ev_sharp(alphabet: GradedAlphabet, n: int, lyndon: bool = True) -> SubstitutionMap:
    """Images of log, Li_1..Li_n; with ``lyndon`` the f_w are rewritten in Lyndon generators."""
    if n < 1:
        raise ValueError("depth must be >= 1")
    taus = alphabet.taus
    coords = []
    for t in taus:
        coords += [CocycleCoordinate(t, Word.parse("0")), CocycleCoordinate(t, Word.parse("1"))]
    for s in alphabet.sigmas:
        coords.append(CocycleCoordinate(s, polylog_word(s.weight)))
    phi = {(c.rho, str(c.lam)): c.symbol() for c in coords}

    def fw(w: Word) -> sympy.Expr:
        return word_as_polynomial(alphabet, w) if lyndon else f_symbol(w)

    images = {"log": sympy.expand(sum((fw(Word([t])) * phi[(t, "0")] for t in taus), sympy.Integer(0)))}
    for m in range(1, n + 1):
        expr = sympy.Integer(0)
        for s in range(1, m + 1):
            r = m - s
            tails = taus if s == 1 else [x for x in alphabet.sigmas if x.weight == s]
            for x in tails:
                lam = "1" if s == 1 else str(polylog_word(s))
                for prefix in product(taus, repeat=r):
                    term = fw(Word(prefix + (x,))) * phi[(x, lam)]
                    for t in prefix:
                        term *= phi[(t, "0")]
                    expr += term
        images[f"Li{m}"] = sympy.expand(expr)
    return SubstitutionMap(alphabet, n, images, coords)


# ---------------------------------------------------------------------------
# Lie side: Lyndon brackets and the Goncharov quotient


NCPoly = dict  # Word -> Fraction, a noncommutative polynomial


def _bracket(x: NCPoly, y: NCPoly) -> NCPoly:
    out = dict(concat(x, y))
    for w, c in concat(y, x).items():
        out[w] = out.get(w, Fraction(0)) - c
    return {w: c for w, c in out.items() if c}


@lru_cache(maxsize=None)
def _lyndon_bracket_cached(word: Word) -> tuple:
    if len(word) == 1:
        return ((word, Fraction(1)),)
    u, v = standard_factorization(word)
    return tuple(sorted(_bracket(dict(_lyndon_bracket_cached(u)), dict(_lyndon_bracket_cached(v))).items()))


def lyndon_bracket(word: Word) -> NCPoly:
    """The Lie polynomial attached to a Lyndon word by standard bracketing."""
    return dict(_lyndon_bracket_cached(word))


def _vector(poly: NCPoly, index: dict[Word, int]) -> list[Fraction]:
    v = [Fraction(0)] * len(index)
    for w, c in poly.items():
        v[index[w]] += c
    return v


def _commutator_generators(alphabet: GradedAlphabet, m: int) -> list[NCPoly]:
    """[x, y] for Lyndon basis elements x < y of weight >= 2 with wt x + wt y = m."""
    if m < 4:
        return []
    lyn = [w for w in lyndon_words(alphabet, m - 2) if w.weight >= 2]
    out = []
    for i, x in enumerate(lyn):
        for y in lyn[i + 1:]:
            if x.weight + y.weight == m:
                br = _bracket(lyndon_bracket(x), lyndon_bracket(y))
                if br:
                    out.append(br)
    return out


def _reduce_rows(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return []
    return rref(rows, ncols)[0]


@lru_cache(maxsize=None)
def _goncharov_annihilator(alphabet: GradedAlphabet, m: int) -> tuple[tuple[Word, ...], tuple[tuple[Fraction, ...], ...]]:
    words = alphabet.words_of_weight(m)
    index = {w: i for i, w in enumerate(words)}
    rows: list[list[Fraction]] = []
    for k in range(4, m + 1):
        gens = _commutator_generators(alphabet, k)
        if not gens:
            continue
        for a in range(0, m - k + 1):
            lefts = alphabet.words_of_weight(a)
            rights = alphabet.words_of_weight(m - k - a)
            for g in gens:
                for u in lefts:
                    for v in rights:
                        poly = {u + w + v: c for w, c in g.items()}
                        rows.append(_vector(poly, index))
        rows = _reduce_rows(rows, len(words))
    basis = kernel_basis(rows) if rows else [[Fraction(int(i == j)) for i in range(len(words))] for j in range(len(words))]
    return tuple(words), tuple(tuple(b) for b in basis)


def goncharov_subalgebra_basis(alphabet: GradedAlphabet, m: int) -> list[ShuffleElement]:
    """A basis of A^G_m: functionals vanishing on every u [x, y] v with x, y of weight >= 2."""
    if m < 1:
        raise ValueError("weight must be >= 1")
    words, basis = _goncharov_annihilator(alphabet, m)
    return [ShuffleElement({w: c for w, c in zip(words, b) if c}) for b in basis]


def _decomposable_rank(alphabet: GradedAlphabet, m: int) -> int:
    words = alphabet.words_of_weight(m)
    index = {w: i for i, w in enumerate(words)}
    rows = []
    for i in range(1, m // 2 + 1):
        for x in goncharov_subalgebra_basis(alphabet, i):
            for y in goncharov_subalgebra_basis(alphabet, m - i):
                rows.append(_vector((x * y).terms, index))
    return rank(rows) if rows else 0


def goncharov_dimension(alphabet: GradedAlphabet, m: int) -> int:
    """dim of the weight-m part of the Goncharov quotient (indecomposables of A^G)."""
    return len(goncharov_subalgebra_basis(alphabet, m)) - _decomposable_rank(alphabet, m)


def goncharov_dimension_lie(alphabet: GradedAlphabet, m: int) -> int:
    """Independent count: #Lyndon words of weight m minus dim of the Lie ideal [n_{<=-2}, n_{<=-2}]."""
    return sum(1 for w in lyndon_words(alphabet, m) if w.weight == m) - len(_lie_ideal(alphabet, m))


@lru_cache(maxsize=None)
def _lie_ideal(alphabet: GradedAlphabet, m: int) -> tuple:
    words = alphabet.words_of_weight(m)
    index = {w: i for i, w in enumerate(words)}
    rows = [_vector(g, index) for g in _commutator_generators(alphabet, m)]
    for a in alphabet.letters:
        if m - a.weight >= 4:
            for vec in _lie_ideal(alphabet, m - a.weight):
                poly = {w: c for w, c in zip(alphabet.words_of_weight(m - a.weight), vec) if c}
                rows.append(_vector(_bracket({Word([a]): Fraction(1)}, poly), index))
    if not rows:
        return ()
    return tuple(tuple(r) for r in rref(rows, len(words))[0])


def goncharov_is_everything(alphabet: GradedAlphabet, n: int) -> bool:
    return all(len(goncharov_subalgebra_basis(alphabet, m)) == len(alphabet.words_of_weight(m)) for m in range(1, n + 1))


def goncharov_generators(alphabet: GradedAlphabet, n: int) -> list[tuple[str, ShuffleElement]]:
    """Free algebra generators of A^G up to weight n, as (name, element).

    Where A^G_m = A_m the Lyndon words of weight m are used; otherwise a
    complement of the decomposables inside A^G_m is chosen greedily.
    """
    out: list[tuple[str, ShuffleElement]] = []
    for m in range(1, n + 1):
        full = len(goncharov_subalgebra_basis(alphabet, m)) == len(alphabet.words_of_weight(m))
        if full:
            out += [(f"f:{w}", ShuffleElement.word(w)) for w in lyndon_words(alphabet, m) if w.weight == m]
            continue
        words = alphabet.words_of_weight(m)
        index = {w: i for i, w in enumerate(words)}
        rows = []
        for i in range(1, m // 2 + 1):
            for x in goncharov_subalgebra_basis(alphabet, i):
                for y in goncharov_subalgebra_basis(alphabet, m - i):
                    rows.append(_vector((x * y).terms, index))
        r = rank(rows) if rows else 0
        j = 0
        for x in goncharov_subalgebra_basis(alphabet, m):
            trial = rows + [_vector(x.terms, index)]
            if rank(trial) > r:
                rows, r = trial, r + 1
                j += 1
                out.append((f"g:{m}:{j}", x))
    return out


# ---------------------------------------------------------------------------
# elimination


@dataclass
class IdealPresentation:
    alphabet: GradedAlphabet
    depth: int
    generators: list[sympy.Expr]
    coefficient_symbols: list[str]
    coefficient_elements: dict[str, ShuffleElement]
    order: str = "lex"

    def target_symbols(self) -> list[sympy.Symbol]:
        return target_symbols(self.depth)

    def generator_strings(self) -> list[str]:
        return [format_polynomial(g, self.coefficient_symbols, self.depth) for g in self.generators]

    def to_dict(self) -> dict:
        return {
            "alphabet": str(self.alphabet),
            "depth": self.depth,
            "order": self.order,
            "coefficients": {k: self.coefficient_elements[k].to_list() for k in self.coefficient_symbols},
            "generators": self.generator_strings(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "IdealPresentation":
        coeffs = {k: ShuffleElement.from_list(v) for k, v in d["coefficients"].items()}
        names = sorted(coeffs, key=_coef_sort_key)
        loc = {s: sympy.Symbol(s) for s in names}
        for t in target_symbols(d["depth"]):
            loc[str(t)] = t
        gens = [parse_polynomial(g, loc) for g in d["generators"]]
        return cls(GradedAlphabet.parse(d["alphabet"]), d["depth"], gens, names, coeffs, d.get("order", "lex"))


def _coef_sort_key(name: str):
    kind, _, rest = name.partition(":")
    if kind == "f":
        w = Word.parse(rest)
        return (w.weight, 0, w.letters, 0)
    m, j = rest.split(":")
    return (int(m), 1, (), int(j))


def _pretty_var(name: str) -> str:
    return name if name.isidentifier() else f"[{name}]"


def format_polynomial(expr: sympy.Expr, coef_names: list[str], n: int) -> str:
    """Deterministic text form, e.g. ``Li2 - 1/2*log*Li1``; bracketed names for f/g symbols."""
    coef_syms = [sympy.Symbol(c) for c in coef_names]
    targets = target_symbols(n)
    gens_order = list(reversed(targets)) + coef_syms
    poly = sympy.Poly(expr, *gens_order)
    display = coef_syms + targets
    pos = {s: gens_order.index(s) for s in display}
    parts = []
    for monom, c in poly.terms(order="lex"):
        c = sympy.Rational(c)
        factors = []
        for s in display:
            e = monom[pos[s]]
            if e:
                factors.append(_pretty_var(str(s)) + (f"^{e}" if e > 1 else ""))
        mono = "*".join(factors)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def parse_polynomial(text: str, symbols: dict[str, sympy.Symbol]) -> sympy.Expr:
    """Inverse of :func:`format_polynomial`."""
    names = {}
    for i, (k, s) in enumerate(sorted(symbols.items(), key=lambda kv: -len(kv[0]))):
        token = f"_v{i}"
        text = text.replace(f"[{k}]", token) if not k.isidentifier() else text
        names[token] = s
    for k, s in symbols.items():
        if k.isidentifier():
            names[k] = s
    return sympy.expand(sympy.sympify(text.replace("^", "**"), locals=names))


def _normalize(expr: sympy.Expr, gens: list[sympy.Symbol]) -> sympy.Expr:
    poly = sympy.Poly(expr, *gens)
    lc = poly.coeffs(order="lex")[0]
    return sympy.expand(expr / lc)


def eliminate(subst: SubstitutionMap, budget_seconds: float | None = None) -> IdealPresentation:
    """Kernel of A^G[log, Li_1..Li_n] -> A[Phi] by a lex Groebner basis.

    Coefficients are written in free generators of A^G: the Lyndon symbols
    ``f:<w>`` where A^G = A, or ``g:<m>:<j>`` complements otherwise.
    """
    alphabet, n = subst.alphabet, subst.depth
    targets = target_symbols(n)
    gens = goncharov_generators(alphabet, n) if len(alphabet) else []
    coef_names = [name for name, _ in gens]
    coef_syms = [sympy.Symbol(c) for c in coef_names]
    phis = [c.symbol() for c in subst.coordinates]
    eqs = [t - subst.images[str(t)] for t in targets]
    lyn_syms = sorted({s for e in subst.images.values() for s in e.free_symbols if str(s).startswith("f:")}, key=str)
    extra = [s for s in lyn_syms if str(s) not in coef_names]
    for name, elem in gens:
        if name.startswith("g:"):
            eqs.append(sympy.Symbol(name) - shuffle_as_polynomial(alphabet, elem))
            extra += sorted((s for s in shuffle_as_polynomial(alphabet, elem).free_symbols
                             if s not in extra and str(s) not in coef_names), key=str)
    extra = list(dict.fromkeys(extra))
    order_vars = phis + extra + list(reversed(targets)) + coef_syms
    start = time.monotonic()
    G = sympy.groebner([sympy.expand(e) for e in eqs], *order_vars, order="lex")
    if budget_seconds is not None and time.monotonic() - start > budget_seconds:
        raise EliminationBudgetExceeded(f"Groebner basis took longer than {budget_seconds}s")
    elim = set(phis) | set(extra)
    kept = [g for g in G.exprs if not (g.free_symbols & elim)]
    keep_gens = list(reversed(targets)) + coef_syms
    kept = [_normalize(g, keep_gens) for g in kept]
    used = sorted({str(s) for g in kept for s in g.free_symbols} & set(coef_names), key=_coef_sort_key)
    coeff_elems = {name: elem for name, elem in gens if name in used}
    kept.sort(key=lambda g: (_weight_of(g, n), _top_target(g, n), format_polynomial(g, used, n)))
    return IdealPresentation(alphabet, n, kept, used, coeff_elems)


def _top_target(expr: sympy.Expr, n: int) -> int:
    names = {str(s) for s in expr.free_symbols}
    return max([m for m in range(1, n + 1) if f"Li{m}" in names] + [0])


def _weight_of(expr: sympy.Expr, n: int) -> int:
    """Weight of a homogeneous polynomial (targets and coefficient symbols carry weights)."""
    weights = {"log": 1}
    for m in range(1, n + 1):
        weights[f"Li{m}"] = m
    syms = sorted(expr.free_symbols, key=str)
    poly = sympy.Poly(expr, *syms)
    out = set()
    for monom, _ in poly.terms():
        w = 0
        for s, e in zip(syms, monom):
            name = str(s)
            if name in weights:
                w += weights[name] * e
            elif name.startswith("f:"):
                w += Word.parse(name[2:]).weight * e
            elif name.startswith("g:"):
                w += int(name.split(":")[1]) * e
        out.add(w)
    if len(out) != 1:
        raise ValueError(f"inhomogeneous polynomial {expr}")
    return out.pop()


def is_homogeneous(expr: sympy.Expr, n: int) -> bool:
    try:
        _weight_of(expr, n)
        return True
    except ValueError:
        return False


def vanishes_under_ev(ideal: IdealPresentation, subst: SubstitutionMap | None = None) -> bool:
    """Substitute the images of the targets and of the coefficient symbols and reduce to zero."""
    subst = subst or ev_sharp(ideal.alphabet, ideal.depth)
    rules = {t: subst.images[str(t)] for t in target_symbols(ideal.depth)}
    for name in ideal.coefficient_symbols:
        rules[sympy.Symbol(name)] = shuffle_as_polynomial(ideal.alphabet, ideal.coefficient_elements[name])
    return all(sympy.expand(g.xreplace(rules)) == 0 for g in ideal.generators)


def geometric_ideal(alphabet: GradedAlphabet, n: int, budget_seconds: float | None = None) -> IdealPresentation:
    return eliminate(ev_sharp(alphabet, n), budget_seconds)
