"""Polylogarithmic bases of A^G for the tapered schemes Z_{>q} and the change of basis.

Every motivic element is handled through its coordinates in the free shuffle
algebra on the generators ``t<q>`` (q <= q_M) and ``s<r>``.  The pairing of
Li_m(a) with a word follows from the leaf rules: it vanishes unless the word
is ``t_1 ... t_r x`` with ``x`` the last letter, and then equals

    v_{t_1}(a) ... v_{t_r}(a) * <Li_s(a), x>,

where <Li_1(a), t_q> = -v_q(1 - a) and <Li_s(a), s_s> is the coefficient of
zeta(s) in the expansion of Li_s(a) in the basis (s odd >= 3).  That
coefficient is the only transcendental input; it is fixed by the p-adic period
map and carried with its precision.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Iterable, Sequence

from sympy import nextprime

from .linalg import kernel_basis, padic_solve, padic_valuation, rank
from .padic import PadicNumber, padic_log
from .polylog import padic_polylog, padic_zeta
from .shuffle import ShuffleElement
from .sunits import OpenIntegerScheme, enumerate_points, primes_up_to, valuation_vector
from .words import GradedAlphabet, LetterKind, Word, sigma, tau
from .geometric import goncharov_dimension

CACHE_ENV = "CKPOLYLOG_CACHE"


class BasisSearchExhausted(RuntimeError):
    """The point search ran past its budget without completing the basis."""


class InsufficientPrecision(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# basis elements


@dataclass(frozen=True)
class MotivicBasisElement:
    kind: str  # "log", "zeta" or "li"
    weight: int
    prime: int | None = None
    point: Fraction | None = None

    @classmethod
    def log(cls, q: int) -> "MotivicBasisElement":
        return cls("log", 1, prime=q)

    @classmethod
    def zeta(cls, i: int) -> "MotivicBasisElement":
        if i < 3 or i % 2 == 0:
            raise ValueError("zeta values are odd of weight >= 3")
        return cls("zeta", i)

    @classmethod
    def li(cls, i: int, a) -> "MotivicBasisElement":
        return cls("li", i, point=Fraction(a))

    @property
    def name(self) -> str:
        if self.kind == "log":
            return f"log({self.prime})"
        if self.kind == "zeta":
            return f"zeta({self.weight})"
        return f"Li{self.weight}({self.point})"

    def __str__(self) -> str:
        return self.name

    def to_dict(self) -> dict:
        return {"kind": self.kind, "weight": self.weight, "prime": self.prime,
                "point": None if self.point is None else str(self.point)}

    @classmethod
    def from_dict(cls, d: dict) -> "MotivicBasisElement":
        return cls(d["kind"], d["weight"], d["prime"], None if d["point"] is None else Fraction(d["point"]))


def expand_li1(a, primes: Sequence[int]) -> list[int]:
    """Coordinates of Li_1(a) = -log(1 - a) on the logs of ``primes``."""
    return [-v for v in valuation_vector(1 - Fraction(a), primes)]


# ---------------------------------------------------------------------------
# vectors carrying a precision


@dataclass
class Coords:
    """A shuffle-algebra element whose coefficients are known modulo p^prec (None = exact)."""

    elem: ShuffleElement
    prec: int | None = None
    p: int | None = None

    def __mul__(self, other: "Coords") -> "Coords":
        prod = self.elem * other.elem
        return Coords(prod, _prod_prec(self, other), self.p or other.p)


def _min_val(x: ShuffleElement, p: int) -> int:
    vals = [padic_valuation(c, p) for c in x.terms.values()]
    return min(vals + [0])


def _prod_prec(x: Coords, y: Coords) -> int | None:
    """Shuffle coefficients are integral combinations of a_u b_v, so an error in a
    is scaled by at most max |b_v| (and symmetrically)."""
    if x.prec is None and y.prec is None:
        return None
    p = x.p or y.p
    out = []
    if x.prec is not None:
        out.append(x.prec + _min_val(y.elem, p))
    if y.prec is not None:
        out.append(y.prec + _min_val(x.elem, p))
    return min(out)


def _min_prec(values: Iterable[int | None]) -> int | None:
    vals = [v for v in values if v is not None]
    return min(vals) if vals else None


# ---------------------------------------------------------------------------
# the pairing


def devissage_pairing(m: int, alpha: dict, beta: dict, gamma: dict, w: Word) -> Fraction:
    """<Li_m(c), w> for a graded homomorphism c given by its leaf data.

    ``alpha[t]`` and ``beta[t]`` are the e0- and e1-coordinates of c(t) for
    weight-one letters, ``gamma[s]`` the coordinate of c(s) on ad(e0)^(r-1) e1.
    """
    if w.weight != m or not len(w):
        return Fraction(0)
    *prefix, last = w.letters
    out = Fraction(1)
    for t in prefix:
        if t.kind is not LetterKind.TAU:
            return Fraction(0)
        out *= Fraction(alpha.get(t, 0))
    if last.kind is LetterKind.TAU:
        return out * Fraction(beta.get(last, 0))
    if last.kind is LetterKind.SIGMA:
        return out * Fraction(gamma.get(last, 0))
    return Fraction(0)


# ---------------------------------------------------------------------------
# the basis and its expansion table


def _monomials(gens_by_weight: dict[int, list[int]], m: int, min_parts: int = 1):
    """Multisets of generator indices with total weight m (generators indexed globally)."""
    flat = sorted((w, i) for w, idx in gens_by_weight.items() for i in idx)
    out = []

    def rec(start: int, remaining: int, acc: list[int]):
        if remaining == 0:
            if len(acc) >= min_parts:
                out.append(tuple(acc))
            return
        for k in range(start, len(flat)):
            w, i = flat[k]
            if w <= remaining:
                rec(k, remaining - w, acc + [i])

    rec(0, m, [])
    return out


@dataclass
class ExpansionTable:
    """Zeta coefficients c_1(a, s), expansion vectors and periods, with precisions."""

    c1: dict[tuple[Fraction, int], PadicNumber | int] = field(default_factory=dict)
    expansions: dict[tuple[Fraction, int], tuple[list[Fraction], int | None]] = field(default_factory=dict)
    periods: dict[str, PadicNumber] = field(default_factory=dict)


class PolylogBasis:
    """Generators {log q} and {Li_i(a_ij)}, {zeta(i)} of A^G(Z_{>q_M}) up to depth n."""

    def __init__(self, q_M: int, p: int, n: int, N: int, generators: list[MotivicBasisElement] | None = None):
        if p <= q_M:
            raise ValueError("the auxiliary prime must exceed q_M")
        self.q_M, self.p, self.n, self.N = q_M, p, n, N
        self.primes = primes_up_to(q_M)
        self.alphabet = GradedAlphabet.from_primes(self.primes, n)
        self.scheme = OpenIntegerScheme.tapered(q_M)
        self.generators: list[MotivicBasisElement] = list(generators) if generators else [
            MotivicBasisElement.log(q) for q in self.primes]
        self.table = ExpansionTable()
        self._vec_cache: dict = {}

    # ------------------------------------------------------------- structure

    def targets(self) -> dict[int, int]:
        """d_i = dim of the weight-i part of the Goncharov quotient for Z_{>q_M}."""
        return {i: goncharov_dimension(self.alphabet, i) for i in range(1, self.n + 1)}

    def gens_of_weight(self, m: int) -> list[int]:
        return [i for i, g in enumerate(self.generators) if g.weight == m]

    def _by_weight(self, below: int | None = None) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, g in enumerate(self.generators):
            if below is None or g.weight < below:
                out.setdefault(g.weight, []).append(i)
        return out

    def monomials(self, m: int) -> list[tuple[int, ...]]:
        """The monomial basis of weight m: generators first, then products."""
        singles = [(i,) for i in self.gens_of_weight(m)]
        prods = _monomials(self._by_weight(below=m), m, min_parts=2)
        return singles + prods

    def monomial_name(self, mono: tuple[int, ...]) -> str:
        return "*".join(self.generators[i].name for i in mono)

    def words(self, m: int) -> list[Word]:
        return self.alphabet.words_of_weight(m)

    # ------------------------------------------------------------- coordinates

    def c1(self, a: Fraction, s: int) -> PadicNumber | int:
        """Coefficient of zeta(s) in the expansion of Li_s(a)."""
        a = Fraction(a)
        key = (a, s)
        if key not in self.table.c1:
            if MotivicBasisElement.li(s, a) in self.generators:
                self.table.c1[key] = 0
            else:
                self.expand_polylog(a, s)
        return self.table.c1[key]

    def li_coords(self, a, m: int, top: bool = True) -> Coords:
        """Coordinates of Li_m(a); ``top=False`` drops the zeta(m) component."""
        a = Fraction(a)
        key = ("li", a, m, top)
        if key in self._vec_cache:
            return self._vec_cache[key]
        va = dict(zip(self.primes, valuation_vector(a, self.primes)))
        b = dict(zip(self.primes, expand_li1(a, self.primes)))
        taus = [q for q in self.primes if va[q]]
        terms: dict[Word, Fraction] = {}
        precs = []
        for s in range(1, m + 1):
            r = m - s
            if s == 1:
                leaves = [(tau(q), Fraction(b[q])) for q in self.primes if b[q]]
            elif s % 2 == 1 and (s < m or top):
                c = self.c1(a, s)
                if isinstance(c, PadicNumber):
                    precs.append(c.prec)
                    c = c.to_fraction()
                leaves = [(sigma(s), Fraction(c))] if c else []
            else:
                leaves = []
            for leaf, val in leaves:
                for prefix in product(taus, repeat=r):
                    coeff = val
                    for q in prefix:
                        coeff *= va[q]
                    w = Word([tau(q) for q in prefix] + [leaf])
                    terms[w] = terms.get(w, Fraction(0)) + coeff
        out = Coords(ShuffleElement(terms), _min_prec(precs), self.p)
        self._vec_cache[key] = out
        return out

    def generator_coords(self, i: int) -> Coords:
        g = self.generators[i]
        if g.kind == "log":
            return Coords(ShuffleElement.word(Word([tau(g.prime)])))
        if g.kind == "zeta":
            return Coords(ShuffleElement.word(Word([sigma(g.weight)])))
        return self.li_coords(g.point, g.weight, top=False)

    def monomial_coords(self, mono: tuple[int, ...]) -> Coords:
        key = ("mono", mono)
        if key not in self._vec_cache:
            out = Coords(ShuffleElement.one())
            for i in mono:
                out = out * self.generator_coords(i)
            self._vec_cache[key] = out
        return self._vec_cache[key]

    def pair_with_word(self, mono: tuple[int, ...], w: Word) -> Fraction:
        if sum(self.generators[i].weight for i in mono) != w.weight:
            raise ValueError("weight mismatch")
        return self.monomial_coords(mono).elem.coefficient(w)

    # ------------------------------------------------------------- periods

    def generator_period(self, i: int) -> PadicNumber:
        g = self.generators[i]
        if g.name not in self.table.periods:
            p, N = self.p, self.N
            if g.kind == "log":
                val = padic_log(g.prime, p, N)
            elif g.kind == "zeta":
                val = padic_zeta(g.weight, p, N)
            else:
                val = padic_polylog(g.weight, g.point, N, p)
            self.table.periods[g.name] = val
        return self.table.periods[g.name]

    def monomial_period(self, mono: tuple[int, ...]) -> PadicNumber:
        out = PadicNumber.one(self.p, self.N + 10)
        for i in mono:
            out = out * self.generator_period(i)
        return out

    # ------------------------------------------------------------- expansion

    def _solve_in(self, monos: list[tuple[int, ...]], target: Coords, m: int, skip: Word | None = None):
        words = [w for w in self.words(m) if w != skip]
        rows, precs = [], [target.prec]
        for mono in monos:
            c = self.monomial_coords(mono)
            rows.append([c.elem.coefficient(w) for w in words])
            precs.append(c.prec)
        vec = [target.elem.coefficient(w) for w in words]
        prec = _min_prec(precs)
        return padic_solve(rows, vec, self.p, prec)

    def expand_polylog(self, a, m: int) -> tuple[list[Fraction], int | None]:
        """Coefficients of Li_m(a) on the monomial basis of weight m (records c_1 for odd m)."""
        a = Fraction(a)
        key = (a, m)
        if key in self.table.expansions:
            return self.table.expansions[key]
        monos = self.monomials(m)
        if MotivicBasisElement.li(m, a) in self.generators:
            idx = monos.index((self.generators.index(MotivicBasisElement.li(m, a)),))
            coeffs = [Fraction(int(k == idx)) for k in range(len(monos))]
            self.table.expansions[key] = (coeffs, None)
            self.table.c1[key] = 0
            return coeffs, None
        odd = m % 2 == 1 and m >= 3
        zeta_idx = None
        if odd:
            zeta_idx = monos.index((self.generators.index(MotivicBasisElement.zeta(m)),))
        rest = [mono for k, mono in enumerate(monos) if k != zeta_idx]
        target = self.li_coords(a, m, top=False)
        y, prec = self._solve_in(rest, target, m, skip=Word([sigma(m)]) if odd else None)
        coeffs = list(y)
        if odd:
            approx = padic_polylog(m, a, self.N, self.p)
            for c, mono in zip(y, rest):
                if c:
                    approx = approx - self.monomial_period(mono) * c
            if prec is not None:
                approx = approx.reduce(prec + min(0, min((padic_valuation(self.monomial_period(mono).to_fraction(), self.p)
                                                          for mono in rest if not self.monomial_period(mono).is_zero()),
                                                         default=0)))
            zeta = self.generator_period(self.generators.index(MotivicBasisElement.zeta(m)))
            if zeta.is_zero():
                raise InsufficientPrecision(f"zeta_{self.p}({m}) vanishes to precision {self.N}")
            c1 = approx / zeta
            self.table.c1[key] = c1
            coeffs.insert(zeta_idx, c1.to_fraction())
            prec = c1.prec if prec is None else min(prec, c1.prec)
        self.table.expansions[key] = (coeffs, prec)
        return coeffs, prec

    # ------------------------------------------------------------- matrices

    def shuffle_expansion_matrix(self, m: int | None = None):
        """Rows: monomials (all weights <= n, or weight m); columns: words; entries: pairings."""
        weights = [m] if m is not None else list(range(1, self.n + 1))
        labels, cols, rows, precs = [], [], [], []
        for k in weights:
            cols += self.words(k)
        for k in weights:
            for mono in self.monomials(k):
                c = self.monomial_coords(mono)
                labels.append(mono)
                rows.append([c.elem.coefficient(w) if w.weight == k else Fraction(0) for w in cols])
                precs.append(c.prec)
        return labels, cols, rows, _min_prec(precs)

    def express(self, elem: ShuffleElement) -> tuple[list[tuple[int, ...]], list[Fraction], int | None]:
        """Write a homogeneous element of A^G(Z_{>q_M}) in the monomial basis."""
        ws = elem.weights()
        if len(ws) != 1:
            raise ValueError("element must be homogeneous of positive weight")
        m = ws.pop()
        monos = self.monomials(m)
        y, prec = self._solve_in(monos, Coords(elem), m)
        return monos, y, prec

    def period(self, elem: ShuffleElement) -> PadicNumber:
        """per_p of a homogeneous element, through its monomial expansion."""
        monos, y, prec = self.express(elem)
        total = PadicNumber.zero(self.p, self.N)
        for mono, c in zip(monos, y):
            if c:
                total = total + self.monomial_period(mono) * c
        if prec is not None:
            total = total.reduce(max(prec, 0))
        return total

    # ------------------------------------------------------------- serialisation

    def to_dict(self) -> dict:
        return {
            "q_M": self.q_M, "p": self.p, "n": self.n, "N": self.N,
            "generators": [g.to_dict() for g in self.generators],
            "c1": [[str(a), s, (c.to_dict() if isinstance(c, PadicNumber) else 0)]
                   for (a, s), c in sorted(self.table.c1.items())],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PolylogBasis":
        out = cls(d["q_M"], d["p"], d["n"], d["N"], [MotivicBasisElement.from_dict(g) for g in d["generators"]])
        for a, s, c in d["c1"]:
            out.table.c1[(Fraction(a), s)] = PadicNumber.from_dict(c) if c else 0
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# basis search


def _independent(rows: list[list[Fraction]], prec: int | None, p: int) -> bool:
    from .linalg import EpsilonContext, eps_linearly_independent

    if not rows:
        return True
    if len(rows) > len(rows[0]):
        return False
    if prec is None:
        return rank(rows) == len(rows)
    return eps_linearly_independent(rows, EpsilonContext(p, max(prec, 1)))


def build_basis(q_s: int, n: int, N: int = 20, p: int | None = None, max_height: int = 256,
                max_qM: int | None = None) -> PolylogBasis:
    """Search for an algebra basis of A^G_{<=n}(Z_{>q_M}) starting from q_M = q_s.

    For each weight i the candidates Li_i(a), a in X(Z_{>q_M}) of height <= b
    (b = 2, 4, 8, ...), are accepted while their coordinates (zeta(i)
    component dropped) stay independent of the decomposables and of earlier
    choices.  If the search exhausts ``max_height`` the scheme is enlarged.
    """
    if n < 1:
        raise ValueError("depth must be >= 1")
    q_M = q_s
    while True:
        if max_qM is not None and q_M > max_qM:
            raise BasisSearchExhausted(f"no basis found with q_M <= {max_qM}")
        prime = p if p is not None else nextprime(q_M)
        if prime <= q_M:
            raise ValueError(f"auxiliary prime {prime} must exceed q_M = {q_M}")
        basis = PolylogBasis(q_M, prime, n, N)
        for r in range(3, n + 1, 2):
            if padic_zeta(r, prime, N).is_zero():
                raise InsufficientPrecision(f"zeta_{prime}({r}) vanishes to precision {N}")
        if _search(basis, max_height):
            return basis
        q_M = nextprime(q_M)


def _search(basis: PolylogBasis, max_height: int) -> bool:
    targets = basis.targets()
    for i in range(2, basis.n + 1):
        need = targets[i]
        if i % 2 == 1:
            basis.generators.append(MotivicBasisElement.zeta(i))
            need -= 1
        skip = Word([sigma(i)]) if i % 2 == 1 else None
        words = [w for w in basis.words(i) if w != skip]
        chosen = 0
        b = 2
        tried: set[Fraction] = set()
        while chosen < need:
            if b > max_height:
                return False
            for pt in enumerate_points(basis.scheme, b):
                if chosen == need:
                    break
                a = pt.value
                if a in tried:
                    continue
                tried.add(a)
                monos = [m for m in basis.monomials(i) if not (len(m) == 1 and basis.generators[m[0]].kind == "zeta")]
                rows, precs = [], []
                for mono in monos:
                    c = basis.monomial_coords(mono)
                    rows.append([c.elem.coefficient(w) for w in words])
                    precs.append(c.prec)
                cand = basis.li_coords(a, i, top=False)
                rows.append([cand.elem.coefficient(w) for w in words])
                precs.append(cand.prec)
                if _independent(rows, _min_prec(precs), basis.p):
                    basis.generators.append(MotivicBasisElement.li(i, a))
                    basis._vec_cache.clear()
                    chosen += 1
            b *= 2
    return True


# ---------------------------------------------------------------------------
# descent to a general open scheme


def forbidden_word(w: Word, allowed_primes: Sequence[int]) -> bool:
    return any(a.kind is LetterKind.TAU and a.label not in allowed_primes for a in w)


def descend_basis(basis: PolylogBasis, Z: OpenIntegerScheme, m: int) -> list[list[Fraction]]:
    """Basis of A^G_m(Z) inside A^G_m(Z_{>q_M}): combinations of monomials whose
    pairings with every word involving a non-inverted prime vanish."""
    if any(q > basis.q_M for q in Z.primes):
        raise ValueError("Z must contain the tapered scheme")
    labels, cols, rows, prec = basis.shuffle_expansion_matrix(m)
    bad = [j for j, w in enumerate(cols) if forbidden_word(w, Z.primes)]
    if not bad:
        return [[Fraction(int(i == k)) for i in range(len(labels))] for k in range(len(labels))]
    # x M_bad = 0  <=>  M_bad^T x = 0
    system = [[rows[i][j] for i in range(len(labels))] for j in bad]
    return kernel_basis(system)


# ---------------------------------------------------------------------------
# cache


def cache_dir() -> Path:
    return Path(os.environ.get(CACHE_ENV, Path.home() / ".cache" / "ckpolylog"))


def cached_basis(q_s: int, n: int, N: int, p: int | None = None, max_height: int = 256) -> PolylogBasis:
    """build_basis with a JSON cache keyed by (q_s, n, N, p)."""
    path = cache_dir() / f"basis_q{q_s}_n{n}_N{N}_p{p or 'auto'}.json"
    if path.exists():
        return PolylogBasis.from_dict(json.loads(path.read_text()))
    basis = build_basis(q_s, n, N, p, max_height)
    for g in basis.generators:
        if g.kind == "li" and g.weight > 1:
            basis.li_coords(g.point, g.weight, top=False)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(basis.dumps())
    except OSError:
        pass
    return basis
