"""Polylogarithmic Chabauty-Kim loci: assembly, symmetrisation and certified root counts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import sympy

from .geometric import IdealPresentation, geometric_ideal, target_symbols
from .linalg import padic_valuation
from .motivic_basis import PolylogBasis, cached_basis
from .padic import PadicNumber, PrecisionError, padic_log, teichmuller
from .polylog import (MOEBIUS, Indeterminate, PadicSeries, newton_root_count, padic_polylog_all,
                      polylog_series_family, series_cutoff)
from .sunits import OpenIntegerScheme
from .words import GradedAlphabet

# Mobius maps as integer matrices [[a, b], [c, d]] : z -> (a z + b) / (c z + d)
_MATRICES = {
    "z": ((1, 0), (0, 1)),
    "1-z": ((-1, 1), (0, 1)),
    "1/z": ((0, 1), (1, 0)),
    "1/(1-z)": ((0, 1), (-1, 1)),
    "1-1/z": ((1, -1), (1, 0)),
    "z/(z-1)": ((1, 0), (1, -1)),
}


def _normalise_matrix(m) -> tuple:
    flat = [x for row in m for x in row]
    lead = next(x for x in flat if x)
    if lead < 0:
        m = tuple(tuple(-x for x in row) for row in m)
    return tuple(tuple(row) for row in m)


_BY_MATRIX = {_normalise_matrix(v): k for k, v in _MATRICES.items()}


def compose_moebius(outer: str, inner: str) -> str:
    """Name of z -> outer(inner(z))."""
    a, b = _MATRICES[outer], _MATRICES[inner]
    prod = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))
    return _BY_MATRIX[_normalise_matrix(prod)]


# ---------------------------------------------------------------------------
# Coleman function expressions


@dataclass
class ColemanFunctionExpr:
    """sum_c c * log(phi z)^e0 * Li_1(phi z)^e1 * ... * Li_n(phi z)^en.

    ``terms`` maps exponent tuples (e0, ..., en) to Fractions or PadicNumbers.
    """

    p: int
    n: int
    terms: dict[tuple[int, ...], object]
    tag: str = "z"

    def weight(self) -> int:
        ws = {e[0] + sum(m * x for m, x in enumerate(e[1:], start=1)) for e in self.terms}
        if len(ws) != 1:
            raise ValueError("not homogeneous")
        return ws.pop()

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.terms.values())

    def uses_only_weight_one(self) -> bool:
        return all(not any(e[2:]) for e in self.terms)

    # ------------------------------------------------------------- evaluation

    def evaluate(self, z, N: int) -> PadicNumber:
        phi = MOEBIUS[self.tag][0]
        zz = Fraction(z) if not isinstance(z, PadicNumber) else z
        w = phi(zz)
        W = N + 4 * self.n + 4
        lg = padic_log(w, self.p, W) if not isinstance(w, PadicNumber) else padic_log(w)
        lis = padic_polylog_all(self.n, w, W, self.p)
        vals = [lg] + lis
        total = PadicNumber.zero(self.p, W)
        for e, c in self.terms.items():
            term = PadicNumber.one(self.p, W)
            for v, k in zip(vals, e):
                if k:
                    term = term * v ** k
            total = total + term * c
        return total

    def series(self, family: tuple[PadicSeries, list[PadicSeries]]) -> PadicSeries:
        log_s, lis = family
        vals = [log_s] + list(lis)
        total = None
        for e, c in self.terms.items():
            term = None
            for s, k in zip(vals, e):
                for _ in range(k):
                    term = s if term is None else term * s
            term = term.scale(c)
            total = term if total is None else total + term
        return total

    # ------------------------------------------------------------- text

    def __str__(self) -> str:
        names = ["log"] + [f"Li{m}" for m in range(1, self.n + 1)]
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(n + (f"^{k}" if k > 1 else "") for n, k in zip(names, e) if k) or "1"
            coef = str(c) if isinstance(c, Fraction) else (f"({c.to_fraction()} + O({self.p}^{c.prec}))")
            parts.append(f"{coef}*{mono}")
        body = " + ".join(parts) if parts else "0"
        return body if self.tag == "z" else f"[{body}]({self.tag})"

    def to_dict(self) -> dict:
        return {
            "tag": self.tag,
            "terms": [[list(e), str(c) if isinstance(c, Fraction) else c.to_dict()]
                      for e, c in sorted(self.terms.items())],
        }

    @classmethod
    def from_dict(cls, d: dict, p: int, n: int) -> "ColemanFunctionExpr":
        terms = {}
        for e, c in d["terms"]:
            terms[tuple(e)] = Fraction(c) if isinstance(c, str) else PadicNumber.from_dict(c)
        return cls(p, n, terms, d["tag"])

    def key(self):
        return (self.tag, tuple(sorted((e, str(c) if isinstance(c, Fraction) else (c.to_fraction(), c.prec))
                                       for e, c in self.terms.items())))


def _mul_terms(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if not (isinstance(c, (int, Fraction)) and c == 0)}


def _rewrite_weight_one(f: ColemanFunctionExpr) -> ColemanFunctionExpr:
    """Precomposition acts linearly on log and Li_1 (Iwasawa branch, log(-1) = 0)."""
    if f.tag == "z" or not f.uses_only_weight_one():
        return f
    _, (a0, a1), (b0, b1) = MOEBIUS[f.tag]
    size = f.n + 1
    unit = lambda i: tuple(int(j == i) for j in range(size))
    lin_log = {unit(0): Fraction(a0), unit(1): Fraction(a1)}
    lin_li1 = {unit(0): Fraction(b0), unit(1): Fraction(b1)}
    out: dict = {}
    for e, c in f.terms.items():
        acc = {tuple([0] * size): Fraction(1)}
        for _ in range(e[0]):
            acc = _mul_terms(acc, lin_log)
        for _ in range(e[1]):
            acc = _mul_terms(acc, lin_li1)
        for ee, cc in acc.items():
            out[ee] = out.get(ee, 0) + cc * c
    out = {e: c for e, c in out.items() if not (isinstance(c, (int, Fraction)) and c == 0)}
    return ColemanFunctionExpr(f.p, f.n, out, "z")


def _monic(f: ColemanFunctionExpr) -> ColemanFunctionExpr:
    if not f.terms or not f.is_exact():
        return f
    lead = f.terms[max(f.terms)]
    return ColemanFunctionExpr(f.p, f.n, {e: c / lead for e, c in f.terms.items()}, f.tag)


def precompose(f: ColemanFunctionExpr, move: str) -> ColemanFunctionExpr:
    """z -> f(move(z))."""
    g = ColemanFunctionExpr(f.p, f.n, dict(f.terms), compose_moebius(f.tag, move))
    return _rewrite_weight_one(g)


def symmetrize(fns: Sequence[ColemanFunctionExpr]) -> list[ColemanFunctionExpr]:
    """Close under z -> 1 - z and z -> 1/z; syntactic duplicates are dropped."""
    out: list[ColemanFunctionExpr] = []
    seen = set()
    queue = [_monic(_rewrite_weight_one(f)) for f in fns]
    while queue:
        f = queue.pop(0)
        if not f.terms or f.key() in seen:
            continue
        seen.add(f.key())
        out.append(f)
        for move in ("1-z", "1/z"):
            queue.append(_monic(precompose(f, move)))
    return out


# ---------------------------------------------------------------------------
# assembly


@dataclass
class LocusData:
    Z: OpenIntegerScheme
    n: int
    p: int
    N: int
    ideal: IdealPresentation
    basis: PolylogBasis | None
    functions: list[ColemanFunctionExpr]
    coefficient_periods: dict[str, PadicNumber] = field(default_factory=dict)


def scheme_alphabet(Z: OpenIntegerScheme, n: int) -> GradedAlphabet:
    return GradedAlphabet.from_primes(Z.primes, n)


def default_prime(Z: OpenIntegerScheme) -> int:
    return int(sympy.nextprime(Z.q_s))


def assemble_loci(Z: OpenIntegerScheme, n: int, N: int = 20, p: int | None = None,
                  basis: PolylogBasis | None = None, max_height: int = 256) -> LocusData:
    """Generators of the depth-n locus for Z as p-adic polynomials in log, Li_1, ..., Li_n."""
    p = p or default_prime(Z)
    if p in Z.primes:
        raise ValueError(f"p = {p} is inverted on {Z}")
    ideal = geometric_ideal(scheme_alphabet(Z, n), n)
    periods: dict[str, PadicNumber] = {}
    if ideal.coefficient_symbols:
        if basis is None:
            basis = cached_basis(Z.q_s, n, N, p, max_height)
        for name in ideal.coefficient_symbols:
            periods[name] = basis.period(ideal.coefficient_elements[name])
    targets = target_symbols(n)
    coef_syms = [sympy.Symbol(c) for c in ideal.coefficient_symbols]
    fns = []
    for g in ideal.generators:
        poly = sympy.Poly(g, *targets)
        terms: dict = {}
        for e, c in poly.terms():
            c = sympy.expand(c)
            if not c.free_symbols:
                terms[tuple(e)] = Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1]))
                continue
            cp = sympy.Poly(c, *coef_syms)
            val = PadicNumber.zero(p, N + 10)
            for ce, cc in cp.terms():
                term = PadicNumber.one(p, N + 10)
                for s, k in zip(ideal.coefficient_symbols, ce):
                    if k:
                        term = term * periods[s] ** k
                cc = sympy.Rational(cc)
                val = val + term * Fraction(int(cc.p), int(cc.q))
            terms[tuple(e)] = val
        fns.append(ColemanFunctionExpr(p, n, terms))
    return LocusData(Z, n, p, N, ideal, basis, fns, periods)


# ---------------------------------------------------------------------------
# disk reports


@dataclass
class BallReport:
    center: str
    radius: int
    expected: int
    matched: str | None
    verdict: str  # "certified", "indeterminate" or "uncertified"
    witness: int | None = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class LocusReport:
    p: int
    n: int
    N: int
    functions: list[str]
    balls: list[BallReport]

    @property
    def certified(self) -> bool:
        return bool(self.balls) and all(b.verdict == "certified" for b in self.balls)

    def to_dict(self) -> dict:
        return {"p": self.p, "n": self.n, "N": self.N, "certified": self.certified,
                "functions": self.functions, "balls": [b.to_dict() for b in self.balls]}

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _residue(x, p: int, r: int) -> int:
    """x mod p^r for a p-integral rational or PadicNumber."""
    if isinstance(x, PadicNumber):
        return int(x.to_fraction().numerator * pow(x.to_fraction().denominator, -1, p ** r)) % p ** r
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p ** r) % p ** r


class _Expander:
    def __init__(self, fns: Sequence[ColemanFunctionExpr], p: int, n: int, N: int):
        self.fns, self.p, self.n, self.N = list(fns), p, n, N
        self.cache: dict = {}

    def series(self, f: ColemanFunctionExpr, center, r: int) -> PadicSeries:
        key = (str(center), f.tag, r)
        if key not in self.cache:
            # enough terms that the tail is below p^-N on |t| <= p^-r
            K = series_cutoff(self.p, r, self.n * max(1, max(sum(e) for fn in self.fns for e in fn.terms)),
                              -self.n, self.N) + 2
            self.cache[key] = polylog_series_family(center, self.n, K, self.N, p=self.p, moebius=f.tag)
        return f.series(self.cache[key])


def _disk_balls(fns: Sequence[ColemanFunctionExpr], p: int, N: int, a: int, known: list[Fraction],
                max_depth: int) -> list[BallReport]:
    """Ball reports covering the residue disk of ``a`` mod p."""
    n = max((f.n for f in fns), default=1)
    ex = _Expander(fns, p, n, N)
    balls: list[BallReport] = []

    def split(center_res: int, r: int, pts: list[Fraction]):
        for j in range(p):
            sub = center_res + j * p ** r
            visit(sub, r + 1, [x for x in pts if _residue(x, p, r + 1) == sub])

    def visit(center_res: int, r: int, pts: list[Fraction]):
        # the ball { z : z = center_res mod p^r }
        if len(pts) > 1 and r < max_depth:
            return split(center_res, r, pts)
        b = len(pts)
        if pts:
            center, label = pts[0], str(pts[0])
        elif r == 1:
            center, label = teichmuller(center_res, p, N + 10), f"teich({center_res})"
        else:
            center, label = Fraction(center_res), str(center_res)
        verdict, witness = "uncertified", None
        if b <= 1:
            for idx, f in enumerate(fns):
                try:
                    if newton_root_count(ex.series(f, center, r), b, r):
                        verdict, witness = "certified", idx
                        break
                except (Indeterminate, PrecisionError):
                    verdict = "indeterminate"
        if verdict != "certified" and r < max_depth:
            return split(center_res, r, pts)
        balls.append(BallReport(label, r, b, str(pts[0]) if pts else None, verdict, witness))

    visit(a, 1, known)
    return balls


def _disk_job(args):
    return _disk_balls(*args)


def disk_reports(fns: Sequence[ColemanFunctionExpr], p: int, N: int, known_points: Sequence = (),
                 max_depth: int = 3, jobs: int = 1) -> LocusReport:
    """Cover the integral residue disks by balls on which some function has at most b zeros.

    b is the number of ``known_points`` in the ball.  Balls holding several known
    points, or whose verdict is not certified, are split down to radius
    p^-max_depth.  With ``jobs > 1`` the residue disks are processed in a process pool;
    the report lists balls in disk order either way.
    """
    n = max((f.n for f in fns), default=1)
    known = [Fraction(x) for x in known_points]
    tasks = []
    for a in range(2, p):
        pts = [x for x in known if padic_valuation(x, p) == 0 and _residue(x, p, 1) == a]
        tasks.append((list(fns), p, N, a, pts, max_depth))
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_disk_job, tasks))
    else:
        results = [_disk_job(t) for t in tasks]
    balls = [b for group in results for b in group]
    return LocusReport(p, n, N, [str(f) for f in fns], balls)
