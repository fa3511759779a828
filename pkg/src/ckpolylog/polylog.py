"""Coleman p-adic polylogarithms, p-adic zeta values and residue-disk expansions.

Continuation strategy:

* ``|z| < 1``: the defining series ``sum z^k / k^n``.
* ``|z| > 1``: inversion, ``Li_n(z) + (-1)^n Li_n(1/z) = -log(-z)^n / n!``.
* ``z`` a unit with ``z != 1 mod p``: let ``w`` be the Teichmuller lift of ``z``.
  Since ``w^p = w`` the Frobenius relation gives
  ``Li_n(w) = Li_n^(p)(w) / (1 - p^-n)`` where ``Li_n^(p)(z) = sum_{p !| k} z^k / k^n``
  is a rational function of ``z`` summed in closed form below.  The value at
  ``z = w + t`` (``|t| <= 1/p``) comes from the disk expansion around ``w``
  obtained by integrating ``dLi_n = Li_{n-1} dz/z`` and ``dLi_1 = dz/(1-z)``.

All logarithms use the Iwasawa branch (``log p = 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .padic import PadicNumber, PrecisionError, Rational, padic_log, teichmuller, vp


class DiskOfOneError(ValueError):
    """The requested point lies in the residue disk of 1."""


class Indeterminate(ArithmeticError):
    """Root counting could not be decided at the available precision."""


# ---------------------------------------------------------------------------
# exact helpers


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli numbers with B_1 = -1/2."""
    if n < 0:
        raise ValueError("n must be >= 0")
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(math.comb(m + 1, k) * b[k] for k in range(m)) / (m + 1))
    return b[n]


def binom_neg(k: int, j: int) -> int:
    """binomial(-k, j) for k >= 0."""
    return (-1) ** j * math.comb(k + j - 1, j) if k > 0 else int(j == 0)


def binom_general(s: int, j: int) -> Fraction:
    """binomial(s, j) for an arbitrary integer s."""
    out = Fraction(1)
    for i in range(j):
        out = out * (s - i) / (i + 1)
    return out


@lru_cache(maxsize=None)
def eulerian_poly(j: int) -> tuple[int, ...]:
    """Coefficients in u = 1/(1-w) of S_j(w) = sum_{l>=0} l^j w^l.

    S_0 = u and S_j = (u^2 - u) dS_{j-1}/du.
    """
    if j == 0:
        return (0, 1)
    prev = eulerian_poly(j - 1)
    deriv = [i * c for i, c in enumerate(prev)][1:]
    out = [0] * (len(deriv) + 2)
    for i, c in enumerate(deriv):
        out[i + 2] += c
        out[i + 1] -= c
    return tuple(out)


def _ilog(k: int, p: int) -> int:
    n = 0
    while k >= p:
        k //= p
        n += 1
    return n


def series_cutoff(p: int, slope: Fraction | int, D: int, c: Fraction | int, N: int) -> int:
    """Smallest K with slope*k - D*floor(log_p k) + c >= N for every k > K (slope > 0)."""
    if slope <= 0:
        raise ValueError("slope must be positive")
    # beyond k0 the real-valued bound slope*k - D*log_p(k) is increasing
    k0 = max(1, math.ceil(D / (float(slope) * math.log(p))) + 1)
    K = 0
    k = 1
    while True:
        bound = slope * k - D * math.log(k, p) + c
        if bound < N or slope * k - D * _ilog(k, p) + c < N:
            K = k
        elif k >= k0:
            return K
        k += 1


def _as_padic(z, p: int, N: int) -> PadicNumber:
    if isinstance(z, PadicNumber):
        return z
    return PadicNumber.from_rational(Fraction(z), p, N)


# ---------------------------------------------------------------------------
# Li_n^(p) and values at roots of unity


def li_star(n: int, z: PadicNumber, N: int) -> PadicNumber:
    """Li_n^(p)(z) = sum over k prime to p of z^k / k^n, for |1 - z^p| = 1, |z| <= 1.

    Writing k = a + p*l and expanding (1 + p*l/a)^-n binomially,
    Li_n^(p)(z) = sum_a z^a a^-n sum_j binom(-n, j) (p/a)^j S_j(z^p).
    Every term with index j has valuation >= j.
    """
    p = z.p
    if z.valuation() < 0:
        raise ValueError("li_star needs |z| <= 1")
    zp = z ** p
    one_minus = 1 - zp
    if one_minus.valuation() != 0:
        raise DiskOfOneError("disk-of-1 not supported")
    u = 1 / one_minus
    W = N + 2
    z = z.reduce(W)
    u = u.reduce(W)
    upow = [PadicNumber.one(p, W)]
    for _ in range(W + 2):
        upow.append(upow[-1] * u)
    S = []
    for j in range(W):
        poly = eulerian_poly(j)
        acc = PadicNumber.zero(p, W)
        for i, c in enumerate(poly):
            if c:
                acc = acc + upow[i] * c
        S.append(acc)
    total = PadicNumber.zero(p, W)
    za = PadicNumber.one(p, W)
    for a in range(1, p):
        za = za * z
        inner = PadicNumber.zero(p, W)
        for j in range(W):
            coef = Fraction(binom_neg(n, j) * p ** j, a ** j)
            inner = inner + S[j] * coef
        total = total + za * inner / Fraction(a) ** n
    return total


def polylog_at_root_of_unity(n: int, w: PadicNumber, N: int) -> PadicNumber:
    """Li_n at a root of unity w != 1 (w^p = w), via Li_n(w)(1 - p^-n) = Li_n^(p)(w)."""
    p = w.p
    val = li_star(n, w, N) * Fraction(p ** n, p ** n - 1)
    return val


# ---------------------------------------------------------------------------
# disk expansions


@dataclass
class PadicSeries:
    """Power series sum a_k t^k around ``center`` (z = center + t, |t| <= 1/p).

    For every k >= 1 the coefficients satisfy
    v(a_k) >= tail_slope*k - tail_log*floor(log_p k) + tail_intercept;
    the bound is what makes truncation and root counting rigorous.
    """

    p: int
    center: PadicNumber
    coeffs: list[PadicNumber]
    tail_slope: Fraction = Fraction(0)
    tail_log: int = 0
    tail_intercept: Fraction = Fraction(0)
    label: str = ""

    @property
    def K(self) -> int:
        return len(self.coeffs) - 1

    def tail_bound(self, k: int) -> Fraction:
        return self.tail_slope * k - self.tail_log * _ilog(k, self.p) + self.tail_intercept

    def evaluate(self, t: PadicNumber | Rational, N: int) -> PadicNumber:
        """Sum at t with v(t) >= 1, to absolute precision N (raises if the truncation is too short)."""
        t = _as_padic(t, self.p, N + 2)
        vt = t.valuation()
        if vt < 1:
            raise ValueError("evaluation point outside the disk |t| <= 1/p")
        K = series_cutoff(self.p, self.tail_slope + vt, self.tail_log, self.tail_intercept, N)
        if K > self.K:
            raise PrecisionError(f"series truncated at {self.K}, need {K} terms")
        total = PadicNumber.zero(self.p, N + 1)
        tk = PadicNumber.one(self.p, N + 50)
        for k in range(K + 1):
            total = total + self.coeffs[k] * tk
            tk = tk * t
        # the neglected tail is below p^N
        return total.reduce(N)

    def scaled(self, r: int) -> list[PadicNumber]:
        """Coefficients in u where t = p^r u."""
        return [a * Fraction(self.p) ** (r * k) for k, a in enumerate(self.coeffs)]

    def __add__(self, other: "PadicSeries") -> "PadicSeries":
        return _combine(self, other, 1, 1)

    def __sub__(self, other: "PadicSeries") -> "PadicSeries":
        return _combine(self, other, 1, -1)

    def scale(self, c) -> "PadicSeries":
        """Multiply by a rational or p-adic constant (the tail bound shifts by its valuation)."""
        if isinstance(c, PadicNumber):
            shift = c.valuation()
        else:
            c = Fraction(c)
            if c == 0:
                return PadicSeries(self.p, self.center, [a * 0 for a in self.coeffs], self.tail_slope,
                                   0, Fraction(10 ** 6), self.label)
            shift = vp(c, self.p)
        return PadicSeries(self.p, self.center, [a * c for a in self.coeffs], self.tail_slope,
                           self.tail_log, self.tail_intercept + shift, self.label)

    @classmethod
    def from_polynomial(cls, coeffs: Sequence[Rational], p: int, prec: int, center: Rational = 0) -> "PadicSeries":
        """A polynomial in t; the tail is exactly zero."""
        cs = [PadicNumber.from_rational(c, p, prec) for c in coeffs]
        return cls(p, PadicNumber.from_rational(center, p, prec), cs, Fraction(0), 0, Fraction(10 ** 6))

    def __mul__(self, other: "PadicSeries") -> "PadicSeries":
        K = min(self.K, other.K)
        out = []
        for k in range(K + 1):
            acc = PadicNumber.zero(self.p, 10 ** 6)
            for i in range(k + 1):
                acc = acc + self.coeffs[i] * other.coeffs[k - i]
            out.append(acc)
        # v(a_i b_j) >= bound_a(i) + bound_b(j); constants are folded into the intercepts
        c0a = min(self.tail_intercept, Fraction(_val(self.coeffs[0])))
        c0b = min(other.tail_intercept, Fraction(_val(other.coeffs[0])))
        return PadicSeries(self.p, self.center, out, min(self.tail_slope, other.tail_slope),
                           self.tail_log + other.tail_log, c0a + c0b)

    def to_dict(self) -> dict:
        return {
            "center": self.center.to_dict(),
            "coefficients": [a.to_dict() for a in self.coeffs],
            "tail": {"slope": str(self.tail_slope), "log": self.tail_log, "intercept": str(self.tail_intercept)},
            "label": self.label,
        }


def _val(a: PadicNumber) -> int:
    return a.valuation()


def _combine(f: PadicSeries, g: PadicSeries, a: int, b: int) -> PadicSeries:
    K = min(f.K, g.K)
    out = [f.coeffs[k] * a + g.coeffs[k] * b for k in range(K + 1)]
    return PadicSeries(f.p, f.center, out, min(f.tail_slope, g.tail_slope), max(f.tail_log, g.tail_log),
                       min(f.tail_intercept, g.tail_intercept))


# Mobius maps permuting {0, 1, inf}: (phi(z), (alpha0, alpha1), (beta0, beta1)) with
# d log phi = alpha0 dz/z + alpha1 dz/(1-z) and d Li_1(phi) = beta0 dz/z + beta1 dz/(1-z).
MOEBIUS = {
    "z": (lambda z: z, (1, 0), (0, 1)),
    "1-z": (lambda z: 1 - z, (0, -1), (-1, 0)),
    "1/z": (lambda z: 1 / z, (-1, 0), (1, 1)),
    "1/(1-z)": (lambda z: 1 / (1 - z), (0, 1), (-1, -1)),
    "1-1/z": (lambda z: 1 - 1 / z, (-1, -1), (1, 0)),
    "z/(z-1)": (lambda z: z / (z - 1), (1, 1), (0, -1)),
}


def _omega_series(y: PadicNumber, K: int, W: int) -> tuple[list[PadicNumber], list[PadicNumber]]:
    """Coefficients of 1/(y+t) and 1/(1-y-t) up to t^K."""
    iy = 1 / y.reduce(W)
    iy1 = 1 / (1 - y).reduce(W)
    w0, w1 = [], []
    a, b = iy, iy1
    for k in range(K + 1):
        w0.append(a if k % 2 == 0 else -a)
        w1.append(b)
        a = a * iy
        b = b * iy1
    return w0, w1


def _integrate(integrand: list[PadicNumber], const: PadicNumber) -> list[PadicNumber]:
    return [const] + [c / (k + 1) for k, c in enumerate(integrand[:-1])]


def _mul_trunc(f: list[PadicNumber], g: list[PadicNumber], K: int) -> list[PadicNumber]:
    p = f[0].p
    out = []
    for k in range(K + 1):
        acc = PadicNumber.zero(p, 10 ** 6)
        for i in range(k + 1):
            acc = acc + f[i] * g[k - i]
        out.append(acc)
    return out


def polylog_series_family(y, n: int, K: int, N: int, p: int | None = None,
                          moebius: str = "z", constants: Sequence[PadicNumber] | None = None,
                          log_constant: PadicNumber | None = None) -> tuple[PadicSeries, list[PadicSeries]]:
    """Expansions of log(phi(z)) and Li_1..Li_n(phi(z)) on the disk z = y + t.

    ``y`` must be a unit with y != 0, 1 mod p.  Constants are the values at y
    (computed with :func:`padic_polylog` unless supplied).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    phi, (al0, al1), (be0, be1) = MOEBIUS[moebius]
    W = N + (n + 1) * (_ilog(max(K, 1), p or y.p) + 1) + 4
    y = _as_padic(y, p, W + 4)
    p = y.p
    if y.valuation() != 0 or (1 - y).valuation() != 0:
        raise ValueError("bad center: need a unit with center != 1 mod p")
    py = phi(y)
    if log_constant is None:
        log_constant = padic_log(py.reduce(W)) if not py.is_zero() else None
    if constants is None:
        constants = padic_polylog_all(n, py, W)
    w0, w1 = _omega_series(y, K, W)
    dlog = [w0[k] * al0 + w1[k] * al1 for k in range(K + 1)]
    dli1 = [w0[k] * be0 + w1[k] * be1 for k in range(K + 1)]
    log_s = _integrate(dlog, log_constant)
    cur = _integrate(dli1, constants[0])
    fam = [cur]
    for m in range(2, n + 1):
        cur = _integrate(_mul_trunc(cur, dlog, K), constants[m - 1])
        fam.append(cur)
    c = Fraction(0)
    out = []
    for m, coeffs in enumerate(fam, start=1):
        out.append(PadicSeries(p, y, coeffs, Fraction(0), m, c, label=f"Li{m}({moebius})"))
        c = min(c, Fraction(constants[m - 1].valuation()))
    return PadicSeries(p, y, log_s, Fraction(0), 1, Fraction(0), label=f"log({moebius})"), out


def expand_polylog_series(n: int, y, K: int, N: int, p: int | None = None, moebius: str = "z") -> PadicSeries:
    """Series of Li_n(phi(y + t)) with K+1 coefficients; n = 0 gives log(phi(y + t))."""
    log_s, fam = polylog_series_family(y, max(n, 1), K, N, p=p, moebius=moebius)
    return log_s if n == 0 else fam[n - 1]


# ---------------------------------------------------------------------------
# point values


def _li_small(n: int, z: PadicNumber, N: int) -> PadicNumber:
    """Defining series for |z| < 1."""
    p = z.p
    vz = z.valuation()
    if z.is_zero():
        return PadicNumber.zero(p, N)
    K = series_cutoff(p, vz, n, 0, N)
    W = N + n * (_ilog(max(K, 1), p) + 1) + 2
    z = z.reduce(W + K * vz)
    total = PadicNumber.zero(p, W)
    zk = PadicNumber.one(p, W + K * vz + 5)
    for k in range(1, K + 1):
        zk = zk * z
        total = total + zk / Fraction(k) ** n
    return total


def padic_polylog_all(n: int, z, N: int, p: int | None = None) -> list[PadicNumber]:
    """[Li_1(z), ..., Li_n(z)] to absolute precision N."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not isinstance(z, PadicNumber):
        if Fraction(z) == 0:
            return [PadicNumber.zero(p, N) for _ in range(n)]
        v = vp(Fraction(z), p)
        z = PadicNumber.from_rational(z, p, N + abs(v) + 2 * n + 10)
    p = z.p
    if z.is_zero():
        return [PadicNumber.zero(p, N) for _ in range(n)]
    v = z.valuation()
    if v > 0:
        out = [_li_small(m, z, N + 2) for m in range(1, n + 1)]
    elif v < 0:
        iz = 1 / z
        small = [_li_small(m, iz, N + n + 2) for m in range(1, n + 1)]
        lg = padic_log(-z)
        out = []
        for m in range(1, n + 1):
            term = lg ** m / math.factorial(m)
            out.append(-term - small[m - 1] * (-1) ** m)
    else:
        if (1 - z).valuation() > 0:
            raise DiskOfOneError("disk-of-1 not supported")
        out = _li_unit(n, z, N)
    return [_check(x, N) for x in out]


def _check(x: PadicNumber, N: int) -> PadicNumber:
    if x.prec < N:
        raise PrecisionError(f"insufficient precision: have p^{x.prec}, need p^{N}")
    return x.reduce(N)


def _li_unit(n: int, z: PadicNumber, N: int) -> list[PadicNumber]:
    p = z.p
    w = teichmuller(z, prec=max(z.prec, N + 2 * n + 10))
    t = z - w
    for extra in (2 * n + 6, 4 * n + 12, 8 * n + 24):
        W = N + extra
        w_ = w.reduce(W)
        consts = [polylog_at_root_of_unity(m, w_, W) for m in range(1, n + 1)]
        if t.is_zero() and t.prec >= N:
            out = consts
        else:
            c = min([0] + [x.valuation() for x in consts])
            vt = max(t.valuation(), 1)
            K = series_cutoff(p, vt, n, c, N)
            _, fam = polylog_series_family(w_, n, K, W, constants=consts, log_constant=PadicNumber.zero(p, W))
            out = [s.evaluate(t, N) for s in fam]
        if all(x.prec >= N for x in out):
            return out
    return out


def padic_polylog(n: int, z, N: int, p: int | None = None) -> PadicNumber:
    """Coleman's Li_n(z) (Iwasawa branch) to absolute precision p^-N.

    ``z`` may be a PadicNumber or a rational (then ``p`` is required).
    Raises DiskOfOneError in the residue disk of 1 and PrecisionError if
    the input precision cannot support the requested output precision.
    """
    return padic_polylog_all(n, z, N, p)[n - 1]


# ---------------------------------------------------------------------------
# zeta values


def padic_zeta(n: int, p: int, N: int, method: str = "kubota-leopoldt") -> PadicNumber:
    """zeta_p(n) for odd n >= 3, to absolute precision p^-N.

    ``kubota-leopoldt``: zeta_p(n) = L_p(n, omega^(1-n)) / (1 - p^-n) with
        L_p(n, omega^(1-n)) = 1/(p(n-1)) sum_{a=1}^{p-1} a^(1-n) sum_j binom(1-n, j) B_j (p/a)^j.
    ``polylog``: zeta_p(n) = Li_n(-1) / (2^(1-n) - 1) (distribution relation at z = 1).
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("p-adic zeta values are only defined here for odd n >= 3")
    if p == 2:
        raise ValueError("p must be odd")
    if method == "polylog":
        W = N + 4
        li = padic_polylog(n, -1, W, p)
        return (li / (Fraction(2) ** (1 - n) - 1)).reduce(N)
    if method != "kubota-leopoldt":
        raise ValueError(f"unknown method {method!r}")
    # term j has valuation >= j - 1 (von Staudt); the prefactor costs 1 + v(n-1) and 1/(1-p^-n) gains n
    J = N + 5 + vp(n - 1, p) - n
    total = Fraction(0)
    for a in range(1, p):
        inner = sum((binom_general(1 - n, j) * bernoulli(j) * Fraction(p, a) ** j for j in range(max(J, 2) + 1)),
                    Fraction(0))
        total += Fraction(a) ** (1 - n) * inner
    L = total / (p * (n - 1))
    zeta = L * Fraction(p ** n, p ** n - 1)
    return PadicNumber.from_rational(zeta, p, N)


# ---------------------------------------------------------------------------
# Newton polygon root counting


def newton_root_count(f: PadicSeries, expected: int, r: int = 1) -> bool:
    """Certify that f has at most ``expected`` zeros on |t| <= p^-r.

    Substituting t = p^r u, the number of zeros on |u| <= 1 is the largest
    index where the coefficient valuation attains its minimum.  Returns True
    when that bound is proved, False when more zeros are proved, and raises
    Indeterminate when coefficients known only up to precision decide it.
    """
    p = f.p
    lower, exact = [], []
    for k, a in enumerate(f.coeffs):
        shift = r * k
        if a.is_zero():
            lower.append(Fraction(a.prec + shift))
            exact.append(False)
        else:
            lower.append(Fraction(a.valuation() + shift))
            exact.append(True)
    # best certified coefficient among indices <= expected
    known = [lower[j] for j in range(min(expected, f.K) + 1) if exact[j]]
    slope = f.tail_slope + r
    if slope <= 0:
        raise ValueError("tail bound does not decay on this disk")
    if known:
        m = min(known)
        rest = [lower[k] for k in range(expected + 1, f.K + 1)]
        tail_ok = series_cutoff(p, slope, f.tail_log, f.tail_intercept, int(math.floor(m)) + 1) <= f.K
        if all(x > m for x in rest) and tail_ok:
            return True
    # disproof: an exactly known coefficient past ``expected`` is not beaten by any earlier one
    for k in range(expected + 1, f.K + 1):
        if exact[k] and all(lower[j] >= lower[k] for j in range(min(expected, f.K) + 1)):
            return False
    raise Indeterminate("coefficients below the working precision leave the root count undecided")
