"""Finite-precision p-adic numbers with absolute precision tracking.

A value is stored as ``unit * p**val`` known modulo ``p**prec``.  A value that
is zero to its precision has ``unit == 0`` and ``val == prec``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


class PrecisionError(ArithmeticError):
    """Raised when the requested precision cannot be delivered."""


def vp(x: Rational, p: int) -> int:
    x = Fraction(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _strip(n: int, p: int) -> tuple[int, int]:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


class PadicNumber:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val: int, unit: int, prec: int):
        self.p = p
        if unit == 0 or val >= prec:
            self.val, self.unit, self.prec = prec, 0, prec
            return
        mod = p ** (prec - val)
        unit %= mod
        if unit == 0:
            self.val, self.unit, self.prec = prec, 0, prec
            return
        extra, unit = _strip(unit, p)
        self.val = val + extra
        self.prec = prec
        self.unit = unit % p ** (prec - self.val) if self.val < prec else 0
        if self.val >= prec:
            self.val, self.unit = prec, 0

    # ---------------------------------------------------------------- creation

    @classmethod
    def from_rational(cls, x: Rational, p: int, prec: int) -> "PadicNumber":
        x = Fraction(x)
        if x == 0:
            return cls(p, prec, 0, prec)
        v = vp(x, p)
        if v >= prec:
            return cls(p, prec, 0, prec)
        num = x.numerator // p ** max(v, 0)
        den = x.denominator // p ** max(-v, 0)
        mod = p ** (prec - v)
        return cls(p, v, num * pow(den, -1, mod), prec)

    @classmethod
    def zero(cls, p: int, prec: int) -> "PadicNumber":
        return cls(p, prec, 0, prec)

    @classmethod
    def one(cls, p: int, prec: int) -> "PadicNumber":
        return cls(p, 0, 1, prec)

    # ---------------------------------------------------------------- queries

    def is_zero(self) -> bool:
        """True if the value is zero to its known precision."""
        return self.unit == 0

    def valuation(self) -> int:
        """Valuation; for an indeterminate zero this is the precision (a lower bound)."""
        return self.val

    @property
    def relprec(self) -> int:
        return self.prec - self.val

    def abs(self) -> Fraction:
        return Fraction(0) if self.is_zero() else Fraction(self.p) ** (-self.val)

    def to_fraction(self) -> Fraction:
        """The canonical rational representative unit * p^val (0 <= unit < p^relprec)."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def residue(self) -> int:
        """Reduction mod p of an integral element."""
        if self.val < 0:
            raise ValueError("not integral")
        return (self.unit * self.p ** self.val) % self.p if self.val == 0 else 0

    def lift_to(self, prec: int) -> "PadicNumber":
        """Same representative with a (possibly) lower precision."""
        if prec > self.prec:
            raise PrecisionError("cannot raise precision")
        return PadicNumber(self.p, self.val, self.unit, prec)

    def reduce(self, prec: int) -> "PadicNumber":
        return self.lift_to(min(prec, self.prec))

    def agrees_with(self, other, N: int) -> bool:
        """True if self - other vanishes mod p^N, and N is within known precision."""
        d = self - other
        return d.prec >= N and d.val >= N

    # ---------------------------------------------------------------- coercion

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("prime mismatch")
            return other
        other = Fraction(other)
        v = 0 if other == 0 else vp(other, self.p)
        prec = abs(v) + abs(self.prec) + abs(self.val) + 2
        return PadicNumber.from_rational(other, self.p, max(prec, v + 1))

    # ---------------------------------------------------------------- arithmetic

    def __add__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        p = self.p
        prec = min(self.prec, o.prec)
        m = min(self.val, o.val)
        if m >= prec:
            return PadicNumber.zero(p, prec)
        if self.is_zero():
            return PadicNumber(p, o.val, o.unit, prec)
        if o.is_zero():
            return PadicNumber(p, self.val, self.unit, prec)
        a =self.unit * p ** (self.val - m) + o.unit * p ** (o.val - m)
        return PadicNumber(p, m, a, prec)

    __radd__ = __add__

    def __neg__(self) -> "PadicNumber":
        return PadicNumber(self.p, self.val, -self.unit, self.prec)

    def __sub__(self, other) -> "PadicNumber":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PadicNumber":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        prec = min(self.val + o.prec, o.val + self.prec)
        if self.is_zero() or o.is_zero():
            return PadicNumber.zero(self.p, prec)
        return PadicNumber(self.p, self.val + o.val, self.unit * o.unit, prec)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PadicNumber":
        o = self._coerce(other)
        if o.is_zero():
            raise PrecisionError("division by a p-adic number that is zero to precision")
        val = self.val - o.val
        if self.is_zero():
            return PadicNumber.zero(self.p, self.prec - o.val)
        rel = min(self.relprec, o.relprec)
        mod = self.p ** rel
        return PadicNumber(self.p, val, self.unit * pow(o.unit, -1, mod), val + rel)

    def __rtruediv__(self, other) -> "PadicNumber":
        return self._coerce(other) / self

    def __pow__(self, k: int) -> "PadicNumber":
        if k < 0:
            return PadicNumber.one(self.p, self.prec) / (self ** (-k))
        out = PadicNumber.one(self.p, max(self.prec, 1) + k * max(0, -self.val) + k * abs(self.val) + 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self) -> str:
        if self.is_zero():
            return f"O({self.p}^{self.prec})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.prec})"

    # ---------------------------------------------------------------- serialisation

    def digits(self) -> list[int]:
        out, u = [], self.unit
        for _ in range(self.relprec if not self.is_zero() else 0):
            out.append(u % self.p)
            u //= self.p
        return out

    def to_dict(self) -> dict:
        return {"p": self.p, "valuation": self.val, "digits": self.digits(), "N": self.prec}

    @classmethod
    def from_dict(cls, d: dict) -> "PadicNumber":
        p = d["p"]
        unit = sum(c * p ** i for i, c in enumerate(d["digits"]))
        return cls(p, d["valuation"], unit, d["N"])


def teichmuller(x: PadicNumber | Rational, p: int | None = None, prec: int | None = None) -> PadicNumber:
    """Teichmuller representative of a unit (the root of unity congruent to it mod p)."""
    if not isinstance(x, PadicNumber):
        x = PadicNumber.from_rational(x, p, prec)
    p = x.p
    if x.val != 0 or x.is_zero():
        raise ValueError("Teichmuller lift needs a unit")
    prec = x.prec if prec is None else prec
    mod = p ** prec
    w = x.unit % p
    for _ in range(prec):
        w = pow(w, p, mod)
    return PadicNumber(p, 0, w, prec)


def padic_log(z: PadicNumber | Rational, p: int | None = None, prec: int | None = None) -> PadicNumber:
    """Iwasawa logarithm: log p = 0, log of roots of unity = 0.

    For a unit u with u^(p-1) = 1 + w (v(w) >= 1; p = 2 uses u^2 with v(w) >= 3),
    log u = log(1 + w) / (p - 1) with log(1 + w) = sum (-1)^(k+1) w^k / k.
    """
    if not isinstance(z, PadicNumber):
        if Fraction(z) == 0:
            raise ValueError("log of zero")
        z = PadicNumber.from_rational(z, p, prec)
    if z.is_zero():
        raise ValueError("log of zero")
    p = z.p
    N = z.relprec  # unit part known to this many digits
    unit = PadicNumber(p, 0, z.unit, N)
    e = p - 1 if p != 2 else 2
    w = unit ** e - 1
    if w.valuation() < (1 if p != 2 else 3):
        raise ArithmeticError("internal error: not a principal unit")
    vw = w.valuation()
    total = PadicNumber.zero(p, N + 2)
    wk = PadicNumber.one(p, N + 2)
    k = 1
    # k * v(w) - log_p(k) is nondecreasing in k and bounds v(w^k / k) from below
    while k * vw - _ilog(k, p) < N + 1:
        wk = wk * w
        term = wk / k
        total = total + (term if k % 2 else -term)
        k += 1
    return (total / e).reduce(N)


def _ilog(k: int, p: int) -> int:
    """floor(log_p k) for k >= 1, which bounds v_p(k)."""
    n = 0
    while k >= p:
        k //= p
        n += 1
    return n
