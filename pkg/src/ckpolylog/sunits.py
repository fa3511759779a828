"""Open subschemes of Spec Z and their integral points on P^1 minus {0, 1, inf}."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

from sympy import primerange


def primes_up_to(q: int) -> list[int]:
    return list(primerange(2, q + 1))


@dataclass(frozen=True)
class OpenIntegerScheme:
    """Spec Z minus a finite set of primes.

    ``tapered_bound`` is set for schemes of the form Z_{>q} (all primes <= q
    inverted); ``primes`` then lists them explicitly.
    """

    primes: tuple[int, ...] = ()
    tapered_bound: int | None = None

    def __post_init__(self):
        ps = tuple(sorted(set(self.primes)))
        object.__setattr__(self, "primes", ps)
        for q in ps:
            if q < 2 or any(q % d == 0 for d in range(2, int(q ** 0.5) + 1)):
                raise ValueError(f"{q} is not prime")

    @classmethod
    def inverting(cls, primes: Iterable[int]) -> "OpenIntegerScheme":
        return cls(tuple(primes))

    @classmethod
    def tapered(cls, q: int) -> "OpenIntegerScheme":
        return cls(tuple(primes_up_to(q)), q)

    @classmethod
    def parse(cls, text: str) -> "OpenIntegerScheme":
        """Accepts ``Z``, ``Spec Z``, ``Z[1/2,1/3]`` and ``Z>5``."""
        s = text.replace(" ", "")
        if s in ("Z", "SpecZ"):
            return cls(())
        m = re.fullmatch(r"Z>(\d+)", s)
        if m:
            return cls.tapered(int(m.group(1)))
        m = re.fullmatch(r"Z\[(.*)\]", s)
        if m:
            primes = []
            for part in m.group(1).split(","):
                mm = re.fullmatch(r"1/(\d+)", part)
                if not mm:
                    raise ValueError(f"cannot parse {part!r} in {text!r}")
                primes.append(int(mm.group(1)))
            return cls(tuple(primes))
        raise ValueError(f"cannot parse scheme {text!r}")

    @property
    def q_s(self) -> int:
        """Largest inverted prime (2 when nothing is inverted)."""
        return max(self.primes, default=2)

    def is_unit(self, x: Fraction) -> bool:
        x = Fraction(x)
        if x == 0:
            return False
        for n in (abs(x.numerator), x.denominator):
            for q in self.primes:
                while n % q == 0:
                    n //= q
            if n != 1:
                return False
        return True

    def __str__(self) -> str:
        if self.tapered_bound is not None:
            return f"Z>{self.tapered_bound}"
        if not self.primes:
            return "Z"
        return "Z[" + ",".join(f"1/{q}" for q in self.primes) + "]"


def height(z: Fraction) -> int:
    z = Fraction(z)
    return max(abs(z.numerator), abs(z.denominator))


@dataclass(frozen=True)
class SUnitPoint:
    """A point z of X(Z); ``tangential`` marks the basepoint -1 at 1 (no rational value)."""

    value: Fraction | None
    primes: tuple[int, ...] = ()
    tangential: bool = False

    @classmethod
    def tangent_minus_one(cls) -> "SUnitPoint":
        return cls(None, (), True)

    @property
    def height(self) -> int:
        if self.tangential:
            raise ValueError("tangential basepoint has no height")
        return height(self.value)

    def v(self) -> tuple[int, ...]:
        return valuation_vector(self.value, self.primes)

    def v_one_minus(self) -> tuple[int, ...]:
        return valuation_vector(1 - self.value, self.primes)

    def __str__(self) -> str:
        return "-1_1" if self.tangential else str(self.value)


def valuation_vector(x, primes: Sequence[int]) -> tuple[int, ...]:
    """(v_q(x))_q over ``primes``; raises if x has other prime factors."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no valuation vector")
    num, den = abs(x.numerator), x.denominator
    out = []
    for q in primes:
        v = 0
        while num % q == 0:
            num //= q
            v += 1
        while den % q == 0:
            den //= q
            v -= 1
        out.append(v)
    if num != 1 or den != 1:
        raise ValueError(f"{x} is not supported on {tuple(primes)}")
    return tuple(out)


def _smooth_numbers(primes: Sequence[int], bound: int) -> list[int]:
    out = [1]
    for q in primes:
        new = []
        for n in out:
            m = n
            while m <= bound:
                new.append(m)
                m *= q
        out = new
    return sorted(out)


def enumerate_points(Z: OpenIntegerScheme, b: int) -> list[SUnitPoint]:
    """All z with z, 1 - z units on Z and height(z) <= b, sorted by (height, numerator)."""
    if b < 1:
        raise ValueError("height bound must be >= 1")
    smooth = _smooth_numbers(Z.primes, b)
    found = set()
    for num, den in product(smooth, smooth):
        for sign in (1, -1):
            z = Fraction(sign * num, den)
            if z in (0, 1) or height(z) > b:
                continue
            if Z.is_unit(1 - z):
                found.add(z)
    pts = sorted(found, key=lambda z: (height(z), z.numerator, z.denominator))
    return [SUnitPoint(z, Z.primes) for z in pts]
