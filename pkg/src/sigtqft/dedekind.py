"""Dedekind sums and the 2-smoothed sign sum ``S(q/p)``, exactly.

``s(q, p)`` is evaluated through the sawtooth form
``sum_n ((n/p)) ((n q/p))`` in integer arithmetic, with the cotangent
form kept as a floating cross-check and a Euclid-style reciprocity
recursion as a fast third route.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import mpmath

from .errors import InvalidInput


class HalfInteger(Fraction):
    """A Fraction whose denominator divides 2."""

    def __new__(cls, value=0, denominator=None):
        self = super().__new__(cls, value, denominator)
        if self.denominator not in (1, 2):
            raise InvalidInput(f"{Fraction(self)} is not a half-integer")
        return self

    @classmethod
    def from_twice(cls, twice: int) -> "HalfInteger":
        return cls(twice, 2)

    @property
    def twice(self) -> int:
        return 2 * self.numerator // self.denominator

    def __repr__(self) -> str:
        return f"HalfInteger({self.twice}/2)"


def _coprime(q: int, p: int) -> None:
    if p <= 0:
        raise InvalidInput(f"p must be positive, got {p}")
    if gcd(q, p) != 1:
        raise InvalidInput(f"q={q} and p={p} are not coprime")


def dedekind_s(q: int, p: int) -> Fraction:
    """Dedekind sum ``s(q, p)``, exact.

    With ``r_n = n q mod p`` (never 0 for ``0 < n < p``), each sawtooth
    product is ``(2n - p)(2 r_n - p) / (4 p^2)``.
    """
    _coprime(q, p)
    acc = 0
    for n in range(1, p):
        acc += (2 * n - p) * (2 * (n * q % p) - p)
    return Fraction(acc, 4 * p * p)


def dedekind_s_reciprocity(q: int, p: int) -> Fraction:
    """``s(q, p)`` in ``O(log p)`` steps using periodicity, oddness and
    ``s(a,b) + s(b,a) = (a/b + b/a + 1/(ab))/12 - 1/4``."""
    _coprime(q, p)
    sign = 1
    acc = Fraction(0)
    a, b = q % p, p
    while b > 1 and a:
        # s(a, b) = bracket(a, b) - s(b, a) and s(b, a) = s(b mod a, a)
        acc += sign * (Fraction(a * a + b * b + 1, 12 * a * b) - Fraction(1, 4))
        sign = -sign
        a, b = b % a, a
    return acc


def dedekind_s_cot(q: int, p: int, bits: int = 128):
    """Cotangent form ``(1/4p) sum cot(pi n/p) cot(pi n q/p)`` at ``bits``."""
    _coprime(q, p)
    with mpmath.workprec(bits):
        total = mpmath.mpf(0)
        for n in range(1, p):
            total += mpmath.cot(mpmath.pi * n / p) * mpmath.cot(mpmath.pi * mpmath.mpf(n * q % p) / p)
        return total / (4 * p)


def smoothed_S(q: int, p: int) -> HalfInteger:
    """``S(q/p) = (1/2) sum_{n=1}^{p-1} (-1)^floor(nq/p)`` for odd ``q``."""
    _coprime(q, p)
    if q % 2 == 0:
        raise InvalidInput("S(q/p) needs q odd")
    twice = 0
    for n in range(1, p):
        twice += -1 if (n * q // p) & 1 else 1
    return HalfInteger.from_twice(twice)


def smoothed_S_odd_terms(q: int, p: int) -> int:
    """Sum of ``eps_n`` over odd ``n < p``; equals ``S(q/p)`` for odd ``p``."""
    _coprime(q, p)
    return sum(-1 if (n * q // p) & 1 else 1 for n in range(1, p, 2))


def check_smoothing(q: int, p: int, *, s=dedekind_s) -> Fraction:
    """``S(q/p) - 4 s(q, 2p) + 2 s(q, p)``; identically zero.

    ``s`` replaces the Dedekind sum evaluator (a harness self-test hook).
    """
    return Fraction(smoothed_S(q, p)) - 4 * s(q, 2 * p) + 2 * s(q, p)


def check_reciprocity(q: int, p: int, *, s=dedekind_s) -> Fraction:
    """``s(q,p) + s(p,q) - [(q/p + p/q + 1/(pq))/12 - 1/4]``; identically zero."""
    if p <= 0 or q <= 0:
        raise InvalidInput("reciprocity needs p, q > 0")
    _coprime(q, p)
    rhs = (Fraction(q, p) + Fraction(p, q) + Fraction(1, p * q)) / 12 - Fraction(1, 4)
    return s(q, p) + s(p, q) - rhs


def check_S_transform(q: int, p: int) -> Fraction:
    """``S(q/(q+p)) - S(q/p) - 1/2``; identically zero for ``p, q > 0``."""
    if p <= 0 or q <= 0:
        raise InvalidInput("the transformation law needs p, q > 0")
    return Fraction(smoothed_S(q, q + p)) - Fraction(smoothed_S(q, p)) - Fraction(1, 2)
