"""Direct genus-two signatures: the lattice sign sum and the trigonometric sum.

The trigonometric sum is an integer only when ``p`` and ``q`` are both
odd; for other parities it still defines a real number with the same
``p**2`` growth, available through :func:`sigma2_trig_value`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

import mpmath

from .errors import CertificationError, InvalidInput
from . import polytrace

CERT_THRESHOLD = 0.25
FAST_METHOD_MAX_P = 2000


@dataclass(frozen=True)
class TrigEvalConfig:
    mantissa_bits: int = 128
    max_retries: int = 3

    def bits_for(self, p: int) -> int:
        return max(self.mantissa_bits, 128, math.ceil(6 * math.log2(p)) + 64)


@dataclass(frozen=True)
class CertifiedInteger:
    value: int
    residual: mpmath.mpf
    bits_used: int

    def __int__(self) -> int:
        return self.value


def _check_pair(p: int, q: int) -> None:
    if p < 2:
        raise InvalidInput(f"p must be >= 2, got {p}")
    if not 0 < q < p:
        raise InvalidInput(f"q must satisfy 0 < q < p, got q={q}, p={p}")
    if gcd(q, p) != 1:
        raise InvalidInput(f"q={q} and p={p} are not coprime")


def sigma2_lattice(p: int, q: int) -> int:
    """Sum of ``eps_j eps_k eps_l`` over the lattice triples of ``Delta_p``.

    Only sorted triples ``j <= k <= l`` are visited, weighted by the number
    of distinct permutations; the innermost run over ``l`` is a strided
    slice sum.
    """
    _check_pair(p, q)
    e = [0] + [-1 if (j * q // p) & 1 else 1 for j in range(1, p)]
    total = 0
    for j in range(1, p):
        ej = e[j]
        for k in range(j, p):
            # l ranges over k <= l < j + k, l < 2p - j - k, l < p, l = j+k+1 mod 2
            hi = min(j + k - 1, 2 * p - 1 - j - k, p - 1)
            if hi < k:
                break  # only the 2p bound can bite, and it only tightens with k
            par = (j + k + 1) & 1
            ek = ej * e[k]
            start = k + 1
            if (k & 1) == par:
                total += (1 if j == k else 3) * ek * e[k]
                start = k + 2
            run = e[start:hi + 1:2]
            if run:
                total += (3 if j == k else 6) * ek * sum(run)
    return total


def _sin_pi_frac(num: int, den: int):
    """``sin(pi num / den)`` with the argument reduced exactly mod 2."""
    return mpmath.sinpi(mpmath.mpf(num % (2 * den)) / den)


def f_term(n: int, p: int, q: int, cfg: TrigEvalConfig | None = None):
    """Four-sine numerator of the trigonometric formula at odd ``n``."""
    cfg = cfg or TrigEvalConfig()
    if not (1 <= n <= p - 2 and n % 2 == 1):
        raise InvalidInput(f"n must be odd in 1..{p - 2}, got {n}")
    with mpmath.workprec(cfg.bits_for(p)):
        return _f(n, p, q)


def _f(n: int, p: int, q: int):
    d = 2 * p
    return (
        (3 * p - 3) * _sin_pi_frac((2 * q - 1) * n, d)
        + (p + 1) * _sin_pi_frac((2 * q - 3) * n, d)
        + (p - 1) * _sin_pi_frac((2 * q + 3) * n, d)
        + (3 * p + 3) * _sin_pi_frac((2 * q + 1) * n, d)
    )


def _trig_sum(p: int, q: int, bits: int):
    with mpmath.workprec(bits + 16):
        total = mpmath.mpf(0)
        for n in range(1, p - 1, 2):
            s1 = _sin_pi_frac(n, 2 * p)
            s2 = _sin_pi_frac(q * n, p)
            total += _f(n, p, q) / (s1 ** 3 * s2 ** 2)
        out = mpmath.mpf(1 - p * p) / (6 * p * p) + total / (4 * p * p)
    return +out


def sigma2_trig_value(p: int, q: int, bits: int = 128):
    """The trigonometric expression itself, uncertified (any parity)."""
    _check_pair(p, q)
    with mpmath.workprec(bits):
        return _trig_sum(p, q, bits)


def sigma2_trig(p: int, q: int, cfg: TrigEvalConfig | None = None) -> CertifiedInteger:
    """Trigonometric genus-two signature, rounded and certified.

    Precision doubles until the distance to the nearest integer drops
    below 0.25.  Pairs that are not both odd are refused outright: the sum
    is not an integer there, yet it can land within 0.25 of one (8/3 gives
    31.85).
    """
    cfg = cfg or TrigEvalConfig()
    _check_pair(p, q)
    bits = cfg.bits_for(p)
    if not (p % 2 and q % 2):
        # not an integer for this parity, however close it may land
        with mpmath.workprec(bits):
            val = _trig_sum(p, q, bits)
            residual = abs(val - mpmath.nint(val))
        raise CertificationError(
            f"trigonometric sum for q/p={q}/{p} is not integral (p and q must both be odd)",
            best_residual=residual,
            bits=bits,
        )
    best = None
    for _ in range(cfg.max_retries + 1):
        with mpmath.workprec(bits):
            val = _trig_sum(p, q, bits)
            nearest = int(mpmath.nint(val))
            residual = abs(val - nearest)
        if best is None or residual < best:
            best = residual
        if residual < CERT_THRESHOLD:
            return CertifiedInteger(nearest, residual, bits)
        bits *= 2
    raise CertificationError(
        f"trigonometric sum for q/p={q}/{p} not within {CERT_THRESHOLD} of an integer "
        f"(best residual {mpmath.nstr(best, 6)})",
        best_residual=best,
        bits=bits // 2,
    )


def sigma2_method(p: int, q: int) -> str:
    """Which evaluator :func:`sigma2_auto` uses for the pair."""
    if p % 2 and q % 2:
        return "charpoly" if p <= FAST_METHOD_MAX_P else "trig"
    return "lattice"


def sigma2_auto(p: int, q: int) -> int:
    """Genus-two signature by the fastest exact route for the parity.

    Odd pairs use the charpoly trace (or the certified trig sum above
    ``p = 2000``); other parities fall back to the lattice sum, the only
    route with an integer value there.
    """
    _check_pair(p, q)
    method = sigma2_method(p, q)
    if method == "charpoly":
        return polytrace.sigma_g_fast(p, q, 2)
    if method == "trig":
        return sigma2_trig(p, q).value
    return sigma2_lattice(p, q)
