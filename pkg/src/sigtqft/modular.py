"""Modular-form numerics: eta, theta, ``g``, the Eichler integral ``G`` and ``Lambda``.

Complex values are mpmath ``mpc`` numbers computed under
``mpmath.workprec(bits)``.  ``Lambda`` is the exception: its slowly
converging series is summed in float64 with exact integer argument
reduction, and the returned :class:`TailBound` accounts for truncation,
the rational approximation of an irrational ``theta`` and float rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath
import numpy as np

from .errors import InsufficientDepth, InvalidInput, TrackingError
from .numtheory import CFExpansion, as_rational, iter_convergents

DEFAULT_BITS = 128
T0 = 10
_CHUNK = 1 << 20
_INT64_SAFE = 1 << 30
# relative rounding error of one float64 term 1/(n^3 sin(pi x))
_TERM_ROUNDING = 8 * 2.0 ** -53


@dataclass(frozen=True)
class UpperHalfPoint:
    tau: mpmath.mpc

    def __post_init__(self):
        t = mpmath.mpc(self.tau)
        if not t.imag > 0:
            raise InvalidInput(f"tau must lie in the upper half-plane, got {t}")
        object.__setattr__(self, "tau", t)


def _tau(tau) -> mpmath.mpc:
    if isinstance(tau, UpperHalfPoint):
        return tau.tau
    return UpperHalfPoint(tau).tau


@dataclass(frozen=True)
class TailBound:
    value: float
    n_truncated: int

    def __post_init__(self):
        if not (self.value >= 0 and math.isfinite(self.value)):
            raise ValueError(f"tail bound must be finite and >= 0, got {self.value}")


@dataclass(frozen=True)
class ThetaSpec:
    """A real ``theta``: an exact rational, or a continued fraction of which
    at most ``depth`` partial quotients may be consulted (``None``: any)."""

    rational: Fraction | None = None
    cf: CFExpansion | None = None
    depth: int | None = None

    def __post_init__(self):
        if (self.rational is None) == (self.cf is None):
            raise InvalidInput("ThetaSpec needs exactly one of rational or cf")
        if self.cf is not None and self.cf.is_finite:
            object.__setattr__(self, "rational", self.cf.value())
            object.__setattr__(self, "cf", None)
        if self.rational is not None:
            object.__setattr__(self, "rational", as_rational(self.rational))

    @classmethod
    def of(cls, theta, depth: int | None = None) -> "ThetaSpec":
        if isinstance(theta, ThetaSpec):
            return theta
        if isinstance(theta, CFExpansion):
            return cls(cf=theta, depth=depth)
        return cls(rational=as_rational(theta))

    def phi2(self) -> "ThetaSpec":
        """``theta / (2 theta + 1)``."""
        if self.rational is not None:
            r = self.rational
            return ThetaSpec(rational=r / (2 * r + 1))
        return ThetaSpec(cf=self.cf.phi2(), depth=self.depth)

    def approx(self, bits: int = DEFAULT_BITS):
        """``theta`` as an mpf (deep convergent for an expansion)."""
        with mpmath.workprec(bits):
            if self.rational is not None:
                return mpmath.mpf(self.rational.numerator) / self.rational.denominator
            target = mpmath.mpf(2) ** (-bits)
            for c in iter_convergents(self.cf):
                if self.depth is not None and c.k >= self.depth:
                    break
                if c.p * c.p > 1 / target:
                    break
            return mpmath.mpf(c.q) / c.p

    def __str__(self) -> str:
        if self.rational is not None:
            return str(self.rational)
        return repr(self.cf)


# -- arithmetic ------------------------------------------------------------------


def divisor_sigma(k: int, n: int) -> Fraction:
    """``sum_{d | n} d**k`` exactly; ``k`` may be negative."""
    if n < 1:
        raise InvalidInput("n must be >= 1")
    total = Fraction(0)
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += Fraction(d) ** k
            e = n // d
            if e != d:
                total += Fraction(e) ** k
        d += 1
    return total


def _sigma3_sieve(n_max: int) -> list[int]:
    out = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        c = d ** 3
        for m in range(d, n_max + 1, d):
            out[m] += c
    return out


# -- eta, theta, g -----------------------------------------------------------------


def _terms_for(r, bits: int) -> int:
    """Smallest N with ``r**N < 2**(-bits-32)`` for ``0 < r < 1``."""
    return int(mpmath.ceil((bits + 32) * mpmath.log(2) / -mpmath.log(r))) + 1


def dedekind_eta(tau, bits: int = DEFAULT_BITS) -> mpmath.mpc:
    """``e^{i pi tau/12} prod_n (1 - e^{2 pi i n tau})``."""
    t = _tau(tau)
    with mpmath.workprec(bits + 16):
        qn = mpmath.expjpi(2 * t)
        n_max = _terms_for(abs(qn), bits)
        prod = mpmath.mpc(1)
        x = qn
        for _ in range(n_max):
            prod *= 1 - x
            x *= qn
        out = mpmath.expjpi(t / 12) * prod
    with mpmath.workprec(bits):
        return +out


def jacobi_theta(tau, bits: int = DEFAULT_BITS) -> mpmath.mpc:
    """``sum_{n in Z} e^{i pi n^2 tau}``, truncated symmetrically."""
    t = _tau(tau)
    with mpmath.workprec(bits + 16):
        w = mpmath.expjpi(t)
        r = abs(w)
        m_max = int(mpmath.sqrt(_terms_for(r, bits))) + 1
        total = mpmath.mpc(0)
        # w^(n^2) built from w^((n-1)^2) * w^(2n-1)
        wn2, step = mpmath.mpc(1), w
        for _ in range(m_max):
            wn2 *= step
            step *= w * w
            total += wn2
        out = 1 + 2 * total
    with mpmath.workprec(bits):
        return +out


def _g_theta(t: mpmath.mpc, bits: int) -> mpmath.mpc:
    # theta(2 tau - 1) = 1 + 2 sum_{n >= 1} (-1)^n e^{2 pi i n^2 tau}
    with mpmath.workprec(bits + 16):
        w = mpmath.expjpi(2 * t)
        m_max = int(mpmath.sqrt(_terms_for(abs(w), bits))) + 1
        total = mpmath.mpc(0)
        wn2, step = mpmath.mpc(1), w
        for n in range(1, m_max + 1):
            wn2 *= step
            step *= w * w
            total += -wn2 if n & 1 else wn2
        out = 1 + 2 * total
    with mpmath.workprec(bits):
        return +out


def g_function(tau, bits: int = DEFAULT_BITS, method: str = "eta") -> mpmath.mpc:
    """``eta(tau)^2 / eta(2 tau)``; ``method="theta"`` uses the equal
    series ``theta(2 tau - 1)`` instead (much faster near the real axis)."""
    t = _tau(tau)
    if method == "theta":
        return _g_theta(t, bits)
    if method != "eta":
        raise InvalidInput(f"unknown method {method!r}")
    with mpmath.workprec(bits + 16):
        out = dedekind_eta(t, bits + 16) ** 2 / dedekind_eta(2 * t, bits + 16)
    with mpmath.workprec(bits):
        return +out


def arg_g_track(q: int, p: int, t_values, bits: int = DEFAULT_BITS, ratio: float = 0.8) -> list:
    """Continuous ``-(2/pi) arg g(q/2p + i t)`` at each of ``t_values``.

    The path starts at ``t = T0`` where ``g`` is within ``2**-20`` of 1 and
    walks down geometrically, refusing any step whose phase change reaches
    ``pi/4`` (the step ratio is then moved towards 1).
    """
    if p <= 0 or q % 2 == 0 or gcd(q, p) != 1:
        raise InvalidInput("need p > 0, q odd and gcd(q, p) = 1")
    ts = [mpmath.mpf(t) for t in t_values]
    order = sorted(range(len(ts)), key=lambda i: -ts[i])
    if not ts or min(ts) <= 0 or max(ts) > T0:
        raise InvalidInput(f"t values must lie in (0, {T0}]")
    out = [None] * len(ts)
    with mpmath.workprec(bits):
        x = mpmath.mpf(q) / (2 * p)
        t = mpmath.mpf(T0)
        prev = _g_theta(mpmath.mpc(x, t), bits)
        phase = mpmath.arg(prev)
        quarter = mpmath.pi / 4
        for i in order:
            stop = ts[i]
            while t > stop:
                r = mpmath.mpf(ratio)
                while True:
                    t_next = max(t * r, stop)
                    cur = _g_theta(mpmath.mpc(x, t_next), bits)
                    delta = mpmath.arg(cur / prev)
                    if abs(delta) < quarter:
                        break
                    r = mpmath.sqrt(r)
                    if 1 - r < mpmath.mpf(2) ** -40:
                        raise TrackingError("argument tracking unstable")
                phase += delta
                t, prev = t_next, cur
            out[i] = -2 * phase / mpmath.pi
    return out


def arg_g_boundary(q: int, p: int, t_min, bits: int = DEFAULT_BITS):
    """``-(2/pi) arg g(q/2p + i t_min)`` with the argument continued from ``i oo``."""
    return arg_g_track(q, p, [t_min], bits)[0]


# -- Eichler integral and period polynomial ----------------------------------------


def eichler_G(tau, n_max: int, bits: int = DEFAULT_BITS):
    """Partial sum of ``(i pi)^-3 sum_{n odd} sigma_{-3}(n) e^{i pi n tau}`` to
    ``n_max``, with a geometric bound on the omitted terms."""
    if n_max < 1:
        raise InvalidInput("N must be >= 1")
    t = _tau(tau)
    sig = _sigma3_sieve(n_max)
    with mpmath.workprec(bits + 16):
        z = mpmath.expjpi(t)
        z2 = z * z
        zn = z
        total = mpmath.mpc(0)
        for n in range(1, n_max + 1, 2):
            total += mpmath.mpf(sig[n]) / n ** 3 * zn
            zn *= z2
        value = total / (1j * mpmath.pi) ** 3
        # sigma_{-3}(n) < zeta(3) < 1.21; first omitted odd n is last + 2
        r = abs(z)
        last = n_max if n_max % 2 else n_max - 1
        tail = 1.21 * r ** (last + 2) / ((1 - r * r) * mpmath.pi ** 3)
    with mpmath.workprec(bits):
        return +value, TailBound(float(tail), last)


def period_residual(tau, n_max: int = 4000, bits: int = 192):
    """``G(tau) - G(tau/(2tau+1)) (2tau+1)^2 - (2tau^2+2tau+1)/32``."""
    t = _tau(tau)
    with mpmath.workprec(bits + 16):
        c = 2 * t + 1
        g1, b1 = eichler_G(t, n_max, bits)
        g2, b2 = eichler_G(t / c, n_max, bits)
        res = g1 - g2 * c * c - (2 * t * t + 2 * t + 1) / 32
    with mpmath.workprec(bits):
        return +res


# -- Lambda ------------------------------------------------------------------------


def _inv_sin_sum(num: int, den: int, n_last: int) -> tuple[float, float]:
    """``sum_{n odd <= n_last} 1/(n^3 sin(pi n num/den))`` and the sum of
    absolute values, in float64 with exact residues mod ``2 den``."""
    mod = 2 * den
    small = mod <= 2 * _INT64_SAFE
    parts, abs_parts = [], []
    for lo in range(1, n_last + 1, 2 * _CHUNK):
        hi = min(lo + 2 * _CHUNK, n_last + 1)
        if small:
            n = np.arange(lo, hi, 2, dtype=np.int64)
            m = (n % mod) * (num % mod) % mod
        else:
            n = np.arange(lo, hi, 2, dtype=np.int64)
            m = np.fromiter((k * num % mod for k in range(lo, hi, 2)), dtype=object, count=len(n))
        neg = m >= den
        d = m % den
        d = np.minimum(d, den - d)
        s = np.sin(np.pi * (d.astype(np.float64) / den))
        if np.any(s == 0):
            raise InvalidInput("sin(n pi theta) vanishes; theta needs an even denominator")
        nf = n.astype(np.float64)
        terms = 1.0 / (nf * nf * nf * s)
        terms = np.where(neg, -terms, terms)
        parts.append(math.fsum(terms))
        abs_parts.append(math.fsum(np.abs(terms)))
    return math.fsum(parts), math.fsum(abs_parts)


_C16 = 16 / math.pi ** 3


def _odd_at_most(n: int) -> int:
    return n if n % 2 else n - 1


@dataclass(frozen=True)
class _Plan:
    num: int
    den: int
    sign: int
    n_last: int
    fixed_error: float  # truncation + approximation, before rounding


def _plan_rational(r: Fraction, eps: float, n_terms: int | None) -> _Plan:
    if r.denominator % 2:
        raise InvalidInput(f"Lambda needs an even denominator, got {r}")
    k = r.numerator // r.denominator
    rr = r - k
    b = rr.denominator
    lo_sin = math.sin(math.pi / b)
    if n_terms is None:
        n_terms = math.ceil(math.sqrt(_C16 / (lo_sin * 2 * eps)))
    n_last = max(_odd_at_most(n_terms), 1)
    tail = _C16 / (lo_sin * 4 * n_last * n_last)
    return _Plan(rr.numerator, b, -1 if k & 1 else 1, n_last, tail)


def _plan_cf(spec: ThetaSpec, eps: float, n_terms: int | None) -> _Plan:
    cf = spec.cf
    k0 = cf.a0
    if k0:
        cf = CFExpansion(0, source=lambda i, src=cf.term: src(i), term_bound=cf.term_bound)
    if cf.term_bound is None:
        raise InsufficientDepth("no bound on the partial quotients; the tail cannot be certified")
    big_a = cf.term_bound
    if n_terms is None:
        n_terms = math.ceil(_C16 * (big_a + 2) / (2 * eps))
    n_last = max(_odd_at_most(n_terms), 1)
    tail = _C16 * (big_a + 2) / (4 * n_last)
    # deepest usable convergent q_K/p_K; p_{K+1} must be known too
    chosen = prev = None
    for c in iter_convergents(cf):
        if spec.depth is not None and c.k > spec.depth:
            break
        if prev is not None and prev.p < _INT64_SAFE:
            chosen = (prev, c)
        if c.p >= _INT64_SAFE:
            break
        prev = c
    if chosen is None:
        raise InsufficientDepth("insufficient expansion depth")
    ck, ck1 = chosen
    pp = ck.p * ck1.p
    # |theta - q_K/p_K| < 1/(p_K p_{K+1}) moves sin(n pi theta) by at most
    # pi n/(p_K p_{K+1}); that must stay below half of 2/((A+2) n)
    if math.pi * n_last * n_last * (big_a + 2) > pp:
        raise InsufficientDepth(f"insufficient expansion depth for eps={eps:g}")
    approx = _C16 * math.pi * (big_a + 2) ** 2 * (n_last + 1) / (4 * pp)
    return _Plan(ck.q, ck.p, -1 if k0 & 1 else 1, n_last, tail + approx)


def lambda_eval(theta, eps_target: float = 1e-8, *, n_terms: int | None = None, depth: int | None = None):
    """``Lambda(theta) = (16/pi^3) sum_{n odd} 1/(n^3 sin(n pi theta))``.

    Returns ``(value, TailBound)``; the bound covers everything that
    separates the value from the true series.  ``theta + 1`` is reduced to
    ``theta`` with a sign flip before any summation.
    """
    spec = ThetaSpec.of(theta, depth)
    if spec.cf is not None and depth is not None and spec.depth is None:
        spec = ThetaSpec(cf=spec.cf, depth=depth)
    if not eps_target > 0:
        raise InvalidInput("eps_target must be positive")
    if spec.rational is not None:
        plan = _plan_rational(spec.rational, eps_target, n_terms)
    else:
        plan = _plan_cf(spec, eps_target, n_terms)
    total, total_abs = _inv_sin_sum(plan.num, plan.den, plan.n_last)
    err = plan.fixed_error + _C16 * total_abs * _TERM_ROUNDING * 2
    if n_terms is None and err > eps_target:
        raise InsufficientDepth(f"cannot reach eps={eps_target:g} (bound {err:.3g})")
    with mpmath.workprec(DEFAULT_BITS):
        value = plan.sign * 16 * mpmath.mpf(total) / mpmath.pi ** 3
    return value, TailBound(err, plan.n_last)


def lambda_transform_residual(theta, eps: float = 1e-8, *, with_bound: bool = False):
    """``Lambda(theta/(2theta+1)) (2theta+1)^2 - Lambda(theta) - (2theta^2+2theta+1)``."""
    spec = ThetaSpec.of(theta)
    half = eps / 2
    lam, b1 = lambda_eval(spec, half)
    shifted = spec.phi2()
    x = spec.approx()
    scale = (2 * x + 1) ** 2
    lam2, b2 = lambda_eval(shifted, half / float(scale))
    res = lam2 * scale - lam - (2 * x * x + 2 * x + 1)
    if with_bound:
        return res, b1.value + b2.value * float(scale)
    return res
