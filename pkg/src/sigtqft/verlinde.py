"""The signed Verlinde Frobenius algebra ``V_{q/p}`` and its genus-0 limit.

Basis vectors ``e_0 .. e_{p-2}``; the bilinear form is diagonal with
entries ``(-1)^j eps_{j+1}`` and the trilinear form ``omega`` takes values
in ``{-1, 0, 1}``.  Structure constants are evaluated on demand from
prefix products of quantum-integer signs, so a product of two vectors
costs ``O(p^2)`` at worst and no ``p^3`` table is ever stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Sequence

from .errors import InsufficientDepth, InvalidInput
from .numtheory import CFExpansion, SignSequence, as_rational, iter_convergents, sign_sequence


class AlgebraVector(tuple):
    """Integer coordinates in the basis ``e_0, e_1, ...``."""

    def __new__(cls, coords):
        return super().__new__(cls, (int(c) for c in coords))

    def __add__(self, other):
        return AlgebraVector(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return AlgebraVector(a - b for a, b in zip(self, other, strict=True))

    def __neg__(self):
        return AlgebraVector(-a for a in self)

    def scale(self, c: int) -> "AlgebraVector":
        return AlgebraVector(c * a for a in self)

    def support(self) -> list[int]:
        return [j for j, a in enumerate(self) if a]

    def __repr__(self):
        return f"AlgebraVector({list(self)})"


def _factorial_signs(eps_of: Callable[[int], int], top: int) -> list[int]:
    """``out[n] = Sign([n]!) = eps_1 ... eps_n`` for ``n = 0..top``."""
    out = [1]
    s = 1
    for m in range(1, top + 1):
        s *= eps_of(m)
        out.append(s)
    return out


def _omega_sign(fs: Sequence[int], j: int, k: int, l: int) -> int:
    h = (j + k + l) // 2
    s = fs[h + 1] * fs[h - l] * fs[h - k] * fs[h - j] * fs[j] * fs[k] * fs[l]
    return -s if h & 1 else s


class _SignedFusion:
    """Shared product machinery; ``top`` is the largest admissible sum
    ``j + k + l`` (``2p - 4`` for ``V_{q/p}``, unbounded for ``V_theta``)."""

    dim: int
    top: int | None
    eta_diag: tuple[int, ...]
    _fs: list[int]

    def in_T(self, j: int, k: int, l: int) -> bool:
        n = self.dim
        if not (0 <= j < n and 0 <= k < n and 0 <= l < n):
            return False
        s = j + k + l
        if s & 1 or (self.top is not None and s > self.top):
            return False
        return l <= j + k and j <= k + l and k <= j + l

    def omega(self, j: int, k: int, l: int) -> int:
        if not (0 <= j < self.dim and 0 <= k < self.dim and 0 <= l < self.dim):
            raise InvalidInput(f"colors {(j, k, l)} outside 0..{self.dim - 1}")
        if not self.in_T(j, k, l):
            return 0
        return _omega_sign(self._fs, j, k, l)

    def _out_range(self, j: int, k: int) -> range:
        hi = j + k
        if self.top is not None:
            hi = min(hi, self.top - j - k)
        hi = min(hi, self.dim - 1)
        return range(abs(j - k), hi + 1, 2)

    def basis_product(self, j: int, k: int) -> dict[int, int]:
        """``e_j . e_k`` as a sparse ``{l: coeff}``."""
        fs, eta = self._fs, self.eta_diag
        return {l: _omega_sign(fs, j, k, l) * eta[l] for l in self._out_range(j, k)}

    def multiply(self, u: Sequence[int], v: Sequence[int]) -> AlgebraVector:
        """``(u.v)_l = sum_{j,k} u_j v_k omega(j,k,l) / eta_ll``."""
        if len(u) != self.dim or len(v) != self.dim:
            raise InvalidInput("vector length does not match the algebra")
        fs, eta = self._fs, self.eta_diag
        out = [0] * self.dim
        su = [(j, a) for j, a in enumerate(u) if a]
        sv = [(k, b) for k, b in enumerate(v) if b]
        for j, a in su:
            for k, b in sv:
                ab = a * b
                for l in self._out_range(j, k):
                    # eta_ll = +-1, so dividing by it is multiplying by it
                    out[l] += ab * _omega_sign(fs, j, k, l) * eta[l]
        return AlgebraVector(out)

    def basis(self, j: int) -> AlgebraVector:
        if not 0 <= j < self.dim:
            raise InvalidInput(f"color {j} outside 0..{self.dim - 1}")
        v = [0] * self.dim
        v[j] = 1
        return AlgebraVector(v)

    @property
    def unit(self) -> AlgebraVector:
        return self.basis(0)

    def counit(self, v: Sequence[int]) -> int:
        return v[0]


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebra(_SignedFusion):
    """``V_{q/p}`` for odd coprime ``0 < q < p``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p < 3 or p % 2 == 0:
            raise InvalidInput(f"p must be odd and >= 3, got {p}")
        if q % 2 == 0 or not 0 < q < p or gcd(q, p) != 1:
            raise InvalidInput(f"q must be odd, coprime to p and in (0, p), got {q}")
        seq = sign_sequence(q, p)
        object.__setattr__(self, "sign_seq", seq)
        object.__setattr__(self, "dim", p - 1)
        object.__setattr__(self, "top", 2 * p - 4)
        eta = tuple((-1) ** j * seq[j + 1] for j in range(p - 1))
        object.__setattr__(self, "eta_diag", eta)
        object.__setattr__(self, "_fs", _factorial_signs(seq.__getitem__, p - 1))

    sign_seq: SignSequence = field(init=False, repr=False, default=None)  # type: ignore[assignment]


def omega(alg: FrobeniusAlgebra, j: int, k: int, l: int) -> int:
    return alg.omega(j, k, l)


def multiply(alg, u, v) -> AlgebraVector:
    return alg.multiply(u, v)


def counit(alg, v) -> int:
    return alg.counit(v)


def omega_element(alg: FrobeniusAlgebra) -> AlgebraVector:
    """The handle element ``sum_j eta_jj^{-1} e_j e_j``."""
    total = [0] * alg.dim
    for j in range(alg.dim):
        c = alg.eta_diag[j]
        for l, v in alg.basis_product(j, j).items():
            total[l] += c * v
    return AlgebraVector(total)


def signature_oracle(alg: FrobeniusAlgebra, g: int, lambdas: Sequence[int] = ()) -> int:
    """``counit(Omega^g e_{l1} ... e_{ln})`` by repeated multiplication."""
    if g < 0:
        raise InvalidInput("genus must be >= 0")
    for lam in lambdas:
        if not 0 <= lam <= alg.p - 2:
            raise InvalidInput(f"color {lam} outside 0..{alg.p - 2}")
    x = alg.unit
    for lam in lambdas:
        if lam:
            x = alg.multiply(x, alg.basis(lam))
    if g:
        om = omega_element(alg)
        for _ in range(g):
            x = alg.multiply(x, om)
    return alg.counit(x)


def sigma1_punctured(q: int, p: int, k: int) -> int:
    """Genus-one signature with one point of color ``2k``:
    ``sum_{n=k+1}^{p-1-k} prod_{l=1}^{k} eps_{n+l} eps_{n-l}``."""
    if k < 0:
        raise InvalidInput("k must be >= 0")
    seq = sign_sequence(q, p)
    total = 0
    for n in range(k + 1, p - k):
        s = 1
        for l in range(1, k + 1):
            s *= seq[n + l] * seq[n - l]
        total += s
    return total


# -- genus-zero algebra V_theta --------------------------------------------------


class _FloorOracle:
    """``floor(m theta)`` for a rational, or for an infinite expansion by
    squeezing theta between consecutive convergents."""

    def __init__(self, theta):
        if isinstance(theta, CFExpansion) and theta.is_finite:
            theta = theta.value()
        if isinstance(theta, CFExpansion):
            self._cf = theta
            self._conv = iter_convergents(theta)
            self._last = next(self._conv).value
            self._advance()
            self.rational = None
        else:
            self.rational = as_rational(theta)

    def _advance(self):
        c = next(self._conv, None)
        if c is None:
            raise InsufficientDepth("insufficient expansion depth")
        self._lo, self._hi = sorted((self._last, c.value))
        self._last = c.value

    def floor(self, m: int, max_depth: int = 200) -> int:
        if self.rational is not None:
            x = m * self.rational
            if x.denominator == 1:
                raise InvalidInput("quantum integer vanishes")
            return x.numerator // x.denominator
        for _ in range(max_depth):
            a, b = m * self._lo, m * self._hi
            fa = a.numerator // a.denominator
            # theta is strictly inside (lo, hi); the floor is decided when
            # that open interval contains no integer
            if b <= fa + 1:
                return fa
            self._advance()
        raise InsufficientDepth("insufficient expansion depth")


class ThetaAlgebra(_SignedFusion):
    """Truncation of the infinite algebra ``V_theta`` to colors ``0..cutoff``.

    Products of colors summing to at most ``cutoff`` never leave the
    truncation, so counits of such products are exact.
    """

    def __init__(self, theta, cutoff: int):
        fl = _FloorOracle(theta)
        self.dim = cutoff + 1
        self.top = None

        def eps(m: int) -> int:
            return -1 if fl.floor(m) & 1 else 1

        # colors stay <= cutoff, so factorials never exceed [cutoff + 1]!
        epses = [eps(m) for m in range(1, cutoff + 2)]
        self.eta_diag = tuple((-1) ** n * epses[n] for n in range(self.dim))
        self._fs = _factorial_signs(lambda m: epses[m - 1], cutoff + 1)


def counit_theta(theta, lambdas: Sequence[int]) -> int:
    """``counit(e_{l1} ... e_{ln})`` in ``V_theta``.

    ``theta`` is a rational (an even denominator keeps every quantum
    integer non-zero) or a continued fraction expansion.
    """
    lambdas = [int(x) for x in lambdas]
    if any(x < 0 for x in lambdas):
        raise InvalidInput("colors must be >= 0")
    if not lambdas:
        return 1
    alg = ThetaAlgebra(theta, max(sum(lambdas), 0))
    x = alg.unit
    for lam in lambdas:
        if lam:
            x = alg.multiply(x, alg.basis(lam))
    return alg.counit(x)

