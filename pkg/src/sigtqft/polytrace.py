"""Integer polynomials and the characteristic-polynomial signature algorithm.

The signed Verlinde algebra is cyclic, generated by ``e_1``, whose
multiplication matrix is a tridiagonal sign matrix ``M`` (sub-diagonal
all ones, super-diagonal ``c_i = -eps_{i+1} eps_{i+2}``).  Hence
``V_{q/p} = Q[x]/P`` with ``P`` the characteristic polynomial of ``M``,
``e_j`` corresponds to the leading ``j x j`` principal charpoly ``E_j``,
and the handle element is ``-iota * P'`` with ``iota = E_{p-2}``.  The
genus-``g`` signature is the trace of ``Omega^{g-1}`` on that quotient.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import InvalidInput

MAX_GENUS = 10


class IntPolynomial:
    """Dense polynomial with arbitrary-precision integer coefficients.

    ``coeffs[i]`` multiplies ``x**i``; trailing zeros are stripped, so the
    zero polynomial has ``coeffs == ()`` and degree ``-1``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        c = [int(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def const(cls, a: int) -> "IntPolynomial":
        return cls((a,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = IntPolynomial((other,))
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(-a for a in self.coeffs)

    def __add__(self, other) -> "IntPolynomial":
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __sub__(self, other) -> "IntPolynomial":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "IntPolynomial":
        return _lift(other) - self

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(other * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        a = [(i, c) for i, c in enumerate(self.coeffs) if c]
        b = [(j, c) for j, c in enumerate(other.coeffs) if c]
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, ai in a:
            for j, bj in b:
                out[i + j] += ai * bj
        return IntPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "IntPolynomial":
        if n < 0:
            raise ValueError("negative power")
        out, base = IntPolynomial((1,)), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def derivative(self) -> "IntPolynomial":
        return IntPolynomial(i * a for i, a in enumerate(self.coeffs) if i)

    def divmod_monic(self, q: "IntPolynomial") -> tuple["IntPolynomial", "IntPolynomial"]:
        """Exact division by a monic polynomial over the integers."""
        if not q.is_monic():
            raise InvalidInput("divisor must be monic")
        d = q.degree
        r = list(self.coeffs)
        if len(r) <= d:
            return IntPolynomial(), IntPolynomial(r)
        low = [(j, c) for j, c in enumerate(q.coeffs[:-1]) if c]
        quo = [0] * (len(r) - d)
        for top in range(len(r) - 1, d - 1, -1):
            c = r[top]
            if not c:
                continue
            s = top - d
            quo[s] = c
            r[top] = 0
            for j, qj in low:
                r[s + j] -= c * qj
        return IntPolynomial(quo), IntPolynomial(r[:d])

    def __mod__(self, q: "IntPolynomial") -> "IntPolynomial":
        return self.divmod_monic(q)[1]

    def max_coeff_bits(self) -> int:
        return max((abs(a).bit_length() for a in self.coeffs), default=0)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "IntPolynomial(0)"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if not a:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(a) == 1:
                coef = "-" if a < 0 else "+"
                terms.append(f"{coef}{mono}")
            else:
                terms.append(f"{a:+d}{mono}")
        s = " ".join(terms).lstrip("+")
        return f"IntPolynomial({s})"


def _lift(x) -> IntPolynomial:
    if isinstance(x, IntPolynomial):
        return x
    if isinstance(x, int):
        return IntPolynomial((x,))
    raise TypeError(f"cannot combine IntPolynomial with {type(x).__name__}")


def _validate(p: int, q: int) -> None:
    if p < 3 or p % 2 == 0:
        raise InvalidInput(f"p must be odd and >= 3, got {p}")
    if q % 2 == 0 or not 0 < q < p or gcd(q, p) != 1:
        raise InvalidInput(f"q must be odd, coprime to p and in (0, p), got q={q}")


@dataclass(frozen=True)
class SignedTridiagonal:
    """Multiplication-by-``e_1`` matrix of ``V_{q/p}``: size ``p-1``,
    ones below the diagonal, ``super_diag[i]`` at position ``(i, i+1)``."""

    p: int
    q: int
    super_diag: tuple[int, ...]

    @classmethod
    def build(cls, p: int, q: int) -> "SignedTridiagonal":
        _validate(p, q)
        c = tuple(
            -1 if (1 + (i + 1) * q // p + (i + 2) * q // p) & 1 else 1 for i in range(p - 2)
        )
        return cls(p, q, c)

    @property
    def size(self) -> int:
        return self.p - 1

    def as_matrix(self) -> list[list[int]]:
        n = self.size
        m = [[0] * n for _ in range(n)]
        for i in range(n - 1):
            m[i + 1][i] = 1
            m[i][i + 1] = self.super_diag[i]
        return m


def _recurrence(p: int, q: int, upto: int):
    """Yield ``E_0 .. E_upto`` with ``E_k = x E_{k-1} - c_{k-2} E_{k-2}``;
    ``E_k`` is the characteristic polynomial of the leading ``k x k`` block."""
    c = SignedTridiagonal.build(p, q).super_diag
    prev2, prev = IntPolynomial((1,)), IntPolynomial((0, 1))
    yield prev2
    if upto >= 1:
        yield prev
    for k in range(2, upto + 1):
        nxt = [0] + list(prev.coeffs)
        ck = c[k - 2]
        for i, a in enumerate(prev2.coeffs):
            nxt[i] -= ck * a
        prev2, prev = prev, IntPolynomial(nxt)
        yield prev


def basis_polys(p: int, q: int, upto: int | None = None) -> list[IntPolynomial]:
    """``[E_0, ..., E_upto]`` (default ``upto = p - 2``)."""
    return list(_recurrence(p, q, p - 2 if upto is None else upto))


@lru_cache(maxsize=8)
def charpoly_pair(p: int, q: int) -> tuple[IntPolynomial, IntPolynomial]:
    """``(P, iota)``: charpolys of ``M`` and of its leading ``(p-2)`` block."""
    iota = P = None
    for k, e in enumerate(_recurrence(p, q, p - 1)):
        if k == p - 2:
            iota = e
        P = e
    return P, iota


def basis_poly(j: int, p: int, q: int) -> IntPolynomial:
    """Polynomial representative ``E_j`` of the basis vector ``e_j``."""
    if not 0 <= j <= p - 2:
        raise InvalidInput(f"color {j} outside 0..{p - 2}")
    return basis_polys(p, q, j)[j]


@lru_cache(maxsize=8)
def power_sums(Q: IntPolynomial) -> tuple[int, ...]:
    """``s_i = Tr(x^i)`` on ``Q[x]/Q`` for ``i < deg Q`` (Newton's identities)."""
    if not Q.is_monic():
        raise InvalidInput("modulus must be monic")
    d = Q.degree
    c = Q.coeffs
    s = [d]
    for i in range(1, d):
        acc = i * c[d - i]
        for j in range(1, i):
            cj = c[d - j]
            if cj:
                acc += cj * s[i - j]
        s.append(-acc)
    return tuple(s)


def poly_mod_trace(A: IntPolynomial, Q: IntPolynomial):
    """Trace of ``v -> A v`` on ``Q[x]/Q``: ``sum_k [x^k](x^k A mod Q)``.

    Evaluated as ``sum_i r_i Tr(x^i)`` with ``r = A mod Q``; the trace is
    linear, so this equals the defining sum.
    """
    if Q.degree < 1:
        raise InvalidInput("modulus must have degree >= 1")
    if not Q.is_monic():
        raise InvalidInput("modulus must be monic")
    r = A % Q
    s = power_sums(Q)
    return sum(ri * si for ri, si in zip(r.coeffs, s) if ri)


def poly_mod_trace_literal(A: IntPolynomial, Q: IntPolynomial) -> int:
    """Direct evaluation of ``sum_k [x^k](x^k A mod Q)``; slow reference."""
    if not Q.is_monic():
        raise InvalidInput("modulus must be monic")
    d = Q.degree
    cur = A % Q
    total = 0
    for k in range(d):
        total += cur[k]
        cur = IntPolynomial((0,) + cur.coeffs) % Q
    return total


def omega_poly(p: int, q: int) -> IntPolynomial:
    """Handle element as the polynomial ``-iota * P'`` reduced mod ``P``."""
    _validate(p, q)
    P, iota = charpoly_pair(p, q)
    return (-(iota * P.derivative())) % P


def to_basis_coords(A: IntPolynomial, p: int, q: int) -> list[int]:
    """Coordinates of ``A mod P`` in the ``E_j`` basis (triangular solve)."""
    P, _ = charpoly_pair(p, q)
    polys = basis_polys(p, q)
    r = list((A % P).coeffs) + [0] * (p - 1)
    coords = [0] * (p - 1)
    for j in range(p - 2, -1, -1):
        c = r[j]
        if c:
            coords[j] = c
            for i, e in enumerate(polys[j].coeffs):
                r[i] -= c * e
    return coords


def _check_genus(g: int) -> None:
    if not 1 <= g <= MAX_GENUS:
        raise InvalidInput(f"genus must be in 1..{MAX_GENUS}, got {g}")


def sigma_gn_fast(p: int, q: int, g: int, lambdas: Sequence[int] = ()) -> int:
    """Signature ``Tr(Omega^{g-1} E_{l1} ... E_{ln})`` on ``Q[x]/P``."""
    _validate(p, q)
    _check_genus(g)
    for lam in lambdas:
        if not 0 <= lam <= p - 2:
            raise InvalidInput(f"color {lam} outside 0..{p - 2}")
    P, _ = charpoly_pair(p, q)
    acc = IntPolynomial((1,))
    if g > 1:
        om = omega_poly(p, q)
        for _ in range(g - 1):
            acc = (acc * om) % P
    if any(lambdas):
        polys = basis_polys(p, q, max(lambdas))
        for lam in lambdas:
            if lam:
                acc = (acc * polys[lam]) % P
    return poly_mod_trace(acc, P)


def sigma_g_fast(p: int, q: int, g: int) -> int:
    """Closed-surface signature ``sigma_g(q/p)`` via the charpoly trace."""
    return sigma_gn_fast(p, q, g)


def trace_stats(p: int, q: int) -> dict:
    """Coefficient-size metrics of the polynomial route (for benchmarks)."""
    P, _ = charpoly_pair(p, q)
    om = omega_poly(p, q)
    return {
        "charpoly_bits": P.max_coeff_bits(),
        "omega_bits": om.max_coeff_bits(),
    }
