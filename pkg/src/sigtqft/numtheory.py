"""Exact rationals, regular continued fractions and sign sequences.

Everything here is integer or :class:`fractions.Fraction` arithmetic; no
floating point is used anywhere in this module.

Convention: a convergent is written ``q_k / p_k`` (numerator ``q``,
denominator ``p``) to match the way ``q/p`` parametrises roots of unity in
the rest of the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Sequence

from .errors import ExpansionExhausted, InvalidInput

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational number: {x!r}") from exc
    raise InvalidInput(f"cannot interpret {x!r} as an exact rational")


class CFExpansion:
    """A regular continued fraction ``[a0; a1, a2, ...]``.

    Either finite (``terms`` given) or backed by ``source``, a function
    ``i -> a_i`` for ``i >= 1`` that is called lazily and cached.
    ``term_bound`` optionally caps every partial quotient; numeric code uses
    it to bound tails past the explored depth.
    """

    def __init__(
        self,
        a0: int,
        terms: Iterable[int] = (),
        *,
        source: Callable[[int], int] | None = None,
        term_bound: int | None = None,
        label: str | None = None,
    ):
        self.a0 = int(a0)
        self._terms = [int(a) for a in terms]
        self._source = source
        if source is not None and self._terms:
            raise InvalidInput("give either explicit terms or a source, not both")
        for a in self._terms:
            if a < 1:
                raise InvalidInput(f"partial quotients must be >= 1, got {a}")
        if term_bound is None and self._terms:
            term_bound = max(self._terms)
        self.term_bound = term_bound
        self.label = label

    # construction helpers -------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Sequence[int]) -> "CFExpansion":
        """``[a0, a1, ..., an]`` as a finite expansion."""
        if not terms:
            raise InvalidInput("empty continued fraction")
        return cls(terms[0], terms[1:])

    @classmethod
    def periodic(cls, a0: int, preperiod: Sequence[int], period: Sequence[int]) -> "CFExpansion":
        pre = [int(a) for a in preperiod]
        per = [int(a) for a in period]
        if not per or min(per) < 1 or (pre and min(pre) < 1):
            raise InvalidInput("periodic expansion needs a non-empty positive period")

        def source(i: int) -> int:
            if i <= len(pre):
                return pre[i - 1]
            return per[(i - len(pre) - 1) % len(per)]

        label = f"[{a0};{','.join(map(str, pre))}{',' if pre else ''}({','.join(map(str, per))})]"
        return cls(a0, source=source, term_bound=max(pre + per), label=label)

    @classmethod
    def all_ones(cls) -> "CFExpansion":
        """``[0; 1, 1, 1, ...]`` = (sqrt(5) - 1) / 2."""
        return cls.periodic(0, (), (1,))

    @classmethod
    def parse(cls, text: str) -> "CFExpansion":
        """Parse ``"a0;a1,a2"``, ``"a1,a2,..."`` (a0 = 0), or a periodic
        tail in parentheses such as ``"0;2,(1,3)"``.  ``"ones"`` and
        ``"golden"`` name the all-ones expansion."""
        s = text.strip().replace(" ", "")
        if s.lower() in ("ones", "golden", "all-ones"):
            return cls.all_ones()
        s = s.strip("[]")
        head, sep, tail = s.partition(";")
        if not sep:
            head, tail = "0", s
        try:
            a0 = int(head)
            if "(" in tail:
                pre_txt, _, per_txt = tail.partition("(")
                per_txt = per_txt.rstrip(")")
                pre = [int(t) for t in pre_txt.split(",") if t]
                per = [int(t) for t in per_txt.split(",") if t]
                return cls.periodic(a0, pre, per)
            terms = [int(t) for t in tail.split(",") if t]
        except ValueError as exc:
            raise InvalidInput(f"cannot parse continued fraction {text!r}") from exc
        return cls(a0, terms)

    # access -----------------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self._source is None

    def __len__(self) -> int:
        if not self.is_finite:
            raise TypeError("infinite continued fraction has no length")
        return len(self._terms)

    def term(self, i: int) -> int:
        """Partial quotient ``a_i`` (``a_0`` for ``i == 0``)."""
        if i == 0:
            return self.a0
        if i < 0:
            raise IndexError(i)
        if self.is_finite:
            if i > len(self._terms):
                raise ExpansionExhausted("expansion exhausted")
            return self._terms[i - 1]
        while len(self._terms) < i:
            a = int(self._source(len(self._terms) + 1))
            if a < 1:
                raise InvalidInput(f"partial quotients must be >= 1, got {a}")
            self._terms.append(a)
        return self._terms[i - 1]

    def terms(self, count: int) -> list[int]:
        return [self.term(i) for i in range(1, count + 1)]

    @property
    def is_canonical(self) -> bool:
        return not self.is_finite or not self._terms or self._terms[-1] >= 2

    def value(self) -> Fraction:
        if not self.is_finite:
            raise InvalidInput("an infinite expansion has no exact rational value")
        x = Fraction(0)
        for a in reversed(self._terms):
            x = 1 / (a + x)
        return self.a0 + x

    def truncate(self, k: int) -> "CFExpansion":
        """``[a0; a1, ..., ak]`` as a finite expansion."""
        return CFExpansion(self.a0, self.terms(k))

    def phi2(self) -> "CFExpansion":
        """Expansion of ``x / (2x + 1)``, valid for ``0 < x < 1``.

        For ``x = [0; a1, a2, ...]`` this is ``[0; a1 + 2, a2, ...]``.
        """
        if self.a0 != 0 or (self.is_finite and not self._terms):
            raise InvalidInput("phi2 shift needs an expansion of a number in (0, 1)")
        if self.is_finite:
            return CFExpansion(0, [self._terms[0] + 2] + self._terms[1:])
        src = self.term
        bound = None if self.term_bound is None else self.term_bound + 2
        return CFExpansion(0, source=lambda i: src(i) + 2 if i == 1 else src(i), term_bound=bound)

    def __repr__(self) -> str:
        if self.label:
            return f"CFExpansion({self.label})"
        shown = ",".join(map(str, self._terms[:12]))
        more = "" if self.is_finite else ",..."
        return f"CFExpansion([{self.a0};{shown}{more}])"


@dataclass(frozen=True)
class Convergent:
    k: int
    q: int
    p: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.q, self.p)


def cf_expand(r) -> CFExpansion:
    """Canonical regular continued fraction of a rational (last term >= 2)."""
    r = as_rational(r)
    num, den = r.numerator, r.denominator
    a0, rem = divmod(num, den)
    terms = []
    num, den = den, rem
    while den:
        a, rem = divmod(num, den)
        terms.append(a)
        num, den = den, rem
    return CFExpansion(a0, terms)


def convergents(cf: CFExpansion, depth: int) -> list[Convergent]:
    """Convergents ``q_k/p_k`` for ``k = 0..depth`` via the three-term
    recursion seeded with ``q_{-1} = 1, q_0 = a0, p_{-1} = 0, p_0 = 1``."""
    if depth < 0:
        raise InvalidInput("depth must be >= 0")
    if cf.is_finite and depth > len(cf):
        raise ExpansionExhausted("expansion exhausted")
    q_prev, q = 1, cf.a0
    p_prev, p = 0, 1
    out = [Convergent(0, q, p)]
    for k in range(1, depth + 1):
        a = cf.term(k)
        q_prev, q = q, a * q + q_prev
        p_prev, p = p, a * p + p_prev
        out.append(Convergent(k, q, p))
    return out


def iter_convergents(cf: CFExpansion):
    """Unbounded convergent generator (stops at the end of a finite expansion)."""
    q_prev, q, p_prev, p = 1, cf.a0, 0, 1
    yield Convergent(0, q, p)
    for k in itertools.count(1):
        try:
            a = cf.term(k)
        except ExpansionExhausted:
            return
        q_prev, q = q, a * q + q_prev
        p_prev, p = p, a * p + p_prev
        yield Convergent(k, q, p)


def eps_sign(j: int, q: int, p: int) -> int:
    """Sign of the quantum integer ``[j]`` at ``exp(i pi q / p)``:
    ``(-1) ** floor(j q / p)``, using the mathematical floor."""
    if p <= 0:
        raise InvalidInput("p must be positive")
    if gcd(q, p) != 1:
        raise InvalidInput(f"q={q} and p={p} are not coprime")
    if (j * q) % p == 0:
        raise InvalidInput("quantum integer vanishes")
    return -1 if (j * q // p) & 1 else 1


@dataclass(frozen=True)
class SignSequence:
    p: int
    q: int
    eps: tuple[int, ...]  # eps[0] is eps_1

    def __getitem__(self, j: int) -> int:
        if not 1 <= j <= self.p - 1:
            raise IndexError(j)
        return self.eps[j - 1]


def sign_sequence(q: int, p: int) -> SignSequence:
    if p <= 0 or gcd(q, p) != 1:
        raise InvalidInput(f"need p > 0 and gcd(q, p) = 1, got q={q}, p={p}")
    return SignSequence(p, q, tuple(-1 if (j * q // p) & 1 else 1 for j in range(1, p)))


def _denominators(cf: CFExpansion, upto: int) -> list[int]:
    return [c.p for c in convergents(cf, upto)]


def convergent_gap_bounds(theta: CFExpansion, k: int) -> tuple[Fraction, Fraction]:
    """``(1/(p_k (p_k + p_{k+1})), 1/(p_k p_{k+1}))``, the bracket for
    ``|theta - q_k/p_k|``."""
    if k < 1:
        raise InvalidInput("k must be >= 1")
    dens = _denominators(theta, k + 1)
    pk, pk1 = dens[k], dens[k + 1]
    return Fraction(1, pk * (pk + pk1)), Fraction(1, pk * pk1)


def bracket_index(dens: Sequence[int], n: int, k: int) -> int:
    """Largest ``i < k`` with ``dens[i] <= n``; then ``n < dens[i+1]``."""
    i = 0
    for j in range(k):
        if dens[j] <= n:
            i = j
        else:
            break
    return i


def zaremba_denominator_bound(theta_cf: CFExpansion, k: int, n: int) -> Fraction:
    """Lower bound ``4 / (p_k^2 (a_{i+1} + 2)^2)`` for
    ``sin^2(pi n / 2 p_k) sin^2(pi n q_k / p_k)``, where ``p_i <= n < p_{i+1}``."""
    if k < 2:
        raise InvalidInput("k must be >= 2")
    dens = _denominators(theta_cf, k)
    pk = dens[k]
    if not 1 <= n < pk:
        raise InvalidInput(f"n={n} outside 1..{pk - 1}")
    i = bracket_index(dens, n, k)
    a = theta_cf.term(i + 1)
    return Fraction(4, pk * pk * (a + 2) ** 2)


def dist_to_int(x: Fraction) -> Fraction:
    """Distance from ``x`` to the nearest integer."""
    f = x - (x.numerator // x.denominator)
    return min(f, 1 - f)


def odd_coprime_pairs(p_max: int, *, strict: bool = False, p_min: int = 3):
    """``(q, p)`` with p, q odd, coprime and ``0 < q < p``, for
    ``p <= p_max`` (``p < p_max`` when ``strict``), ordered by p then q."""
    top = p_max - 1 if strict else p_max
    for p in range(p_min | 1, top + 1, 2):
        for q in range(1, p, 2):
            if gcd(q, p) == 1:
                yield q, p
