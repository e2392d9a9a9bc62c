"""Batch runs: conjecture and identity sweeps, asymptotics, figure data, benchmarks.

Every item recomputes its own inputs; nothing is shared between methods,
so cross-method agreement is an independent check.  Parallel runs hand
items to a process pool and collect them in input order, so reports do not
depend on the worker count.
"""

from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from . import dedekind, genus2, modular, polytrace, verlinde
from .errors import ContractFailure, InvalidInput
from .numtheory import CFExpansion, convergents, odd_coprime_pairs
from .reports import FAIL, PASS, SweepItem, SweepReport

CONJECTURE_CONTRACT_PMAX = 100
LATTICE_SAMPLE = 0.05
LAMBDA_GRID_MAX_DEN = 64
ASYMPTOTICS_EPS = 1e-6


def default_threads() -> int:
    env = os.environ.get("SIGTQFT_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise InvalidInput("SIGTQFT_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def _timed(fn, arg):
    t0 = time.perf_counter()
    out = fn(arg)
    return out, time.perf_counter() - t0


def _run_items(fn, args: list, threads: int | None) -> list:
    """``[(fn(a), seconds) for a in args]``, possibly in worker processes."""
    threads = default_threads() if threads is None else threads
    if threads < 1:
        raise InvalidInput("thread count must be >= 1")
    if threads == 1 or len(args) < 2:
        return [_timed(fn, a) for a in args]
    chunk = max(1, len(args) // (8 * threads))
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_timed, [fn] * len(args), args, chunksize=chunk))


def _collect(kind: str, results, meta=None) -> SweepReport:
    rep = SweepReport(kind, meta=meta or {})
    for item, seconds in results:
        rep.add(item, seconds)
    return rep


# -- conjecture sweep --------------------------------------------------------------


def _conjecture_item(arg) -> SweepItem:
    q, p, with_lattice = arg
    base = genus2.sigma2_auto(p, q)
    shifted = genus2.sigma2_auto(2 * q + p, q)
    expected = 2 * q * q + 2 * p * q + p * p - 1
    r = shifted - base - expected
    values = {"sigma2": base, "sigma2_shifted": shifted, "expected": expected, "lattice_check": None}
    ok = r == 0
    if with_lattice:
        agree = genus2.sigma2_lattice(p, q) == base and genus2.sigma2_lattice(2 * q + p, q) == shifted
        values["lattice_check"] = PASS if agree else FAIL
        ok = ok and agree
    return SweepItem({"q": q, "p": p}, values, r, PASS if ok else FAIL)


def conjecture_sweep(p_max: int, thread_count: int | None = None, *, seed: int = 0) -> SweepReport:
    """``sigma2(q/(2q+p)) - sigma2(q/p) - (2q^2 + 2pq + p^2 - 1)`` for odd
    coprime ``0 < q < p < p_max``.  A seeded 5% sample is re-checked with
    the lattice sum."""
    if p_max < 3:
        raise InvalidInput("p_max must be >= 3")
    pairs = list(odd_coprime_pairs(p_max, strict=True))
    rng = random.Random(seed)
    sample = set(rng.sample(range(len(pairs)), max(1, round(LATTICE_SAMPLE * len(pairs))))) if pairs else set()
    args = [(q, p, i in sample) for i, (q, p) in enumerate(pairs)]
    meta = {"p_max": p_max, "hard_contract": p_max <= CONJECTURE_CONTRACT_PMAX, "lattice_sampled": len(sample), "seed": seed}
    return _collect("conjecture", _run_items(_conjecture_item, args, thread_count), meta)


# -- asymptotics -------------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticsRow:
    k: int
    a_k: int
    q_k: int
    p_k: int
    sigma2: int
    ratio: Fraction
    lam: mpmath.mpf
    abs_diff: mpmath.mpf
    rel_diff: mpmath.mpf

    def as_dict(self) -> dict:
        return {
            "k": self.k, "a_k": self.a_k, "q_k": self.q_k, "p_k": self.p_k, "sigma2": self.sigma2,
            "ratio": mpmath.mpf(self.ratio.numerator) / self.ratio.denominator,
            "lambda": self.lam, "abs_diff": self.abs_diff, "rel_diff": self.rel_diff,
        }


ASYMPTOTICS_COLUMNS = ["k", "a_k", "q_k", "p_k", "sigma2", "ratio", "lambda", "abs_diff", "rel_diff"]


def asymptotics_run(theta_cf: CFExpansion, depth: int, eps: float = ASYMPTOTICS_EPS) -> list[AsymptoticsRow]:
    """``sigma2(q_k/p_k) / p_k^2`` against ``Lambda(theta)`` for ``k = 2..depth``."""
    if depth < 2:
        raise InvalidInput("depth must be >= 2")
    if theta_cf.is_finite:
        raise InvalidInput("rational endpoint: the expansion terminates, theta must be irrational")
    if theta_cf.a0 != 0:
        raise InvalidInput("theta must lie in (0, 1)")
    lam, _ = modular.lambda_eval(theta_cf, eps)
    rows = []
    for c in convergents(theta_cf, depth)[2:]:
        s2 = genus2.sigma2_auto(c.p, c.q)
        ratio = Fraction(s2, c.p * c.p)
        diff = abs(mpmath.mpf(ratio.numerator) / ratio.denominator - lam)
        rows.append(AsymptoticsRow(c.k, theta_cf.term(c.k), c.q, c.p, s2, ratio, lam, diff, diff / abs(lam)))
    return rows


# -- figure data -------------------------------------------------------------------


FIGURE_COLUMNS = {
    "fig1": ["kind", "x", "q", "p", "value", "normalized"],
    "fig2": ["x", "q", "p", "sigma3", "normalized"],
    "fig3": ["x", "q", "p", "k", "sigma1", "normalized"],
}


def lambda_grid(max_den: int = LAMBDA_GRID_MAX_DEN, eps: float = 1e-6) -> list[tuple[int, int, mpmath.mpf]]:
    """``(a, b, Lambda(a/b))`` for ``0 < a/b < 1`` in lowest terms, ``b`` even."""
    out = []
    for b in range(2, max_den + 1, 2):
        for a in range(1, b, 2):
            if gcd(a, b) == 1:
                out.append((a, b, modular.lambda_eval(Fraction(a, b), eps)[0]))
    out.sort(key=lambda t: Fraction(t[0], t[1]))
    return out


def figure_data(which: str, p_max: int, k: int | None = None) -> list[dict]:
    """Rows behind the three scatter plots.

    fig1 uses the strict range ``p < p_max`` (the plotted dot set) and
    appends ``Lambda`` samples; fig2 and fig3 use ``p <= p_max``.
    """
    if which not in FIGURE_COLUMNS:
        raise InvalidInput(f"unknown figure {which!r}")
    rows = []
    if which == "fig1":
        if p_max < 5:
            raise InvalidInput("fig1 needs p_max >= 5")
        for q, p in odd_coprime_pairs(p_max, strict=True):
            s = genus2.sigma2_auto(p, q)
            rows.append({"kind": "dot", "x": mpmath.mpf(q) / p, "q": q, "p": p, "value": s, "normalized": Fraction(s, p * p)})
        for a, b, lam in lambda_grid():
            rows.append({"kind": "lambda", "x": mpmath.mpf(a) / b, "q": a, "p": b, "value": lam, "normalized": lam})
    elif which == "fig2":
        if p_max < 5:
            raise InvalidInput("fig2 needs p_max >= 5")
        for q, p in odd_coprime_pairs(p_max):
            s = polytrace.sigma_g_fast(p, q, 3)
            rows.append({"x": mpmath.mpf(q) / p, "q": q, "p": p, "sigma3": s, "normalized": Fraction(s, p ** 4)})
    else:
        if k not in (1, 2, 3):
            raise InvalidInput("fig3 needs k in {1, 2, 3}")
        if p_max < 2 * k + 3:
            raise InvalidInput(f"fig3 with k={k} needs p_max >= {2 * k + 3}")
        for q, p in odd_coprime_pairs(p_max, p_min=2 * k + 3):
            s = verlinde.sigma1_punctured(q, p, k)
            rows.append({"x": mpmath.mpf(q) / p, "q": q, "p": p, "k": k, "sigma1": s, "normalized": Fraction(s, p)})
    return rows


# -- identity sweeps ---------------------------------------------------------------


def _identity_item(arg) -> SweepItem:
    check, q, p, bump = arg
    if bump:
        def s(a, b):
            return dedekind.dedekind_s(a, b) + bump
    else:
        s = dedekind.dedekind_s
    if check == "smoothing":
        r = dedekind.check_smoothing(q, p, s=s)
    elif check == "reciprocity":
        r = dedekind.check_reciprocity(q, p, s=s)
    else:
        r = dedekind.check_S_transform(q, p)
    return SweepItem({"check": check, "q": q, "p": p}, {}, r, PASS if r == 0 else FAIL)


def identity_pairs(check: str, p_max: int):
    for p in range(2, p_max + 1):
        for q in range(1, p):
            if gcd(q, p) != 1:
                continue
            if check != "reciprocity" and q % 2 == 0:
                continue
            yield q, p


IDENTITY_CHECKS = ("smoothing", "reciprocity", "S_transform")


def identity_sweeps(p_max: int, thread_count: int | None = None, *, perturb: Fraction | None = None) -> SweepReport:
    """The three exact Dedekind-sum identities over every valid pair with
    ``p <= p_max``.  ``perturb`` adds a constant to every Dedekind sum,
    which must make the sweep fail (a self-test of the harness)."""
    bump = Fraction(perturb) if perturb else Fraction(0)
    args = [(c, q, p, bump) for c in IDENTITY_CHECKS for q, p in identity_pairs(c, p_max)]
    meta = {"p_max": p_max, "perturb": bump or None}
    rep = _collect("identities", _run_items(_identity_item, args, thread_count), meta)
    counts = {c: 0 for c in IDENTITY_CHECKS}
    for it in rep.items:
        counts[it.inputs["check"]] += 1
    rep.meta.update({f"count_{c}": n for c, n in counts.items()})
    return rep


# -- method benchmark --------------------------------------------------------------


METHODS = ("lattice", "trig", "charpoly", "oracle")
LATTICE_BUDGET = 2000
CHARPOLY_BUDGET = 3000
ORACLE_BUDGET = 61


def _bench_one(method: str, p: int, q: int) -> tuple[int, int]:
    """``(sigma2, peak coefficient bits)`` by one method."""
    if method == "lattice":
        v = genus2.sigma2_lattice(p, q)
        return v, v.bit_length()
    if method == "trig":
        c = genus2.sigma2_trig(p, q)
        return c.value, c.bits_used
    if method == "charpoly":
        v = polytrace.sigma_g_fast(p, q, 2)
        return v, polytrace.trace_stats(p, q)["omega_bits"]
    if method == "oracle":
        v = verlinde.signature_oracle(verlinde.FrobeniusAlgebra(p, q), 2)
        return v, v.bit_length()
    raise InvalidInput(f"unknown method {method!r}")


def _within_budget(method: str, p: int) -> bool:
    limit = {"lattice": LATTICE_BUDGET, "charpoly": CHARPOLY_BUDGET, "oracle": ORACLE_BUDGET}.get(method)
    return limit is None or p <= limit


def default_q(p: int) -> int:
    """An odd ``q`` coprime to ``p`` near ``p/2``."""
    q = p // 2 | 1
    while gcd(q, p) != 1:
        q += 2
    return q


def method_bench(pairs, methods=("lattice", "trig", "charpoly")) -> SweepReport:
    """Time each method on each ``(q, p)``; values must agree before any
    timing is reported.  Methods over their size budget are skipped."""
    for m in methods:
        if m not in METHODS:
            raise InvalidInput(f"unknown method {m!r}")
    rep = SweepReport("bench", meta={"methods": ",".join(methods)})
    for q, p in pairs:
        genus2._check_pair(p, q)
        if "trig" in methods and not (p % 2 and q % 2):
            raise InvalidInput(f"trig needs odd p and q, got {q}/{p}")
        rows = []
        for m in methods:
            if not _within_budget(m, p):
                rows.append((m, None, None, None))
                continue
            t0 = time.perf_counter()
            v, bits = _bench_one(m, p, q)
            rows.append((m, v, bits, time.perf_counter() - t0))
        seen = {v for _, v, _, _ in rows if v is not None}
        if len(seen) > 1:
            detail = ", ".join(f"{m}={v}" for m, v, _, _ in rows if v is not None)
            raise ContractFailure(f"methods disagree at q/p={q}/{p}: {detail}")
        for m, v, bits, secs in rows:
            values = {"sigma2": v, "peak_bits": bits, "skipped": v is None}
            rep.add(SweepItem({"q": q, "p": p, "method": m}, values, 0, PASS), secs or 0.0)
    return rep


# -- genus-two normalisation -------------------------------------------------------


def witten_check(p_max: int) -> SweepReport:
    """``sigma2(1/p) / p^3`` against ``1/6`` for odd ``11 <= p <= p_max``;
    the deviation must stay below ``1/p``."""
    if p_max < 11 or p_max % 2 == 0:
        raise InvalidInput("p_max must be odd and >= 11")
    rep = SweepReport("witten", meta={"p_max": p_max})
    for p in range(11, p_max + 1, 2):
        t0 = time.perf_counter()
        s = genus2.sigma2_auto(p, 1)
        ratio = Fraction(s, p ** 3)
        dev = abs(ratio - Fraction(1, 6))
        status = PASS if dev < Fraction(1, p) else FAIL
        rep.add(SweepItem({"p": p}, {"sigma2": s, "ratio": ratio}, dev, status), time.perf_counter() - t0)
    return rep
