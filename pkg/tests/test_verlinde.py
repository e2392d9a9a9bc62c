import itertools
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from conftest import lattice_brute, odd_pairs
from sigtqft.errors import ExpansionExhausted, InsufficientDepth, InvalidInput
from sigtqft.numtheory import CFExpansion
from sigtqft.verlinde import (
    AlgebraVector,
    FrobeniusAlgebra,
    ThetaAlgebra,
    counit,
    counit_theta,
    multiply,
    omega,
    omega_element,
    signature_oracle,
    sigma1_punctured,
)


def sine_sign(j, q, p):
    """Sign of [j] = sin(j pi q/p)/sin(pi q/p), from floating sines."""
    with mpmath.workprec(100):
        v = mpmath.sin(j * mpmath.pi * q / p) / mpmath.sin(mpmath.pi * q / p)
    return 1 if v > 0 else -1


def test_omega_small_examples():
    alg = FrobeniusAlgebra(3, 1)
    assert omega(alg, 1, 1, 0) == -1
    assert omega(alg, 1, 1, 1) == 0
    for q, p in odd_pairs(15):
        a = FrobeniusAlgebra(p, q)
        assert omega(a, 0, 0, 0) == 1
        assert omega(a, 1, 1, 1) == 0
    with pytest.raises(InvalidInput):
        omega(alg, 2, 0, 0)


def test_eta_uses_quantum_integer_signs():
    for q, p in odd_pairs(21):
        alg = FrobeniusAlgebra(p, q)
        assert alg.eta_diag == tuple((-1) ** j * sine_sign(j + 1, q, p) for j in range(p - 1))


@pytest.mark.parametrize("q,p", odd_pairs(15))
def test_omega_fully_symmetric(q, p):
    alg = FrobeniusAlgebra(p, q)
    r = range(p - 1)
    for j, k, l in itertools.combinations_with_replacement(r, 3):
        vals = {alg.omega(*perm) for perm in itertools.permutations((j, k, l))}
        assert len(vals) == 1
        assert (vals.pop() != 0) == alg.in_T(j, k, l)


def test_products_small():
    alg = FrobeniusAlgebra(3, 1)
    e0, e1 = alg.basis(0), alg.basis(1)
    assert multiply(alg, e1, e1) == -e0
    assert omega_element(alg) == AlgebraVector([2, 0])
    v = AlgebraVector([3, -5])
    assert multiply(alg, e0, v) == v == multiply(alg, v, e0)


def test_e1_shifts_support():
    alg = FrobeniusAlgebra(11, 7)
    e1 = alg.basis(1)
    for j in range(alg.dim):
        assert set(alg.multiply(e1, alg.basis(j)).support()) <= {j - 1, j + 1}


@pytest.mark.parametrize("q,p", odd_pairs(31))
def test_associative_and_commutative(q, p):
    alg = FrobeniusAlgebra(p, q)
    rng = random.Random(p * 1000 + q)
    for _ in range(200):
        a, b, c = (alg.basis(rng.randrange(alg.dim)) for _ in range(3))
        assert alg.multiply(alg.multiply(a, b), c) == alg.multiply(a, alg.multiply(b, c))
        assert alg.multiply(a, b) == alg.multiply(b, a)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(odd_pairs(13)), st.data())
def test_associative_on_vectors(pair, data):
    q, p = pair
    alg = FrobeniusAlgebra(p, q)
    vec = st.lists(st.integers(-3, 3), min_size=alg.dim, max_size=alg.dim).map(AlgebraVector)
    u, v, w = data.draw(vec), data.draw(vec), data.draw(vec)
    assert alg.multiply(alg.multiply(u, v), w) == alg.multiply(u, alg.multiply(v, w))


def test_counit_linear():
    alg = FrobeniusAlgebra(7, 3)
    assert counit(alg, alg.unit) == 1
    assert all(counit(alg, alg.basis(j)) == 0 for j in range(1, alg.dim))
    u, v = AlgebraVector(range(6)), AlgebraVector([4, 0, 0, 1, 1, 1])
    assert counit(alg, u + v) == counit(alg, u) + counit(alg, v)


def test_signature_anchors():
    for q, p in odd_pairs(31):
        alg = FrobeniusAlgebra(p, q)
        assert signature_oracle(alg, 0) == 1
        assert signature_oracle(alg, 1) == p - 1
    assert signature_oracle(FrobeniusAlgebra(5, 1), 2) == 20


def test_signature_frozen_values():
    assert [signature_oracle(FrobeniusAlgebra(5, 1), g) for g in range(4)] == [1, 4, 20, 120]
    assert [signature_oracle(FrobeniusAlgebra(5, 3), g) for g in range(4)] == [1, 4, 12, 24]
    assert [signature_oracle(FrobeniusAlgebra(7, 3), g) for g in range(4)] == [1, 6, 24, -80]


def test_oracle_genus2_matches_brute_lattice():
    for q, p in odd_pairs(21):
        assert signature_oracle(FrobeniusAlgebra(p, q), 2) == lattice_brute(p, q), (q, p)


def test_sigma1_punctured_examples():
    assert sigma1_punctured(3, 5, 1) == -2
    for p in (5, 7, 9, 11):
        assert sigma1_punctured(1, p, 0) == p - 1
        for k in range(1, (p - 1) // 2):
            assert sigma1_punctured(1, p, k) == p - 1 - 2 * k


def color_norm(alg, lam):
    # e_lam rescaled by (-1)^(lam/2) Sign([lam]!) is the basis the sum formula uses
    return (-1) ** (lam // 2) * alg._fs[lam]


def test_sigma1_punctured_matches_oracle():
    for q, p in odd_pairs(31):
        alg = FrobeniusAlgebra(p, q)
        for k in range(0, (p - 2) // 2 + 1):
            lit = signature_oracle(alg, 1, [2 * k])
            assert sigma1_punctured(q, p, k) == color_norm(alg, 2 * k) * lit, (q, p, k)


def test_sigma1_punctured_literal_sign():
    # with q = 1 the literal insertion of e_2k picks up (-1)^k
    for p in (5, 7, 9, 11):
        alg = FrobeniusAlgebra(p, 1)
        for k in range(0, (p - 2) // 2 + 1):
            assert sigma1_punctured(1, p, k) == p - 1 - 2 * k
            assert signature_oracle(alg, 1, [2 * k]) == (-1) ** k * (p - 1 - 2 * k)
    assert sigma1_punctured(3, 5, 1) == signature_oracle(FrobeniusAlgebra(5, 3), 1, [2]) == -2


def test_invalid_algebras():
    for p, q in [(4, 1), (5, 2), (9, 3), (5, 5), (1, 1)]:
        with pytest.raises(InvalidInput):
            FrobeniusAlgebra(p, q)
    with pytest.raises(InvalidInput):
        signature_oracle(FrobeniusAlgebra(5, 1), 1, [4])


def test_counit_theta_trivial():
    assert counit_theta(Fraction(1, 4), []) == 1
    assert counit_theta(Fraction(1, 4), [0, 0]) == 1
    assert counit_theta(CFExpansion.all_ones(), []) == 1


def test_counit_theta_e1_squared():
    # in V_theta, e_1 e_1 has e_0-coefficient omega(1,1,0) eta_00 = -eps_2
    for theta in (Fraction(1, 4), Fraction(3, 4), Fraction(5, 8)):
        eps2 = -1 if (2 * theta).numerator // (2 * theta).denominator % 2 else 1
        assert counit_theta(theta, [1, 1]) == -eps2


@pytest.mark.parametrize("lams", [(1, 1), (2, 2), (1, 2, 3), (3, 4, 5), (2, 2, 2, 2), (5, 6, 7, 4)])
def test_counit_theta_matches_finite_algebra(lams):
    # 233/377 and 1/golden agree on every floor needed for these colors
    alg = FrobeniusAlgebra(377, 233)
    expected = signature_oracle(alg, 0, lams)
    assert counit_theta(CFExpansion.all_ones(), lams) == expected
    assert counit_theta(Fraction(233, 377), lams) == expected


def test_theta_algebra_associative():
    alg = ThetaAlgebra(CFExpansion.periodic(0, (2,), (1, 3)), 12)
    rng = random.Random(3)
    for _ in range(100):
        a, b, c = (rng.randrange(5) for _ in range(3))
        x, y, z = alg.basis(a), alg.basis(b), alg.basis(c)
        assert alg.multiply(alg.multiply(x, y), z) == alg.multiply(x, alg.multiply(y, z))


def test_counit_theta_errors():
    with pytest.raises(InvalidInput, match="vanishes"):
        counit_theta(Fraction(1, 2), [1, 1])

    def short(i):
        if i > 3:
            raise ExpansionExhausted("expansion exhausted")
        return 1

    cf = CFExpansion(0, source=short, term_bound=1)
    with pytest.raises(InsufficientDepth, match="insufficient expansion depth"):
        counit_theta(cf, [6, 6])
    with pytest.raises(InvalidInput):
        counit_theta(Fraction(1, 4), [-1])
