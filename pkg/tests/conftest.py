"""Shared brute-force oracles, independent of the package internals."""

from math import gcd

import pytest


def lattice_brute(p, q):
    """Unordered triple loop over the full lattice, no symmetry tricks."""
    e = [0] + [(-1) ** ((j * q) // p) for j in range(1, p)]
    s = 0
    for j in range(1, p):
        for k in range(1, p):
            for l in range(1, p):
                if j < k + l and k < j + l and l < j + k and j + k + l < 2 * p and (j + k + l) % 2 == 1:
                    s += e[j] * e[k] * e[l]
    return s


def odd_pairs(p_max, p_min=3):
    return [(q, p) for p in range(p_min, p_max + 1, 2) for q in range(1, p, 2) if gcd(q, p) == 1]


@pytest.fixture
def brute():
    return lattice_brute
