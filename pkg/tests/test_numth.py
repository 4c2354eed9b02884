from __future__ import annotations

import pytest
import sympy
from hypothesis import given, strategies as st

from pary.errors import NotCoprime
from pary.numth import (euler_phi, factorize, is_common_primitive_root, is_prime,
                        is_primitive_root, legendre, mult_order, residue_tags, sqrt_mod)


def test_euler_phi_examples():
    assert euler_phi(1) == 1
    assert euler_phi(25) == 20
    assert euler_phi(1089) == 660


def test_mult_order_examples():
    assert mult_order(19, 5) == 2
    assert mult_order(3, 25) == 20
    assert mult_order(1, 7) == 1
    with pytest.raises(NotCoprime):
        mult_order(5, 25)


def test_primitive_roots():
    assert is_primitive_root(3, 25)
    assert is_common_primitive_root(2, 9, 11)
    assert not is_primitive_root(4, 5)


def test_sqrt_mod_examples():
    assert sqrt_mod(5, 19) == 9
    assert sqrt_mod(0, 7) == 0
    assert sqrt_mod(2, 3) is None
    assert sqrt_mod(33, 101) == 29  # 72 = -29; representative lies in [1, 50]


@given(st.integers(1, 10**7))
def test_phi_and_factorize_match_sympy(n):
    assert euler_phi(n) == sympy.totient(n)
    assert factorize(n) == dict(sympy.factorint(n))


@given(st.integers(0, 10**6))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(2, 2000), st.integers(1, 2000))
def test_mult_order_matches_sympy(n, a):
    if sympy.gcd(a, n) != 1:
        with pytest.raises(NotCoprime):
            mult_order(a, n)
        return
    t = mult_order(a, n)
    assert t == sympy.n_order(a, n)
    assert euler_phi(n) % t == 0
    assert pow(a, euler_phi(n), n) == 1


@pytest.mark.parametrize("p", list(sympy.primerange(3, 60)))
def test_sqrt_mod_and_residues(p):
    for a in range(p):
        s = sqrt_mod(a, p)
        residue = pow(a, (p - 1) // 2, p) in (0, 1)
        assert (s is not None) == residue
        if s is not None:
            assert s * s % p == a and (-s) * (-s) % p == a
            assert s == 0 or 1 <= s <= (p - 1) // 2
        if a:
            assert legendre(a, p) == sympy.legendre_symbol(a, p)


@pytest.mark.parametrize("p", list(sympy.primerange(3, 32)))
def test_residue_tags_closure(p):
    tags = residue_tags(p)
    assert len(tags.squares) == len(tags.nonsquares) == (p - 1) // 2
    assert tags.squares | tags.nonsquares == set(range(1, p))
    assert 1 in tags.squares
    for s in tags.squares:
        assert tags.eta(s) == 1
        for t in tags.nonsquares:
            assert s * t % p in tags.nonsquares
        for s2 in tags.squares:
            assert s * s2 % p in tags.squares
