"""Arithmetic functions against brute-force oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import trial_division_is_prime
from thinprimes.arith import (
    divisor_count,
    euler_phi,
    factorize,
    is_prime,
    mangoldt,
    mangoldt_table,
    mobius,
    mobius_table,
    next_prime_at_least,
    primorial,
)


def test_factorize_examples():
    assert factorize(1) == []
    assert factorize(12) == [(2, 2), (3, 1)]
    assert factorize(97) == [(97, 1)]
    assert factorize(2**10) == [(2, 10)]


@settings(deadline=None, max_examples=200)
@given(st.integers(1, 10**6))
def test_factorize_reconstructs_and_is_prime_factored(n):
    fac = factorize(n)
    prod = 1
    for p, k in fac:
        assert trial_division_is_prime(p)
        prod *= p**k
    assert prod == n
    primes = [p for p, _ in fac]
    assert primes == sorted(primes)


def test_is_prime_small_exhaustive():
    for n in range(-3, 2000):
        assert is_prime(n) == trial_division_is_prime(n)


def test_is_prime_64bit_known_values():
    assert is_prime(2**61 - 1)
    assert is_prime(18446744073709551557)  # largest prime below 2**64
    assert not is_prime(2**61 + 1)
    # Carmichael-style strong pseudoprime to many small bases.
    assert not is_prime(3825123056546413051)


@settings(deadline=None, max_examples=100)
@given(st.integers(2, 10**9))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == trial_division_is_prime(n)


def test_mangoldt_examples():
    assert mangoldt(8) == pytest.approx(math.log(2))
    assert mangoldt(6) == 0.0
    assert mangoldt(1) == 0.0
    assert mangoldt(7) == pytest.approx(math.log(7))
    assert mangoldt(49) == pytest.approx(math.log(7))


def test_mangoldt_divisor_sums_give_log():
    # sum over divisors d of n of mangoldt(d) equals log n, for n <= 1e4.
    limit = 10**4
    lam = mangoldt_table(limit)
    acc = np.zeros(limit + 1)
    for d in range(2, limit + 1):
        if lam[d] != 0.0:
            acc[d::d] += lam[d]
    n = np.arange(1, limit + 1)
    assert np.allclose(acc[1:], np.log(n), rtol=0, atol=1e-9)


def test_mobius_examples():
    assert mobius(1) == 1
    assert mobius(6) == 1
    assert mobius(12) == 0
    assert mobius(30) == -1
    assert mobius(97) == -1


def test_mobius_divisor_sums_detect_one():
    # sum over divisors d of n of mobius(d) is 1 at n=1 and 0 otherwise.
    limit = 10**4
    mu = mobius_table(limit)
    acc = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        acc[d::d] += int(mu[d])
    assert acc[1] == 1
    assert np.all(acc[2:] == 0)


def test_tables_match_pointwise_functions():
    lam = mangoldt_table(300)
    mu = mobius_table(300)
    for n in range(1, 301):
        assert lam[n] == pytest.approx(mangoldt(n), abs=1e-12)
        assert mu[n] == mobius(n)


def test_divisor_count_examples_and_oracle():
    assert divisor_count(1) == 1
    assert divisor_count(12) == 6
    assert divisor_count(97) == 2
    for n in range(1, 500):
        brute = sum(1 for d in range(1, n + 1) if n % d == 0)
        assert divisor_count(n) == brute


def test_euler_phi_examples():
    assert euler_phi(1) == 1
    assert euler_phi(9) == 6
    assert euler_phi(12) == 4
    with pytest.raises(ValueError):
        euler_phi(0)


def test_euler_phi_gcd_count_oracle():
    for m in range(1, 10**4 + 1):
        brute = int(np.count_nonzero(np.gcd(np.arange(m), m) == 1))
        assert euler_phi(m) == brute


def test_next_prime_at_least():
    assert next_prime_at_least(2) == 2
    assert next_prime_at_least(13) == 13
    assert next_prime_at_least(14) == 17
    assert next_prime_at_least(1) == 2
    assert next_prime_at_least(90) == 97


def test_primorial_values():
    assert primorial(0) == 1
    assert primorial(1) == 1
    assert primorial(2) == 2
    assert primorial(5) == 30
    assert primorial(6) == 30
    assert primorial(10) == 210
