"""Elementary arithmetic functions: factorization, Euler phi, Mobius,
von Mangoldt, divisor counts, primorials and deterministic primality.

Scalar functions work by trial division (arguments here are small: moduli,
Vaughan ranges, primorials).  Table builders return numpy arrays indexed by n
for 0 <= n <= limit and are sieve-based.
"""

from __future__ import annotations

import math

import numpy as np

# Witness set making Miller-Rabin deterministic for all n < 3.3 * 10^24.
_MR_BASES = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, exponent), ...] by trial division."""
    if n < 1:
        raise ValueError("factorize expects n >= 1")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    if n < 1:
        raise ValueError("euler_phi expects n >= 1")
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius expects n >= 1")
    fac = factorize(n)
    if any(k > 1 for _, k in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def mangoldt(n: int) -> float:
    """von Mangoldt Lambda(n): log p on prime powers p^k, else 0."""
    if n < 1:
        raise ValueError("mangoldt expects n >= 1")
    fac = factorize(n)
    if len(fac) == 1:
        return math.log(fac[0][0])
    return 0.0


def divisor_count(n: int) -> int:
    if n < 1:
        raise ValueError("divisor_count expects n >= 1")
    out = 1
    for _, k in factorize(n):
        out *= k + 1
    return out


def primorial(w: int) -> int:
    """Product of all primes p <= w (empty product = 1)."""
    if w < 0:
        raise ValueError("primorial expects w >= 0")
    m = 1
    for p in range(2, w + 1):
        if is_prime(p):
            m *= p
    return m


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime_at_least(n: int) -> int:
    """Smallest prime >= n."""
    if n <= 2:
        return 2
    k = n | 1
    while not is_prime(k):
        k += 2
    return k


def mobius_table(limit: int) -> np.ndarray:
    """mu(n) for 0 <= n <= limit as an int8 array (mu(0) set to 0)."""
    if limit < 1:
        raise ValueError("mobius_table expects limit >= 1")
    mu = np.ones(limit + 1, dtype=np.int8)
    mu[0] = 0
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    primes = np.flatnonzero(sieve)
    for p in primes:
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
    return mu


def mangoldt_table(limit: int) -> np.ndarray:
    """Lambda(n) for 0 <= n <= limit as a float array."""
    if limit < 1:
        raise ValueError("mangoldt_table expects limit >= 1")
    lam = np.zeros(limit + 1, dtype=float)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    for p in np.flatnonzero(sieve):
        logp = math.log(int(p))
        q = int(p)
        while q <= limit:
            lam[q] = logp
            q *= int(p)
    return lam
