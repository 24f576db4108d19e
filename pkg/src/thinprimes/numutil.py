"""Small numeric helpers shared across the toolkit.

Conventions used everywhere:

* ``e(x) = exp(2*pi*i*x)`` is the additive character.
* ``||x||`` is the distance from x to the nearest integer.
* long sums are accumulated in ascending index order with compensation;
  parallel reductions never split a single compensated accumulation.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi

# Block length for chunked compensated accumulation.  Inside a block numpy's
# pairwise summation is used; across blocks a scalar Kahan loop runs in
# ascending order, so the reduction order is fixed regardless of thread count.
_CHUNK = 4096


def e(x):
    """Additive character e(x) = exp(2*pi*i*x); accepts scalars or arrays."""
    return np.exp(1j * TWO_PI * np.asarray(x, dtype=float))


def frac(x):
    """Fractional part {x} in [0, 1)."""
    x = np.asarray(x, dtype=float)
    return x - np.floor(x)


def nearest_int_dist(x):
    """Distance ||x|| from x to the nearest integer, in [0, 1/2]."""
    f = frac(x)
    return np.minimum(f, 1.0 - f)


def kahan_sum(values) -> float:
    """Compensated sum of a 1-d real array.

    Ascending index order; blocks of ``_CHUNK`` are pairwise-summed and the
    block totals feed a scalar Kahan accumulator.  Deterministic for a given
    input ordering.
    """
    a = np.asarray(values, dtype=float).ravel()
    total = 0.0
    comp = 0.0
    for start in range(0, a.size, _CHUNK):
        term = float(np.sum(a[start:start + _CHUNK]))
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
    return total


def kahan_csum(values) -> complex:
    """Compensated sum of a complex array (real and imaginary parts apart)."""
    a = np.asarray(values, dtype=complex).ravel()
    return complex(kahan_sum(a.real), kahan_sum(a.imag))
